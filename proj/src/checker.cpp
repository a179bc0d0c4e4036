#include "cyclic/checker.hpp"

#include <algorithm>
#include <deque>
#include "json.hpp"
#include <set>

namespace cyclic {

const char* class_name(ProofClass c) {
    switch (c) {
        case ProofClass::CB: return "CB";
        case ProofClass::CNB: return "CNB";
        default: return "none";
    }
}

const char* progress_name(Progress p) {
    switch (p) {
        case Progress::Progressing: return "progressing";
        case Progress::NotProgressing: return "not_progressing";
        default: return "unknown_unsafe";
    }
}

SccInfo strongly_connected(const ProofGraph& g, const EdgeFilter& keep) {
    SccInfo info;
    std::map<NodeId, int> index, low;
    std::set<NodeId> on_stack;
    std::vector<NodeId> stack;
    int counter = 0;
    struct Frame {
        NodeId v;
        std::size_t next;
    };
    auto edges_ok = [&](NodeId v, std::size_t i) { return !keep || keep(v, i); };
    for (NodeId start : reachable(g, g.root)) {
        if (index.count(start)) continue;
        std::vector<Frame> work{{start, 0}};
        index[start] = low[start] = counter++;
        stack.push_back(start);
        on_stack.insert(start);
        while (!work.empty()) {
            Frame& f = work.back();
            const auto& ps = g.at(f.v).premises;
            if (f.next < ps.size()) {
                std::size_t i = f.next++;
                if (!edges_ok(f.v, i)) continue;
                NodeId w = ps[i];
                if (!index.count(w)) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack.insert(w);
                    work.push_back({w, 0});
                } else if (on_stack.count(w)) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            NodeId v = f.v;
            work.pop_back();
            if (!work.empty()) low[work.back().v] = std::min(low[work.back().v], low[v]);
            if (low[v] == index[v]) {
                int c = static_cast<int>(info.members.size());
                info.members.emplace_back();
                while (true) {
                    NodeId w = stack.back();
                    stack.pop_back();
                    on_stack.erase(w);
                    info.comp[w] = c;
                    info.members.back().push_back(w);
                    if (w == v) break;
                }
                std::sort(info.members.back().begin(), info.members.back().end());
            }
        }
    }
    info.cyclic.assign(info.members.size(), false);
    for (const auto& [v, c] : info.comp) {
        const auto& ps = g.at(v).premises;
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (edges_ok(v, i) && info.comp.count(ps[i]) && info.comp.at(ps[i]) == c) info.cyclic[static_cast<std::size_t>(c)] = true;
    }
    return info;
}

std::optional<std::vector<NodeId>> shortest_cycle_through_edge(const ProofGraph& g, NodeId from, std::size_t index,
                                                               const EdgeFilter& keep) {
    if (keep && !keep(from, index)) return std::nullopt;
    NodeId first = g.at(from).premises.at(index);
    std::map<NodeId, NodeId> parent;
    std::deque<NodeId> q{first};
    parent[first] = first;
    bool found = first == from;
    while (!q.empty() && !found) {
        NodeId v = q.front();
        q.pop_front();
        const auto& ps = g.at(v).premises;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (keep && !keep(v, i)) continue;
            NodeId w = ps[i];
            if (parent.count(w)) continue;
            parent[w] = v;
            if (w == from) {
                found = true;
                break;
            }
            q.push_back(w);
        }
    }
    if (!found) return std::nullopt;
    if (first == from) return std::vector<NodeId>{from};
    std::vector<NodeId> seq;
    for (NodeId u = parent[from];; u = parent[u]) {
        seq.push_back(u);
        if (u == first) break;
    }
    std::reverse(seq.begin(), seq.end());
    seq.insert(seq.begin(), from);
    return seq;
}

std::optional<std::vector<NodeId>> shortest_cycle_through(const ProofGraph& g, NodeId v, const EdgeFilter& keep) {
    std::optional<std::vector<NodeId>> best;
    const auto& ps = g.at(v).premises;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        auto c = shortest_cycle_through_edge(g, v, i, keep);
        if (c && (!best || c->size() < best->size())) best = c;
    }
    return best;
}

namespace {

std::vector<NodeId> pick_witness(const std::vector<std::vector<NodeId>>& candidates) {
    const std::vector<NodeId>* best = nullptr;
    for (const auto& c : candidates)
        if (!best || c.size() < best->size() || (c.size() == best->size() && c < *best)) best = &c;
    return best ? *best : std::vector<NodeId>{};
}

}  // namespace

CheckResult check_safety(const ProofGraph& g) {
    auto scc = strongly_connected(g);
    std::vector<std::vector<NodeId>> cands;
    for (const auto& [v, c] : scc.comp)
        if (g.at(v).rule == Rule::CutBox && scc.on_cycle(v))
            if (auto cyc = shortest_cycle_through(g, v)) cands.push_back(*cyc);
    if (cands.empty()) return {};
    return {false, pick_witness(cands)};
}

CheckResult check_left_leaning(const ProofGraph& g) {
    auto scc = strongly_connected(g);
    std::vector<std::vector<NodeId>> cands;
    for (const auto& [v, c] : scc.comp) {
        const Node& n = g.at(v);
        if (n.rule == Rule::CutN && scc.same(v, n.premises[1]))
            if (auto cyc = shortest_cycle_through_edge(g, v, 1)) cands.push_back(*cyc);
    }
    if (cands.empty()) return {};
    return {false, pick_witness(cands)};
}

Progress check_progressing_safe(const ProofGraph& g, std::vector<NodeId>* witness) {
    if (!check_safety(g).ok) return Progress::UnknownUnsafe;
    EdgeFilter keep = [&](NodeId v, std::size_t i) {
        return g.at(v).rule != Rule::CondBox && g.at(g.at(v).premises[i]).rule != Rule::CondBox;
    };
    auto scc = strongly_connected(g, keep);
    std::vector<std::vector<NodeId>> cands;
    for (const auto& [v, c] : scc.comp)
        if (g.at(v).rule != Rule::CondBox && scc.on_cycle(v))
            if (auto cyc = shortest_cycle_through(g, v, keep)) cands.push_back(*cyc);
    if (cands.empty()) return Progress::Progressing;
    if (witness) *witness = pick_witness(cands);
    return Progress::NotProgressing;
}

Classification classify(const ProofGraph& g) {
    Classification out;
    auto errs = validate_graph(g, GraphKind::Circular);
    if (!errs.empty()) {
        out.valid = false;
        out.safe = out.left_leaning = false;
        out.progressing = Progress::UnknownUnsafe;
        for (const auto& e : errs) out.diagnostics.push_back("node " + std::to_string(e.node) + ": " + e.message);
        return out;
    }
    auto cycle_text = [](const std::vector<NodeId>& c) {
        std::string s;
        for (NodeId v : c) s += std::to_string(v) + " -> ";
        return s + std::to_string(c.front());
    };
    auto safety = check_safety(g);
    out.safe = safety.ok;
    if (!safety.ok) {
        out.witness_cycle = safety.witness;
        out.diagnostics.push_back("unsafe: cycle through cutB: " + cycle_text(safety.witness));
    }
    auto ll = check_left_leaning(g);
    out.left_leaning = ll.ok;
    if (!ll.ok) {
        if (out.witness_cycle.empty()) out.witness_cycle = ll.witness;
        out.diagnostics.push_back("not left-leaning: cycle through the right premise of cutN: " + cycle_text(ll.witness));
    }
    std::vector<NodeId> pw;
    out.progressing = check_progressing_safe(g, &pw);
    if (out.progressing == Progress::NotProgressing) {
        if (out.witness_cycle.empty()) out.witness_cycle = pw;
        out.diagnostics.push_back("not progressing: cycle without condB: " + cycle_text(pw));
    } else if (out.progressing == Progress::UnknownUnsafe) {
        out.diagnostics.push_back("progress not decided for unsafe proofs");
    }
    if (out.safe && out.progressing == Progress::Progressing)
        out.cls = out.left_leaning ? ProofClass::CB : ProofClass::CNB;
    return out;
}

std::string report_json(const ProofGraph& g, const Classification& c) {
    nlohmann::ordered_json j;
    j["name"] = g.name;
    j["valid"] = c.valid;
    j["safe"] = c.safe;
    j["left_leaning"] = c.left_leaning;
    if (c.progressing == Progress::UnknownUnsafe)
        j["progressing"] = "unknown_unsafe";
    else
        j["progressing"] = c.progressing == Progress::Progressing;
    j["class"] = class_name(c.cls);
    j["witness_cycle"] = c.witness_cycle;
    j["diagnostics"] = c.diagnostics;
    return j.dump(2) + "\n";
}

}  // namespace cyclic
