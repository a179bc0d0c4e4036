#include "cyclic/cnf.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

namespace cyclic {

std::map<NodeId, NodeId> bisimulation_classes(const ProofGraph& g) {
    using Label = std::tuple<Rule, int, std::string, std::vector<NodeId>, Sequent>;
    std::map<NodeId, int> cls;
    {
        std::map<Label, int> ids;
        for (const auto& [id, n] : g.nodes) {
            Label l{n.rule, n.pos, n.oracle, n.dis, n.seq};
            auto it = ids.emplace(l, static_cast<int>(ids.size())).first;
            cls[id] = it->second;
        }
    }
    std::size_t count = 0;
    for (;;) {
        std::map<std::pair<int, std::vector<int>>, int> ids;
        std::map<NodeId, int> next;
        for (const auto& [id, n] : g.nodes) {
            std::vector<int> ps;
            for (NodeId p : n.premises) ps.push_back(g.has(p) ? cls.at(p) : -1);
            auto it = ids.emplace(std::make_pair(cls.at(id), std::move(ps)), static_cast<int>(ids.size())).first;
            next[id] = it->second;
        }
        cls = std::move(next);
        if (ids.size() == count) break;
        count = ids.size();
    }
    std::map<int, NodeId> rep;
    for (const auto& [id, c] : cls)
        if (!rep.count(c)) rep[c] = id;  // map iteration is ascending, so this is the smallest id
    std::map<NodeId, NodeId> out;
    for (const auto& [id, c] : cls) out[id] = rep[c];
    return out;
}

ProofGraph minimize(const ProofGraph& g) {
    auto rep = bisimulation_classes(g);
    ProofGraph q;
    q.name = g.name;
    q.root = rep.at(g.root);
    for (const auto& [id, r] : rep) {
        if (id != r) continue;
        Node n = g.at(id);
        for (auto& p : n.premises) p = rep.at(p);
        q.nodes[id] = std::move(n);
    }
    std::set<NodeId> keep;
    for (NodeId v : reachable(q, q.root)) keep.insert(v);
    for (auto it = q.nodes.begin(); it != q.nodes.end();) it = keep.count(it->first) ? std::next(it) : q.nodes.erase(it);
    return q;
}

CycleNF cycle_normal_form(const ProofGraph& g, std::size_t max_positions) {
    CycleNF cnf;
    cnf.graph = minimize(g);
    std::map<NodeId, std::size_t> on_path;
    std::function<std::size_t(NodeId, std::size_t, std::size_t)> visit = [&](NodeId v, std::size_t parent,
                                                                             std::size_t premise) {
        if (cnf.tree.size() >= max_positions) throw CycleNFError("cycle normal form exceeds the position limit");
        std::size_t me = cnf.tree.size();
        cnf.tree.push_back(CycleNF::Pos{v, parent, premise, {}, 0, false, CycleNF::npos});
        auto it = on_path.find(v);
        if (it != on_path.end()) {
            cnf.tree[me].bud = true;
            cnf.tree[me].companion = it->second;
            cnf.buds.push_back(me);
            cnf.companions[it->second].push_back(me);
        } else {
            on_path[v] = me;
            const Node& n = cnf.graph.at(v);
            for (std::size_t i = 0; i < n.premises.size(); ++i) {
                std::size_t c = visit(n.premises[i], me, i);
                cnf.tree[me].children.push_back(c);
            }
            on_path.erase(v);
        }
        cnf.tree[me].end = cnf.tree.size();
        return me;
    };
    visit(cnf.graph.root, CycleNF::npos, 0);
    return cnf;
}

ProofGraph cnf_to_graph(const CycleNF& cnf) {
    ProofGraph out;
    out.name = cnf.graph.name;
    const NodeId base = cnf.tree.size();
    auto ref = [&](std::size_t p) -> NodeId {
        const auto& pos = cnf.tree[p];
        if (pos.bud) return base + pos.companion + 1;
        if (cnf.companions.count(p)) return base + p + 1;
        return p + 1;
    };
    for (std::size_t p = 0; p < cnf.tree.size(); ++p) {
        const auto& pos = cnf.tree[p];
        if (pos.bud) continue;
        Node n = cnf.graph.at(pos.node);
        n.premises.clear();
        for (std::size_t c : pos.children) n.premises.push_back(ref(c));
        out.nodes[p + 1] = n;
        auto it = cnf.companions.find(p);
        if (it != cnf.companions.end()) {
            Node d;
            d.rule = Rule::Dis;
            d.seq = n.seq;
            d.premises = {p + 1};
            for (std::size_t b : it->second) d.dis.push_back(b + 1);
            out.nodes[base + p + 1] = d;
        }
    }
    out.root = ref(0);
    return out;
}

CloseOpen close_open_sets(const CycleNF& cnf, std::size_t pos) {
    CloseOpen r;
    std::set<std::size_t> close;
    for (std::size_t b : cnf.buds) {
        if (!cnf.in_subtree(pos, b)) continue;
        std::size_t c = cnf.tree[b].companion;
        if (cnf.in_subtree(pos, c)) {
            close.insert(c);
        } else {
            r.open.push_back(b);
        }
    }
    r.close.assign(close.begin(), close.end());
    return r;
}

std::vector<PathReport> cycle_path_diagnostics(const CycleNF& cnf) {
    std::vector<PathReport> out;
    for (std::size_t b : cnf.buds) {
        PathReport rep;
        rep.bud = b;
        rep.companion = cnf.tree[b].companion;
        std::vector<std::size_t> chain;  // bud up to companion, then reversed
        for (std::size_t p = cnf.tree[b].parent;; p = cnf.tree[p].parent) {
            chain.push_back(p);
            if (p == rep.companion) break;
        }
        std::reverse(chain.begin(), chain.end());
        for (std::size_t k = 0; k < chain.size(); ++k) {
            std::size_t p = chain[k];
            std::size_t next = k + 1 < chain.size() ? chain[k + 1] : b;
            std::size_t edge = cnf.tree[next].premise;
            const Node& n = cnf.graph.at(cnf.tree[p].node);
            NodeId id = cnf.tree[p].node;
            rep.path.push_back(id);
            auto flag = [&](int clause, std::string what) { rep.violations.push_back({clause, id, std::move(what)}); };
            switch (n.rule) {
                case Rule::CondBox:
                    rep.has_condbox = true;
                    if (edge == 0) flag(2, "leftmost premise of condB");
                    break;
                case Rule::CutBox: flag(2, "cutB conclusion"); break;
                case Rule::BoxL: flag(2, "boxL conclusion"); break;
                case Rule::WeakBox: flag(2, "wB conclusion"); break;
                case Rule::WeakN: flag(3, "wN conclusion"); break;
                case Rule::CondN:
                    if (edge == 0) flag(3, "leftmost premise of condN");
                    break;
                case Rule::CutN:
                    if (edge == 1) flag(3, "rightmost premise of cutN");
                    break;
                default: break;
            }
        }
        if (!rep.has_condbox) rep.violations.insert(rep.violations.begin(), {1, cnf.tree[rep.companion].node, "no condB on the path"});
        out.push_back(std::move(rep));
    }
    return out;
}

std::size_t count_violations(const std::vector<PathReport>& reports, int clause) {
    std::size_t c = 0;
    for (const auto& r : reports)
        for (const auto& v : r.violations)
            if (v.clause == clause) ++c;
    return c;
}

}  // namespace cyclic
