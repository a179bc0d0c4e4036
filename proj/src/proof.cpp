#include "cyclic/proof.hpp"

#include <algorithm>
#include <set>

namespace cyclic {

namespace {

struct RuleInfo {
    Rule rule;
    const char* name;
};

constexpr RuleInfo kRules[] = {
    {Rule::Id, "id"},       {Rule::Zero, "zero"},   {Rule::S0, "s0"},       {Rule::S1, "s1"},
    {Rule::WeakN, "wN"},    {Rule::WeakBox, "wB"},  {Rule::ExchN, "eN"},    {Rule::ExchBox, "eB"},
    {Rule::BoxL, "boxL"},   {Rule::BoxR, "boxR"},   {Rule::CutN, "cutN"},   {Rule::CutBox, "cutB"},
    {Rule::CondN, "condN"}, {Rule::CondBox, "condB"}, {Rule::SRec, "srec"}, {Rule::Oracle, "oracle"},
    {Rule::Dis, "dis"},
};

Sequent seq(int b, int p, SType s) { return Sequent{b, p, s}; }

std::string expect(const Sequent& want, const Sequent& got, const char* what) {
    if (want == got) return {};
    return std::string(what) + " should be " + to_string(want) + " but is " + to_string(got);
}

}  // namespace

std::string to_string(const Sequent& s) {
    std::string out;
    for (int i = 0; i < s.boxed + s.plain; ++i) {
        if (i) out += ", ";
        out += i < s.boxed ? "bN" : "N";
    }
    if (!out.empty()) out += " ";
    out += "=> ";
    out += s.succ == SType::Boxed ? "bN" : "N";
    return out;
}

const char* rule_name(Rule r) {
    for (const auto& info : kRules)
        if (info.rule == r) return info.name;
    return "?";
}

std::optional<Rule> rule_from_name(const std::string& s) {
    for (const auto& info : kRules)
        if (s == info.name) return info.rule;
    return std::nullopt;
}

const Node& ProofGraph::at(NodeId id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw ProofError("unknown node " + std::to_string(id));
    return it->second;
}

std::optional<StepError> validate_step(const ProofGraph& g, NodeId id) {
    auto it = g.nodes.find(id);
    if (it == g.nodes.end()) return StepError{id, "node does not exist"};
    const Node& n = it->second;
    const Sequent& c = n.seq;
    auto fail = [&](std::string msg) { return std::optional<StepError>(StepError{id, std::move(msg)}); };
    if (c.boxed < 0 || c.plain < 0) return fail("negative zone count");

    std::size_t want = 0;
    switch (n.rule) {
        case Rule::Id: case Rule::Zero: case Rule::Oracle: want = 0; break;
        case Rule::CutN: case Rule::CutBox: want = 2; break;
        case Rule::CondN: case Rule::CondBox: case Rule::SRec: want = 3; break;
        default: want = 1; break;
    }
    if (n.premises.size() != want)
        return fail(std::string(rule_name(n.rule)) + " needs " + std::to_string(want) + " premises, has " +
                    std::to_string(n.premises.size()));
    std::vector<Sequent> ps;
    for (NodeId p : n.premises) {
        auto pit = g.nodes.find(p);
        if (pit == g.nodes.end()) return fail("premise " + std::to_string(p) + " does not exist");
        ps.push_back(pit->second.seq);
    }
    auto check = [&](std::size_t i, const Sequent& w) -> std::optional<StepError> {
        std::string m = expect(w, ps[i], ("premise " + std::to_string(i)).c_str());
        if (!m.empty()) return fail(m);
        return std::nullopt;
    };
    auto conc = [&](const Sequent& w) -> std::optional<StepError> {
        std::string m = expect(w, c, "conclusion");
        if (!m.empty()) return fail(m);
        return std::nullopt;
    };
    const SType N = SType::Plain, B = SType::Boxed;
    switch (n.rule) {
        case Rule::Id: return conc(seq(0, 1, N));
        case Rule::Zero: return conc(seq(0, 0, N));
        case Rule::Oracle:
            if (n.oracle.empty()) return fail("oracle leaf without a name");
            if (c.succ != N) return fail("oracle leaf must conclude N");
            return std::nullopt;
        case Rule::S0: case Rule::S1:
            return check(0, c);
        case Rule::WeakN:
            if (c.plain < 1) return fail("wN needs a safe input to drop");
            return check(0, seq(c.boxed, c.plain - 1, c.succ));
        case Rule::WeakBox:
            if (c.boxed < 1) return fail("wB needs a normal input to drop");
            return check(0, seq(c.boxed - 1, c.plain, c.succ));
        case Rule::ExchN:
            if (n.pos < 0 || n.pos + 1 >= c.plain) return fail("eN position out of the safe zone");
            return check(0, c);
        case Rule::ExchBox:
            if (n.pos < 0 || n.pos + 1 >= c.boxed) return fail("eB position out of the normal zone");
            return check(0, c);
        case Rule::BoxL:
            if (c.boxed < 1) return fail("boxL needs a boxed antecedent formula");
            return check(0, seq(c.boxed - 1, c.plain + 1, c.succ));
        case Rule::BoxR:
            if (c.plain != 0) return fail("boxR needs an all-boxed antecedent");
            if (c.succ != B) return fail("boxR must conclude bN");
            return check(0, seq(c.boxed, 0, N));
        case Rule::CutN: {
            if (auto e = check(0, seq(c.boxed, c.plain, N))) return e;
            return check(1, seq(c.boxed, c.plain + 1, c.succ));
        }
        case Rule::CutBox: {
            if (auto e = check(0, seq(c.boxed, c.plain, B))) return e;
            return check(1, seq(c.boxed + 1, c.plain, c.succ));
        }
        case Rule::CondN: {
            if (c.succ != N) return fail("condN must conclude N");
            if (c.plain < 1) return fail("condN needs a safe principal");
            if (auto e = check(0, seq(c.boxed, c.plain - 1, N))) return e;
            if (auto e = check(1, c)) return e;
            return check(2, c);
        }
        case Rule::CondBox: case Rule::SRec: {
            if (c.succ != N) return fail(std::string(rule_name(n.rule)) + " must conclude N");
            if (c.boxed < 1) return fail(std::string(rule_name(n.rule)) + " needs a normal principal");
            if (auto e = check(0, seq(c.boxed - 1, c.plain, N))) return e;
            Sequent rest = n.rule == Rule::CondBox ? c : seq(c.boxed, c.plain + 1, N);
            if (auto e = check(1, rest)) return e;
            return check(2, rest);
        }
        case Rule::Dis:
            return check(0, c);
    }
    return fail("unknown rule");
}

std::vector<NodeId> reachable(const ProofGraph& g, NodeId from) {
    std::vector<NodeId> order;
    std::set<NodeId> seen;
    std::vector<NodeId> stack{from};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (!seen.insert(v).second) continue;
        order.push_back(v);
        auto it = g.nodes.find(v);
        if (it == g.nodes.end()) continue;
        const auto& ps = it->second.premises;
        for (auto p = ps.rbegin(); p != ps.rend(); ++p)
            if (!seen.count(*p)) stack.push_back(*p);
    }
    return order;
}

std::vector<StepError> validate_graph(const ProofGraph& g, GraphKind kind) {
    std::vector<StepError> errs;
    if (!g.has(g.root)) {
        errs.push_back({g.root, "root does not exist"});
        return errs;
    }
    auto reach = reachable(g, g.root);
    std::set<NodeId> rs(reach.begin(), reach.end());
    for (const auto& [id, n] : g.nodes) {
        if (!rs.count(id)) errs.push_back({id, "unreachable from root"});
        if (auto e = validate_step(g, id)) errs.push_back(*e);
        if (n.rule == Rule::SRec && kind != GraphKind::Derivation)
            errs.push_back({id, "srec is not a rule of circular proofs"});
        if (n.rule == Rule::Dis && kind != GraphKind::CycleNF)
            errs.push_back({id, "dis only occurs in cycle normal forms"});
        if (n.rule == Rule::Oracle && kind == GraphKind::Circular)
            errs.push_back({id, "oracle leaves only occur in proofs with oracles"});
    }
    std::sort(errs.begin(), errs.end(), [](const StepError& a, const StepError& b) { return a.node < b.node; });
    return errs;
}

std::map<Rule, int> rule_census(const ProofGraph& g) {
    std::map<Rule, int> out;
    for (NodeId id : reachable(g, g.root)) out[g.at(id).rule]++;
    return out;
}

}  // namespace cyclic
