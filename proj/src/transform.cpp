#include "cyclic/transform.hpp"
#include "detail/builder.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace cyclic {

using detail::Builder;
using detail::sq;

// ---- box promotion ----

ProofGraph box_promote(const ProofGraph& g) {
    ProofGraph out;
    out.name = g.name;
    Builder b(out);
    b.next = std::max<NodeId>(g.fresh_id(), 1);
    std::map<NodeId, NodeId> alias;
    for (NodeId v : reachable(g, g.root)) {
        const Node& n = g.at(v);
        const int N = n.seq.boxed + n.seq.plain;
        const SType s = n.seq.succ;
        const Sequent c = sq(N, 0, s);
        auto P = [&](std::size_t i) { return n.premises.at(i); };
        auto chain_at = [&](std::vector<Builder::Step> steps, NodeId top) {
            if (steps.empty()) {
                alias[v] = top;
            } else {
                b.chain(steps, top, v);
            }
        };
        switch (n.rule) {
            case Rule::Id: {
                NodeId top = b.add(Rule::Id, sq(0, 1), {});
                b.set(v, Rule::BoxL, c, {top});
                break;
            }
            case Rule::Zero: b.set(v, Rule::Zero, c, {}); break;
            case Rule::S0: case Rule::S1: case Rule::WeakBox: case Rule::BoxR: case Rule::CondBox:
                b.set(v, n.rule, c, n.premises);
                break;
            case Rule::Dis:
                b.set(v, Rule::Dis, c, n.premises);
                out.nodes[v].dis = n.dis;
                break;
            case Rule::WeakN: {
                auto steps = detail::boxed_to_front(N - 1, N, 0, s);
                steps.push_back({Rule::WeakBox, 0, c});
                b.chain(steps, P(0), v);
                break;
            }
            case Rule::ExchN: b.set(v, Rule::ExchBox, c, {P(0)}, n.seq.boxed + n.pos); break;
            case Rule::ExchBox: b.set(v, Rule::ExchBox, c, {P(0)}, n.pos); break;
            case Rule::BoxL: chain_at(detail::boxed_from_front(N - 1, N, 0, s), P(0)); break;
            case Rule::CutN: {
                NodeId left = b.add(Rule::BoxR, sq(N, 0, SType::Boxed), {P(0)});
                NodeId right = b.chain(detail::boxed_from_front(N, N + 1, 0, s), P(1));
                b.set(v, Rule::CutBox, c, {left, right});
                break;
            }
            case Rule::CutBox: b.set(v, Rule::CutBox, c, n.premises); break;
            case Rule::CondN: {
                NodeId r1 = b.chain(detail::boxed_from_front(N - 1, N, 0, s), P(1));
                NodeId r2 = P(1) == P(2) ? r1 : b.chain(detail::boxed_from_front(N - 1, N, 0, s), P(2));
                auto steps = detail::boxed_to_front(N - 1, N, 0, s);
                if (steps.empty()) {
                    b.set(v, Rule::CondBox, c, {P(0), r1, r2});
                } else {
                    NodeId cb = b.add(Rule::CondBox, c, {P(0), r1, r2});
                    b.chain(steps, cb, v);
                }
                break;
            }
            case Rule::Oracle: case Rule::SRec:
                throw TransformError(std::string("box_promote: unsupported rule ") + rule_name(n.rule));
        }
    }
    out.root = g.root;
    detail::apply_aliases(out, alias);
    detail::prune(out);
    return out;
}

// ---- stripping safe inputs below a boxed succedent ----

NodeId strip_safe_inputs_into(ProofGraph& g, NodeId root) {
    Builder b(g);
    std::map<NodeId, NodeId> memo;
    std::set<NodeId> active;
    std::function<NodeId(NodeId)> star = [&](NodeId u) -> NodeId {
        if (auto it = memo.find(u); it != memo.end()) return it->second;
        const Node n = g.at(u);
        if (n.seq.succ != SType::Boxed)
            throw TransformError("strip_safe_inputs: node " + std::to_string(u) + " does not conclude bN");
        if (n.rule == Rule::BoxR) return memo[u] = u;
        if (active.count(u)) throw NotProgressing("no boxR bar: cycle below it through node " + std::to_string(u));
        active.insert(u);
        const Sequent c = sq(n.seq.boxed, 0, SType::Boxed);
        NodeId r = 0;
        switch (n.rule) {
            case Rule::WeakN: case Rule::ExchN: r = star(n.premises[0]); break;
            case Rule::CutN: r = star(n.premises[1]); break;
            case Rule::WeakBox: case Rule::ExchBox: case Rule::S0: case Rule::S1: case Rule::Dis: {
                NodeId p = star(n.premises[0]);
                r = b.add(n.rule, c, {p}, n.pos);
                g.nodes[r].dis = n.dis;
                break;
            }
            case Rule::BoxL: {
                NodeId p = star(n.premises[0]);
                r = b.add(Rule::WeakBox, c, {p});
                break;
            }
            case Rule::CutBox: {
                NodeId p0 = star(n.premises[0]);
                NodeId p1 = star(n.premises[1]);
                r = b.add(Rule::CutBox, c, {p0, p1});
                break;
            }
            default:
                throw TransformError(std::string("strip_safe_inputs: unexpected rule ") + rule_name(n.rule));
        }
        active.erase(u);
        return memo[u] = r;
    };
    return star(root);
}

ProofGraph strip_safe_inputs(const ProofGraph& g) {
    ProofGraph out = g;
    out.root = strip_safe_inputs_into(out, g.root);
    detail::prune(out);
    return out;
}

// ---- parameter passing to an oracle ----

NodeId pass_parameters_into(ProofGraph& g, NodeId root, const std::string& a, const std::string& a_star) {
    const auto reach = reachable(g, root);
    std::map<NodeId, bool> region;
    for (NodeId v : reach) region[v] = g.at(v).rule == Rule::Oracle && g.at(v).oracle == a;
    for (bool changed = true; changed;) {
        changed = false;
        for (NodeId v : reach) {
            if (region[v]) continue;
            for (NodeId p : g.at(v).premises)
                if (region[p]) {
                    region[v] = changed = true;
                    break;
                }
        }
    }
    const int k = g.at(root).seq.boxed;
    using State = std::vector<int>;  // root thread -> index in the node's normal zone, -1 once carried
    Builder b(g);
    std::map<std::pair<NodeId, State>, NodeId> memo;
    std::map<std::pair<NodeId, int>, NodeId> sides;
    std::map<NodeId, NodeId> alias;
    auto carried = [](const State& t) { return static_cast<int>(std::count(t.begin(), t.end(), -1)); };

    // premise outside the region: drop the c carried normals kept at the end of the zone
    auto side = [&](NodeId u, int c) -> NodeId {
        if (c == 0) return u;
        auto key = std::make_pair(u, c);
        if (auto it = sides.find(key); it != sides.end()) return it->second;
        const Sequent& s = g.at(u).seq;
        std::vector<Builder::Step> steps;
        for (int t = c; t >= 1; --t) {
            int n = s.boxed + t;
            auto mv = detail::boxed_to_front(n - 1, n, s.plain, s.succ);
            steps.insert(steps.end(), mv.begin(), mv.end());
            steps.push_back({Rule::WeakBox, 0, sq(n, s.plain, s.succ)});
        }
        return sides[key] = b.chain(steps, u);
    };

    std::function<NodeId(NodeId, const State&)> get = [&](NodeId v, const State& t) -> NodeId {
        auto key = std::make_pair(v, t);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        NodeId id = b.reserve();
        memo[key] = id;
        const Node n = g.at(v);
        const int c = carried(t);
        const Sequent conc = sq(n.seq.boxed + c, n.seq.plain, n.seq.succ);
        auto prem = [&](NodeId u, const State& tu) { return region[u] ? get(u, tu) : side(u, carried(tu)); };
        auto shifted = [&](const State& s) {
            State o = s;
            for (auto& i : o)
                if (i >= 0) --i;
            return o;
        };
        auto thread_at = [&](int idx) {
            for (int j = 0; j < k; ++j)
                if (t[static_cast<std::size_t>(j)] == idx) return j;
            return -1;
        };
        auto where = [&](const std::string& what) {
            return what + " at node " + std::to_string(v) + " on a path to oracle " + a;
        };
        switch (n.rule) {
            case Rule::Oracle:
                if (n.oracle != a || n.seq.boxed != 0 || c != k)
                    throw ShapeViolation(where("oracle leaf with normal inputs"));
                b.set(id, Rule::Oracle, sq(k, n.seq.plain, n.seq.succ), {}, 0, a_star);
                break;
            case Rule::WeakBox: {
                State tp = shifted(t);
                int j = thread_at(0);
                if (j < 0) {
                    b.set(id, Rule::WeakBox, conc, {prem(n.premises[0], tp)});
                    break;
                }
                tp[static_cast<std::size_t>(j)] = -1;
                int rank = 0;
                for (int i = 0; i < j; ++i)
                    if (t[static_cast<std::size_t>(i)] == -1) ++rank;
                NodeId top = prem(n.premises[0], tp);
                auto steps = detail::boxed_from_front(n.seq.boxed - 1 + rank, conc.boxed, conc.plain, conc.succ);
                if (steps.empty()) {
                    alias[id] = top;
                } else {
                    b.chain(steps, top, id);
                }
                break;
            }
            case Rule::ExchBox: {
                State tp = t;
                for (auto& i : tp) {
                    if (i == n.pos) {
                        i = n.pos + 1;
                    } else if (i == n.pos + 1) {
                        i = n.pos;
                    }
                }
                b.set(id, Rule::ExchBox, conc, {prem(n.premises[0], tp)}, n.pos);
                break;
            }
            case Rule::CondBox: {
                if (thread_at(0) >= 0) throw ShapeViolation(where("condB principal on a root thread"));
                if (region[n.premises[0]]) throw ShapeViolation(where("leftmost condB premise"));
                NodeId p0 = prem(n.premises[0], shifted(t));
                NodeId p1 = prem(n.premises[1], t);
                NodeId p2 = n.premises[2] == n.premises[1] ? p1 : prem(n.premises[2], t);
                b.set(id, Rule::CondBox, conc, {p0, p1, p2});
                break;
            }
            case Rule::BoxL: throw ShapeViolation(where("boxL"));
            case Rule::CutBox: throw ShapeViolation(where("cutB"));
            case Rule::SRec: throw ShapeViolation(where("srec"));
            case Rule::Id: case Rule::Zero:
                throw ShapeViolation(where("axiom"));
            default: {
                std::vector<NodeId> ps;
                for (NodeId p : n.premises) ps.push_back(prem(p, t));
                b.set(id, n.rule, conc, ps, n.pos);
                g.nodes[id].dis = n.dis;
                break;
            }
        }
        return id;
    };
    State t0(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) t0[static_cast<std::size_t>(j)] = j;
    NodeId out = region[root] ? get(root, t0) : root;
    NodeId saved = g.root;
    detail::apply_aliases(g, alias);
    g.root = saved;
    return detail::resolve(alias, out);
}

ProofGraph pass_parameters(const ProofGraph& g, const std::string& a, const std::string& a_star) {
    ProofGraph out = g;
    out.root = pass_parameters_into(out, g.root, a, a_star);
    detail::prune(out);
    return out;
}

// ---- simultaneous recursion ----

std::vector<int> rotation_tag(int i, int k) {
    std::vector<int> t;
    for (int j = 0; j < k; ++j) t.push_back((i - 1 + j) % k + 1);
    return t;
}

namespace {

TermPtr cond_of(int m, int n, TermPtr w, TermPtr a, TermPtr b, TermPtr c) {
    return comp_safe(m, n, cond_fn(), {std::move(w), std::move(a), std::move(b), std::move(c)});
}

TermPtr substitute_oracles(const TermPtr& t, const std::map<std::string, TermPtr>& sub) {
    if (t->op == Op::Oracle) {
        auto it = sub.find(t->name);
        return it == sub.end() ? t : it->second;
    }
    std::map<std::string, TermPtr> inner = sub;
    if (t->op == Op::SNRec || t->op == Op::SRecPP || t->op == Op::SNRecPP) inner.erase(t->name);
    if (t->op == Op::SimRecPP)
        for (const auto& a : t->names) inner.erase(a);
    bool same = true;
    std::vector<TermPtr> args;
    for (const auto& a : t->args) {
        args.push_back(substitute_oracles(a, inner));
        same = same && args.back() == a;
    }
    if (same) return t;
    auto copy = std::make_shared<Term>(*t);
    copy->args = std::move(args);
    return copy;
}

}  // namespace

TermPtr equals_constant(int m, int n, const TermPtr& t, const Value& c) {
    if (c.is_zero()) return cond_of(m, n, t, constant(m, n, "1"), zero(m, n), zero(m, n));
    TermPtr rest = equals_constant(m, n, comp_safe(m, n, pred_fn(), {t}), c >> 1);
    if (bit_test(c, 0)) return cond_of(m, n, t, zero(m, n), zero(m, n), rest);
    return cond_of(m, n, t, zero(m, n), rest, zero(m, n));
}

TermPtr tag_dispatch(int m, int n, int first_tag, const std::vector<std::vector<int>>& tags,
                     const std::vector<TermPtr>& bodies) {
    TermPtr out = zero(m, n);
    for (std::size_t j = bodies.size(); j-- > 0;) {
        TermPtr test;
        for (std::size_t q = tags[j].size(); q-- > 0;) {
            TermPtr eq = equals_constant(m, n, proj_safe(m, n, first_tag + static_cast<int>(q)), Value(tags[j][q]));
            test = test ? cond_of(m, n, eq, zero(m, n), test, test) : eq;
        }
        out = cond_of(m, n, test, out, out, bodies[j]);
    }
    return out;
}

SimultaneousReduction reduce_simultaneous(const TermPtr& t) {
    if (t->op != Op::SimRecPP) throw TransformError("reduce_simultaneous: not a simultaneous recursion");
    const int k = static_cast<int>(t->args.size());
    const int m = t->m, n = t->n;
    SimultaneousReduction r;
    std::string F = t->names[0] + "_sim";
    for (int i = 1; i <= k; ++i) r.tags.push_back(rotation_tag(i, k));
    auto tag_args = [&](int mm, int nn, int i, std::vector<TermPtr> base) {
        for (int v : r.tags[static_cast<std::size_t>(i)]) base.push_back(constant(mm, nn, std::to_string(v)));
        return base;
    };
    std::vector<TermPtr> safes;
    for (int j = 0; j < n; ++j) safes.push_back(proj_safe(m, n, j));
    std::map<std::string, TermPtr> sub;
    for (int i = 0; i < k; ++i)
        sub[t->names[static_cast<std::size_t>(i)]] = comp_safe(m, n, oracle(F, m, n + k), tag_args(m, n, i, safes));
    std::vector<TermPtr> bodies;
    for (const auto& h : t->args) {
        std::vector<TermPtr> ps;
        for (int j = 0; j < n; ++j) ps.push_back(proj_safe(m, n + k, j));
        bodies.push_back(comp_safe(m, n + k, substitute_oracles(h, sub), ps));
    }
    TermPtr body = tag_dispatch(m, n + k, n, r.tags, bodies);
    r.f = t->guard == Guard::StrictNormals ? snrec_pp(F, body) : srec_pp(F, body);
    for (int i = 0; i < k; ++i) r.selectors.push_back(comp_safe(m, n, r.f, tag_args(m, n, i, safes)));
    return r;
}

}  // namespace cyclic
