#include "cyclic/translate.hpp"
#include "cyclic/checker.hpp"
#include "cyclic/cnf.hpp"
#include "cyclic/format.hpp"
#include "cyclic/transform.hpp"

#include <set>
#include <unordered_map>

namespace cyclic {

TermPtr rewrite_term(const TermPtr& t, const std::function<TermPtr(const TermPtr&)>& f) {
    std::unordered_map<const Term*, TermPtr> memo;
    std::function<TermPtr(const TermPtr&)> go = [&](const TermPtr& u) -> TermPtr {
        if (auto it = memo.find(u.get()); it != memo.end()) return it->second;
        TermPtr out;
        if (TermPtr r = f(u)) {
            out = r;
        } else {
            std::vector<TermPtr> args;
            bool same = true;
            for (const auto& a : u->args) {
                args.push_back(go(a));
                same = same && args.back() == a;
            }
            if (same) {
                out = u;
            } else {
                auto copy = std::make_shared<Term>(*u);
                copy->args = std::move(args);
                out = copy;
            }
        }
        memo[u.get()] = out;
        return out;
    };
    return go(t);
}

namespace {

std::vector<TermPtr> safes(int m, int n, int from, int to) {
    std::vector<TermPtr> v;
    for (int j = from; j < to; ++j) v.push_back(proj_safe(m, n, j));
    return v;
}
std::vector<TermPtr> normals(int m, int from, int to) {
    std::vector<TermPtr> v;
    for (int i = from; i < to; ++i) v.push_back(proj_normal(m, 0, i));
    return v;
}

// a call of arity (mm;nn) used at arity (m;n), the extra inputs fed with 0
TermPtr padded_call(const TermPtr& c, int m, int n) {
    const int mm = c->m, nn = c->n;
    if (mm == m && nn == n) return c;
    auto ts = safes(mm, n, 0, n);
    for (int j = n; j < nn; ++j) ts.push_back(zero(mm, n));
    TermPtr inner = comp_safe(mm, n, c, ts);
    auto rs = normals(m, 0, m);
    for (int i = m; i < mm; ++i) rs.push_back(zero(m, 0));
    return comp_normal(m, n, inner, rs);
}

class Translator {
public:
    explicit Translator(const ProofGraph& g) {
        Classification c = classify(g);
        if (c.cls == ProofClass::None)
            throw TranslateError("proof is neither CB nor CNB: " +
                                 (c.diagnostics.empty() ? std::string("rejected") : c.diagnostics.front()));
        guard_ = c.cls == ProofClass::CB ? Guard::StrictNormalsSubsetSafes : Guard::StrictNormals;
        g_ = minimize(g);
        for (const auto& [id, n] : g_.nodes)
            if (n.rule == Rule::Oracle || n.rule == Rule::SRec)
                throw TranslateError(std::string("unsupported rule ") + rule_name(n.rule));
        std::vector<NodeId> cuts;
        for (const auto& [id, n] : g_.nodes)
            if (n.rule == Rule::CutBox) cuts.push_back(id);
        for (NodeId v : cuts) {
            const Node& n = g_.at(v);
            NodeId star = n.seq.plain == 0 ? n.premises[0] : strip_safe_inputs_into(g_, n.premises[0]);
            g_.nodes.at(v).premises[0] = star;  // the left premise is read without safe inputs
        }
        scc_ = strongly_connected(g_);
        for (const auto& [parent, i] : back_edges(g_)) functions_.insert(g_.at(parent).premises[i]);
        functions_.insert(g_.root);
    }

    PPProgram run() {
        PPProgram p;
        p.name = g_.name;
        p.main = name(g_.root);
        std::set<NodeId> done;
        std::vector<NodeId> work(functions_.begin(), functions_.end());
        while (!work.empty()) {
            NodeId f = work.back();
            work.pop_back();
            if (!done.insert(f).second) continue;
            current_ = f;
            memo_.clear();
            TermPtr body = expand(f, false, true);
            const Node& n = g_.at(f);
            p.functions.push_back(PPFunction{name(f), n.seq.boxed, n.seq.plain, body, scc_.comp.at(f)});
            for (NodeId e : functions_)
                if (!done.count(e)) work.push_back(e);
        }
        std::sort(p.functions.begin(), p.functions.end(),
                  [](const PPFunction& a, const PPFunction& b) { return a.name < b.name; });
        return p;
    }

private:
    ProofGraph g_;
    SccInfo scc_;
    Guard guard_;
    std::set<NodeId> functions_;
    NodeId current_ = 0;
    std::map<std::pair<NodeId, bool>, TermPtr> memo_;
    std::set<std::pair<NodeId, bool>> active_;

    static std::string name(NodeId v) { return "f" + std::to_string(v); }

    TermPtr expand(NodeId u, bool dec, bool start = false) {
        const Node& n = g_.at(u);
        const int m = n.seq.boxed, k = n.seq.plain;
        if (!start) {
            bool same_scc = scc_.same(u, current_);
            if (same_scc && dec && functions_.count(u)) return guarded_call(name(u), m, k, guard_);
            if (!same_scc && (functions_.count(u) || scc_.on_cycle(u))) {
                functions_.insert(u);
                return call(name(u), m, k);
            }
            if (auto it = memo_.find({u, dec}); it != memo_.end()) return it->second;
        }
        if (!active_.insert({u, dec}).second)
            throw TranslateError("internal: unguarded loop through node " + std::to_string(u));
        TermPtr out = expand_rule(u, n, dec);
        active_.erase({u, dec});
        if (!start) memo_[{u, dec}] = out;
        return out;
    }

    TermPtr expand_rule(NodeId u, const Node& n, bool dec) {
        const int m = n.seq.boxed, k = n.seq.plain;
        auto P = [&](std::size_t i, bool d) { return expand(n.premises.at(i), d); };
        switch (n.rule) {
            case Rule::Id: return proj_safe(0, 1, 0);
            case Rule::Zero: return zero(0, 0);
            case Rule::S0: return comp_safe(m, k, succ0(), {P(0, dec)});
            case Rule::S1: return comp_safe(m, k, succ1(), {P(0, dec)});
            case Rule::WeakN: return comp_safe(m, k, P(0, dec), safes(m, k, 0, k - 1));
            case Rule::WeakBox: return comp_normal(m, k, P(0, dec), normals(m, 1, m));
            case Rule::ExchN: {
                auto ts = safes(m, k, 0, k);
                std::swap(ts[static_cast<std::size_t>(n.pos)], ts[static_cast<std::size_t>(n.pos) + 1]);
                return comp_safe(m, k, P(0, dec), ts);
            }
            case Rule::ExchBox: {
                auto rs = normals(m, 0, m);
                std::swap(rs[static_cast<std::size_t>(n.pos)], rs[static_cast<std::size_t>(n.pos) + 1]);
                return comp_normal(m, k, P(0, dec), rs);
            }
            case Rule::BoxL: {
                TermPtr h = comp_normal(m, k + 1, P(0, dec), normals(m, 1, m));
                auto ts = safes(m, k, 0, k);
                ts.push_back(proj_normal(m, k, 0));
                return comp_safe(m, k, h, ts);
            }
            case Rule::BoxR: case Rule::Dis: return P(0, dec);
            case Rule::CutN: {
                auto ts = safes(m, k, 0, k);
                ts.push_back(P(0, dec));
                return comp_safe(m, k, P(1, dec), ts);
            }
            case Rule::CutBox: {
                auto rs = normals(m, 0, m);
                rs.insert(rs.begin(), P(0, dec));
                return comp_normal(m, k, P(1, dec), rs);
            }
            case Rule::CondN: {
                TermPtr w = proj_safe(m, k, k - 1);
                auto rest = safes(m, k, 0, k - 1);
                TermPtr t0 = comp_safe(m, k, P(0, dec), rest);
                auto with_pred = rest;
                with_pred.push_back(comp_safe(m, k, pred_fn(), {w}));
                TermPtr t1 = comp_safe(m, k, P(1, dec), with_pred);
                TermPtr t2 = n.premises[2] == n.premises[1] ? t1 : comp_safe(m, k, P(2, dec), with_pred);
                return comp_safe(m, k, cond_fn(), {w, t0, t1, t2});
            }
            case Rule::CondBox: {
                TermPtr t0 = comp_normal(m, k, P(0, dec), normals(m, 1, m));
                auto rs = normals(m, 1, m);
                rs.insert(rs.begin(), comp_safe(m, 0, pred_fn(), {proj_normal(m, 0, 0)}));
                TermPtr t1 = comp_normal(m, k, P(1, true), rs);
                TermPtr t2 = n.premises[2] == n.premises[1] ? t1 : comp_normal(m, k, P(2, true), rs);
                return comp_safe(m, k, cond_fn(), {proj_normal(m, k, 0), t0, t1, t2});
            }
            default:
                throw TranslateError(std::string("unsupported rule ") + rule_name(n.rule) + " at node " +
                                     std::to_string(u));
        }
    }
};

}  // namespace

PPProgram normalize_arities(const PPProgram& p) {
    std::map<int, std::pair<int, int>> widest;
    for (const auto& f : p.functions) {
        auto& w = widest.emplace(f.block, std::make_pair(f.m, f.n)).first->second;
        w.first = std::max(w.first, f.m);
        w.second = std::max(w.second, f.n);
    }
    std::map<std::string, std::pair<int, int>> target;
    for (const auto& f : p.functions) target[f.name] = widest[f.block];
    PPProgram out = p;
    for (auto& f : out.functions) {
        auto [M, N] = target[f.name];
        TermPtr body = rewrite_term(f.body, [&](const TermPtr& t) -> TermPtr {
            if (t->op != Op::GuardedCall && t->op != Op::Call) return nullptr;
            auto [tm, tn] = target.at(t->name);
            if (tm == t->m && tn == t->n) return t;
            TermPtr c = t->op == Op::Call ? call(t->name, tm, tn) : guarded_call(t->name, tm, tn, t->guard);
            return padded_call(c, t->m, t->n);
        });
        if (f.m != M) body = comp_normal(M, f.n, body, normals(M, 0, f.m));
        if (f.n != N) body = comp_safe(M, N, body, safes(M, N, 0, f.n));
        f.body = body;
        f.m = M;
        f.n = N;
    }
    return out;
}

PPProgram flatten_blocks(const PPProgram& p) {
    std::map<int, std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < p.functions.size(); ++i) blocks[p.functions[i].block].push_back(i);
    PPProgram out;
    out.name = p.name;
    out.main = p.main;
    for (const auto& [blk, members] : blocks) {
        if (members.size() == 1) {
            out.functions.push_back(p.functions[members[0]]);
            continue;
        }
        const int k = static_cast<int>(members.size());
        const int m = p.functions[members[0]].m, n = p.functions[members[0]].n;
        for (std::size_t i : members)
            if (p.functions[i].m != m || p.functions[i].n != n)
                throw TranslateError("flatten_blocks: block arities differ; normalize them first");
        const std::string F = "blk" + std::to_string(blk);
        std::vector<std::vector<int>> tags;
        std::map<std::string, int> index;
        for (int i = 0; i < k; ++i) {
            tags.push_back(rotation_tag(i + 1, k));
            index[p.functions[members[static_cast<std::size_t>(i)]].name] = i;
        }
        auto with_tags = [&](int i, TermPtr c) {
            auto ts = safes(m, n, 0, n);
            for (int v : tags[static_cast<std::size_t>(i)]) ts.push_back(constant(m, n, std::to_string(v)));
            return comp_safe(m, n, std::move(c), ts);
        };
        std::vector<TermPtr> bodies;
        for (std::size_t i : members) {
            TermPtr b = rewrite_term(p.functions[i].body, [&](const TermPtr& t) -> TermPtr {
                if (t->op != Op::GuardedCall || !index.count(t->name)) return nullptr;
                return with_tags(index.at(t->name), guarded_call(F, m, n + k, t->guard));
            });
            bodies.push_back(comp_safe(m, n + k, b, safes(m, n + k, 0, n)));
        }
        out.functions.push_back(PPFunction{F, m, n + k, tag_dispatch(m, n + k, n, tags, bodies), blk});
        for (int i = 0; i < k; ++i) {
            const auto& f = p.functions[members[static_cast<std::size_t>(i)]];
            out.functions.push_back(PPFunction{f.name, m, n, with_tags(i, call(F, m, n + k)), blk});
        }
    }
    return out;
}

PPProgram translate(const ProofGraph& g, bool flatten) {
    PPProgram p = normalize_arities(Translator(g).run());
    return flatten ? flatten_blocks(p) : p;
}

}  // namespace cyclic
