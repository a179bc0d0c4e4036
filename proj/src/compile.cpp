#include "cyclic/compile.hpp"
#include "cyclic/interp.hpp"
#include "cyclic/transform.hpp"
#include "detail/builder.hpp"

#include <algorithm>
#include <numeric>

namespace cyclic {

using detail::Builder;
using detail::sq;

namespace {

class Compiler {
public:
    Compiler(ProofGraph& g, bool circular) : g_(g), b_(g), circular_(circular) {}

    NodeId compile(const TermPtr& t) {
        const int m = t->m, n = t->n;
        switch (t->op) {
            case Op::Zero: return select(m, n, {}, {}, b_.add(Rule::Zero, sq(0, 0), {}));
            case Op::ProjS: return select(m, n, {}, {t->index}, id());
            case Op::ProjN: {
                NodeId top = b_.add(Rule::BoxL, sq(1, 0), {id()});
                return select(m, n, {t->index}, {}, top);
            }
            case Op::S0: return b_.add(Rule::S0, sq(0, 1), {id()});
            case Op::S1: return b_.add(Rule::S1, sq(0, 1), {id()});
            case Op::Pred: {
                NodeId i = id();
                return b_.add(Rule::CondN, sq(0, 1), {b_.add(Rule::Zero, sq(0, 0), {}), i, i});
            }
            case Op::Cond: {
                NodeId p0 = select(0, 3, {}, {0}, id());
                NodeId p1 = select(0, 4, {}, {1}, id());
                NodeId p2 = select(0, 4, {}, {2}, id());
                NodeId c = b_.add(Rule::CondN, sq(0, 4), {p0, p1, p2});
                return b_.chain({{Rule::ExchN, 0, sq(0, 4)}, {Rule::ExchN, 1, sq(0, 4)}, {Rule::ExchN, 2, sq(0, 4)}}, c);
            }
            case Op::Oracle: return b_.add(Rule::Oracle, sq(m, n), {}, 0, t->name);
            case Op::CompSafe: return comp_safe(t);
            case Op::CompNormal: return comp_normal(t);
            case Op::SRecN: {
                NodeId dg = compile(t->args[0]);
                NodeId d0 = compile(t->args[1]);
                NodeId d1 = same(t->args[1], t->args[2]) ? d0 : compile(t->args[2]);
                if (!circular_) return b_.add(Rule::SRec, sq(m, n), {dg, d0, d1});
                NodeId v = b_.reserve();
                NodeId c0 = b_.add(Rule::CutN, sq(m, n), {v, d0});
                NodeId c1 = d1 == d0 ? c0 : b_.add(Rule::CutN, sq(m, n), {v, d1});
                b_.set(v, Rule::CondBox, sq(m, n), {dg, c0, c1});
                return v;
            }
            case Op::SNRec: return snrec(t);
            default:
                throw CompileError(std::string("cannot compile recursion on prefix permutations or program calls"));
        }
    }

private:
    ProofGraph& g_;
    Builder b_;
    bool circular_;
    int fresh_ = 0;

    static bool same(const TermPtr& a, const TermPtr& b) { return a == b || serialize_term(a) == serialize_term(b); }

    NodeId id() { return b_.add(Rule::Id, sq(0, 1), {}); }

    // weakenings, exchanges: the top receives the kept normals and safes in the given order
    NodeId select(int m, int n, const std::vector<int>& keep_n, const std::vector<int>& keep_s, NodeId top,
                  SType s = SType::Plain) {
        std::vector<int> cn(static_cast<std::size_t>(m)), cs(static_cast<std::size_t>(n));
        std::iota(cn.begin(), cn.end(), 0);
        std::iota(cs.begin(), cs.end(), 0);
        std::vector<Builder::Step> steps;
        auto nn = [&] { return static_cast<int>(cn.size()); };
        auto ns = [&] { return static_cast<int>(cs.size()); };
        auto pos_of = [](const std::vector<int>& v, int x) {
            return static_cast<int>(std::find(v.begin(), v.end(), x) - v.begin());
        };
        for (int i = 0; i < m; ++i) {
            if (std::find(keep_n.begin(), keep_n.end(), i) != keep_n.end()) continue;
            int q = pos_of(cn, i);
            auto mv = detail::boxed_to_front(q, nn(), ns(), s);
            steps.insert(steps.end(), mv.begin(), mv.end());
            steps.push_back({Rule::WeakBox, 0, sq(nn(), ns(), s)});
            cn.erase(cn.begin() + q);
        }
        for (bool swapped = true; swapped;) {
            swapped = false;
            for (int i = 0; i + 1 < nn(); ++i) {
                if (pos_of(keep_n, cn[i]) > pos_of(keep_n, cn[i + 1])) {
                    steps.push_back({Rule::ExchBox, i, sq(nn(), ns(), s)});
                    std::swap(cn[i], cn[i + 1]);
                    swapped = true;
                }
            }
        }
        for (int j = 0; j < n; ++j) {
            if (std::find(keep_s.begin(), keep_s.end(), j) != keep_s.end()) continue;
            int q = pos_of(cs, j);
            for (int p = q; p + 1 < ns(); ++p) steps.push_back({Rule::ExchN, p, sq(nn(), ns(), s)});
            steps.push_back({Rule::WeakN, 0, sq(nn(), ns(), s)});
            cs.erase(cs.begin() + q);
        }
        for (bool swapped = true; swapped;) {
            swapped = false;
            for (int i = 0; i + 1 < ns(); ++i) {
                if (pos_of(keep_s, cs[i]) > pos_of(keep_s, cs[i + 1])) {
                    steps.push_back({Rule::ExchN, i, sq(nn(), ns(), s)});
                    std::swap(cs[i], cs[i + 1]);
                    swapped = true;
                }
            }
        }
        return b_.chain(steps, top);
    }

    NodeId weaken_safes(int m, int from, int to, NodeId top, SType s = SType::Plain) {
        std::vector<Builder::Step> steps;
        for (int k = from; k > to; --k) steps.push_back({Rule::WeakN, 0, sq(m, k, s)});
        return b_.chain(steps, top);
    }

    NodeId comp_safe(const TermPtr& t) {
        const int m = t->m, n = t->n;
        const TermPtr& h = t->args[0];
        const int l = static_cast<int>(t->args.size()) - 1;
        std::vector<int> kn, ks;
        if (h->m != 0) kn = all(m);
        for (int j = 0; j < l; ++j) ks.push_back(n + j);
        NodeId cur = select(m, n + l, kn, ks, compile(h));
        for (int k = l - 1; k >= 0; --k) {
            NodeId left = weaken_safes(m, n + k, n, compile(t->args[static_cast<std::size_t>(k) + 1]));
            cur = b_.add(Rule::CutN, sq(m, n + k), {left, cur});
        }
        return cur;
    }

    NodeId comp_normal(const TermPtr& t) {
        const int m = t->m, n = t->n;
        const int l = static_cast<int>(t->args.size()) - 1;
        if (is_structural_normal(t)) {
            std::vector<int> kn;
            for (int j = 1; j <= l; ++j) kn.push_back(t->args[static_cast<std::size_t>(j)]->index);
            return select(m, n, kn, all(n), compile(t->args[0]));
        }
        std::vector<int> kn;
        for (int j = l - 1; j >= 0; --j) kn.push_back(j);
        NodeId cur = select(m + l, n, kn, all(n), compile(t->args[0]));
        for (int j = l - 1; j >= 0; --j) {
            NodeId r = compile(t->args[static_cast<std::size_t>(j) + 1]);
            std::vector<Builder::Step> wb;
            for (int i = j; i > 0; --i) wb.push_back({Rule::WeakBox, 0, sq(m + i, 0)});
            NodeId dropped = b_.chain(wb, r);
            NodeId boxed = b_.add(Rule::BoxR, sq(m + j, 0, SType::Boxed), {dropped});
            NodeId left = weaken_safes(m + j, n, 0, boxed, SType::Boxed);
            cur = b_.add(Rule::CutBox, sq(m + j, n), {left, cur});
        }
        return cur;
    }

    NodeId snrec(const TermPtr& t) {
        if (!circular_) throw CompileError("safe nested recursion has no finite derivation; compile it circularly");
        const int m = t->m, n = t->n;
        const std::string a_star = t->name + "*" + std::to_string(fresh_++);
        NodeId dg = compile(t->args[0]);
        auto step = [&](const TermPtr& h) {
            NodeId dh = compile(h);
            NodeId out = pass_parameters_into(g_, dh, t->name, a_star);
            if (!oracle_paths_cutbox_free(g_, out))
                throw CompileError("internal: cutB on a path to an oracle after parameter passing");
            return out;
        };
        NodeId h0 = step(t->args[1]);
        NodeId h1 = same(t->args[1], t->args[2]) ? h0 : step(t->args[2]);
        NodeId v = b_.add(Rule::CondBox, sq(m, n), {dg, h0, h1});
        for (auto& [id, node] : g_.nodes)
            for (auto& p : node.premises) {
                const Node& q = g_.at(p);
                if (q.rule == Rule::Oracle && q.oracle == a_star) p = v;
            }
        return v;
    }

    static std::vector<int> all(int k) {
        std::vector<int> v(static_cast<std::size_t>(k));
        std::iota(v.begin(), v.end(), 0);
        return v;
    }
};

}  // namespace

bool oracle_paths_cutbox_free(const ProofGraph& g, NodeId root) {
    const auto reach = reachable(g, root);
    std::map<NodeId, bool> region;
    for (NodeId v : reach) region[v] = g.at(v).rule == Rule::Oracle;
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
    for (NodeId v : reach)
        if (region[v] && g.at(v).rule == Rule::CutBox) return false;
    return true;
}

ProofGraph term_to_derivation(const TermPtr& t, const std::string& name) {
    if (auto v = check_term_class(t, TermClass::B)) throw CompileError("not a B term: " + v->rule + " in " + v->subterm);
    ProofGraph g;
    g.name = name;
    Compiler c(g, false);
    g.root = c.compile(t);
    detail::prune(g);
    return g;
}

ProofGraph srec_eliminate(const ProofGraph& in) {
    ProofGraph g = in;
    Builder b(g);
    std::vector<NodeId> srecs;
    for (const auto& [id, n] : g.nodes)
        if (n.rule == Rule::SRec) srecs.push_back(id);
    for (NodeId v : srecs) {
        Node& n = g.nodes.at(v);
        auto ps = n.premises;
        Sequent s = n.seq;
        NodeId c1 = b.add(Rule::CutN, s, {v, ps[1]});
        NodeId c2 = ps[1] == ps[2] ? c1 : b.add(Rule::CutN, s, {v, ps[2]});
        Node& m = g.nodes.at(v);
        m.rule = Rule::CondBox;
        m.premises = {ps[0], c1, c2};
    }
    return g;
}

ProofGraph nb_to_circular(const TermPtr& t, const std::string& name) {
    if (auto v = check_term_class(t, TermClass::NB)) throw CompileError("not an NB term: " + v->rule + " in " + v->subterm);
    ProofGraph g;
    g.name = name;
    Compiler c(g, true);
    g.root = c.compile(t);
    detail::prune(g);
    if (!oracle_paths_cutbox_free(g, g.root)) throw CompileError("internal: cutB on a path to an oracle");
    return g;
}

}  // namespace cyclic
