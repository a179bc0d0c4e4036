#include "cyclic/interp.hpp"
#include "cyclic/order.hpp"

#include <set>
#include <tuple>

namespace cyclic {

// ---- coderivations ----

namespace {

using MemoKey = std::tuple<NodeId, Values, Values>;

struct Frame {
    NodeId id;
    Values x, y;
    int stage = 0;
    Value tmp;
};

Values drop_front(const Values& v) { return Values(v.begin() + 1, v.end()); }
Values drop_back(const Values& v) { return Values(v.begin(), v.end() - 1); }
Values push(Values v, const Value& e) {
    v.push_back(e);
    return v;
}
Values push_front(const Values& v, const Value& e) {
    Values out{e};
    out.insert(out.end(), v.begin(), v.end());
    return out;
}

}  // namespace

Value eval_proof(const ProofGraph& g, NodeId node, const Values& normals, const Values& safes, const EvalConfig& cfg,
                 EvalStats* stats, const OracleEnv* env) {
    {
        const Sequent& s = g.at(node).seq;
        if (static_cast<int>(normals.size()) != s.boxed || static_cast<int>(safes.size()) != s.plain)
            throw EvalError("arity mismatch at node " + std::to_string(node) + ": sequent " + to_string(s));
    }
    // only shared nodes are memoized
    std::set<NodeId> shared{node};
    if (cfg.memo) {
        std::map<NodeId, int> indegree;
        for (NodeId v : reachable(g, node))
            for (NodeId p : g.at(v).premises)
                if (++indegree[p] == 2) shared.insert(p);
    }
    std::map<MemoKey, Value> memo;
    std::vector<Frame> st;
    Value ret;
    std::uint64_t steps = 0;
    std::size_t max_depth = 0;

    // returns true if a frame was pushed, false if ret was filled from the memo
    auto enter = [&](NodeId id, Values x, Values y) {
        if (++steps > cfg.fuel) throw FuelExhausted();
        if (cfg.memo && shared.count(id)) {
            auto it = memo.find(MemoKey{id, x, y});
            if (it != memo.end()) {
                ret = it->second;
                return false;
            }
        }
        st.push_back(Frame{id, std::move(x), std::move(y), 0, {}});
        max_depth = std::max(max_depth, st.size());
        return true;
    };
    auto finish = [&](Value v) {
        if (cfg.memo && shared.count(st.back().id)) memo.emplace(MemoKey{st.back().id, st.back().x, st.back().y}, v);
        ret = std::move(v);
        st.pop_back();
    };

    if (enter(node, normals, safes)) {
        while (!st.empty()) {
            std::size_t top = st.size() - 1;
            const Node& n = g.at(st[top].id);
            int stage = st[top].stage++;
            const Values& x = st[top].x;
            const Values& y = st[top].y;
            auto child = [&](std::size_t i, Values cx, Values cy) { enter(n.premises[i], std::move(cx), std::move(cy)); };
            switch (n.rule) {
                case Rule::Id: finish(y.at(0)); break;
                case Rule::Zero: finish(0); break;
                case Rule::Oracle: {
                    if (!env || !env->count(n.oracle)) throw EvalError("unbound oracle " + n.oracle);
                    finish(env->at(n.oracle)(x, y));
                    break;
                }
                case Rule::S0: case Rule::S1:
                    if (stage == 0) {
                        child(0, x, y);
                    } else {
                        finish(n.rule == Rule::S0 ? s0(ret) : s1(ret));
                    }
                    break;
                case Rule::WeakN: case Rule::WeakBox: case Rule::ExchN: case Rule::ExchBox:
                case Rule::BoxL: case Rule::BoxR: case Rule::Dis:
                    if (stage == 0) {
                        Values cx = x, cy = y;
                        if (n.rule == Rule::WeakN) cy.pop_back();
                        if (n.rule == Rule::WeakBox) cx.erase(cx.begin());
                        if (n.rule == Rule::ExchN) std::swap(cy.at(n.pos), cy.at(n.pos + 1));
                        if (n.rule == Rule::ExchBox) std::swap(cx.at(n.pos), cx.at(n.pos + 1));
                        if (n.rule == Rule::BoxL) {
                            cy.push_back(cx.front());
                            cx.erase(cx.begin());
                        }
                        child(0, std::move(cx), std::move(cy));
                    } else {
                        finish(ret);
                    }
                    break;
                case Rule::CutN:
                    if (stage == 0) {
                        child(0, x, y);
                    } else if (stage == 1) {
                        child(1, x, push(y, ret));
                    } else {
                        finish(ret);
                    }
                    break;
                case Rule::CutBox:
                    if (stage == 0) {
                        child(0, x, y);
                    } else if (stage == 1) {
                        child(1, push_front(x, ret), y);
                    } else {
                        finish(ret);
                    }
                    break;
                case Rule::CondN:
                    if (stage == 0) {
                        const Value& w = y.back();
                        Values rest = drop_back(y);
                        if (w.is_zero()) {
                            child(0, x, std::move(rest));
                        } else {
                            child(w.convert_to<bool>() && bit_test(w, 0) ? 2 : 1, x, push(std::move(rest), pred(w)));
                        }
                    } else {
                        finish(ret);
                    }
                    break;
                case Rule::CondBox:
                    if (stage == 0) {
                        const Value& w = x.front();
                        Values rest = drop_front(x);
                        if (w.is_zero()) {
                            child(0, std::move(rest), y);
                        } else {
                            child(bit_test(w, 0) ? 2 : 1, push_front(rest, pred(w)), y);
                        }
                    } else {
                        finish(ret);
                    }
                    break;
                case Rule::SRec:
                    if (stage == 0) {
                        const Value& w = x.front();
                        if (w.is_zero()) {
                            child(0, drop_front(x), y);
                            st[top].stage = 3;
                        } else {
                            Values rx = x;
                            rx[0] = pred(w);
                            enter(st[top].id, std::move(rx), y);
                        }
                    } else if (stage == 1) {
                        const Value& w = x.front();
                        Values rx = x;
                        rx[0] = pred(w);
                        child(bit_test(w, 0) ? 2 : 1, std::move(rx), push(y, ret));
                    } else {
                        finish(ret);
                    }
                    break;
            }
        }
    }
    if (stats) {
        stats->steps = steps;
        stats->memo_keys = memo.size();
        stats->max_depth = max_depth;
    }
    return ret;
}

// ---- function algebras ----

namespace {

struct Scope {
    const std::string* name;
    OracleFn fn;
    const Scope* parent;
};

struct Binding {
    const Values* x;
    const Values* y;
};

struct Ctx {
    const OracleEnv* env = nullptr;
    const EvalConfig* cfg = nullptr;
    EvalStats* stats = nullptr;
    const PPProgram* prog = nullptr;
    std::map<std::tuple<std::string, Values, Values>, Value> memo{};
    std::uint64_t calls = 0;
    std::size_t depth = 0;
};

Value ev(const Term& t, const Values& x, const Values& y, const Scope* sc, const Binding* bind, Ctx& c);

bool guard_holds(Guard g, const Values& u, const Values& v, const Values& x, const Values& y) {
    if (u.size() != x.size() || v.size() != y.size()) return false;
    if (tuple_order(u, x).relation != TupleRelation::SubsetStrict) return false;
    if (g == Guard::StrictNormalsSubsetSafes && !subset_eq(v, y)) return false;
    return true;
}

Value guard_fallback(Ctx& c, const std::string& what) {
    if (c.stats) c.stats->guard_fallbacks++;
    if (c.cfg->guard_mode == GuardMode::StrictError) throw GuardViolation("guard failed at call to " + what);
    return 0;
}

OracleFn guarded(Guard g, std::function<Value(const Values&, const Values&)> f, Values x, Values y, Ctx& c,
                 std::string name) {
    return [g, f = std::move(f), x = std::move(x), y = std::move(y), &c, name = std::move(name)](const Values& u,
                                                                                                 const Values& v) {
        if (c.stats) c.stats->guarded_calls++;
        if (!guard_holds(g, u, v, x, y)) return guard_fallback(c, name);
        return f(u, v);
    };
}

Value call_function(const std::string& name, const Values& x, const Values& y, Ctx& c) {
    const PPFunction& fn = c.prog->function(name);
    if (static_cast<int>(x.size()) != fn.m || static_cast<int>(y.size()) != fn.n)
        throw EvalError("arity mismatch calling " + name);
    auto key = std::make_tuple(name, x, y);
    if (c.cfg->memo) {
        auto it = c.memo.find(key);
        if (it != c.memo.end()) return it->second;
    }
    if (++c.calls > c.cfg->fuel) throw FuelExhausted();
    ++c.depth;
    if (c.stats) c.stats->max_depth = std::max(c.stats->max_depth, c.depth);
    Binding b{&x, &y};
    Value v = ev(*fn.body, x, y, nullptr, &b, c);
    --c.depth;
    if (c.cfg->memo) c.memo.emplace(std::move(key), v);
    return v;
}

const OracleFn* lookup(const std::string& name, const Scope* sc, const Ctx& c) {
    for (const Scope* s = sc; s; s = s->parent)
        if (*s->name == name) return &s->fn;
    auto it = c.env->find(name);
    if (it != c.env->end()) return &it->second;
    return nullptr;
}

// h(x; ps_0, .., ps_n-1) passes the safe tuple through unchanged
bool identity_safes(const Term& t, const Values& y) {
    if (t.args.size() != y.size() + 1) return false;
    for (std::size_t i = 1; i < t.args.size(); ++i) {
        const Term& a = *t.args[i];
        if (a.op != Op::ProjS || a.index != static_cast<int>(i - 1)) return false;
    }
    return true;
}

Value ev(const Term& t, const Values& x, const Values& y, const Scope* sc, const Binding* bind, Ctx& c) {
    if (c.stats) c.stats->steps++;
    switch (t.op) {
        case Op::Zero: return 0;
        case Op::ProjN: return x.at(static_cast<std::size_t>(t.index));
        case Op::ProjS: return y.at(static_cast<std::size_t>(t.index));
        case Op::S0: return s0(y.at(0));
        case Op::S1: return s1(y.at(0));
        case Op::Pred: return pred(y.at(0));
        case Op::Cond: {
            const Value& w = y.at(0);
            if (w.is_zero()) return y.at(1);
            return bit_test(w, 0) ? y.at(3) : y.at(2);
        }
        case Op::Oracle: {
            const OracleFn* f = lookup(t.name, sc, c);
            if (!f) throw EvalError("unknown oracle " + t.name);
            return (*f)(x, y);
        }
        case Op::CompSafe: {
            const Term& h = *t.args[0];
            static const Values none;
            const Values& hx = h.m == 0 ? none : x;
            if (h.op == Op::Cond) {
                Value w = ev(*t.args[1], x, y, sc, bind, c);
                std::size_t pick = w.is_zero() ? 2 : (bit_test(w, 0) ? 4 : 3);
                return ev(*t.args[pick], x, y, sc, bind, c);
            }
            if (identity_safes(t, y)) return ev(h, hx, y, sc, bind, c);
            Values ys;
            ys.reserve(t.args.size() - 1);
            for (std::size_t i = 1; i < t.args.size(); ++i) ys.push_back(ev(*t.args[i], x, y, sc, bind, c));
            return ev(h, hx, ys, sc, bind, c);
        }
        case Op::CompNormal: {
            static const Values none;
            Values xs;
            xs.reserve(t.args.size() - 1);
            for (std::size_t i = 1; i < t.args.size(); ++i) xs.push_back(ev(*t.args[i], x, none, sc, bind, c));
            return ev(*t.args[0], xs, y, sc, bind, c);
        }
        case Op::SRecN: {
            Values rest(x.begin() + 1, x.end());
            Value r = ev(*t.args[0], rest, y, sc, bind, c);
            std::size_t len = length(x[0]);
            for (std::size_t k = 1; k <= len; ++k) {
                Value v = x[0] >> (len - k);
                Values hx = x;
                hx[0] = pred(v);
                Values hy = y;
                hy.push_back(r);
                r = ev(*t.args[bit_test(v, 0) ? 2 : 1], hx, hy, sc, bind, c);
            }
            return r;
        }
        case Op::SNRec: {
            std::function<Value(const Values&, const Values&)> self = [&](const Values& xs, const Values& ys) -> Value {
                if (xs[0].is_zero()) return ev(*t.args[0], Values(xs.begin() + 1, xs.end()), ys, sc, bind, c);
                Values px = xs;
                px[0] = pred(xs[0]);
                Scope s{&t.name, [px, &self](const Values&, const Values& v) { return self(px, v); }, sc};
                return ev(*t.args[bit_test(xs[0], 0) ? 2 : 1], px, ys, &s, bind, c);
            };
            return self(x, y);
        }
        case Op::SRecPP: case Op::SNRecPP: {
            std::function<Value(const Values&, const Values&)> self = [&](const Values& xs, const Values& ys) -> Value {
                Scope s{&t.name, guarded(t.guard, self, xs, ys, c, t.name), sc};
                return ev(*t.args[0], xs, ys, &s, bind, c);
            };
            return self(x, y);
        }
        case Op::SimRecPP: {
            std::size_t k = t.args.size();
            std::vector<std::function<Value(const Values&, const Values&)>> fs(k);
            for (std::size_t j = 0; j < k; ++j) {
                fs[j] = [&, j](const Values& xs, const Values& ys) -> Value {
                    std::vector<Scope> scopes;
                    scopes.reserve(k);
                    for (std::size_t i = 0; i < k; ++i)
                        scopes.push_back(Scope{&t.names[i], guarded(t.guard, fs[i], xs, ys, c, t.names[i]),
                                               i == 0 ? sc : nullptr});
                    for (std::size_t i = 1; i < k; ++i) scopes[i].parent = &scopes[i - 1];
                    return ev(*t.args[j], xs, ys, &scopes[k - 1], bind, c);
                };
            }
            return fs[static_cast<std::size_t>(t.index)](x, y);
        }
        case Op::GuardedCall: {
            if (!c.prog || !bind) throw EvalError("guarded call outside a program");
            if (c.stats) c.stats->guarded_calls++;
            if (!guard_holds(t.guard, x, y, *bind->x, *bind->y)) return guard_fallback(c, t.name);
            return call_function(t.name, x, y, c);
        }
        case Op::Call: {
            if (!c.prog) throw EvalError("function call outside a program");
            return call_function(t.name, x, y, c);
        }
    }
    throw EvalError("unknown term constructor");
}

}  // namespace

Value eval_term(const TermPtr& t, const OracleEnv& env, const Values& normals, const Values& safes,
                const EvalConfig& cfg, EvalStats* stats) {
    if (static_cast<int>(normals.size()) != t->m || static_cast<int>(safes.size()) != t->n)
        throw EvalError("arity mismatch: term expects (" + std::to_string(t->m) + ";" + std::to_string(t->n) + ")");
    Ctx c{&env, &cfg, stats};
    return ev(*t, normals, safes, nullptr, nullptr, c);
}

Value eval_pp(const PPProgram& prog, const std::string& fname, const OracleEnv& env, const Values& normals,
              const Values& safes, const EvalConfig& cfg, EvalStats* stats) {
    Ctx c{&env, &cfg, stats, &prog};
    Value v = call_function(fname, normals, safes, c);
    if (stats) stats->memo_keys = c.memo.size();
    return v;
}

// ---- class membership ----

const char* term_class_name(TermClass c) {
    switch (c) {
        case TermClass::B: return "B";
        case TermClass::SB: return "SB";
        case TermClass::NB: return "NB";
        case TermClass::Bpp: return "Bpp";
        case TermClass::SBpp: return "SBpp";
        case TermClass::NBpp: return "NBpp";
    }
    return "?";
}

std::optional<TermClass> term_class_from_name(const std::string& s) {
    for (TermClass c : {TermClass::B, TermClass::SB, TermClass::NB, TermClass::Bpp, TermClass::SBpp, TermClass::NBpp})
        if (s == term_class_name(c)) return c;
    return std::nullopt;
}

namespace {

struct ClassRules {
    bool nested_rec;     // SNRec
    bool pp;             // SRecPP, guarded calls with safe guards
    bool npp;            // SNRecPP, normal-only guards
    bool unnested;       // safe composition must have an oracle-free side
    bool relaxed_normal; // clause (2)': head of a normal composition may use oracles
    bool nested_srec_steps;
};

ClassRules rules_for(TermClass c) {
    switch (c) {
        case TermClass::B: return {false, false, false, false, false, false};
        case TermClass::SB: return {true, false, false, true, false, false};
        case TermClass::NB: return {true, false, false, false, false, true};
        case TermClass::Bpp: return {false, true, false, true, true, false};
        case TermClass::SBpp: return {true, true, true, true, true, false};
        case TermClass::NBpp: return {true, true, true, false, true, true};
    }
    return {};
}

std::optional<ClassViolation> check(const TermPtr& t, const ClassRules& r, bool program) {
    auto bad = [&](const std::string& rule) {
        std::string s = serialize_term(t);
        if (s.size() > 160) s = s.substr(0, 157) + "...";
        return std::optional<ClassViolation>(ClassViolation{rule, s});
    };
    switch (t->op) {
        case Op::CompSafe: {
            if (r.unnested && !is_oracle_free(t->args[0])) {
                for (std::size_t i = 1; i < t->args.size(); ++i)
                    if (!is_oracle_free(t->args[i])) return bad("nested safe composition (both sides call oracles)");
            }
            break;
        }
        case Op::CompNormal: {
            for (std::size_t i = 1; i < t->args.size(); ++i)
                if (!is_oracle_free(t->args[i])) return bad("normal composition with an oracle-using argument");
            if (!r.relaxed_normal && !is_structural_normal(t) && !is_oracle_free(t->args[0]))
                return bad("normal composition with an oracle-using head (only allowed in ^pp algebras)");
            break;
        }
        case Op::SRecN:
            if (!is_oracle_free(t->args[0])) return bad("srec base case must be oracle-free");
            if (!r.nested_srec_steps && (!is_oracle_free(t->args[1]) || !is_oracle_free(t->args[2])))
                return bad("srec steps must be oracle-free");
            break;
        case Op::SNRec:
            if (!r.nested_rec) return bad("safe nested recursion not in this algebra");
            if (!is_oracle_free(t->args[0])) return bad("snrec base case must be oracle-free");
            break;
        case Op::SRecPP:
            if (!r.pp) return bad("recursion on permutations of prefixes not in this algebra");
            break;
        case Op::SNRecPP:
            if (!r.npp) return bad("nested recursion on permutations of prefixes not in this algebra");
            break;
        case Op::SimRecPP:
            if (!r.pp || (t->guard == Guard::StrictNormals && !r.npp)) return bad("simultaneous recursion not in this algebra");
            break;
        case Op::GuardedCall:
            if (!program || !r.pp) return bad("guarded call outside a ^pp program");
            if (t->guard == Guard::StrictNormals && !r.npp) return bad("guard without the safe-input condition");
            break;
        case Op::Call:
            if (!program) return bad("function call outside a program");
            break;
        default:
            break;
    }
    for (const auto& a : t->args)
        if (auto v = check(a, r, program)) return v;
    return std::nullopt;
}

}  // namespace

std::optional<ClassViolation> check_term_class(const TermPtr& t, TermClass cls) {
    return check(t, rules_for(cls), false);
}

std::optional<ClassViolation> check_program_class(const PPProgram& p, TermClass cls) {
    auto r = rules_for(cls);
    for (const auto& f : p.functions)
        if (auto v = check(f.body, r, true)) {
            v->rule = f.name + ": " + v->rule;
            return v;
        }
    return std::nullopt;
}

}  // namespace cyclic
