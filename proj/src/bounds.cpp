#include "cyclic/bounds.hpp"
#include "cyclic/interp.hpp"

#include "json.hpp"

#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace cyclic {

namespace {

constexpr std::size_t kLimitBits = std::size_t{1} << 20;

BoundExpr make(BoundNode::Kind k, Value v = 0, BoundExpr a = nullptr, BoundExpr b = nullptr) {
    auto n = std::make_shared<BoundNode>();
    n->kind = k;
    n->value = std::move(v);
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_const(const BoundExpr& e, const Value& v) { return e->kind == BoundNode::Kind::Const && e->value == v; }
bool is_const(const BoundExpr& e) { return e->kind == BoundNode::Kind::Const; }

}  // namespace

BoundExpr bconst(const Value& v) { return make(BoundNode::Kind::Const, v); }
BoundExpr bvar() { return make(BoundNode::Kind::Var); }

BoundExpr badd(const BoundExpr& a, const BoundExpr& b) {
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    if (is_const(a) && is_const(b)) return bconst(a->value + b->value);
    return make(BoundNode::Kind::Add, 0, a, b);
}

BoundExpr bmul(const BoundExpr& a, const BoundExpr& b) {
    if (is_const(a, 0) || is_const(b, 0)) return bconst(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    if (is_const(a) && is_const(b)) return bconst(a->value * b->value);
    return make(BoundNode::Kind::Mul, 0, a, b);
}

BoundExpr bpow(const BoundExpr& a, const BoundExpr& b) {
    if (is_const(a, 1) || is_const(b, 0)) return bconst(1);
    if (is_const(b, 1)) return a;
    if (is_const(a) && is_const(b) && b->value < 64 && length(a->value) * b->value.convert_to<std::size_t>() < 4096)
        return bconst(boost::multiprecision::pow(a->value, b->value.convert_to<unsigned>()));
    return make(BoundNode::Kind::Pow, 0, a, b);
}

BoundExpr bcompose(const BoundExpr& outer, const BoundExpr& inner) {
    if (is_const(outer)) return outer;
    if (outer->kind == BoundNode::Kind::Var) return inner;
    return make(BoundNode::Kind::Compose, 0, outer, inner);
}

BoundValue evaluate(const BoundExpr& root, const Value& n) {
    std::map<std::pair<const BoundNode*, Value>, BoundValue> cache;
    std::function<BoundValue(const BoundExpr&, const Value&)> ev = [&](const BoundExpr& e, const Value& x) -> BoundValue {
        auto key = std::make_pair(e.get(), x);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        BoundValue r;
        switch (e->kind) {
            case BoundNode::Kind::Const: r.v = e->value; break;
            case BoundNode::Kind::Var: r.v = x; break;
            case BoundNode::Kind::Add: {
                BoundValue a = ev(e->a, x), b = ev(e->b, x);
                r.saturated = a.saturated || b.saturated;
                if (!r.saturated) r.v = a.v + b.v;
                break;
            }
            case BoundNode::Kind::Mul: {
                BoundValue a = ev(e->a, x), b = ev(e->b, x);
                if ((!a.saturated && a.v.is_zero()) || (!b.saturated && b.v.is_zero())) break;
                r.saturated = a.saturated || b.saturated || length(a.v) + length(b.v) > kLimitBits;
                if (!r.saturated) r.v = a.v * b.v;
                break;
            }
            case BoundNode::Kind::Pow: {
                BoundValue a = ev(e->a, x), b = ev(e->b, x);
                if (!a.saturated && a.v <= 1) {
                    r.v = (a.v.is_zero() && !b.saturated && b.v.is_zero()) ? 1 : a.v;
                    break;
                }
                if (!b.saturated && b.v.is_zero()) {
                    r.v = 1;
                    break;
                }
                r.saturated = a.saturated || b.saturated || b.v > kLimitBits || length(a.v) * b.v > kLimitBits;
                if (!r.saturated) r.v = boost::multiprecision::pow(a.v, b.v.convert_to<unsigned>());
                break;
            }
            case BoundNode::Kind::Compose: {
                BoundValue in = ev(e->b, x);
                if (in.saturated) {
                    r.saturated = true;
                } else {
                    r = ev(e->a, in.v);
                }
                break;
            }
        }
        cache.emplace(key, r);
        return r;
    };
    return ev(root, n);
}

std::string to_string(const BoundExpr& root) {
    constexpr std::size_t kMax = 4000;
    std::function<std::string(const BoundExpr&, const std::string&)> go = [&](const BoundExpr& e,
                                                                              const std::string& var) -> std::string {
        std::string s;
        switch (e->kind) {
            case BoundNode::Kind::Const: s = e->value.str(); break;
            case BoundNode::Kind::Var: s = var; break;
            case BoundNode::Kind::Add: s = "(" + go(e->a, var) + " + " + go(e->b, var) + ")"; break;
            case BoundNode::Kind::Mul: s = go(e->a, var) + "*" + go(e->b, var); break;
            case BoundNode::Kind::Pow: s = go(e->a, var) + "^" + go(e->b, var); break;
            case BoundNode::Kind::Compose: s = go(e->a, "[" + go(e->b, var) + "]"); break;
        }
        if (s.size() > kMax) s = s.substr(0, kMax) + "...";
        return s;
    };
    return go(root, "n");
}

bool has_power(const BoundExpr& e) {
    if (!e) return false;
    if (e->kind == BoundNode::Kind::Pow) return true;
    return has_power(e->a) || has_power(e->b);
}

namespace {

BoundExpr one_plus_n() { return badd(bconst(1), bvar()); }

BoundPair synth(const TermPtr& t, std::vector<RecursionRecord>& recs) {
    BoundPair r;
    auto recursion = [&](BoundExpr e_h, Value d_h) {
        // e_f(n) = (n+1) * d_h^n * e_h(n)
        r.e = bmul(bmul(one_plus_n(), bpow(bconst(d_h), bvar())), e_h);
        r.d = d_h;
        recs.push_back(RecursionRecord{e_h, d_h, r.e, serialize_term(t).substr(0, 200)});
    };
    switch (t->op) {
        case Op::Zero: case Op::ProjN: case Op::ProjS: case Op::S0: case Op::S1: case Op::Pred: case Op::Cond:
            r.e = one_plus_n();
            r.d = 1;
            break;
        case Op::Oracle: case Op::GuardedCall:
            r.e = bconst(0);
            r.d = 1;
            break;
        case Op::Call: throw BoundError("bounds of program calls are not synthesized");
        case Op::CompSafe: {
            BoundPair h = synth(t->args[0], recs);
            r.e = h.e;
            Value dmax = 0;
            bool ts_free = true;
            for (std::size_t i = 1; i < t->args.size(); ++i) {
                BoundPair b = synth(t->args[i], recs);
                r.e = badd(r.e, b.e);
                dmax = std::max(dmax, b.d);
                ts_free = ts_free && is_oracle_free(t->args[i]);
            }
            if (is_oracle_free(t->args[0])) {
                r.d = std::max<Value>(dmax, 1);
            } else if (ts_free) {
                r.d = h.d;
            } else {
                r.d = h.d + dmax;
            }
            break;
        }
        case Op::CompNormal: {
            BoundPair h = synth(t->args[0], recs);
            BoundExpr arg = bvar();
            for (std::size_t i = 1; i < t->args.size(); ++i) arg = badd(arg, synth(t->args[i], recs).e);
            r.e = bcompose(h.e, arg);
            r.d = h.d;
            break;
        }
        case Op::SRecN: case Op::SNRec: {
            BoundExpr e = one_plus_n();
            Value d = 1;
            for (const auto& a : t->args) {
                BoundPair b = synth(a, recs);
                e = badd(e, b.e);
                d = std::max(d, b.d);
            }
            recursion(e, d);
            break;
        }
        case Op::SRecPP: case Op::SNRecPP: case Op::SimRecPP: {
            BoundExpr e = bconst(0);
            Value d = 1;
            for (const auto& a : t->args) {
                BoundPair b = synth(a, recs);
                e = badd(e, b.e);
                d = std::max(d, b.d);
            }
            recursion(e, d);
            break;
        }
    }
    return r;
}

}  // namespace

BoundPair synthesize_bound(const TermPtr& t) {
    std::vector<RecursionRecord> recs;
    BoundPair b = synth(t, recs);
    b.recursions = std::move(recs);
    b.is_polynomial = !has_power(b.e);
    return b;
}

BoundValue input_bound(const BoundPair& b, const Values& normals, const Values& safes, const Values& constants) {
    BoundValue r = evaluate(b.e, Value(total_length(normals)));
    if (r.saturated) return r;
    Value sum = 0;
    for (const auto& c : constants) sum += c;
    r.v += b.d * sum + Value(max_length(safes));
    return r;
}

VerifyReport verify_bound(const TermPtr& t, const std::string& name, int samples, std::uint64_t seed,
                          const BoundPair* bound, std::size_t max_normal_length) {
    if (!is_oracle_free(t)) throw BoundError("verify_bound needs a closed (oracle-free) term");
    BoundPair b = bound ? *bound : synthesize_bound(t);
    VerifyReport r;
    r.term = name;
    r.e = to_string(b.e);
    r.d = b.d;
    r.polynomial = b.is_polynomial;
    r.samples = samples;
    r.seed = seed;
    std::mt19937_64 rng(seed);
    bool first = true;
    for (int s = 0; s < samples; ++s) {
        Values x = random_tuple(rng, static_cast<std::size_t>(t->m), max_normal_length);
        Values y(static_cast<std::size_t>(t->n));
        for (auto& v : y) v = random_value_of_length(rng, rng() % (max_normal_length + 1));
        Value f = eval_term(t, {}, x, y, EvalConfig{});
        BoundValue m = input_bound(b, x, y);
        if (m.saturated) {
            ++r.saturated;
            continue;
        }
        Value len = length(f);
        if (len > m.v) {
            ++r.violations;
            if (r.examples.size() < 5) {
                std::string ex = "normals=";
                for (std::size_t i = 0; i < x.size(); ++i) ex += (i ? "," : "") + x[i].str();
                ex += " safes=";
                for (std::size_t i = 0; i < y.size(); ++i) ex += (i ? "," : "") + y[i].str();
                ex += " |f|=" + len.str() + " bound=" + m.v.str();
                r.examples.push_back(ex);
            }
            continue;
        }
        Value slack = m.v - len;
        if (first || slack < r.min_slack) r.min_slack = slack;
        if (first || slack > r.max_slack) r.max_slack = slack;
        first = false;
    }
    return r;
}

std::string verify_report_json(const VerifyReport& r) {
    nlohmann::ordered_json j;
    j["term"] = r.term;
    j["e"] = r.e;
    j["d"] = r.d.str();
    j["polynomial"] = r.polynomial;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["violations"] = r.violations;
    j["saturated"] = r.saturated;
    j["min_slack"] = r.min_slack.str();
    j["max_slack"] = r.max_slack.str();
    j["examples"] = r.examples;
    return j.dump(2) + "\n";
}

std::string bound_json(const std::string& name, const BoundPair& b) {
    nlohmann::ordered_json j;
    j["term"] = name;
    j["e"] = to_string(b.e);
    j["d"] = b.d.str();
    j["polynomial"] = b.is_polynomial;
    j["recursions"] = b.recursions.size();
    return j.dump(2) + "\n";
}

}  // namespace cyclic
