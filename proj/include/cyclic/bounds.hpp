#pragma once
#include "cyclic/term.hpp"
#include "cyclic/value.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclic {

class BoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BoundNode;
using BoundExpr = std::shared_ptr<const BoundNode>;
struct BoundNode {
    enum class Kind { Const, Var, Add, Mul, Pow, Compose } kind = Kind::Const;
    Value value;
    BoundExpr a, b;  // Compose: a evaluated at the value of b
};

BoundExpr bconst(const Value& v);
BoundExpr bvar();
BoundExpr badd(const BoundExpr& a, const BoundExpr& b);
BoundExpr bmul(const BoundExpr& a, const BoundExpr& b);
BoundExpr bpow(const BoundExpr& a, const BoundExpr& b);
BoundExpr bcompose(const BoundExpr& outer, const BoundExpr& inner);

// values past the size limit saturate; a saturated bound holds trivially
struct BoundValue {
    Value v;
    bool saturated = false;
};
BoundValue evaluate(const BoundExpr& e, const Value& n);
std::string to_string(const BoundExpr& e);
bool has_power(const BoundExpr& e);

struct RecursionRecord {
    BoundExpr e_h;
    Value d_h;
    BoundExpr e_f;
    std::string term;
};
struct BoundPair {
    BoundExpr e;
    Value d = 1;
    bool is_polynomial = true;
    std::vector<RecursionRecord> recursions;
};
BoundPair synthesize_bound(const TermPtr& t);

// e(sum |x|) + d * sum c + max |y|
BoundValue input_bound(const BoundPair& b, const Values& normals, const Values& safes, const Values& constants = {});

struct VerifyReport {
    std::string term;
    std::string e;
    Value d;
    bool polynomial = true;
    int samples = 0;
    std::uint64_t seed = 0;
    std::size_t violations = 0;
    std::size_t saturated = 0;
    Value min_slack, max_slack;
    std::vector<std::string> examples;  // first few violating inputs
};
VerifyReport verify_bound(const TermPtr& t, const std::string& name, int samples, std::uint64_t seed,
                          const BoundPair* bound = nullptr, std::size_t max_normal_length = 16);
std::string verify_report_json(const VerifyReport& r);
std::string bound_json(const std::string& name, const BoundPair& b);

}  // namespace cyclic
