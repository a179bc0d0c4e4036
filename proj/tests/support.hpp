#pragma once
#include "cyclic/format.hpp"
#include "cyclic/proof.hpp"
#include "cyclic/term.hpp"
#include "cyclic/value.hpp"

#include <functional>
#include <map>
#include <random>
#include <string>

namespace testsupport {

using cyclic::Value;
using cyclic::Values;

inline std::string corpus(const std::string& file) { return std::string(CYCLIC_CORPUS_DIR) + "/" + file; }

inline cyclic::ProofGraph proof(const std::string& name) {
    return cyclic::parse_proof(cyclic::read_file(corpus(name + ".proof")));
}

inline cyclic::TermDocument terms(const std::string& file) {
    return cyclic::parse_terms(cyclic::read_file(corpus(file)));
}

// golden values through binary strings, independent of the library's arithmetic
inline std::string bin(const Value& v) {
    std::string s;
    for (Value t = v; t > 0; t /= 2) s.insert(s.begin(), t % 2 == 1 ? '1' : '0');
    return s;
}

inline Value unbin(const std::string& s) {
    Value v = 0;
    for (char c : s) v = v * 2 + (c == '1' ? 1 : 0);
    return v;
}

inline std::string repeat(const std::string& s, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += s;
    return out;
}

inline Value pow2(std::size_t n) { return unbin("1" + std::string(n, '0')); }

inline Value ex_golden(const Value& x, const Value& y) {
    if (y == 0) return 0;
    return unbin(bin(y) + std::string(static_cast<std::size_t>(pow2(bin(x).size())), '0'));
}

using Golden = std::function<Value(const Values&, const Values&)>;

// corpus proofs, evaluated at (normals; safes)
inline std::map<std::string, Golden> proof_goldens() {
    return {
        {"S", [](const Values& x, const Values&) { return x[0] + 1; }},
        {"C", [](const Values& x, const Values& y) { return unbin(bin(y[0]) + bin(x[1]) + bin(x[0])); }},
        {"E", [](const Values& x, const Values& y) { return ex_golden(x[0], y[0]); }},
        {"P", [](const Values& x, const Values&) { return x[0] == 0 ? Value(0) : x[0] - 1; }},
        {"L", [](const Values& x, const Values& y) { return unbin(bin(y[0]) + repeat("1", bin(x[0]).size())); }},
        {"N", [](const Values& x, const Values&) { return unbin(repeat("1", static_cast<std::size_t>(x[0]))); }},
    };
}

// corpus terms
inline std::map<std::string, Golden> term_goldens() {
    return {
        {"cat", [](const Values& x, const Values& y) { return unbin(bin(y[0]) + bin(x[0])); }},
        {"ones", [](const Values& x, const Values&) { return unbin(repeat("1", bin(x[0]).size())); }},
        {"parity", [](const Values& x, const Values&) { return Value(x[0] % 2); }},
        {"shl", [](const Values& x, const Values& y) { return y[0] == 0 ? Value(0) : unbin(bin(y[0]) + repeat("00", bin(x[0]).size())); }},
        {"rep", [](const Values& x, const Values&) { return unbin(repeat(bin(x[1]), bin(x[0]).size())); }},
        {"inc", [](const Values& x, const Values&) { return x[0] + 1; }},
        {"half", [](const Values&, const Values& y) { return Value(y[0] / 2); }},
        {"lenlen", [](const Values& x, const Values&) { return unbin(repeat("1", bin(x[0]).size())); }},
        {"ex", [](const Values& x, const Values& y) { return ex_golden(x[0], y[0]); }},
        {"ncat", [](const Values& x, const Values& y) { return unbin(bin(y[0]) + bin(x[0])); }},
        {"lsum", [](const Values& x, const Values& y) { return unbin(bin(y[0]) + repeat("1", bin(x[0]).size())); }},
        {"ex2", [](const Values& x, const Values& y) { return ex_golden(x[0], ex_golden(x[0], y[0])); }},
        {"exadd", [](const Values& x, const Values& y) { return ex_golden(x[0], ex_golden(x[1], y[0])); }},
    };
}

// normals with total length at most budget, safes of length at most safe_bits
inline void sample(std::mt19937_64& rng, int m, int n, std::size_t budget, std::size_t safe_bits, Values& x, Values& y) {
    x = cyclic::random_tuple(rng, static_cast<std::size_t>(m), budget);
    y.assign(static_cast<std::size_t>(n), 0);
    for (auto& v : y) v = cyclic::random_value_of_length(rng, rng() % (safe_bits + 1));
}

}  // namespace testsupport
