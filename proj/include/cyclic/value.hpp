#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace cyclic {

using Value = boost::multiprecision::cpp_int;
using Values = std::vector<Value>;

inline std::size_t length(const Value& v) {
    if (v.is_zero()) return 0;
    return boost::multiprecision::msb(v) + 1;
}

inline Value s0(const Value& v) { return v << 1; }
inline Value s1(const Value& v) { return (v << 1) | 1; }
inline Value pred(const Value& v) { return v >> 1; }

// x is a prefix of y iff y = x * 2^n + z with z < 2^n
inline bool is_prefix(const Value& x, const Value& y) {
    std::size_t lx = length(x), ly = length(y);
    if (lx > ly) return false;
    return (y >> (ly - lx)) == x;
}

inline std::size_t total_length(const Values& vs) {
    std::size_t n = 0;
    for (const auto& v : vs) n += length(v);
    return n;
}

inline std::size_t max_length(const Values& vs) {
    std::size_t n = 0;
    for (const auto& v : vs) n = std::max(n, length(v));
    return n;
}

// uniformly random value with exactly `bits` binary digits
inline Value random_value_of_length(std::mt19937_64& rng, std::size_t bits) {
    if (bits == 0) return 0;
    Value v = 1;
    for (std::size_t i = 1; i < bits; ++i) v = (v << 1) | Value(rng() & 1);
    return v;
}

// random tuple of `count` values whose lengths sum to at most `budget`
inline Values random_tuple(std::mt19937_64& rng, std::size_t count, std::size_t budget) {
    Values out(count);
    if (count == 0) return out;
    std::size_t total = std::uniform_int_distribution<std::size_t>(0, budget)(rng);
    std::vector<std::size_t> lens(count, 0);
    for (std::size_t i = 0; i < total; ++i) lens[rng() % count]++;
    for (std::size_t i = 0; i < count; ++i) out[i] = random_value_of_length(rng, lens[i]);
    return out;
}

inline Value parse_value(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty numeral");
    for (char c : s)
        if (c < '0' || c > '9') throw std::invalid_argument("bad numeral: " + s);
    return Value(s);
}

inline std::string to_string(const Value& v) { return v.str(); }

}  // namespace cyclic
