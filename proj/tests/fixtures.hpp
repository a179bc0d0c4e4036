#pragma once
#include "cyclic/value.hpp"

// proofs with an oracle leaf a for parameter passing
namespace testsupport {

inline const char* kPassA =
    "proof A root 1\n"
    "node 1 : wB seq bN, N => N premises [2]\n"
    "node 2 : oracle(a) seq N => N premises []\n";

// s0(a(; s1 y)) with a side branch computing s1 y
inline const char* kPassB =
    "proof B root 1\n"
    "node 1 : cutN seq bN, N => N premises [2,5]\n"
    "node 2 : s1 seq bN, N => N premises [3]\n"
    "node 3 : wB seq bN, N => N premises [4]\n"
    "node 4 : id seq N => N premises []\n"
    "node 5 : wB seq bN, N, N => N premises [6]\n"
    "node 6 : eN(0) seq N, N => N premises [7]\n"
    "node 7 : wN seq N, N => N premises [8]\n"
    "node 8 : s0 seq N => N premises [9]\n"
    "node 9 : oracle(a) seq N => N premises []\n";

inline const char* kPassCut =
    "proof X root 1\n"
    "node 1 : cutB seq bN => N premises [2,3]\n"
    "node 2 : boxR seq bN => bN premises [4]\n"
    "node 3 : wB seq bN, bN => N premises [5]\n"
    "node 4 : wB seq bN => N premises [6]\n"
    "node 5 : wB seq bN => N premises [7]\n"
    "node 6 : zero seq => N premises []\n"
    "node 7 : oracle(a) seq => N premises []\n";

inline cyclic::Value pass_host(const cyclic::Values& x, const cyclic::Values& y) {
    cyclic::Value s = 3;
    for (const auto& v : x) s = s * 5 + v;
    for (const auto& v : y) s = s * 7 + v;
    return s;
}

}  // namespace testsupport
