#pragma once

#include "cyclic/value.hpp"

#include <optional>
#include <vector>

namespace cyclic {

struct TupleOrderWitness {
    std::vector<std::size_t> permutation;  // xs[i] is a prefix of ys[permutation[i]]
    std::vector<std::size_t> strict_positions;
};

enum class TupleRelation { NotRelated, SubsetEq, SubsetStrict };

struct TupleOrderResult {
    TupleRelation relation = TupleRelation::NotRelated;
    std::optional<TupleOrderWitness> witness;
};

// xs ⊆ ys: some permutation makes each xs[i] a prefix of its partner
std::optional<TupleOrderWitness> prefix_matching(const Values& xs, const Values& ys);

TupleOrderResult tuple_order(const Values& xs, const Values& ys);

inline bool subset_eq(const Values& xs, const Values& ys) {
    return prefix_matching(xs, ys).has_value();
}

inline bool subset_strict(const Values& xs, const Values& ys) {
    return tuple_order(xs, ys).relation == TupleRelation::SubsetStrict;
}

}  // namespace cyclic
