#include "cyclic/order.hpp"

#include <stdexcept>

namespace cyclic {

namespace {

bool augment(std::size_t i, const std::vector<std::vector<std::size_t>>& adj,
             std::vector<long>& match_right, std::vector<char>& seen) {
    for (std::size_t j : adj[i]) {
        if (seen[j]) continue;
        seen[j] = 1;
        if (match_right[j] < 0 || augment(static_cast<std::size_t>(match_right[j]), adj, match_right, seen)) {
            match_right[j] = static_cast<long>(i);
            return true;
        }
    }
    return false;
}

}  // namespace

std::optional<TupleOrderWitness> prefix_matching(const Values& xs, const Values& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("tuple_order: length mismatch");
    std::size_t n = xs.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (is_prefix(xs[i], ys[j])) adj[i].push_back(j);
    std::vector<long> match_right(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<char> seen(n, 0);
        if (!augment(i, adj, match_right, seen)) return std::nullopt;
    }
    TupleOrderWitness w;
    w.permutation.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) w.permutation[static_cast<std::size_t>(match_right[j])] = j;
    for (std::size_t i = 0; i < n; ++i)
        if (xs[i] != ys[w.permutation[i]]) w.strict_positions.push_back(i);
    return w;
}

TupleOrderResult tuple_order(const Values& xs, const Values& ys) {
    auto fwd = prefix_matching(xs, ys);
    if (!fwd) return {};
    // strict iff the converse fails; a matching with a proper prefix then exists
    bool strict = !prefix_matching(ys, xs).has_value();
    TupleOrderResult r;
    r.relation = strict ? TupleRelation::SubsetStrict : TupleRelation::SubsetEq;
    if (!strict) fwd->strict_positions.clear();
    r.witness = fwd;
    return r;
}

}  // namespace cyclic
