#pragma once

#include <cstddef>
#include <span>

namespace ych {

// Deterministic aggregation. Both routines use a fixed tree shape, so
// results do not depend on chunking or evaluation order.

// Binary pairwise sum.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// 2^d-ary tree sum whose recursion mirrors the dyadic cube hierarchy: the
// sum over a cube's leaf range is the left-to-right fold of the sums over
// its 2^d children. Consequently value(parent) == sum of value(children)
// holds bit-exactly. Requires v.size() to be a power of 2^d.
inline double dyadic_block_sum(std::span<const double> v, int d) {
    const std::size_t arity = std::size_t{1} << d;
    const std::size_t n = v.size();
    if (n <= arity) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t block = n >> d;
    double s = 0.0;
    for (std::size_t i = 0; i < arity; ++i)
        s += dyadic_block_sum(v.subspan(i * block, block), d);
    return s;
}

}  // namespace ych
