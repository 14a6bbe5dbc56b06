#pragma once

#include "ych/dyadic.hpp"
#include "ych/sampled_field.hpp"
#include "ych/summation.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ych {

inline void check_holder_exponent(int d, double gamma) {
    if (!(gamma > static_cast<double>(d - 1) / d && gamma <= 1.0))
        throw std::invalid_argument("gamma must satisfy (d-1)/d < gamma <= 1");
}

// ============================================================================
// GridCharge
// ============================================================================
//
// A charge materialized by its values on all generation-N cubes. Values on
// coarser cubes are the fold of their children, so finite additivity holds
// bit-exactly; values on dyadic figures are sums of leaf values.

class GridCharge {
public:
    GridCharge(int d, int depth, std::vector<double> leaves)
        : d_(d), depth_(depth), leaves_(std::move(leaves)) {
        if (d < 1 || depth < 0 || d * depth > 62)
            throw std::invalid_argument("GridCharge: bad dimension/depth");
        if (leaves_.size() != (std::size_t{1} << (d * depth)))
            throw std::invalid_argument("GridCharge: leaf count != 2^(d*N)");
    }

    static GridCharge zero(int d, int depth) {
        return GridCharge(d, depth,
                          std::vector<double>(std::size_t{1} << (d * depth), 0.0));
    }

    static GridCharge lebesgue(int d, int depth) {
        return GridCharge(
            d, depth,
            std::vector<double>(std::size_t{1} << (d * depth),
                                std::ldexp(1.0, -d * depth)));
    }

    int dimension() const { return d_; }
    int depth() const { return depth_; }
    std::span<const double> leaves() const { return leaves_; }
    double leaf(std::uint64_t k) const { return leaves_[k]; }

    double value(const CubeId& c) const {
        if (c.d != d_ || c.n > depth_)
            throw std::invalid_argument("GridCharge::value: incompatible cube");
        const int shift = (depth_ - c.n) * d_;
        return dyadic_block_sum(
            std::span<const double>(leaves_).subspan(c.k << shift,
                                                     std::size_t{1} << shift),
            d_);
    }

    double value(const DyadicFigure& f) const {
        if (f.dimension() != d_ || f.resolution() > depth_)
            throw std::invalid_argument("GridCharge::value: incompatible figure");
        std::vector<double> parts;
        parts.reserve(f.cells().size());
        for (std::uint64_t cell : f.cells())
            parts.push_back(value(CubeId{d_, f.resolution(), cell}));
        return pairwise_sum(parts);
    }

    double total() const { return value(CubeId{d_, 0, 0}); }

    // Values of all cubes of one generation (the aggregation pyramid level).
    std::vector<double> generation_values(int n) const {
        if (n < 0 || n > depth_)
            throw std::invalid_argument("generation_values: bad generation");
        std::vector<double> level(leaves_);
        for (int g = depth_; g > n; --g) {
            const std::size_t coarse = std::size_t{1} << ((g - 1) * d_);
            std::vector<double> up(coarse);
            const std::size_t arity = std::size_t{1} << d_;
            for (std::size_t k = 0; k < coarse; ++k) {
                double s = 0.0;
                for (std::size_t l = 0; l < arity; ++l) s += level[k * arity + l];
                up[k] = s;
            }
            level.swap(up);
        }
        return level;
    }

    GridCharge& operator+=(const GridCharge& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < leaves_.size(); ++i) leaves_[i] += o.leaves_[i];
        return *this;
    }
    GridCharge& operator-=(const GridCharge& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < leaves_.size(); ++i) leaves_[i] -= o.leaves_[i];
        return *this;
    }
    GridCharge& operator*=(double c) {
        for (auto& v : leaves_) v *= c;
        return *this;
    }
    friend GridCharge operator+(GridCharge a, const GridCharge& b) { return a += b; }
    friend GridCharge operator-(GridCharge a, const GridCharge& b) { return a -= b; }
    friend GridCharge operator*(double c, GridCharge a) { return a *= c; }

private:
    void require_same_shape(const GridCharge& o) const {
        if (o.d_ != d_ || o.depth_ != depth_)
            throw std::invalid_argument("GridCharge: shape mismatch");
    }

    int d_;
    int depth_;
    std::vector<double> leaves_;
};

// ============================================================================
// Faber-Schauder analysis / synthesis
// ============================================================================

// Total mass plus the coefficients a_{n,k,r} for n < N. Generation n stores
// its coefficients flat as a[n][k*(2^d-1) + (r-1)].
struct FaberCoeffs {
    int d = 1;
    int depth = 0;
    double mass = 0.0;
    std::vector<std::vector<double>> a;

    double coeff(int n, std::uint64_t k, int r) const {
        const std::uint64_t types = (std::uint64_t{1} << d) - 1;
        return a[static_cast<std::size_t>(n)][k * types + static_cast<std::uint64_t>(r - 1)];
    }
};

// a_{n,k,r} = 2^(nd/2) * sum_l (A_d)_{r,l} * w(K_{n+1, 2^d k + l})
inline FaberCoeffs analyze(const GridCharge& w) {
    const int d = w.dimension();
    const int N = w.depth();
    const HaarMatrix A(d);
    const std::size_t arity = A.order();

    FaberCoeffs c;
    c.d = d;
    c.depth = N;
    c.a.resize(static_cast<std::size_t>(N));

    std::vector<double> level(w.leaves().begin(), w.leaves().end());
    for (int n = N - 1; n >= 0; --n) {
        const std::size_t count = std::size_t{1} << (n * d);
        const double scale = std::exp2(0.5 * n * d);
        std::vector<double> up(count);
        auto& an = c.a[static_cast<std::size_t>(n)];
        an.resize(count * (arity - 1));
        for (std::size_t k = 0; k < count; ++k) {
            const double* child = level.data() + k * arity;
            double s = 0.0;
            for (std::size_t l = 0; l < arity; ++l) s += child[l];
            up[k] = s;
            for (std::size_t r = 1; r < arity; ++r) {
                double dot = 0.0;
                for (std::size_t l = 0; l < arity; ++l)
                    dot += static_cast<double>(A.at(r, l)) * child[l];
                an[k * (arity - 1) + (r - 1)] = scale * dot;
            }
        }
        level.swap(up);
    }
    c.mass = level[0];
    return c;
}

// Inverts the analysis recursion with A_d^{-1} = 2^-d A_d.
inline GridCharge synthesize(const FaberCoeffs& c) {
    const int d = c.d;
    const int N = c.depth;
    const HaarMatrix A(d);
    const std::size_t arity = A.order();
    const double inv = 1.0 / static_cast<double>(arity);

    std::vector<double> level{c.mass};
    std::vector<double> u(arity);
    for (int n = 0; n < N; ++n) {
        const std::size_t count = std::size_t{1} << (n * d);
        const double unscale = std::exp2(-0.5 * n * d);
        std::vector<double> down(count * arity);
        const auto& an = c.a[static_cast<std::size_t>(n)];
        for (std::size_t k = 0; k < count; ++k) {
            u[0] = level[k];
            for (std::size_t r = 1; r < arity; ++r)
                u[r] = unscale * an[k * (arity - 1) + (r - 1)];
            for (std::size_t l = 0; l < arity; ++l) {
                double dot = 0.0;
                for (std::size_t r = 0; r < arity; ++r)
                    dot += static_cast<double>(A.at(l, r)) * u[r];
                down[k * arity + l] = inv * dot;
            }
        }
        level.swap(down);
    }
    return GridCharge(d, N, std::move(level));
}

// ============================================================================
// Hölder norm diagnostics
// ============================================================================

struct HolderProfile {
    double norm = 0.0;                    // max over generations 0..N
    std::vector<double> per_generation;   // max_k |w(K_{n,k})| * 2^(n d gamma)
};

inline HolderProfile holder_profile(const GridCharge& w, double gamma) {
    check_holder_exponent(w.dimension(), gamma);
    const int d = w.dimension();
    const int N = w.depth();
    HolderProfile p;
    p.per_generation.resize(static_cast<std::size_t>(N) + 1);

    std::vector<double> level(w.leaves().begin(), w.leaves().end());
    for (int n = N;; --n) {
        double m = 0.0;
        for (double v : level) m = std::max(m, std::abs(v));
        p.per_generation[static_cast<std::size_t>(n)] =
            m * std::exp2(static_cast<double>(n) * d * gamma);
        if (n == 0) break;
        const std::size_t coarse = std::size_t{1} << ((n - 1) * d);
        const std::size_t arity = std::size_t{1} << d;
        std::vector<double> up(coarse);
        for (std::size_t k = 0; k < coarse; ++k) {
            double s = 0.0;
            for (std::size_t l = 0; l < arity; ++l) s += level[k * arity + l];
            up[k] = s;
        }
        level.swap(up);
    }
    for (double v : p.per_generation) p.norm = std::max(p.norm, v);
    return p;
}

// Lower bound of the true Hölder norm, from cubes of generation <= N.
inline double holder_norm(const GridCharge& w, double gamma) {
    return holder_profile(w, gamma).norm;
}

// ============================================================================
// Construction and transport
// ============================================================================

// The density charge g dL at depth N: the leaf value is the exact integral
// of the discretized g over the leaf.
inline GridCharge density_charge(const SampledField& g, int depth) {
    if (g.resolution() < depth)
        throw std::invalid_argument("density_charge: field resolution < depth");
    const int d = g.dimension();
    std::vector<double> leaves(std::size_t{1} << (d * depth));
    for (std::uint64_t k = 0; k < leaves.size(); ++k)
        leaves[k] = g.integral_over(CubeId{d, depth, k});
    return GridCharge(d, depth, std::move(leaves));
}

// w restricted to K: leaves outside K are zeroed.
inline GridCharge restrict_to(const GridCharge& w, const CubeId& c) {
    if (c.d != w.dimension() || c.n > w.depth())
        throw std::invalid_argument("restrict_to: incompatible cube");
    const int shift = (w.depth() - c.n) * w.dimension();
    const std::uint64_t first = c.k << shift;
    const std::uint64_t count = std::uint64_t{1} << shift;
    std::vector<double> leaves(w.leaves().size(), 0.0);
    for (std::uint64_t i = 0; i < count; ++i)
        leaves[first + i] = w.leaf(first + i);
    return GridCharge(w.dimension(), w.depth(), std::move(leaves));
}

// w ∘ Φ where Φ maps [0,1]^d affinely onto the dyadic cube K: the value on L
// is w(Φ(L)). Output depth is N - gen(K); with the hierarchical indexing this
// is the slice of w's leaves below K.
inline GridCharge pullback_affine(const GridCharge& w, const CubeId& c) {
    if (c.d != w.dimension() || c.n > w.depth())
        throw std::invalid_argument("pullback_affine: depth exhausted");
    const int shift = (w.depth() - c.n) * w.dimension();
    const std::uint64_t first = c.k << shift;
    const std::uint64_t count = std::uint64_t{1} << shift;
    std::vector<double> leaves(count);
    for (std::uint64_t i = 0; i < count; ++i) leaves[i] = w.leaf(first + i);
    return GridCharge(w.dimension(), w.depth() - c.n, std::move(leaves));
}

// ============================================================================
// Isoperimetric bound check
// ============================================================================

struct IsopReport {
    double max_ratio = 0.0;      // empirical constant
    std::size_t evaluated = 0;   // figures with defined measures
    std::vector<double> ratios;  // per figure; negligible figures excluded
};

// Ratios |w(B)| (isop B)^(d(1-gamma)) / (||w||_gamma |B|^gamma); their
// maximum is an empirical constant for the isoperimetric bound.
inline IsopReport isoperimetric_check(const GridCharge& w, double gamma,
                                      const std::vector<DyadicFigure>& figures) {
    check_holder_exponent(w.dimension(), gamma);
    const double norm = holder_norm(w, gamma);
    const int d = w.dimension();
    IsopReport rep;
    for (const auto& f : figures) {
        const auto m = figure_measures(f);
        if (!m.defined) continue;
        const double ratio = std::abs(w.value(f)) *
                             std::pow(m.isop, d * (1.0 - gamma)) /
                             (norm * std::pow(m.volume, gamma));
        rep.ratios.push_back(ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        ++rep.evaluated;
    }
    return rep;
}

// ============================================================================
// Surrogates for the operator norm on sch([0,1]^d)
// ============================================================================
//
// The BV-dual norm has no finite algorithm. Two computable lower bounds are
// used wherever the theory speaks about convergence in sch:
//  - the per-cube weighted sup |w(K)| 2^(n(d-1)) / (2d), since ||K|| = 2d 2^-n(d-1);
//  - the figure-budget sup |w(B)| / ||B|| over a fixed family of figures.

inline double sch_lower_norm(const GridCharge& w) {
    const int d = w.dimension();
    double best = 0.0;
    for (int n = 0; n <= w.depth(); ++n) {
        const auto level = w.generation_values(n);
        double m = 0.0;
        for (double v : level) m = std::max(m, std::abs(v));
        best = std::max(best, m * std::exp2(static_cast<double>(n) * (d - 1)) /
                                  (2.0 * d));
    }
    return best;
}

inline double sch_figure_norm(const GridCharge& w,
                              const std::vector<DyadicFigure>& budget) {
    double best = 0.0;
    for (const auto& f : budget) {
        const auto m = figure_measures(f);
        if (!m.defined) continue;
        best = std::max(best, std::abs(w.value(f)) / m.perimeter);
    }
    return best;
}

}  // namespace ych
