#pragma once

#include "ych/charge.hpp"
#include "ych/errors.hpp"
#include "ych/random.hpp"
#include "ych/sampled_field.hpp"
#include "ych/young.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ych {

// ============================================================================
// Fractional Brownian sheet on dyadic corner grids
// ============================================================================
//
// The target law has covariance prod_i R_{H_i}(s_i, t_i) with
// R_H(s,t) = (s^2H + t^2H - |s-t|^2H)/2. It is realized exactly by per-axis
// Cholesky factors combined through the Kronecker product structure, for
// O(d 2^2N) memory instead of 2^2Nd.

struct HurstVector {
    std::vector<double> h;

    int dimension() const { return static_cast<int>(h.size()); }

    double mean() const {
        double s = 0.0;
        for (double v : h) s += v;
        return s / static_cast<double>(h.size());
    }

    // Hurst regime in which the increment premeasure extends to a Hölder
    // charge: mean(H) > (d-1)/d.
    bool chargeable() const {
        const int d = dimension();
        return mean() > static_cast<double>(d - 1) / d;
    }

    void validate() const {
        if (h.empty()) throw std::invalid_argument("HurstVector: empty");
        for (double v : h)
            if (!(v > 0.0 && v < 1.0))
                throw std::invalid_argument("HurstVector: entries must be in (0,1)");
    }
};

inline double fbm_covariance(double hurst, double s, double t) {
    return 0.5 * (std::pow(s, 2.0 * hurst) + std::pow(t, 2.0 * hurst) -
                  std::pow(std::abs(s - t), 2.0 * hurst));
}

namespace detail {

// In-place lower Cholesky; returns false on a non-positive pivot.
inline bool cholesky(std::vector<double>& a, std::size_t m) {
    for (std::size_t j = 0; j < m; ++j) {
        double diag = a[j * m + j];
        for (std::size_t l = 0; l < j; ++l) diag -= a[j * m + l] * a[j * m + l];
        if (!(diag > 0.0)) return false;
        const double root = std::sqrt(diag);
        a[j * m + j] = root;
        for (std::size_t i = j + 1; i < m; ++i) {
            double v = a[i * m + j];
            for (std::size_t l = 0; l < j; ++l) v -= a[i * m + l] * a[j * m + l];
            a[i * m + j] = v / root;
        }
        for (std::size_t l = j + 1; l < m; ++l) a[j * m + l] = 0.0;
    }
    return true;
}

}  // namespace detail

// Sheet values on the (2^N+1)^d corner grid; identically zero on faces with a
// vanishing coordinate. Corner storage is row-major in the grid coordinates.
class SheetSample {
public:
    SheetSample(int d, int depth, std::vector<double> corners,
                HurstVector hurst, std::uint64_t seed, double jitter)
        : d_(d), depth_(depth), corners_(std::move(corners)),
          hurst_(std::move(hurst)), seed_(seed), jitter_(jitter) {}

    int dimension() const { return d_; }
    int depth() const { return depth_; }
    const HurstVector& hurst() const { return hurst_; }
    std::uint64_t seed() const { return seed_; }
    double jitter_used() const { return jitter_; }
    std::span<const double> corners() const { return corners_; }

    double corner(std::span<const std::uint64_t> t) const {
        const std::uint64_t points = (std::uint64_t{1} << depth_) + 1;
        std::size_t idx = 0;
        for (int i = 0; i < d_; ++i)
            idx = idx * points + t[static_cast<std::size_t>(i)];
        return corners_[idx];
    }

private:
    int d_;
    int depth_;
    std::vector<double> corners_;
    HurstVector hurst_;
    std::uint64_t seed_;
    double jitter_;
};

// Exact-in-law sampler; deterministic in (seed). On Cholesky breakdown a
// 1e-12 diagonal jitter is applied once and reported via jitter_used().
inline SheetSample sample_sheet(const HurstVector& hurst, int depth,
                                std::uint64_t seed) {
    hurst.validate();
    const int d = hurst.dimension();
    if (depth < 1 || d * depth > 26)
        throw std::invalid_argument("sample_sheet: depth out of range");

    const std::size_t m = std::size_t{1} << depth;  // interior grid points per axis
    const double h = std::ldexp(1.0, -depth);

    double jitter_used = 0.0;
    std::vector<std::vector<double>> factors;
    factors.reserve(static_cast<std::size_t>(d));
    for (int axis = 0; axis < d; ++axis) {
        std::vector<double> cov(m * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                cov[i * m + j] = fbm_covariance(hurst.h[static_cast<std::size_t>(axis)],
                                                (i + 1) * h, (j + 1) * h);
        std::vector<double> attempt = cov;
        if (!detail::cholesky(attempt, m)) {
            const double eps = 1e-12;
            attempt = cov;
            for (std::size_t i = 0; i < m; ++i) attempt[i * m + i] += eps;
            if (!detail::cholesky(attempt, m))
                throw numerical_error("sample_sheet: Cholesky failed despite jitter");
            jitter_used = eps;
        }
        factors.push_back(std::move(attempt));
    }

    // White noise on the interior grid, then the mode-i products L_i x_i W.
    const std::size_t core = std::size_t{1} << (depth * d);
    std::vector<double> w(core);
    for (std::size_t i = 0; i < core; ++i)
        w[i] = rng::gaussian(seed, 0xfb, i);

    std::vector<double> scratch(core);
    std::size_t stride = 1;
    for (int axis = d - 1; axis >= 0; --axis) {
        const auto& L = factors[static_cast<std::size_t>(axis)];
        const std::size_t blocks = core / (m * stride);
        for (std::size_t b = 0; b < blocks; ++b)
            for (std::size_t s = 0; s < stride; ++s) {
                const std::size_t base = b * m * stride + s;
                for (std::size_t i = 0; i < m; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j <= i; ++j)
                        acc += L[i * m + j] * w[base + j * stride];
                    scratch[base + i * stride] = acc;
                }
            }
        w.swap(scratch);
        stride *= m;
    }

    // Embed into the corner grid, zero on the faces t_i = 0.
    const std::size_t points = m + 1;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= points;
    std::vector<double> corners(total, 0.0);
    std::vector<std::size_t> t(static_cast<std::size_t>(d), 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        bool interior = true;
        std::size_t rest = idx;
        std::size_t core_idx = 0;
        for (int i = d - 1; i >= 0; --i) {
            t[static_cast<std::size_t>(i)] = rest % points;
            rest /= points;
            if (t[static_cast<std::size_t>(i)] == 0) interior = false;
        }
        if (!interior) continue;
        for (int i = 0; i < d; ++i)
            core_idx = core_idx * m + (t[static_cast<std::size_t>(i)] - 1);
        corners[idx] = w[core_idx];
    }
    return SheetSample(d, depth, std::move(corners), hurst, seed, jitter_used);
}

// ============================================================================
// Increment charge Delta_W
// ============================================================================

// Alternating-sign corner sum over each leaf rectangle; additivity across
// children telescopes exactly.
inline GridCharge increment_charge(const SheetSample& s) {
    const int d = s.dimension();
    const int N = s.depth();
    std::vector<double> leaves(std::size_t{1} << (d * N));
    std::vector<std::uint64_t> corner(static_cast<std::size_t>(d));
    for_each_cell(d, N, [&](std::uint64_t k, std::span<const std::uint64_t> pos) {
        double v = 0.0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
            int lower = 0;
            for (int i = 0; i < d; ++i) {
                const bool hi = (mask >> i) & 1u;
                corner[static_cast<std::size_t>(i)] =
                    pos[static_cast<std::size_t>(i)] + (hi ? 1u : 0u);
                if (!hi) ++lower;
            }
            v += ((lower % 2 == 0) ? 1.0 : -1.0) * s.corner(corner);
        }
        leaves[k] = v;
    });
    return GridCharge(d, N, std::move(leaves));
}

// Pathwise Young integral of X against Delta_W at a user-chosen charge
// exponent gamma (< mean Hurst for the chargeable regime).
inline YoungResult pathwise_integral(const SampledField& x, const SheetSample& s,
                                     double gamma) {
    return young_integral(x, increment_charge(s), gamma);
}

// ============================================================================
// Variance diagnostics
// ============================================================================

// Axis-aligned dyadic rectangle: per-axis corner index ranges [lo, hi] on the
// (2^level + 1)-point grid.
struct DyadicRect {
    int d = 1;
    int level = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> range;

    static DyadicRect from_cube(const CubeId& c) {
        DyadicRect r{c.d, c.n, {}};
        const auto pos = cube_coords(c);
        for (int i = 0; i < c.d; ++i)
            r.range.push_back({pos[static_cast<std::size_t>(i)],
                               pos[static_cast<std::size_t>(i)] + 1});
        return r;
    }

    double target_variance(const HurstVector& hurst) const {
        double v = 1.0;
        const double h = std::ldexp(1.0, -level);
        for (int i = 0; i < d; ++i)
            v *= std::pow((range[static_cast<std::size_t>(i)].second -
                           range[static_cast<std::size_t>(i)].first) *
                              h,
                          2.0 * hurst.h[static_cast<std::size_t>(i)]);
        return v;
    }
};

inline double rect_increment(const SheetSample& s, const DyadicRect& r) {
    const int d = s.dimension();
    std::vector<std::uint64_t> corner(static_cast<std::size_t>(d));
    double v = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
        int lower = 0;
        for (int i = 0; i < d; ++i) {
            const bool hi = (mask >> i) & 1u;
            const auto& rg = r.range[static_cast<std::size_t>(i)];
            corner[static_cast<std::size_t>(i)] = hi ? rg.second : rg.first;
            if (!hi) ++lower;
        }
        v += ((lower % 2 == 0) ? 1.0 : -1.0) * s.corner(corner);
    }
    return v;
}

struct VarianceCheck {
    double empirical = 0.0;
    double target = 0.0;
    double z_score = 0.0;  // under the chi-square sampling distribution
    int trials = 0;
};

// Empirical Var(Delta_W(R)) over independent sheets keyed by (seed, trial).
inline VarianceCheck variance_check(const HurstVector& hurst, const DyadicRect& rect,
                                    int trials, std::uint64_t seed) {
    hurst.validate();
    if (trials < 100)
        throw std::invalid_argument("variance_check: need at least 100 trials");
    std::vector<double> increments(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        const SheetSample s = sample_sheet(
            hurst, rect.level, rng::hash3(seed, 0x7157, static_cast<std::uint64_t>(t)));
        increments[static_cast<std::size_t>(t)] = rect_increment(s, rect);
    }
    double mean = 0.0;
    for (double v : increments) mean += v;
    mean /= trials;
    double var = 0.0;
    for (double v : increments) var += (v - mean) * (v - mean);
    var /= (trials - 1);

    VarianceCheck out;
    out.empirical = var;
    out.target = rect.target_variance(hurst);
    out.z_score = (var - out.target) /
                  (out.target * std::sqrt(2.0 / (trials - 1)));
    out.trials = trials;
    return out;
}

// Per-generation maxima max_k |Delta_W(K_{n,k})|, the raw profile behind the
// Hölder-regime witness (scale by 2^(n d gamma) to probe an exponent).
inline std::vector<double> increment_profile(const SheetSample& s) {
    const GridCharge w = increment_charge(s);
    std::vector<double> out;
    for (int n = 0; n <= s.depth(); ++n) {
        const auto level = w.generation_values(n);
        double m = 0.0;
        for (double v : level) m = std::max(m, std::abs(v));
        out.push_back(m);
    }
    return out;
}

}  // namespace ych
