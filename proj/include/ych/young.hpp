#pragma once

#include "ych/charge.hpp"
#include "ych/dyadic.hpp"
#include "ych/sampled_field.hpp"
#include "ych/summation.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ych {

// ============================================================================
// Young integral over [0,1]^d
// ============================================================================
//
// Series form: int f w = w([0,1]^d) int f + sum_{n<N} sum_{k,r} a_{n,k,r}(w)
// int f g_{n,k,r}, with the f-integrals exact for the discretized f. The
// reported bound has two parts:
//  - the series tail beyond generation N, with the explicit constant
//    C_tail = 2^(d-1) d^(beta/2) 2^(d(1-gamma)) traced through the pairing
//    and coefficient-decay estimates;
//  - the discretization error lip_beta (sqrt(d) 2^-M)^beta weighted by the
//    total leaf variation of w.

struct YoungResult {
    double value = 0.0;
    double truncation_bound = 0.0;
    int generations_used = 0;
};

inline void check_young_pair(const SampledField& f, const GridCharge& w,
                             double gamma) {
    if (f.dimension() != w.dimension())
        throw std::invalid_argument("young: dimension mismatch");
    check_holder_exponent(w.dimension(), gamma);
    const int d = w.dimension();
    if (!(f.beta() + d * gamma > static_cast<double>(d)))
        throw std::invalid_argument("young: need beta + d*gamma > d");
    if (f.resolution() < w.depth())
        throw std::invalid_argument("young: field resolution < charge depth");
}

inline double young_tail_bound(int d, double beta, double gamma, int depth,
                               double lip_beta, double holder) {
    const double rate = d - d * gamma - beta;  // < 0
    const double c_tail = std::exp2(d - 1) * std::pow(static_cast<double>(d), 0.5 * beta) *
                          std::exp2(d * (1.0 - gamma));
    return c_tail * lip_beta * holder * std::exp2(rate * depth) /
           (1.0 - std::exp2(rate));
}

inline YoungResult young_integral(const SampledField& f, const GridCharge& w,
                                  double gamma) {
    check_young_pair(f, w, gamma);
    const int d = w.dimension();
    const int N = w.depth();
    const HaarMatrix A(d);
    const std::size_t arity = A.order();

    // Pyramids of f-integrals and w-values, finest to coarsest.
    std::vector<double> flevel(std::size_t{1} << (d * N));
    for (std::uint64_t k = 0; k < flevel.size(); ++k)
        flevel[k] = f.integral_over(CubeId{d, N, k});
    std::vector<double> wlevel(w.leaves().begin(), w.leaves().end());

    std::vector<double> gen_sums;  // one series term per generation
    std::vector<double> terms;
    double abs_leaf_sum = 0.0;
    for (double v : wlevel) abs_leaf_sum += std::abs(v);

    for (int n = N - 1; n >= 0; --n) {
        const std::size_t count = std::size_t{1} << (n * d);
        const double scale2 = std::exp2(static_cast<double>(n) * d);  // (2^(nd/2))^2
        std::vector<double> fup(count), wup(count);
        terms.assign(count, 0.0);
        for (std::size_t k = 0; k < count; ++k) {
            const double* fc = flevel.data() + k * arity;
            const double* wc = wlevel.data() + k * arity;
            double fs = 0.0, ws = 0.0;
            for (std::size_t l = 0; l < arity; ++l) {
                fs += fc[l];
                ws += wc[l];
            }
            fup[k] = fs;
            wup[k] = ws;
            double contrib = 0.0;
            for (std::size_t r = 1; r < arity; ++r) {
                double fa = 0.0, wa = 0.0;
                for (std::size_t l = 0; l < arity; ++l) {
                    const double e = static_cast<double>(A.at(r, l));
                    fa += e * fc[l];
                    wa += e * wc[l];
                }
                contrib += fa * wa;
            }
            terms[k] = scale2 * contrib;
        }
        gen_sums.push_back(pairwise_sum(terms));
        flevel.swap(fup);
        wlevel.swap(wup);
    }

    YoungResult res;
    res.generations_used = N;
    res.value = wlevel[0] * flevel[0] + pairwise_sum(gen_sums);

    const double holder = holder_norm(w, gamma);
    res.truncation_bound =
        young_tail_bound(d, f.beta(), gamma, N, f.lip_beta(), holder) +
        f.lip_beta() *
            std::pow(std::sqrt(d) * std::ldexp(1.0, -f.resolution()), f.beta()) *
            abs_leaf_sum;
    return res;
}

// ============================================================================
// Indefinite integral f . w
// ============================================================================
//
// Computed by sewing at depth N: the leaf seed is the f-mean over the leaf
// times the leaf value (the exact pairing for the discretized data), coarser
// values by summation. O(2^(M d)) total, unlike the per-cube series.

inline GridCharge indefinite_integral(const SampledField& f, const GridCharge& w,
                                      double gamma) {
    check_young_pair(f, w, gamma);
    const int d = w.dimension();
    const int N = w.depth();
    std::vector<double> leaves(std::size_t{1} << (d * N));
    for (std::uint64_t k = 0; k < leaves.size(); ++k)
        leaves[k] = f.mean_over(CubeId{d, N, k}) * w.leaf(k);
    return GridCharge(d, N, std::move(leaves));
}

// ============================================================================
// Charge sewing
// ============================================================================

// Almost-additive cube function eta with declared constants: the additivity
// defect is kappa |K|^(1+epsilon) and |eta(K)| <= kappa |K|^gamma.
struct SeedFunction {
    std::function<double(const CubeId&)> eta;
    double kappa = 0.0;
    double epsilon = 0.0;
};

struct SewResult {
    GridCharge charge;
    // |eta(K) - theta(K)| <= defect_constant * |K|^(1+epsilon), a priori.
    double defect_constant = 0.0;
    // Observed sup over cubes of the hypothesis ratios (reported, not enforced):
    double observed_additivity_ratio = 0.0;  // |eta(K)-sum eta(children)| / (kappa |K|^(1+eps))
    double observed_bound_ratio = 0.0;       // |eta(K)| / (kappa |K|^gamma)
};

inline SewResult sew(const SeedFunction& seed, int d, int depth, double gamma) {
    check_holder_exponent(d, gamma);
    if (seed.epsilon <= 0.0)
        throw std::invalid_argument("sew: epsilon must be positive");

    std::vector<double> leaves(std::size_t{1} << (d * depth));
    for (std::uint64_t k = 0; k < leaves.size(); ++k)
        leaves[k] = seed.eta(CubeId{d, depth, k});
    SewResult res{GridCharge(d, depth, std::move(leaves)),
                  seed.kappa / (1.0 - std::exp2(-d * seed.epsilon)), 0.0, 0.0};

    // Empirical check of the hypotheses on every cube above the leaves.
    const std::uint64_t arity = std::uint64_t{1} << d;
    for (int n = 0; n < depth; ++n) {
        const double vol = std::ldexp(1.0, -n * d);
        const double add_scale = std::pow(vol, 1.0 + seed.epsilon);
        const double bound_scale = std::pow(vol, gamma);
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << (n * d)); ++k) {
            const double here = seed.eta(CubeId{d, n, k});
            double kids = 0.0;
            for (std::uint64_t l = 0; l < arity; ++l)
                kids += seed.eta(CubeId{d, n + 1, arity * k + l});
            if (seed.kappa > 0.0) {
                res.observed_additivity_ratio =
                    std::max(res.observed_additivity_ratio,
                             std::abs(here - kids) / (seed.kappa * add_scale));
                res.observed_bound_ratio =
                    std::max(res.observed_bound_ratio,
                             std::abs(here) / (seed.kappa * bound_scale));
            } else if (std::abs(here - kids) > 0.0) {
                res.observed_additivity_ratio =
                    std::numeric_limits<double>::infinity();
            }
        }
    }
    return res;
}

enum class TagRule { lower_corner, center };

// Riemann seed eta(K) = f(tag(K)) w(K) with the constants from the sewing
// hypotheses: kappa = max(2^d d^(beta/2) Lip Hölder-norm, ||f||_inf norm),
// epsilon = gamma + beta/d - 1.
inline SeedFunction riemann_seed(const SampledField& f, const GridCharge& w,
                                 double gamma, TagRule rule = TagRule::lower_corner) {
    check_young_pair(f, w, gamma);
    const int d = w.dimension();
    const double holder = holder_norm(w, gamma);
    double sup = 0.0;
    for (double v : f.cells()) sup = std::max(sup, std::abs(v));
    SeedFunction s;
    s.kappa = std::max(std::exp2(d) * std::pow(static_cast<double>(d), 0.5 * f.beta()) *
                           f.lip_beta() * holder,
                       sup * holder);
    s.epsilon = gamma + f.beta() / d - 1.0;
    s.eta = [&f, &w, rule, d](const CubeId& c) {
        const Box b = cube_bounds(c);
        std::vector<double> x(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            x[static_cast<std::size_t>(i)] =
                rule == TagRule::lower_corner
                    ? b.lo[static_cast<std::size_t>(i)]
                    : 0.5 * (b.lo[static_cast<std::size_t>(i)] +
                             b.hi[static_cast<std::size_t>(i)]);
        return f.value_at(x) * w.value(c);
    };
    return s;
}

// ============================================================================
// Riemann-Stieltjes sums on dyadic divisions
// ============================================================================

inline double riemann_sum(const SampledField& f, const GridCharge& w, int m,
                          TagRule rule = TagRule::lower_corner) {
    if (m < 0 || m > w.depth())
        throw std::invalid_argument("riemann_sum: generation beyond depth");
    if (f.dimension() != w.dimension() || f.resolution() < w.depth())
        throw std::invalid_argument("riemann_sum: incompatible field");
    const int d = w.dimension();
    const auto level = w.generation_values(m);
    std::vector<double> terms(level.size());
    std::vector<double> x(static_cast<std::size_t>(d));
    const double h = std::ldexp(1.0, -m);
    for_each_cell(d, m, [&](std::uint64_t k, std::span<const std::uint64_t> pos) {
        for (int i = 0; i < d; ++i)
            x[static_cast<std::size_t>(i)] =
                (static_cast<double>(pos[static_cast<std::size_t>(i)]) +
                 (rule == TagRule::center ? 0.5 : 0.0)) *
                h;
        // Corner tags use the half-open cell value (the tag's cell lies
        // inside the cube); center tags land on grid planes of the finer
        // field grid, where the symmetric reconstruction is unbiased.
        terms[k] = (rule == TagRule::center ? f.reconstruct_at(x)
                                            : f.value_at(x)) *
                   level[k];
    });
    return pairwise_sum(terms);
}

struct RiemannRow {
    int generation = 0;
    double sum = 0.0;
    double error = 0.0;  // |sum - series value|
};

inline std::vector<RiemannRow> riemann_table(const SampledField& f,
                                             const GridCharge& w, double gamma,
                                             int max_generation,
                                             TagRule rule = TagRule::lower_corner) {
    const double reference = young_integral(f, w, gamma).value;
    std::vector<RiemannRow> rows;
    for (int m = 0; m <= std::min(max_generation, w.depth()); ++m) {
        const double s = riemann_sum(f, w, m, rule);
        rows.push_back({m, s, std::abs(s - reference)});
    }
    return rows;
}

// ============================================================================
// Young-Loeve envelope
// ============================================================================

// Frozen empirical constant for the Young-Loeve envelope; calibrated once on
// random Hölder data (see the calibration test) and used as the acceptance
// envelope for Riemann sums.
inline constexpr double k_young_loeve_constant = 4.0;

// C_YL Lip^beta(f) ||w||_gamma |F|^gamma (diam F)^beta / (isop F)^(d(1-gamma))
inline double young_loeve_bound(const SampledField& f, const GridCharge& w,
                                double gamma, const DyadicFigure& figure) {
    check_young_pair(f, w, gamma);
    const auto m = figure_measures(figure);
    if (!m.defined)
        throw std::invalid_argument("young_loeve_bound: empty figure");
    const int d = w.dimension();
    return k_young_loeve_constant * f.lip_beta() * holder_norm(w, gamma) *
           std::pow(m.volume, gamma) * std::pow(m.diameter, f.beta()) /
           std::pow(m.isop, d * (1.0 - gamma));
}

// Snaps x to the center of the nearest cell of F (x itself if already inside).
inline std::vector<double> snap_to_figure(const DyadicFigure& figure,
                                          std::span<const double> x) {
    if (figure.empty())
        throw std::invalid_argument("snap_to_figure: empty figure");
    const int d = figure.dimension();
    const int res = figure.resolution();
    const double h = std::ldexp(1.0, -res);
    const std::uint64_t side = std::uint64_t{1} << res;

    // If the containing cell belongs to F, keep the point.
    std::vector<std::uint64_t> pos(static_cast<std::size_t>(d));
    bool in_range = true;
    for (int i = 0; i < d; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        if (xi < 0.0 || xi > 1.0) {
            in_range = false;
            break;
        }
        auto p = static_cast<std::uint64_t>(std::floor(xi * static_cast<double>(side)));
        if (p >= side) p = side - 1;
        pos[static_cast<std::size_t>(i)] = p;
    }
    if (in_range && figure.contains_cell(cube_from_coords(d, res, pos).k))
        return std::vector<double>(x.begin(), x.end());

    double best = 1e300;
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);
    for (std::uint64_t cell : figure.cells()) {
        const auto cc = cube_coords(CubeId{d, res, cell});
        double dist = 0.0;
        std::vector<double> center(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            center[static_cast<std::size_t>(i)] =
                (static_cast<double>(cc[static_cast<std::size_t>(i)]) + 0.5) * h;
            const double e = center[static_cast<std::size_t>(i)] -
                             x[static_cast<std::size_t>(i)];
            dist += e * e;
        }
        if (dist < best) {
            best = dist;
            out = center;
        }
    }
    return out;
}

// ============================================================================
// Locality
// ============================================================================

struct LocalityReport {
    double value = 0.0;      // (f . w)(F)
    double tolerance = 0.0;  // defect-based allowance
    bool within = false;
};

inline LocalityReport locality_check(const SampledField& f, const GridCharge& w,
                                     double gamma, const DyadicFigure& figure) {
    check_young_pair(f, w, gamma);
    if (figure.dimension() != w.dimension() || figure.resolution() > w.depth())
        throw std::invalid_argument("locality_check: incompatible figure");
    const int d = w.dimension();
    const int res = figure.resolution();

    bool f_zero = true, w_zero = true;
    for (std::uint64_t cell : figure.cells()) {
        const int fshift = (f.resolution() - res) * d;
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << fshift) && f_zero; ++i)
            if (f.cell((cell << fshift) + i) != 0.0) f_zero = false;
        const int wshift = (w.depth() - res) * d;
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << wshift) && w_zero; ++i)
            if (w.leaf((cell << wshift) + i) != 0.0) w_zero = false;
        if (!f_zero && !w_zero) break;
    }
    if (!f_zero && !w_zero)
        throw std::invalid_argument(
            "locality_check: neither f nor w vanishes on the figure");

    LocalityReport rep;
    if (figure.empty()) {
        rep.within = true;
        return rep;
    }
    rep.value = indefinite_integral(f, w, gamma).value(figure);

    // Defect allowance from the sewing gap over the figure's cells.
    const SeedFunction seed = riemann_seed(f, w, gamma);
    const double gap = seed.kappa / (1.0 - std::exp2(-d * seed.epsilon));
    rep.tolerance = static_cast<double>(figure.cells().size()) * gap *
                        std::pow(std::ldexp(1.0, -res * d), 1.0 + seed.epsilon) +
                    1e-12;
    rep.within = std::abs(rep.value) <= rep.tolerance;
    return rep;
}

}  // namespace ych
