#pragma once

#include "ych/charge.hpp"
#include "ych/dyadic.hpp"
#include "ych/sampled_field.hpp"
#include "ych/summation.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ych {

// ============================================================================
// Functions of bounded fractional variation (BV^alpha, alpha = d gamma - (d-1))
// ============================================================================
//
// Renormalized Haar coefficients b_{n,k,r}(f) = 2^(-nd(gamma-1/2)) int f g_{n,k,r}.
// |int f| + sum |b| is an l1-equivalent of the alpha-variation and the
// coefficient pairing with a charge's Faber-Schauder coefficients realizes
// the duality bracket.

struct HaarCoeffsF {
    int d = 1;
    int depth = 0;
    double gamma = 0.0;
    double mean = 0.0;  // int f
    std::vector<std::vector<double>> b;  // b[n][k*(2^d-1) + (r-1)]

    double coeff(int n, std::uint64_t k, int r) const {
        const std::uint64_t types = (std::uint64_t{1} << d) - 1;
        return b[static_cast<std::size_t>(n)][k * types + static_cast<std::uint64_t>(r - 1)];
    }
};

inline void check_bv_exponent(int d, double gamma) {
    if (!(gamma > static_cast<double>(d - 1) / d && gamma < 1.0))
        throw std::invalid_argument("bvalpha: gamma must satisfy (d-1)/d < gamma < 1");
}

inline HaarCoeffsF analyze_f(const SampledField& f, double gamma, int depth) {
    check_bv_exponent(f.dimension(), gamma);
    if (f.resolution() < depth)
        throw std::invalid_argument("analyze_f: field resolution < depth");
    const int d = f.dimension();
    const HaarMatrix A(d);
    const std::size_t arity = A.order();

    HaarCoeffsF c;
    c.d = d;
    c.depth = depth;
    c.gamma = gamma;
    c.b.resize(static_cast<std::size_t>(depth));

    std::vector<double> level(std::size_t{1} << (d * depth));
    for (std::uint64_t k = 0; k < level.size(); ++k)
        level[k] = f.integral_over(CubeId{d, depth, k});
    for (int n = depth - 1; n >= 0; --n) {
        const std::size_t count = std::size_t{1} << (n * d);
        // 2^(nd/2) from the Haar normalization, 2^(-nd(gamma-1/2)) from the
        // coefficient renormalization.
        const double scale = std::exp2(static_cast<double>(n) * d * (1.0 - gamma));
        std::vector<double> up(count);
        auto& bn = c.b[static_cast<std::size_t>(n)];
        bn.resize(count * (arity - 1));
        for (std::size_t k = 0; k < count; ++k) {
            const double* child = level.data() + k * arity;
            double s = 0.0;
            for (std::size_t l = 0; l < arity; ++l) s += child[l];
            up[k] = s;
            for (std::size_t r = 1; r < arity; ++r) {
                double dot = 0.0;
                for (std::size_t l = 0; l < arity; ++l)
                    dot += static_cast<double>(A.at(r, l)) * child[l];
                bn[k * (arity - 1) + (r - 1)] = scale * dot;
            }
        }
        level.swap(up);
    }
    c.mean = level[0];
    return c;
}

struct BvAlphaReport {
    double mean = 0.0;
    std::vector<double> per_generation_l1;
    double total = 0.0;       // |mean| + sum |b|
    double tail_slope = 0.0;  // LS slope of log2 per-generation l1 sums
};

inline BvAlphaReport bv_alpha_report(const HaarCoeffsF& c) {
    BvAlphaReport rep;
    rep.mean = c.mean;
    std::vector<double> abs_terms;
    for (const auto& gen : c.b) {
        abs_terms.assign(gen.size(), 0.0);
        for (std::size_t i = 0; i < gen.size(); ++i) abs_terms[i] = std::abs(gen[i]);
        rep.per_generation_l1.push_back(pairwise_sum(abs_terms));
    }
    std::vector<double> parts = rep.per_generation_l1;
    parts.push_back(std::abs(c.mean));
    rep.total = pairwise_sum(parts);

    // slope of log2(l1_n) against n over the generations with mass
    std::vector<std::pair<double, double>> pts;
    for (std::size_t n = 0; n < rep.per_generation_l1.size(); ++n)
        if (rep.per_generation_l1[n] > 0.0)
            pts.push_back({static_cast<double>(n),
                           std::log2(rep.per_generation_l1[n])});
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(pts.size());
        rep.tail_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return rep;
}

// The l1 coefficient norm |int f| + sum |b_{n,k,r}|, a C-equivalent of the
// alpha-variation.
inline double bv_alpha_norm(const HaarCoeffsF& c) { return bv_alpha_report(c).total; }

// <f, w> = w([0,1]^d) int f + sum 2^(nd(gamma-1/2)) b_{n,k,r}(f) a_{n,k,r}(w)
inline double duality_bracket(const HaarCoeffsF& f, const FaberCoeffs& w) {
    if (f.d != w.d || f.depth != w.depth)
        throw std::invalid_argument("duality_bracket: mismatched parameters");
    std::vector<double> gen_sums;
    std::vector<double> terms;
    for (int n = 0; n < f.depth; ++n) {
        const auto& bn = f.b[static_cast<std::size_t>(n)];
        const auto& an = w.a[static_cast<std::size_t>(n)];
        const double scale = std::exp2(static_cast<double>(n) * f.d * (f.gamma - 0.5));
        terms.assign(bn.size(), 0.0);
        for (std::size_t i = 0; i < bn.size(); ++i)
            terms[i] = scale * bn[i] * an[i];
        gen_sums.push_back(pairwise_sum(terms));
    }
    return w.mass * f.mean + pairwise_sum(gen_sums);
}

// |<f, w>| <= bv_alpha_norm(f) * C * holder_norm(w); the product bound that
// witnesses the duality.
struct BracketReport {
    double bracket = 0.0;
    double bv_norm = 0.0;
    double holder = 0.0;
    double bound = 0.0;
};

inline BracketReport bracket_report(const HaarCoeffsF& f, const FaberCoeffs& w,
                                    const GridCharge& charge) {
    BracketReport rep;
    rep.bracket = duality_bracket(f, w);
    rep.bv_norm = bv_alpha_norm(f);
    rep.holder = holder_norm(charge, f.gamma);
    rep.bound = rep.bv_norm * std::exp2(f.d * (1.0 - f.gamma)) * rep.holder;
    return rep;
}

// Frozen equivalence constant between the discrete L^(1/gamma) norm and the
// l1 coefficient proxy of \hat V^alpha; calibrated once on the test corpus.
inline constexpr double k_gagliardo_constant = 1.5;

struct GagliardoCheck {
    double lhs = 0.0;        // discrete L^(1/gamma) norm of f
    double rhs_proxy = 0.0;  // C * bv_alpha_norm
};

inline GagliardoCheck gagliardo_check(const SampledField& f, double gamma, int depth) {
    check_bv_exponent(f.dimension(), gamma);
    const int d = f.dimension();
    std::vector<double> powers(f.cells().size());
    for (std::size_t i = 0; i < powers.size(); ++i)
        powers[i] = std::pow(std::abs(f.cells()[i]), 1.0 / gamma);
    const double vol = std::ldexp(1.0, -f.resolution() * d);
    GagliardoCheck out;
    out.lhs = std::pow(pairwise_sum(powers) * vol, gamma);
    out.rhs_proxy = k_gagliardo_constant * bv_alpha_norm(analyze_f(f, gamma, depth));
    return out;
}

}  // namespace ych
