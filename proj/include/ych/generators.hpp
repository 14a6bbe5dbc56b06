#pragma once

#include "ych/charge.hpp"
#include "ych/random.hpp"
#include "ych/sampled_field.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace ych::rng {

// gamma-Hölder charge synthesized from coefficients of exactly the critical
// size |a_{n,k,r}| ~ 2^(nd(1/2-gamma)), signs and amplitudes randomized.
// Coefficients are a pure function of (seed, n, k, r), so deepening the
// truncation extends the same charge.
inline ych::GridCharge random_holder_charge(int d, int depth, double gamma,
                                            std::uint64_t seed,
                                            double amplitude = 1.0) {
    ych::check_holder_exponent(d, gamma);
    ych::FaberCoeffs c;
    c.d = d;
    c.depth = depth;
    c.mass = amplitude * (2.0 * uniform01(seed, 0, 0) - 1.0);
    c.a.resize(static_cast<std::size_t>(depth));
    const std::uint64_t types = (std::uint64_t{1} << d) - 1;
    for (int n = 0; n < depth; ++n) {
        auto& an = c.a[static_cast<std::size_t>(n)];
        an.resize((std::uint64_t{1} << (n * d)) * types);
        const double scale =
            amplitude * std::exp2(static_cast<double>(n) * d * (0.5 - gamma));
        for (std::uint64_t i = 0; i < an.size(); ++i)
            an[i] = scale *
                    (2.0 * uniform01(seed, static_cast<std::uint64_t>(n) + 1, i) - 1.0);
    }
    return ych::synthesize(c);
}

// beta-Hölder field: lacunary cosine sum with one term per dyadic scale, so
// the beta-roughness is present at every resolved frequency.
inline ych::SampledField random_holder_field(int d, int resolution, double beta,
                                             std::uint64_t seed,
                                             double amplitude = 1.0) {
    struct Term {
        std::vector<double> dir;
        double phase;
        double amp;
    };
    std::vector<Term> terms;
    const int levels = resolution;
    for (int j = 0; j <= levels; ++j) {
        Term t;
        t.dir.resize(static_cast<std::size_t>(d));
        double norm = 0.0;
        for (int i = 0; i < d; ++i) {
            t.dir[static_cast<std::size_t>(i)] =
                gaussian(seed, 101 + static_cast<std::uint64_t>(j),
                         static_cast<std::uint64_t>(i));
            norm += t.dir[static_cast<std::size_t>(i)] * t.dir[static_cast<std::size_t>(i)];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) norm = 1.0;
        const double freq = std::exp2(j);
        for (auto& v : t.dir) v *= freq / norm;
        t.phase = 2.0 * std::numbers::pi *
                  uniform01(seed, 202, static_cast<std::uint64_t>(j));
        t.amp = amplitude * std::pow(freq, -beta) *
                (0.25 + 0.75 * uniform01(seed, 303, static_cast<std::uint64_t>(j)));
        terms.push_back(std::move(t));
    }
    return ych::SampledField::from_function(
        d, resolution, beta, [&](std::span<const double> x) {
            double s = 0.0;
            for (const Term& t : terms) {
                double phase = t.phase;
                for (int i = 0; i < d; ++i)
                    phase += 2.0 * std::numbers::pi *
                             t.dir[static_cast<std::size_t>(i)] *
                             x[static_cast<std::size_t>(i)];
                s += t.amp * std::cos(phase);
            }
            return s;
        });
}

}  // namespace ych::rng
