#pragma once

#include "ych/dyadic.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace ych::rng {

// Counter-based generation: every variate is a pure function of
// (seed, stream, counter), so replicate tables are reproducible and
// independent of evaluation order.

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix64(seed ^ mix64(stream ^ mix64(counter)));
}

// Uniform in (0, 1].
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>((hash3(seed, stream, counter) >> 11) + 1) * 0x1.0p-53;
}

// Standard normal via Box-Muller on counters (2i, 2i+1).
inline double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = uniform01(seed, stream, 2 * counter);
    const double u2 = uniform01(seed, stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

// Small stateful convenience wrapper for test data.
struct Counter {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t counter = 0;

    std::uint64_t next() { return hash3(seed, stream, counter++); }
    double uniform() { return uniform01(seed, stream, counter++); }
    double symmetric() { return 2.0 * uniform() - 1.0; }  // in (-1, 1]
};

// Connected-ish dyadic figure grown by a random walk over cells.
inline ych::DyadicFigure random_figure_walk(int d, int resolution,
                                            std::uint64_t seed, int steps) {
    Counter gen{seed, 0x815ull, 0};
    const std::uint64_t side = std::uint64_t{1} << resolution;
    std::vector<std::uint64_t> pos(static_cast<std::size_t>(d));
    for (auto& p : pos) p = gen.next() % side;

    ych::DyadicFigure f(d, resolution);
    std::vector<std::uint64_t> cells;
    cells.push_back(ych::cube_from_coords(d, resolution, pos).k);
    for (int s = 0; s < steps; ++s) {
        const int axis = static_cast<int>(gen.next() % static_cast<std::uint64_t>(d));
        const bool up = gen.next() & 1;
        auto& p = pos[static_cast<std::size_t>(axis)];
        if (up && p + 1 < side) ++p;
        else if (!up && p > 0) --p;
        cells.push_back(ych::cube_from_coords(d, resolution, pos).k);
    }
    return ych::DyadicFigure(d, resolution, cells);
}

// Union of random dyadic cubes of mixed generations (possibly disconnected).
inline ych::DyadicFigure random_figure_cubes(int d, int resolution,
                                             std::uint64_t seed, int count) {
    Counter gen{seed, 0x92cull, 0};
    ych::DyadicFigure f(d, resolution);
    for (int i = 0; i < count; ++i) {
        const int n = 1 + static_cast<int>(gen.next() %
                                           static_cast<std::uint64_t>(resolution));
        const std::uint64_t k = gen.next() & ((std::uint64_t{1} << (n * d)) - 1);
        f.add_cube(ych::CubeId{d, n, k});
    }
    return f;
}

}  // namespace ych::rng
