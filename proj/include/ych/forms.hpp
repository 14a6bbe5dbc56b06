#pragma once

#include "ych/charge.hpp"
#include "ych/dyadic.hpp"
#include "ych/sampled_field.hpp"
#include "ych/young.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ych {

// ============================================================================
// Hölder differential-form charges dg_1 ^ ... ^ dg_d
// ============================================================================

// Tuple of Hölder components; the wedge charge has exponent mean(beta_i),
// defined when sum(beta_i) > d - 1.
struct FunctionTuple {
    std::vector<SampledField> components;

    int dimension() const { return static_cast<int>(components.size()); }
    int resolution() const { return components.front().resolution(); }

    double gamma() const {
        double s = 0.0;
        for (const auto& g : components) s += g.beta();
        return s / static_cast<double>(components.size());
    }

    double lip_product() const {
        double p = 1.0;
        for (const auto& g : components) p *= g.lip_beta();
        return p;
    }

    void validate() const {
        const int d = dimension();
        if (d < 1) throw std::invalid_argument("FunctionTuple: empty tuple");
        if (d > 3)
            throw std::invalid_argument("FunctionTuple: wedge charges capped at d <= 3");
        double s = 0.0;
        for (const auto& g : components) {
            if (g.dimension() != d)
                throw std::invalid_argument("FunctionTuple: component dimension != d");
            if (g.resolution() != resolution())
                throw std::invalid_argument("FunctionTuple: mixed resolutions");
            s += g.beta();
        }
        if (!(s > static_cast<double>(d - 1)))
            throw std::invalid_argument(
                "FunctionTuple: need gamma_1 + ... + gamma_d > d - 1");
    }
};

// Restriction of g to the face of K on side j (0 = lower, 1 = upper) of the
// given axis, re-indexed over the projected cube.
inline SampledField face_slice(const SampledField& g, int axis, int side,
                               const CubeId& c) {
    if (c.d != g.dimension() || c.n > g.resolution())
        throw std::invalid_argument("face_slice: face off the sampling grid");
    if (side != 0 && side != 1) throw std::invalid_argument("face_slice: side is 0 or 1");
    const auto pos = cube_coords(c);
    const std::uint64_t plane =
        (pos[static_cast<std::size_t>(axis)] + static_cast<std::uint64_t>(side))
        << (g.resolution() - c.n);
    return g.slice_plane(axis, plane);
}

namespace detail {

// d = 1 base case: the increment charge of the point-reconstructed function.
inline GridCharge increment_charge_from_field(const SampledField& g, int depth) {
    const int stride_shift = g.resolution() - depth;
    std::vector<double> leaves(std::size_t{1} << depth);
    double prev = g.point_value(0);
    for (std::uint64_t k = 0; k < leaves.size(); ++k) {
        const double next = g.point_value((k + 1) << stride_shift);
        leaves[k] = next - prev;
        prev = next;
    }
    return GridCharge(1, depth, std::move(leaves));
}

// Indefinite face integrals int (g_1 o iota) d(g_2 o iota) ^ ... on one grid
// hyperplane; the (d-1)-dimensional wedge charge is built recursively.
inline GridCharge face_indefinite(const FunctionTuple& g, int axis,
                                  std::uint64_t plane, int depth);

inline GridCharge wedge_charge_impl(const FunctionTuple& g, int depth) {
    const int d = g.dimension();
    if (d == 1) return increment_charge_from_field(g.components[0], depth);

    const std::uint64_t planes = (std::uint64_t{1} << depth) + 1;
    // One indefinite charge per hyperplane; every leaf face below reuses it.
    std::vector<std::vector<GridCharge>> ind(static_cast<std::size_t>(d));
    for (int axis = 0; axis < d; ++axis) {
        auto& slot = ind[static_cast<std::size_t>(axis)];
        slot.reserve(planes);
        for (std::uint64_t t = 0; t < planes; ++t)
            slot.push_back(face_indefinite(g, axis, t, depth));
    }

    const auto spread = spread_tables(d - 1, depth);
    std::vector<double> leaves(std::size_t{1} << (d * depth));
    for_each_cell(d, depth, [&](std::uint64_t k, std::span<const std::uint64_t> pos) {
        double v = 0.0;
        for (int axis = 0; axis < d; ++axis) {
            std::uint64_t proj = 0;
            for (int i = 0, j = 0; i < d; ++i) {
                if (i == axis) continue;
                proj |= spread[static_cast<std::size_t>(j)]
                              [pos[static_cast<std::size_t>(i)]];
                ++j;
            }
            const std::uint64_t t = pos[static_cast<std::size_t>(axis)];
            // (-1)^(i+j) with 1-based axis index i
            const double sgn = (axis % 2 == 0) ? 1.0 : -1.0;
            v += sgn * (ind[static_cast<std::size_t>(axis)][t + 1].leaf(proj) -
                        ind[static_cast<std::size_t>(axis)][t].leaf(proj));
        }
        leaves[k] = v;
    });
    return GridCharge(d, depth, std::move(leaves));
}

inline GridCharge face_indefinite(const FunctionTuple& g, int axis,
                                  std::uint64_t plane, int depth) {
    const int d = g.dimension();
    const std::uint64_t grid_plane = plane << (g.resolution() - depth);
    const SampledField u = g.components[0].slice_plane(axis, grid_plane);
    FunctionTuple sub;
    sub.components.reserve(static_cast<std::size_t>(d) - 1);
    for (int i = 1; i < d; ++i)
        sub.components.push_back(g.components[static_cast<std::size_t>(i)]
                                     .slice_plane(axis, grid_plane));
    const GridCharge inner = wedge_charge_impl(sub, depth);
    return indefinite_integral(u, inner, sub.gamma());
}

}  // namespace detail

// The wedge charge on generation-N leaves; coarser values by summation
// (internal faces cancel under the alternating sign convention).
inline GridCharge wedge_charge(const FunctionTuple& g, int depth) {
    g.validate();
    if (depth < 0 || g.resolution() < depth || g.resolution() < 1)
        throw std::invalid_argument("wedge_charge: resolution exhausted");
    return detail::wedge_charge_impl(g, depth);
}

// Value on a single dyadic cube straight from its own boundary integrals,
// bypassing the leaf assembly. Used to check internal-face cancellation.
inline double wedge_boundary_value(const FunctionTuple& g, const CubeId& c,
                                   int depth) {
    g.validate();
    const int d = g.dimension();
    if (d == 1)
        return detail::increment_charge_from_field(g.components[0], depth)
            .value(c);
    if (c.d != d || c.n > depth)
        throw std::invalid_argument("wedge_boundary_value: incompatible cube");

    const auto pos = cube_coords(c);
    double v = 0.0;
    for (int axis = 0; axis < d; ++axis) {
        std::vector<std::uint64_t> sub;
        for (int i = 0; i < d; ++i)
            if (i != axis) sub.push_back(pos[static_cast<std::size_t>(i)]);
        const CubeId proj = cube_from_coords(d - 1, c.n, sub);
        const double sgn = (axis % 2 == 0) ? 1.0 : -1.0;
        for (int side = 0; side <= 1; ++side) {
            const std::uint64_t t =
                (pos[static_cast<std::size_t>(axis)] + static_cast<std::uint64_t>(side))
                << (depth - c.n);
            const GridCharge ind = detail::face_indefinite(g, axis, t, depth);
            v += sgn * (side == 1 ? 1.0 : -1.0) * ind.value(proj);
        }
    }
    return v;
}

// ============================================================================
// Jacobian-density reference (oracle for smooth tuples)
// ============================================================================

namespace detail {

// Per-cell partial derivatives by central differences (one-sided at the
// boundary layers).
inline std::vector<double> derivative_cells(const SampledField& g, int axis) {
    const int d = g.dimension();
    const int M = g.resolution();
    const std::uint64_t side = std::uint64_t{1} << M;
    const double h = std::ldexp(1.0, -M);
    const auto spread = spread_tables(d, M);
    const auto& ax = spread[static_cast<std::size_t>(axis)];
    std::vector<double> out(g.cells().size());
    for_each_cell(d, M, [&](std::uint64_t k, std::span<const std::uint64_t> pos) {
        const std::uint64_t p = pos[static_cast<std::size_t>(axis)];
        const std::uint64_t base = k ^ ax[p];
        if (p == 0)
            out[k] = (g.cell(base | ax[1]) - g.cell(base | ax[0])) / h;
        else if (p + 1 == side)
            out[k] = (g.cell(base | ax[p]) - g.cell(base | ax[p - 1])) / h;
        else
            out[k] = (g.cell(base | ax[p + 1]) - g.cell(base | ax[p - 1])) / (2.0 * h);
    });
    return out;
}

inline double det_small(const std::vector<std::vector<double>>& j,
                        std::size_t cell, int d) {
    const auto e = [&](int a, int b) {
        return j[static_cast<std::size_t>(a * d + b)][cell];
    };
    switch (d) {
        case 1:
            return e(0, 0);
        case 2:
            return e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
        default:
            return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
                   e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
                   e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
    }
}

}  // namespace detail

// det(Dg) dL at depth N with the Jacobian from central differences at cell
// centers; the reference for wedge_charge on smooth inputs.
inline GridCharge jacobian_density_charge(const FunctionTuple& g, int depth) {
    g.validate();
    const int d = g.dimension();
    if (g.resolution() < depth || g.resolution() < 2)
        throw std::invalid_argument("jacobian_density_charge: resolution too coarse");

    std::vector<std::vector<double>> jac(static_cast<std::size_t>(d) *
                                         static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            jac[static_cast<std::size_t>(a * d + b)] =
                detail::derivative_cells(g.components[static_cast<std::size_t>(a)], b);

    std::vector<double> det(g.components[0].cells().size());
    for (std::size_t cell = 0; cell < det.size(); ++cell)
        det[cell] = detail::det_small(jac, cell, d);
    return density_charge(SampledField(d, g.resolution(), std::move(det), 1.0, 0.0),
                          depth);
}

// Frozen empirical constant for the multilinear Hölder bound
// ||dg||_gamma <= C prod Lip^(gamma_i)(g_i); calibrated on random tuples.
inline constexpr double k_wedge_holder_constant = 8.0;

}  // namespace ych
