#pragma once

#include "ych/dyadic.hpp"
#include "ych/summation.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ych {

// A scalar function on [0,1]^d given by cell averages on the generation-M
// dyadic grid, together with a Hölder exponent beta and an estimated Hölder
// constant. Cells are stored in dyadic index order, matching GridCharge
// leaves.
class SampledField {
public:
    SampledField(int d, int resolution, std::vector<double> cells, double beta,
                 double lip_beta)
        : d_(d), res_(resolution), cells_(std::move(cells)), beta_(beta),
          lip_beta_(lip_beta) {
        if (d < 1 || resolution < 0 || d * resolution > 62)
            throw std::invalid_argument("SampledField: bad dimension/resolution");
        if (cells_.size() != (std::size_t{1} << (d * resolution)))
            throw std::invalid_argument("SampledField: cell count != 2^(d*M)");
        if (beta_ <= 0.0 || beta_ > 1.0)
            throw std::invalid_argument("SampledField: beta must be in (0,1]");
        if (lip_beta_ < 0.0)
            throw std::invalid_argument("SampledField: negative Hölder constant");
    }

    // Builds the field by sampling fn at cell centers (the exact cell average
    // for affine fn) and estimating the Hölder constant over dyadic offsets.
    template <class Fn>
    static SampledField from_function(int d, int resolution, double beta, Fn&& fn) {
        std::vector<double> cells(std::size_t{1} << (d * resolution));
        const double h = std::ldexp(1.0, -resolution);
        std::vector<double> x(static_cast<std::size_t>(d));
        for_each_cell(d, resolution,
                      [&](std::uint64_t k, std::span<const std::uint64_t> pos) {
                          for (int i = 0; i < d; ++i)
                              x[static_cast<std::size_t>(i)] =
                                  (static_cast<double>(pos[static_cast<std::size_t>(i)]) + 0.5) * h;
                          cells[k] = fn(std::span<const double>(x));
                      });
        SampledField f(d, resolution, std::move(cells), beta, 0.0);
        f.lip_beta_ = f.estimate_holder_constant(beta);
        return f;
    }

    static SampledField constant(int d, int resolution, double value) {
        return SampledField(d, resolution,
                            std::vector<double>(std::size_t{1} << (d * resolution), value),
                            1.0, 0.0);
    }

    int dimension() const { return d_; }
    int resolution() const { return res_; }
    double beta() const { return beta_; }
    double lip_beta() const { return lip_beta_; }
    std::span<const double> cells() const { return cells_; }
    double cell(std::uint64_t k) const { return cells_[k]; }

    SampledField with_holder(double beta, double lip_beta) const {
        return SampledField(d_, res_, cells_, beta, lip_beta);
    }

    // Value at a point = average of the (half-open) cell containing it.
    double value_at(std::span<const double> x) const {
        const std::uint64_t side = std::uint64_t{1} << res_;
        std::vector<std::uint64_t> pos(static_cast<std::size_t>(d_));
        for (int i = 0; i < d_; ++i) {
            const double xi = x[static_cast<std::size_t>(i)];
            if (xi < 0.0 || xi > 1.0)
                throw std::invalid_argument("SampledField::value_at: point outside cube");
            auto p = static_cast<std::uint64_t>(std::floor(xi * static_cast<double>(side)));
            if (p >= side) p = side - 1;
            pos[static_cast<std::size_t>(i)] = p;
        }
        return cells_[cube_from_coords(d_, res_, pos).k];
    }

    // Exact integral of the piecewise-constant field over a dyadic cube
    // (generation <= M).
    double integral_over(const CubeId& c) const {
        return block_sum(c) * std::ldexp(1.0, -res_ * d_);
    }

    double mean_over(const CubeId& c) const {
        const int shift = (res_ - c.n) * d_;
        return block_sum(c) / static_cast<double>(std::uint64_t{1} << shift);
    }

    double integral() const { return integral_over(CubeId{d_, 0, 0}); }

    // ------------------------------------------------------------------
    // Face traces (used by the boundary recursion for wedge charges)
    // ------------------------------------------------------------------

    // Trace on the grid hyperplane x_axis = t * 2^-M, reconstructed linearly
    // from the two adjacent cell layers (one-sided extrapolation at t = 0 and
    // t = 2^M; exact for fields affine in x_axis). Result is a (d-1)-field
    // over the projected cube; the Hölder exponent is preserved and the
    // constant re-estimated.
    SampledField slice_plane(int axis, std::uint64_t t) const {
        if (d_ < 2) throw std::invalid_argument("slice_plane: need d >= 2");
        if (axis < 0 || axis >= d_) throw std::invalid_argument("slice_plane: bad axis");
        if (res_ < 1) throw std::invalid_argument("slice_plane: need M >= 1");
        const std::uint64_t side = std::uint64_t{1} << res_;
        if (t > side) throw std::invalid_argument("slice_plane: plane off grid");

        const auto spread = spread_tables(d_, res_);
        const auto& ax = spread[static_cast<std::size_t>(axis)];
        std::vector<double> out(std::size_t{1} << ((d_ - 1) * res_));
        for_each_cell(d_ - 1, res_,
                      [&](std::uint64_t q, std::span<const std::uint64_t> sub) {
                          std::uint64_t base = 0;
                          for (int i = 0, j = 0; i < d_; ++i) {
                              if (i == axis) continue;
                              base |= spread[static_cast<std::size_t>(i)]
                                            [sub[static_cast<std::size_t>(j)]];
                              ++j;
                          }
                          const auto layer = [&](std::uint64_t li) {
                              return cells_[base | ax[li]];
                          };
                          if (t == 0)
                              out[q] = 1.5 * layer(0) - 0.5 * layer(1);
                          else if (t == side)
                              out[q] = 1.5 * layer(side - 1) - 0.5 * layer(side - 2);
                          else
                              out[q] = 0.5 * (layer(t - 1) + layer(t));
                      });
        SampledField f(d_ - 1, res_, std::move(out), beta_, 0.0);
        f.lip_beta_ = f.estimate_holder_constant(beta_);
        return f;
    }

    // Symmetric point reconstruction: along axes where x sits exactly on a
    // grid plane the two adjacent cell layers are averaged (one-sided
    // extrapolation at the boundary); elsewhere the containing cell is used.
    // Exact for affine fields at every point, unlike the half-open value_at.
    double reconstruct_at(std::span<const double> x) const {
        const std::uint64_t side = std::uint64_t{1} << res_;
        struct Tap {
            std::uint64_t layer;
            double weight;
        };
        std::vector<std::array<Tap, 2>> stencil(static_cast<std::size_t>(d_));
        std::vector<int> taps(static_cast<std::size_t>(d_), 1);
        for (int i = 0; i < d_; ++i) {
            const double xi = x[static_cast<std::size_t>(i)];
            if (xi < 0.0 || xi > 1.0)
                throw std::invalid_argument("reconstruct_at: point outside cube");
            const double scaled = xi * static_cast<double>(side);
            const double rounded = std::round(scaled);
            auto& st = stencil[static_cast<std::size_t>(i)];
            if (std::abs(scaled - rounded) < 1e-12 && res_ >= 1) {
                const auto t = static_cast<std::uint64_t>(rounded);
                taps[static_cast<std::size_t>(i)] = 2;
                if (t == 0)
                    st = {Tap{0, 1.5}, Tap{1, -0.5}};
                else if (t >= side)
                    st = {Tap{side - 1, 1.5}, Tap{side - 2, -0.5}};
                else
                    st = {Tap{t - 1, 0.5}, Tap{t, 0.5}};
            } else {
                auto p = static_cast<std::uint64_t>(std::floor(scaled));
                if (p >= side) p = side - 1;
                st = {Tap{p, 1.0}, Tap{0, 0.0}};
            }
        }
        const auto spread = spread_tables(d_, res_);
        double total = 0.0;
        const int combos = 1 << d_;
        for (int mask = 0; mask < combos; ++mask) {
            double weight = 1.0;
            std::uint64_t idx = 0;
            bool live = true;
            for (int i = 0; i < d_ && live; ++i) {
                const int pick = (mask >> i) & 1;
                if (pick >= taps[static_cast<std::size_t>(i)]) {
                    live = false;
                    break;
                }
                const auto& tap = stencil[static_cast<std::size_t>(i)]
                                         [static_cast<std::size_t>(pick)];
                weight *= tap.weight;
                idx |= spread[static_cast<std::size_t>(i)][tap.layer];
            }
            if (live) total += weight * cells_[idx];
        }
        return total;
    }

    // 1-d only: value at grid point t * 2^-M by the same linear reconstruction.
    double point_value(std::uint64_t t) const {
        if (d_ != 1) throw std::invalid_argument("point_value: 1-d fields only");
        if (res_ < 1) throw std::invalid_argument("point_value: need M >= 1");
        const std::uint64_t side = std::uint64_t{1} << res_;
        if (t > side) throw std::invalid_argument("point_value: off grid");
        if (t == 0) return 1.5 * cells_[0] - 0.5 * cells_[1];
        if (t == side) return 1.5 * cells_[side - 1] - 0.5 * cells_[side - 2];
        return 0.5 * (cells_[t - 1] + cells_[t]);
    }

    // sup over cell pairs at dyadic offsets (axis-aligned and diagonal) of
    // |df| / dist^beta; a deterministic underestimate of Lip^beta that
    // tightens as M grows.
    double estimate_holder_constant(double beta) const {
        const std::uint64_t side = std::uint64_t{1} << res_;
        if (side < 2) return 0.0;
        const double h = std::ldexp(1.0, -res_);
        const auto spread = spread_tables(d_, res_);
        double best = 0.0;
        for (std::uint64_t step = 1; step < side; step *= 2) {
            for (int dir = 0; dir <= d_; ++dir) {
                const bool diagonal = dir == d_;
                const double dist =
                    static_cast<double>(step) * h * (diagonal ? std::sqrt(d_) : 1.0);
                const double scale = std::pow(dist, -beta);
                double local = 0.0;
                for_each_cell(d_, res_,
                              [&](std::uint64_t k, std::span<const std::uint64_t> pos) {
                                  std::uint64_t k2 = k;
                                  for (int i = 0; i < d_; ++i) {
                                      if (!diagonal && i != dir) continue;
                                      const std::uint64_t p =
                                          pos[static_cast<std::size_t>(i)];
                                      if (p + step >= side) return;
                                      k2 ^= spread[static_cast<std::size_t>(i)][p] ^
                                            spread[static_cast<std::size_t>(i)][p + step];
                                  }
                                  local = std::max(local,
                                                   std::abs(cells_[k2] - cells_[k]));
                              });
                best = std::max(best, local * scale);
            }
        }
        return best;
    }

private:
    double block_sum(const CubeId& c) const {
        if (c.d != d_ || c.n > res_)
            throw std::invalid_argument("SampledField: incompatible cube");
        const int shift = (res_ - c.n) * d_;
        return dyadic_block_sum(
            std::span<const double>(cells_).subspan(c.k << shift,
                                                    std::size_t{1} << shift),
            d_);
    }

    int d_;
    int res_;
    std::vector<double> cells_;
    double beta_;
    double lip_beta_;
};

}  // namespace ych
