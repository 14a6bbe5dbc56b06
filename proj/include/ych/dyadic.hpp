#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ych {

// ============================================================================
// Dyadic cube addressing
// ============================================================================
//
// Cubes of generation n in [0,1]^d are indexed by k in [0, 2^(n*d)). The
// index is read as n base-2^d digits, most significant first; the digit of
// refinement step j has d bits, bit i selecting the upper half along axis i.
// Children of (n, k) are (n+1, 2^d*k + l) for l = 0..2^d-1, so the leaf
// range of any cube is contiguous.

struct CubeId {
    int d = 1;             // ambient dimension
    int n = 0;             // generation (side length 2^-n)
    std::uint64_t k = 0;   // index within the generation

    friend bool operator==(const CubeId&, const CubeId&) = default;
};

inline void validate_cube(const CubeId& c) {
    if (c.d < 1 || c.n < 0 || c.n * c.d > 62)
        throw std::invalid_argument("CubeId: dimension/generation out of range");
    if (c.n * c.d < 64 && c.k >= (std::uint64_t{1} << (c.n * c.d)))
        throw std::invalid_argument("CubeId: index out of range");
}

// Per-axis integer position of the cube's lower corner, in units of 2^-n.
inline std::vector<std::uint64_t> cube_coords(const CubeId& c) {
    validate_cube(c);
    std::vector<std::uint64_t> pos(static_cast<std::size_t>(c.d), 0);
    for (int b = 0; b < c.n; ++b)
        for (int i = 0; i < c.d; ++i)
            pos[static_cast<std::size_t>(i)] |=
                ((c.k >> (b * c.d + i)) & 1u) << b;
    return pos;
}

inline CubeId cube_from_coords(int d, int n, std::span<const std::uint64_t> pos) {
    if (static_cast<int>(pos.size()) != d)
        throw std::invalid_argument("cube_from_coords: coordinate count != d");
    CubeId c{d, n, 0};
    for (int b = 0; b < n; ++b)
        for (int i = 0; i < d; ++i)
            c.k |= ((pos[static_cast<std::size_t>(i)] >> b) & 1u)
                   << (b * d + i);
    validate_cube(c);
    return c;
}

// Per-axis bit-spread tables: spread[i][p] is the contribution of coordinate
// p on axis i to the interleaved cube index. Encoding a full coordinate
// vector is then d table lookups.
inline std::vector<std::vector<std::uint64_t>> spread_tables(int d, int n) {
    std::vector<std::vector<std::uint64_t>> spread(static_cast<std::size_t>(d));
    const std::uint64_t side = std::uint64_t{1} << n;
    for (int i = 0; i < d; ++i) {
        auto& t = spread[static_cast<std::size_t>(i)];
        t.resize(side);
        for (std::uint64_t p = 0; p < side; ++p) {
            std::uint64_t s = 0;
            for (int b = 0; b < n; ++b)
                s |= ((p >> b) & 1u) << (b * d + i);
            t[p] = s;
        }
    }
    return spread;
}

// Visits every generation-n cell once, odometer-style, passing the cube index
// and the coordinate vector. Avoids per-cell decoding in hot loops.
template <class Fn>
inline void for_each_cell(int d, int n, Fn&& fn) {
    const auto spread = spread_tables(d, n);
    const std::uint64_t side = std::uint64_t{1} << n;
    const std::uint64_t total = std::uint64_t{1} << (n * d);
    std::vector<std::uint64_t> pos(static_cast<std::size_t>(d), 0);
    std::uint64_t k = 0;
    for (std::uint64_t count = 0; count < total; ++count) {
        fn(k, std::span<const std::uint64_t>(pos));
        for (int i = 0; i < d; ++i) {
            auto& p = pos[static_cast<std::size_t>(i)];
            k ^= spread[static_cast<std::size_t>(i)][p];
            if (++p < side) {
                k ^= spread[static_cast<std::size_t>(i)][p];
                break;
            }
            p = 0;
        }
    }
}

struct Box {
    std::vector<double> lo, hi;

    double side() const { return hi[0] - lo[0]; }
    double volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
        return v;
    }
    double diameter() const {
        double s = 0.0;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            const double e = hi[i] - lo[i];
            s += e * e;
        }
        return std::sqrt(s);
    }
    // Half-open (lower-closed) membership; the upper boundary of [0,1]^d is
    // included so that point evaluation is total on the cube.
    bool contains(std::span<const double> x) const {
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (x[i] < lo[i]) return false;
            if (x[i] > hi[i] || (x[i] == hi[i] && hi[i] < 1.0)) return false;
        }
        return true;
    }
};

inline Box cube_bounds(const CubeId& c) {
    const auto pos = cube_coords(c);
    const double h = std::ldexp(1.0, -c.n);
    Box b;
    b.lo.resize(pos.size());
    b.hi.resize(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        b.lo[i] = static_cast<double>(pos[i]) * h;
        b.hi[i] = b.lo[i] + h;
    }
    return b;
}

inline std::vector<CubeId> children(const CubeId& c) {
    validate_cube(c);
    std::vector<CubeId> out;
    const std::uint64_t arity = std::uint64_t{1} << c.d;
    out.reserve(arity);
    for (std::uint64_t l = 0; l < arity; ++l)
        out.push_back(CubeId{c.d, c.n + 1, arity * c.k + l});
    return out;
}

inline CubeId parent(const CubeId& c) {
    if (c.n == 0) throw std::invalid_argument("parent: root cube");
    return CubeId{c.d, c.n - 1, c.k >> c.d};
}

// ============================================================================
// Haar matrices A_d
// ============================================================================

class HaarMatrix {
public:
    explicit HaarMatrix(int d) : d_(d) {
        if (d < 1 || d > 6)
            throw std::invalid_argument("HaarMatrix: dimension must be in 1..6");
        const std::size_t m = order();
        e_.assign(m * m, 1);
        // block recursion: A_{d+1} = [[A_d, A_d], [A_d, -A_d]]
        for (std::size_t half = 1; half < m; half *= 2)
            for (std::size_t r = 0; r < half; ++r)
                for (std::size_t col = 0; col < half; ++col) {
                    const int v = e_[r * m + col];
                    e_[r * m + (col + half)] = v;
                    e_[(r + half) * m + col] = v;
                    e_[(r + half) * m + (col + half)] = -v;
                }
    }

    int dimension() const { return d_; }
    std::size_t order() const { return std::size_t{1} << d_; }
    int at(std::size_t r, std::size_t c) const { return e_[r * order() + c]; }

private:
    int d_;
    std::vector<int> e_;  // entries in {-1, +1}, row-major
};

inline HaarMatrix haar_matrix(int d) { return HaarMatrix(d); }

// Child cell of c containing x (half-open split along every axis).
// Returns 2^d if x lies outside c.
inline std::uint64_t child_slot_containing(const CubeId& c, std::span<const double> x) {
    const Box b = cube_bounds(c);
    if (!b.contains(x)) return std::uint64_t{1} << c.d;
    std::uint64_t slot = 0;
    for (int i = 0; i < c.d; ++i) {
        const double mid = 0.5 * (b.lo[static_cast<std::size_t>(i)] +
                                  b.hi[static_cast<std::size_t>(i)]);
        if (x[static_cast<std::size_t>(i)] >= mid) slot |= std::uint64_t{1} << i;
    }
    return slot;
}

// Pointwise value of the Haar function g_{n,k,r}; zero outside the cube.
inline double haar_value(const CubeId& c, int r, std::span<const double> x) {
    const std::uint64_t arity = std::uint64_t{1} << c.d;
    if (r < 1 || static_cast<std::uint64_t>(r) >= arity)
        throw std::invalid_argument("haar_value: type index must be in 1..2^d-1");
    const std::uint64_t slot = child_slot_containing(c, x);
    if (slot == arity) return 0.0;
    const HaarMatrix a(c.d);
    return std::exp2(0.5 * c.n * c.d) *
           static_cast<double>(a.at(static_cast<std::size_t>(r), slot));
}

// ============================================================================
// Dyadic figures
// ============================================================================
//
// Finite unions of dyadic cubes, stored as generation-N cells (sorted,
// deduplicated). Coarser cubes are expanded to leaves on insertion, which
// keeps the perimeter exact by face counting.

class DyadicFigure {
public:
    DyadicFigure(int d, int resolution)
        : d_(d), res_(resolution) {
        if (d < 1 || resolution < 0 || d * resolution > 62)
            throw std::invalid_argument("DyadicFigure: bad dimension/resolution");
    }

    DyadicFigure(int d, int resolution, std::vector<std::uint64_t> cells)
        : DyadicFigure(d, resolution) {
        cells_ = std::move(cells);
        canonicalize();
    }

    static DyadicFigure full_cube(int d, int resolution) {
        DyadicFigure f(d, resolution);
        f.add_cube(CubeId{d, 0, 0});
        return f;
    }

    int dimension() const { return d_; }
    int resolution() const { return res_; }
    const std::vector<std::uint64_t>& cells() const { return cells_; }
    bool empty() const { return cells_.empty(); }

    void add_cell(std::uint64_t cell) {
        cells_.push_back(cell);
        canonicalize();
    }

    // Inserts a whole dyadic cube (generation <= resolution), expanded to cells.
    void add_cube(const CubeId& c) {
        if (c.d != d_ || c.n > res_)
            throw std::invalid_argument("DyadicFigure::add_cube: incompatible cube");
        const int shift = (res_ - c.n) * d_;
        const std::uint64_t first = c.k << shift;
        const std::uint64_t count = std::uint64_t{1} << shift;
        cells_.reserve(cells_.size() + count);
        for (std::uint64_t i = 0; i < count; ++i) cells_.push_back(first + i);
        canonicalize();
    }

    bool contains_cell(std::uint64_t cell) const {
        return std::binary_search(cells_.begin(), cells_.end(), cell);
    }

private:
    void canonicalize() {
        std::sort(cells_.begin(), cells_.end());
        cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
        const std::uint64_t limit = std::uint64_t{1} << (d_ * res_);
        if (!cells_.empty() && cells_.back() >= limit)
            throw std::invalid_argument("DyadicFigure: cell index out of range");
    }

    int d_;
    int res_;
    std::vector<std::uint64_t> cells_;
};

struct FigureMeasures {
    double volume = 0.0;
    double perimeter = 0.0;
    double diameter = 0.0;
    double isop = 0.0;  // |F|^((d-1)/d) / ||F||
    double reg = 0.0;   // |F| / (||F|| * diam F)
    bool defined = false;  // false for the empty figure
};

inline FigureMeasures figure_measures(const DyadicFigure& f) {
    FigureMeasures m;
    if (f.empty()) return m;

    const int d = f.dimension();
    const int res = f.resolution();
    const double h = std::ldexp(1.0, -res);
    const auto& cells = f.cells();
    const std::uint64_t side = std::uint64_t{1} << res;

    m.volume = static_cast<double>(cells.size()) * std::pow(h, d);

    // Exposed-face counting: a generation-N face is exposed when the
    // neighbouring cell across it is missing (or outside the unit cube).
    std::uint64_t exposed = 0;
    std::vector<std::uint64_t> pos;
    for (std::uint64_t cell : cells) {
        pos = cube_coords(CubeId{d, res, cell});
        for (int i = 0; i < d; ++i) {
            for (int dir = -1; dir <= 1; dir += 2) {
                const std::uint64_t p = pos[static_cast<std::size_t>(i)];
                if ((dir < 0 && p == 0) || (dir > 0 && p + 1 == side)) {
                    ++exposed;
                    continue;
                }
                auto np = pos;
                np[static_cast<std::size_t>(i)] = p + static_cast<std::uint64_t>(dir);
                if (!f.contains_cell(cube_from_coords(d, res, np).k)) ++exposed;
            }
        }
    }
    m.perimeter = static_cast<double>(exposed) * std::pow(h, d - 1);

    // Diameter: max distance between corners, over all cell pairs. Two cells
    // with integer coords a, b have farthest corners at per-axis offset
    // |a_i - b_i| + 1.
    std::vector<std::vector<std::uint64_t>> coords(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        coords[i] = cube_coords(CubeId{d, res, cells[i]});
    double best = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i; j < cells.size(); ++j) {
            double s = 0.0;
            for (int ax = 0; ax < d; ++ax) {
                const double delta =
                    static_cast<double>(coords[i][static_cast<std::size_t>(ax)] >
                                                coords[j][static_cast<std::size_t>(ax)]
                                            ? coords[i][static_cast<std::size_t>(ax)] -
                                                  coords[j][static_cast<std::size_t>(ax)]
                                            : coords[j][static_cast<std::size_t>(ax)] -
                                                  coords[i][static_cast<std::size_t>(ax)]) +
                    1.0;
                s += delta * delta;
            }
            best = std::max(best, s);
        }
    m.diameter = std::sqrt(best) * h;

    m.isop = std::pow(m.volume, static_cast<double>(d - 1) / d) / m.perimeter;
    m.reg = m.volume / (m.perimeter * m.diameter);
    m.defined = true;
    return m;
}

}  // namespace ych
