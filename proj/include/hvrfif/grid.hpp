#pragma once

// Knot-aligned sample grids and the grid-sampled vector fields (f1, f2)
// that represent fixed points.

#include "hvrfif/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace hvrfif {

using Vec2 = std::array<double, 2>;

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }
inline double norm1(const Vec2& a) { return std::fabs(a[0]) + std::fabs(a[1]); }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    Vec2 operator*(const Vec2& v) const { return {a * v[0] + b * v[1], c * v[0] + d * v[1]}; }
    /// Induced l1 norm: maximum absolute column sum.
    double norm1() const { return std::fmax(std::fabs(a) + std::fabs(c), std::fabs(b) + std::fabs(d)); }
};

/// Sorted 1D grid that contains every knot. Each knot interval receives a
/// uniform subdivision whose cell count is proportional to its length, so
/// uniform knots with (points - 1) divisible by n give a uniform grid.
struct KnotGrid {
    std::vector<double> nodes;
    std::vector<std::size_t> knot_nodes;  // node index of each knot

    std::size_t size() const { return nodes.size(); }

    /// Locates the cell [nodes[k], nodes[k+1]] containing x and the weight of the right node.
    std::pair<std::size_t, double> locate(double x) const {
        if (x <= nodes.front()) return {0, 0.0};
        if (x >= nodes.back()) return {nodes.size() - 2, 1.0};
        const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
        const std::size_t k = static_cast<std::size_t>(it - nodes.begin()) - 1;
        return {k, (x - nodes[k]) / (nodes[k + 1] - nodes[k])};
    }
};

inline KnotGrid make_knot_grid(const std::vector<double>& knots, std::size_t points) {
    const std::size_t n = knots.size() - 1;
    if (points < 2) throw ValidationError("grid needs at least 2 points");
    if (points < n + 1) throw ValidationError("grid has fewer points than knots");
    const std::size_t cells = points - 1;
    const double total = knots.back() - knots.front();
    KnotGrid g;
    g.nodes.reserve(points);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = knots[i], hi = knots[i + 1];
        const auto c = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(static_cast<double>(cells) * (hi - lo) / total)));
        g.knot_nodes.push_back(g.nodes.size());
        for (std::size_t k = 0; k < c; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(c);
            g.nodes.push_back((1.0 - t) * lo + t * hi);
        }
    }
    g.knot_nodes.push_back(g.nodes.size());
    g.nodes.push_back(knots.back());
    return g;
}

/// Grid-sampled (f1, f2) on [x_0, x_n] with piecewise-linear evaluation.
struct SampledField1D {
    KnotGrid grid;
    std::vector<Vec2> values;

    Vec2 operator()(double x) const {
        const auto [k, w] = grid.locate(x);
        return (1.0 - w) * values[k] + w * values[k + 1];
    }
};

/// Grid-sampled (f1, f2) on a rectangle with bilinear evaluation. Values are
/// stored row-major with y as the outer index: values[iy * nx + ix].
struct SampledField2D {
    KnotGrid gx, gy;
    std::vector<Vec2> values;

    std::size_t nx() const { return gx.size(); }
    std::size_t ny() const { return gy.size(); }
    const Vec2& at(std::size_t ix, std::size_t iy) const { return values[iy * gx.size() + ix]; }
    Vec2& at(std::size_t ix, std::size_t iy) { return values[iy * gx.size() + ix]; }

    Vec2 operator()(double x, double y) const {
        const auto [kx, wx] = gx.locate(x);
        const auto [ky, wy] = gy.locate(y);
        const Vec2 lo = (1.0 - wx) * at(kx, ky) + wx * at(kx + 1, ky);
        const Vec2 hi = (1.0 - wx) * at(kx, ky + 1) + wx * at(kx + 1, ky + 1);
        return (1.0 - wy) * lo + wy * hi;
    }
};

/// Sup over grid nodes of the l1 distance between two fields on the same grid.
inline double sup_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    if (a.size() != b.size()) throw ConsistencyError("fields live on different grids");
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double v = norm1(a[k] - b[k]);
        if (std::isnan(v)) return v;
        d = std::fmax(d, v);
    }
    return d;
}

}  // namespace hvrfif
