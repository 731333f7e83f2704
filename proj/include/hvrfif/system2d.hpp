#pragma once

// Bivariate recurrent system on a rectangular grid:
//   F_ij(p, z) = S_ij(L_ij(p)) * (z - l_ij(p)) + r_ij(L_ij(p)),
// where g is the global bilinear interpolant of the data, r_ij the Coons
// patch of g's traces on the region boundary and l_ij the Coons patch of g's
// traces on the boundary of the region's domain.

#include "hvrfif/affine.hpp"
#include "hvrfif/error.hpp"
#include "hvrfif/expr.hpp"
#include "hvrfif/grid.hpp"
#include "hvrfif/parallel.hpp"
#include "hvrfif/partition.hpp"
#include "hvrfif/random.hpp"
#include "hvrfif/system1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <tuple>
#include <vector>

namespace hvrfif {

inline Vec2 data_point(const HiddenDataset2D& d, std::size_t i, std::size_t j) { return {d.z(i, j), d.t(i, j)}; }

/// Global piecewise-bilinear interpolant of the extended data.
class BilinearInterpolant {
public:
    BilinearInterpolant() = default;
    explicit BilinearInterpolant(const HiddenDataset2D& data) : data_(&data) {}

    Vec2 operator()(double x, double y) const {
        const auto [i, u] = locate(data_->xs, x);
        const auto [j, v] = locate(data_->ys, y);
        const Vec2 lo = (1.0 - u) * data_point(*data_, i, j) + u * data_point(*data_, i + 1, j);
        const Vec2 hi = (1.0 - u) * data_point(*data_, i, j + 1) + u * data_point(*data_, i + 1, j + 1);
        return (1.0 - v) * lo + v * hi;
    }

private:
    static std::pair<std::size_t, double> locate(const std::vector<double>& k, double x) {
        if (x <= k.front()) return {0, 0.0};
        if (x >= k.back()) return {k.size() - 2, 1.0};
        const std::size_t c = static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), x) - k.begin()) - 1;
        return {c, (x - k[c]) / (k[c + 1] - k[c])};
    }

    const HiddenDataset2D* data_ = nullptr;
};

/// Transfinite (Coons) blend of g's boundary traces on a rectangle.
struct CoonsPatch {
    Interval rx, ry;

    template <class G>
    Vec2 operator()(const G& g, double x, double y) const {
        const double u = (x - rx.lo) / rx.length();
        const double v = (y - ry.lo) / ry.length();
        const Vec2 ruled = (1.0 - u) * g(rx.lo, y) + u * g(rx.hi, y) + (1.0 - v) * g(x, ry.lo) + v * g(x, ry.hi);
        const Vec2 corners = ((1.0 - u) * (1.0 - v)) * g(rx.lo, ry.lo) + ((1.0 - u) * v) * g(rx.lo, ry.hi) +
                             (u * (1.0 - v)) * g(rx.hi, ry.lo) + (u * v) * g(rx.hi, ry.hi);
        return ruled - corners;
    }
};

struct BlendFunctions2D {
    std::vector<CoonsPatch> region;  // r_ij, indexed by tau
    std::vector<CoonsPatch> domain;  // l_k, indexed by domain; l_ij = domain[gamma(i, j)]
};

inline BlendFunctions2D build_blends(const HiddenDataset2D& data, const Partition2D& p) {
    BlendFunctions2D b;
    for (const auto& d : p.domains) b.domain.push_back({{data.xs[d.sx], data.xs[d.ex]}, {data.ys[d.sy], data.ys[d.ey]}});
    for (std::size_t r = 0; r < p.regions(); ++r) {
        const std::size_t i = p.region_x(r), j = p.region_y(r);
        b.region.push_back({{data.xs[i], data.xs[i + 1]}, {data.ys[j], data.ys[j + 1]}});
    }
    return b;
}

class MapSystem2D {
public:
    MapSystem2D(HiddenDataset2D data, Partition2D partition, FactorSet factors)
        : data_(std::move(data)), partition_(std::move(partition)), factors_(std::move(factors)) {
        if (partition_.n != data_.nx() || partition_.m != data_.ny())
            throw ValidationError("partition grid does not match dataset");
        const std::size_t count = partition_.regions();
        if (factors_.size() != count)
            throw ValidationError("factor set has " + std::to_string(factors_.size()) + " quadruples for " +
                                  std::to_string(count) + " regions");
        blends_ = build_blends(data_, partition_);
        for (std::size_t r = 0; r < count; ++r) {
            const auto& dom = blends_.domain[partition_.gamma[r]];
            const auto& reg = blends_.region[r];
            const auto& o = partition_.orientations[r];
            maps_.push_back({make_L(dom.rx, reg.rx, o.x), make_L(dom.ry, reg.ry, o.y)});
        }
        offsets_.assign(count, Vec2{0.0, 0.0});
        corner_residual_ = measure_corner_residual();
        double scale = 1.0;
        for (std::size_t k = 0; k < data_.zs.size(); ++k)
            scale = std::fmax(scale, std::fabs(data_.zs[k]) + std::fabs(data_.ts[k]));
        if (!(corner_residual_ <= 1e-12 * scale))
            throw ConsistencyError("corner condition violated: residual " + std::to_string(corner_residual_));
    }

    const HiddenDataset2D& dataset() const { return data_; }
    const Partition2D& partition() const { return partition_; }
    const FactorSet& factors() const { return factors_; }
    const BlendFunctions2D& blends() const { return blends_; }
    const ProductMap& map(std::size_t r) const { return maps_[r]; }
    std::size_t regions() const { return partition_.regions(); }
    double corner_residual() const { return corner_residual_; }

    /// Global bilinear interpolant g; valid for the lifetime of this system.
    BilinearInterpolant g() const { return BilinearInterpolant(data_); }

    Vec2 g(double x, double y) const { return g()(x, y); }
    Vec2 r_blend(std::size_t r, double x, double y) const { return blends_.region[r](g(), x, y) + offsets_[r]; }
    Vec2 l_blend(std::size_t r, double x, double y) const {
        return blends_.domain[partition_.gamma[r]](g(), x, y);
    }

    const CoonsPatch& domain_rect(std::size_t r) const { return blends_.domain[partition_.gamma[r]]; }

    Mat2 factor_matrix(std::size_t r, double x, double y) const {
        const auto& f = factors_[r];
        return {f.s(x, y), f.s_prime(x, y), f.s_tilde(x, y), f.s_tilde_prime(x, y)};
    }

    std::array<double, 2> L(std::size_t r, double x, double y) const { return {maps_[r].x_map(x), maps_[r].y_map(y)}; }
    std::array<double, 2> L_inverse(std::size_t r, double x, double y) const {
        return {maps_[r].x_map.inverse(x), maps_[r].y_map.inverse(y)};
    }

    Vec2 q(std::size_t r, double x, double y) const {
        const auto p = L(r, x, y);
        return r_blend(r, p[0], p[1]) - factor_matrix(r, p[0], p[1]) * l_blend(r, x, y);
    }

    Vec2 apply_F(std::size_t r, double x, double y, const Vec2& z) const {
        const auto& d = domain_rect(r);
        if (!d.rx.contains(x, 1e-12 * d.rx.length()) || !d.ry.contains(y, 1e-12 * d.ry.length()))
            throw ValidationError("point outside the domain of map " + std::to_string(r));
        return unchecked_F(r, x, y, z);
    }

    Vec2 unchecked_F(std::size_t r, double x, double y, const Vec2& z) const {
        const auto p = L(r, x, y);
        return factor_matrix(r, p[0], p[1]) * (z - l_blend(r, x, y)) + r_blend(r, p[0], p[1]);
    }

    /// Copy whose r-blend of one region is shifted by delta. Only for exercising failure paths.
    MapSystem2D with_region_offset_for_testing(std::size_t r, Vec2 delta) const {
        MapSystem2D copy(*this);
        copy.offsets_.at(r) = copy.offsets_.at(r) + delta;
        return copy;
    }

    ValueBox value_box(double margin) const {
        return {detail::padded_range(data_.zs, margin), detail::padded_range(data_.ts, margin)};
    }

private:
    double measure_corner_residual() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < regions(); ++r) {
            const auto& d = partition_.domain_of(r);
            const std::size_t i = partition_.region_x(r), j = partition_.region_y(r);
            for (std::size_t a : {d.sx, d.ex}) {
                for (std::size_t b : {d.sy, d.ey}) {
                    const auto p = L(r, data_.xs[a], data_.ys[b]);
                    const std::size_t ta = std::fabs(p[0] - data_.xs[i]) < std::fabs(p[0] - data_.xs[i + 1]) ? i : i + 1;
                    const std::size_t tb = std::fabs(p[1] - data_.ys[j]) < std::fabs(p[1] - data_.ys[j + 1]) ? j : j + 1;
                    const Vec2 got = unchecked_F(r, data_.xs[a], data_.ys[b], data_point(data_, a, b));
                    worst = std::fmax(worst, norm1(got - data_point(data_, ta, tb)));
                }
            }
        }
        return worst;
    }

    HiddenDataset2D data_;
    Partition2D partition_;
    FactorSet factors_;
    BlendFunctions2D blends_;
    std::vector<ProductMap> maps_;
    std::vector<Vec2> offsets_;
    double corner_residual_ = 0.0;
};

struct BoundaryMatchReport {
    double max_residual_x_edges = 0.0;  // lines x = x_alpha
    double max_residual_y_edges = 0.0;  // lines y = y_beta
    std::size_t samples = 0;
    double threshold = 1e-9;

    double max_residual() const { return std::fmax(max_residual_x_edges, max_residual_y_edges); }
    bool pass() const { return max_residual() <= threshold; }
};

/// Samples F_ij(x_a, y, g(x_a, y)) - g(L_ij(x_a, y)) and the y analogue along
/// every domain edge line of every region.
inline BoundaryMatchReport boundary_matching_check(const MapSystem2D& sys, std::size_t samples_per_line = 1000) {
    BoundaryMatchReport rep;
    const auto g = sys.g();
    for (std::size_t r = 0; r < sys.regions(); ++r) {
        const auto& d = sys.domain_rect(r);
        for (std::size_t k = 0; k < samples_per_line; ++k) {
            const double t = samples_per_line == 1 ? 0.5 : static_cast<double>(k) / static_cast<double>(samples_per_line - 1);
            const double y = (1.0 - t) * d.ry.lo + t * d.ry.hi;
            const double x = (1.0 - t) * d.rx.lo + t * d.rx.hi;
            for (double xa : {d.rx.lo, d.rx.hi}) {
                const auto p = sys.L(r, xa, y);
                const double res = norm1(sys.unchecked_F(r, xa, y, g(xa, y)) - g(p[0], p[1]));
                rep.max_residual_x_edges = std::fmax(rep.max_residual_x_edges, std::isnan(res) ? INFINITY : res);
            }
            for (double yb : {d.ry.lo, d.ry.hi}) {
                const auto p = sys.L(r, x, yb);
                const double res = norm1(sys.unchecked_F(r, x, yb, g(x, yb)) - g(p[0], p[1]));
                rep.max_residual_y_edges = std::fmax(rep.max_residual_y_edges, std::isnan(res) ? INFINITY : res);
            }
            rep.samples += 4;
        }
    }
    return rep;
}

/// Builds the system and verifies the boundary conditions by sampling.
inline MapSystem2D build_system_2d(HiddenDataset2D data, Partition2D partition, FactorSet factors) {
    MapSystem2D sys(std::move(data), std::move(partition), std::move(factors));
    const auto check = boundary_matching_check(sys, 257);
    if (!check.pass())
        throw ConsistencyError("boundary matching conditions violated: residual " + std::to_string(check.max_residual()));
    return sys;
}

// ---------------------------------------------------------------------------
// Operator on a tensor grid

struct NodeStencil2D {
    std::size_t cx = 0, cy = 0;
    double wx = 0.0, wy = 0.0;
    Mat2 S;
    Vec2 offset{};
    bool pinned = false;
};

class SweepPlan2D {
public:
    SweepPlan2D(const MapSystem2D& sys, const KnotGrid& gx, const KnotGrid& gy)
        : gx_(gx), gy_(gy), stencils_(gx.size() * gy.size()) {
        const auto& data = sys.dataset();
        if (gx.knot_nodes.size() != data.xs.size() || gy.knot_nodes.size() != data.ys.size())
            throw ValidationError("grid does not match the dataset knots");
        const auto rx = region_index(gx), ry = region_index(gy);
        const auto knot_x = knot_mask(gx), knot_y = knot_mask(gy);
        const auto g = sys.g();
        const std::size_t nx = gx.size();
        parallel_chunks(gy.size(), 16, [&](std::size_t b, std::size_t e, std::size_t) {
            for (std::size_t iy = b; iy < e; ++iy) {
                for (std::size_t ix = 0; ix < nx; ++ix) {
                    auto& st = stencils_[iy * nx + ix];
                    const double x = gx.nodes[ix], y = gy.nodes[iy];
                    if (knot_x[ix] || knot_y[iy]) {
                        st.pinned = true;
                        st.offset = g(x, y);
                        continue;
                    }
                    const std::size_t r = tau(rx[ix], ry[iy], data.nx());
                    const auto u = sys.L_inverse(r, x, y);
                    std::tie(st.cx, st.wx) = gx.locate(u[0]);
                    std::tie(st.cy, st.wy) = gy.locate(u[1]);
                    st.S = sys.factor_matrix(r, x, y);
                    st.offset = sys.r_blend(r, x, y) - st.S * sys.l_blend(r, u[0], u[1]);
                }
            }
        });
    }

    const KnotGrid& gx() const { return gx_; }
    const KnotGrid& gy() const { return gy_; }

    void apply(const std::vector<Vec2>& in, std::vector<Vec2>& out) const {
        out.resize(in.size());
        const std::size_t nx = gx_.size();
        parallel_chunks(gy_.size(), 64, [&](std::size_t b, std::size_t e, std::size_t) {
            for (std::size_t k = b * nx; k < e * nx; ++k) {
                const auto& st = stencils_[k];
                if (st.pinned) {
                    out[k] = st.offset;
                    continue;
                }
                const std::size_t base = st.cy * nx + st.cx;
                const Vec2 lo = (1.0 - st.wx) * in[base] + st.wx * in[base + 1];
                const Vec2 hi = (1.0 - st.wx) * in[base + nx] + st.wx * in[base + nx + 1];
                out[k] = st.S * ((1.0 - st.wy) * lo + st.wy * hi) + st.offset;
            }
        });
    }

private:
    static std::vector<std::size_t> region_index(const KnotGrid& g) {
        std::vector<std::size_t> idx(g.size());
        for (std::size_t i = 0; i + 1 < g.knot_nodes.size(); ++i)
            for (std::size_t k = g.knot_nodes[i]; k < g.knot_nodes[i + 1]; ++k) idx[k] = i;
        idx.back() = g.knot_nodes.size() - 2;
        return idx;
    }

    static std::vector<char> knot_mask(const KnotGrid& g) {
        std::vector<char> mask(g.size(), 0);
        for (std::size_t k : g.knot_nodes) mask[k] = 1;
        return mask;
    }

    KnotGrid gx_, gy_;
    std::vector<NodeStencil2D> stencils_;
};

inline SampledField2D sample_g(const MapSystem2D& sys, const KnotGrid& gx, const KnotGrid& gy) {
    SampledField2D f{gx, gy, std::vector<Vec2>(gx.size() * gy.size())};
    const auto g = sys.g();
    for (std::size_t iy = 0; iy < gy.size(); ++iy)
        for (std::size_t ix = 0; ix < gx.size(); ++ix) f.at(ix, iy) = g(gx.nodes[ix], gy.nodes[iy]);
    return f;
}

/// (Th)(p) = F_ij(L_ij^{-1}(p), h(L_ij^{-1}(p))); knot gridlines pinned to g.
inline SampledField2D rb_apply_2d(const MapSystem2D& sys, const SampledField2D& h) {
    const SweepPlan2D plan(sys, h.gx, h.gy);
    SampledField2D out{h.gx, h.gy, {}};
    plan.apply(h.values, out.values);
    return out;
}

struct SolveOptions2D {
    std::size_t nx = 257, ny = 257;
    double tol = 1e-9;
    std::size_t max_iter = 20000;
};

struct SolveResult2D {
    SampledField2D field;
    std::size_t iterations = 0;
    double final_change = 0.0;
    bool converged = false;
};

/// Iterates from g itself, which satisfies the boundary conditions.
inline SolveResult2D solve_fixed_point_2d(const MapSystem2D& sys, const SolveOptions2D& opt = {}) {
    const auto& data = sys.dataset();
    if (opt.nx < 2 * (data.nx() + 1) || opt.ny < 2 * (data.ny() + 1))
        throw ValidationError("grid needs at least 2(n+1) x 2(m+1) points");
    if (!(opt.tol > 0.0)) throw ValidationError("tolerance must be positive");
    if (opt.max_iter == 0) throw ValidationError("max_iter must be positive");

    const KnotGrid gx = make_knot_grid(data.xs, opt.nx), gy = make_knot_grid(data.ys, opt.ny);
    const SweepPlan2D plan(sys, gx, gy);
    SolveResult2D res{sample_g(sys, gx, gy), 0, std::numeric_limits<double>::infinity(), false};
    std::vector<Vec2> next;
    while (res.iterations < opt.max_iter) {
        plan.apply(res.field.values, next);
        res.final_change = sup_distance(next, res.field.values);
        res.field.values.swap(next);
        ++res.iterations;
        if (!std::isfinite(res.final_change)) break;
        if (res.final_change <= opt.tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Certificate

using ContractionReport2D = ContractionReport;

/// L_L holds c_L, the largest component ratio over all product maps.
inline ContractionReport2D contraction_report_2d(const MapSystem2D& sys, double hidden_margin = 0.5,
                                                 const SamplingDensity& density = {}) {
    ContractionReport2D rep;
    for (std::size_t r = 0; r < sys.regions(); ++r) rep.L_L = std::fmax(rep.L_L, sys.map(r).ratio());
    detail::fill_factor_terms(rep, sys.factors(), [&](std::size_t r) { return sys.map(r).ratio(); });

    const std::size_t count = density.points_2d;
    if (count < 2) throw ValidationError("need at least 2 sample points per axis");
    std::vector<double> quotients(sys.regions(), 0.0);
    parallel_chunks(sys.regions(), 1, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t r = b; r < e; ++r) {
            const auto& d = sys.domain_rect(r);
            std::array<double, 2> lip{0.0, 0.0};
            std::vector<Vec2> prev(count), row(count);
            double prev_y = 0.0;
            for (std::size_t bj = 0; bj < count; ++bj) {
                const double y = detail::sample_coord(d.ry, bj, count);
                double prev_x = 0.0;
                for (std::size_t a = 0; a < count; ++a) {
                    const double x = detail::sample_coord(d.rx, a, count);
                    row[a] = sys.q(r, x, y);
                    for (int c = 0; c < 2; ++c) {
                        if (a > 0) lip[c] = std::fmax(lip[c], std::fabs(row[a][c] - row[a - 1][c]) / (x - prev_x));
                        if (bj > 0) lip[c] = std::fmax(lip[c], std::fabs(row[a][c] - prev[a][c]) / (y - prev_y));
                    }
                    prev_x = x;
                }
                std::swap(row, prev);
                prev_y = y;
            }
            quotients[r] = (lip[0] + lip[1]) * kSafetyFactor;
        }
    });
    for (double qv : quotients) rep.L_Q = std::fmax(rep.L_Q, qv);
    rep.alpha = sys.value_box(hidden_margin).alpha();
    detail::finish_report(rep);
    return rep;
}

// ---------------------------------------------------------------------------
// Chaos game

struct TrajectoryCloud2D {
    std::vector<std::array<double, 4>> points;  // (x, y, f1, f2)
    std::vector<std::size_t> regions;            // tau index of the map applied
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;
};

inline TrajectoryCloud2D chaos_game_2d(const MapSystem2D& sys, const ConnectionMatrix& m, std::size_t n_points,
                                       std::size_t burn_in, std::uint64_t seed) {
    detail::check_chaos_args(m, sys.regions(), n_points, burn_in);
    const auto cum = detail::cumulative_rows(m);
    Rng rng(seed);
    TrajectoryCloud2D cloud;
    cloud.seed = seed;
    cloud.burn_in = burn_in;
    cloud.points.reserve(n_points - burn_in);
    cloud.regions.reserve(n_points - burn_in);

    const auto& data = sys.dataset();
    double x = data.xs.front(), y = data.ys.front();
    Vec2 z = data_point(data, 0, 0);
    std::size_t s = 0;
    for (std::size_t step = 0; step < n_points; ++step) {
        const std::size_t t = detail::draw_next(cum, m, s, rng.uniform());
        const auto& d = sys.domain_rect(t);
        if (!d.rx.contains(x, 1e-12 * d.rx.length()) || !d.ry.contains(y, 1e-12 * d.ry.length()))
            throw ConsistencyError("map " + std::to_string(t) + " drawn for a point outside its domain");
        z = sys.unchecked_F(t, x, y, z);
        const auto p = sys.L(t, x, y);
        x = p[0];
        y = p[1];
        s = t;
        if (step >= burn_in) {
            cloud.points.push_back({x, y, z[0], z[1]});
            cloud.regions.push_back(t);
        }
    }
    return cloud;
}

}  // namespace hvrfif
