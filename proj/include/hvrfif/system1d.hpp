#pragma once

// One-variable recurrent system: W_i(x, y) = (L_i(x), F_i(x, y)) with
//   F_i(x, y) = S_i(L_i(x)) * (y - g_k(x)) + h_i(L_i(x)),
// where g_k is the linear interpolant of the domain endpoint data and h_i the
// linear interpolant of the region endpoint data (both vector valued).

#include "hvrfif/affine.hpp"
#include "hvrfif/error.hpp"
#include "hvrfif/expr.hpp"
#include "hvrfif/grid.hpp"
#include "hvrfif/parallel.hpp"
#include "hvrfif/partition.hpp"
#include "hvrfif/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace hvrfif {

/// Two-point linear interpolant written in Lagrange form, exact at both ends.
struct LinearBaseline {
    double x0 = 0.0, x1 = 1.0;
    Vec2 v0{}, v1{};

    Vec2 operator()(double x) const {
        const double w1 = (x - x0) / (x1 - x0);
        const double w0 = (x - x1) / (x0 - x1);
        return {w1 * v1[0] + w0 * v0[0], w1 * v1[1] + w0 * v0[1]};
    }
};

struct BaselineInterpolants1D {
    std::vector<LinearBaseline> domain;  // per domain k: through the domain endpoint data
    std::vector<LinearBaseline> region;  // per region i: through the region endpoint data
};

/// Axis-aligned box D of (visible, hidden) values used by the metric certificate.
struct ValueBox {
    Interval visible;
    Interval hidden;

    double alpha() const {
        return std::fmax(std::fabs(visible.lo), std::fabs(visible.hi)) +
               std::fmax(std::fabs(hidden.lo), std::fabs(hidden.hi));
    }
};

namespace detail {

// Each axis is padded by margin * range; a flat axis is padded by margin * max(1, |value|).
inline Interval padded_range(const std::vector<double>& v, double margin) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double range = *hi - *lo;
    const double pad = margin * (range > 0.0 ? range : std::fmax(1.0, std::fabs(*lo)));
    return {*lo - pad, *hi + pad};
}

}  // namespace detail

inline Vec2 data_point(const HiddenDataset1D& d, std::size_t i) { return {d.ys[i], d.zs[i]}; }

class MapSystem1D {
public:
    MapSystem1D(HiddenDataset1D data, Partition1D partition, FactorSet factors)
        : data_(std::move(data)), partition_(std::move(partition)), factors_(std::move(factors)) {
        const std::size_t n = data_.regions();
        if (partition_.n != n) throw ValidationError("partition region count does not match dataset");
        if (factors_.size() != n)
            throw ValidationError("factor set has " + std::to_string(factors_.size()) + " quadruples for " +
                                  std::to_string(n) + " regions");
        for (const auto& d : partition_.domains) {
            baselines_.domain.push_back(
                {data_.xs[d.start], data_.xs[d.end], data_point(data_, d.start), data_point(data_, d.end)});
        }
        for (std::size_t i = 0; i < n; ++i) {
            baselines_.region.push_back({data_.xs[i], data_.xs[i + 1], data_point(data_, i), data_point(data_, i + 1)});
            maps_.push_back(make_L(domain_interval(i), data_.region(i), partition_.orientations[i]));
        }
        endpoint_residual_ = measure_endpoint_residual();
        double scale = 1.0;
        for (std::size_t i = 0; i <= n; ++i) scale = std::fmax(scale, norm1(data_point(data_, i)));
        if (!(endpoint_residual_ <= 1e-12 * scale))
            throw ConsistencyError("endpoint condition violated: residual " + std::to_string(endpoint_residual_));
    }

    const HiddenDataset1D& dataset() const { return data_; }
    const Partition1D& partition() const { return partition_; }
    const FactorSet& factors() const { return factors_; }
    const BaselineInterpolants1D& baselines() const { return baselines_; }
    const AffineMap& map(std::size_t i) const { return maps_[i]; }
    std::size_t regions() const { return data_.regions(); }
    double endpoint_residual() const { return endpoint_residual_; }

    Interval domain_interval(std::size_t i) const {
        const auto& d = partition_.domain_of(i);
        return {data_.xs[d.start], data_.xs[d.end]};
    }

    /// Factor matrix of region i evaluated at a point of the region.
    Mat2 factor_matrix(std::size_t i, double region_x) const {
        const auto& f = factors_[i];
        return {f.s(region_x), f.s_prime(region_x), f.s_tilde(region_x), f.s_tilde_prime(region_x)};
    }

    /// Q_{i,k}(x) = -S_i(L(x)) g_k(x) + h_i(L(x)).
    Vec2 q(std::size_t i, double x) const {
        const double u = maps_[i](x);
        const Vec2 g = baselines_.domain[partition_.gamma[i]](x);
        const Vec2 sg = factor_matrix(i, u) * g;
        return baselines_.region[i](u) - sg;
    }

    /// F_{i,k}(x, y) for x in the domain of map i.
    Vec2 apply_F(std::size_t i, double x, const Vec2& ybar) const {
        const Interval dom = domain_interval(i);
        if (!dom.contains(x, 1e-12 * dom.length()))
            throw ValidationError("point " + std::to_string(x) + " outside the domain of map " + std::to_string(i));
        return unchecked_F(i, x, ybar);
    }

    Vec2 unchecked_F(std::size_t i, double x, const Vec2& ybar) const {
        const double u = maps_[i](x);
        const Vec2 g = baselines_.domain[partition_.gamma[i]](x);
        return factor_matrix(i, u) * (ybar - g) + baselines_.region[i](u);
    }

    ValueBox value_box(double margin) const {
        return {detail::padded_range(data_.ys, margin), detail::padded_range(data_.zs, margin)};
    }

private:
    double measure_endpoint_residual() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < regions(); ++i) {
            const auto& d = partition_.domain_of(i);
            for (std::size_t alpha : {d.start, d.end}) {
                const double target_x = maps_[i](data_.xs[alpha]);
                const std::size_t a = std::fabs(target_x - data_.xs[i]) < std::fabs(target_x - data_.xs[i + 1]) ? i
                                                                                                               : i + 1;
                const Vec2 got = unchecked_F(i, data_.xs[alpha], data_point(data_, alpha));
                worst = std::fmax(worst, norm1(got - data_point(data_, a)));
            }
        }
        return worst;
    }

    HiddenDataset1D data_;
    Partition1D partition_;
    FactorSet factors_;
    BaselineInterpolants1D baselines_;
    std::vector<AffineMap> maps_;
    double endpoint_residual_ = 0.0;
};

inline MapSystem1D build_system_1d(HiddenDataset1D data, Partition1D partition, FactorSet factors) {
    return MapSystem1D(std::move(data), std::move(partition), std::move(factors));
}

// ---------------------------------------------------------------------------
// Read-Bajraktarevic operator on a grid

/// Per-node coefficients of one operator application:
///   out = S * h(u) + offset,  with h(u) read from cell `cell` at weight `w`.
struct NodeStencil1D {
    std::size_t region = 0;
    std::size_t cell = 0;
    double w = 0.0;
    Mat2 S;
    Vec2 offset{};
    bool pinned = false;
};

/// Operator coefficients precomputed for one grid; the factors and baselines
/// at each node do not change between sweeps.
class SweepPlan1D {
public:
    SweepPlan1D(const MapSystem1D& sys, const KnotGrid& grid) : grid_(grid), stencils_(grid.size()) {
        const auto& data = sys.dataset();
        if (grid.knot_nodes.size() != data.xs.size()) throw ValidationError("grid does not match the dataset knots");
        std::vector<std::size_t> region_of(grid.size());
        for (std::size_t i = 0; i < sys.regions(); ++i)
            for (std::size_t k = grid.knot_nodes[i]; k < grid.knot_nodes[i + 1]; ++k) region_of[k] = i;
        region_of.back() = sys.regions() - 1;
        parallel_chunks(grid.size(), 4096, [&](std::size_t b, std::size_t e, std::size_t) {
            for (std::size_t k = b; k < e; ++k) {
                auto& st = stencils_[k];
                const std::size_t i = region_of[k];
                const double x = grid.nodes[k];
                const double u = sys.map(i).inverse(x);
                const auto [cell, w] = grid.locate(u);
                st.region = i;
                st.cell = cell;
                st.w = w;
                st.S = sys.factor_matrix(i, x);
                st.offset = sys.baselines().region[i](x) - st.S * sys.baselines().domain[sys.partition().gamma[i]](u);
            }
        });
        for (std::size_t j = 0; j < grid.knot_nodes.size(); ++j) {
            auto& st = stencils_[grid.knot_nodes[j]];
            st.pinned = true;
            st.S = Mat2{};
            st.offset = data_point(data, j);
        }
    }

    const KnotGrid& grid() const { return grid_; }
    const std::vector<NodeStencil1D>& stencils() const { return stencils_; }

    void apply(const std::vector<Vec2>& in, std::vector<Vec2>& out) const {
        out.resize(in.size());
        parallel_chunks(in.size(), 1 << 16, [&](std::size_t b, std::size_t e, std::size_t) {
            for (std::size_t k = b; k < e; ++k) {
                const auto& st = stencils_[k];
                if (st.pinned) {
                    out[k] = st.offset;
                    continue;
                }
                const Vec2 h = (1.0 - st.w) * in[st.cell] + st.w * in[st.cell + 1];
                out[k] = st.S * h + st.offset;
            }
        });
    }

private:
    KnotGrid grid_;
    std::vector<NodeStencil1D> stencils_;
};

/// One application of the operator: (Th)(x) = F_i(L_i^{-1}(x), h(L_i^{-1}(x))), knots pinned to data.
inline SampledField1D rb_apply(const MapSystem1D& sys, const SampledField1D& h) {
    const SweepPlan1D plan(sys, h.grid);
    SampledField1D out{h.grid, {}};
    plan.apply(h.values, out.values);
    return out;
}

/// Piecewise-linear interpolant of the data sampled on a grid.
inline SampledField1D piecewise_linear_field(const HiddenDataset1D& data, const KnotGrid& grid) {
    SampledField1D f{grid, std::vector<Vec2>(grid.size())};
    for (std::size_t i = 0; i < data.regions(); ++i) {
        const LinearBaseline line{data.xs[i], data.xs[i + 1], data_point(data, i), data_point(data, i + 1)};
        for (std::size_t k = grid.knot_nodes[i]; k < grid.knot_nodes[i + 1]; ++k) f.values[k] = line(grid.nodes[k]);
    }
    for (std::size_t j = 0; j < grid.knot_nodes.size(); ++j) f.values[grid.knot_nodes[j]] = data_point(data, j);
    return f;
}

struct SolveOptions1D {
    std::size_t grid_points = 4097;
    double tol = 1e-10;
    std::size_t max_iter = 20000;
};

struct SolveResult1D {
    SampledField1D field;
    std::size_t iterations = 0;
    double final_change = 0.0;
    bool converged = false;
};

/// Iterates the operator from the piecewise-linear data interpolant until the
/// sup-norm change is at most tol or max_iter sweeps have run.
inline SolveResult1D solve_fixed_point_1d(const MapSystem1D& sys, const SolveOptions1D& opt = {}) {
    const std::size_t n = sys.regions();
    if (opt.grid_points < 2 * (n + 1))
        throw ValidationError("grid needs at least 2(n+1) = " + std::to_string(2 * (n + 1)) + " points");
    if (!(opt.tol > 0.0)) throw ValidationError("tolerance must be positive");
    if (opt.max_iter == 0) throw ValidationError("max_iter must be positive");

    const KnotGrid grid = make_knot_grid(sys.dataset().xs, opt.grid_points);
    const SweepPlan1D plan(sys, grid);
    SolveResult1D res{piecewise_linear_field(sys.dataset(), grid), 0, std::numeric_limits<double>::infinity(), false};
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
// Contraction certificate

struct RegionSupTerms {
    double visible_column = 0.0;  // sup|s| + sup|s~|
    double hidden_column = 0.0;   // sup|s'| + sup|s~'|
};

struct ContractionReport {
    double S_bar = 0.0;        // from sampled sups (exact for constant factors)
    double S_bar_bound = 0.0;  // from the certified bounds (safety-inflated when estimated)
    std::vector<RegionSupTerms> region_terms;
    double max_factor_sup = 0.0;
    double L_L = 0.0;  // contraction ratio of the L maps (c_L in 2D)
    double L_S = 0.0;
    double L_Q = 0.0;
    double alpha = 0.0;
    double theta_max = 0.0;
    bool certified = false;
    BoundsMode bounds_mode = BoundsMode::Exact;

    /// Contraction constant of the W maps under rho_theta.
    double contraction_constant(double theta) const {
        return std::fmax(L_L + theta * (L_S * alpha + L_Q), S_bar_bound);
    }

    /// theta_max / 2, or 1 when the bound on theta is unlimited.
    double working_theta() const { return std::isfinite(theta_max) ? 0.5 * theta_max : 1.0; }
};

namespace detail {

inline BoundsMode weakest(BoundsMode a, BoundsMode b) {
    auto rank = [](BoundsMode m) { return m == BoundsMode::Exact ? 0 : m == BoundsMode::UserSupplied ? 1 : 2; };
    return rank(a) >= rank(b) ? a : b;
}

// Fills the factor-dependent part of a report; ratio(i) is the L contraction
// ratio used to scale Lipschitz constants of region i.
template <class Ratio>
void fill_factor_terms(ContractionReport& rep, const FactorSet& factors, Ratio ratio) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& f = factors[i];
        const RegionSupTerms t{f.s.sample_sup + f.s_tilde.sample_sup, f.s_prime.sample_sup + f.s_tilde_prime.sample_sup};
        rep.region_terms.push_back(t);
        rep.S_bar = std::fmax(rep.S_bar, std::fmax(t.visible_column, t.hidden_column));
        rep.S_bar_bound = std::fmax(rep.S_bar_bound, std::fmax(f.s.sup_est + f.s_tilde.sup_est,
                                                               f.s_prime.sup_est + f.s_tilde_prime.sup_est));
        for (const FactorFn* fn : f.all()) {
            rep.max_factor_sup = std::fmax(rep.max_factor_sup, fn->sup_est);
            rep.bounds_mode = weakest(rep.bounds_mode, fn->bounds_mode);
        }
        const double r = ratio(i);
        rep.L_S = std::fmax(rep.L_S, std::fmax((f.s.lip_est + f.s_tilde.lip_est) * r,
                                               (f.s_prime.lip_est + f.s_tilde_prime.lip_est) * r));
    }
}

inline void finish_report(ContractionReport& rep) {
    const double denom = rep.L_S * rep.alpha + rep.L_Q;
    rep.theta_max = denom > 0.0 ? (1.0 - rep.L_L) / denom : std::numeric_limits<double>::infinity();
    rep.certified = rep.S_bar < 1.0 && rep.S_bar_bound < 1.0 && rep.max_factor_sup < 1.0 && rep.theta_max > 0.0;
}

}  // namespace detail

/// Builds the metric-contraction certificate. Lipschitz constants of the Q
/// functions are sampled over each domain with the factor sampling density.
inline ContractionReport contraction_report_1d(const MapSystem1D& sys, double hidden_margin = 0.5,
                                               const SamplingDensity& density = {}) {
    ContractionReport rep;
    for (std::size_t i = 0; i < sys.regions(); ++i) rep.L_L = std::fmax(rep.L_L, sys.map(i).ratio());
    detail::fill_factor_terms(rep, sys.factors(), [&](std::size_t i) { return sys.map(i).ratio(); });
    for (std::size_t i = 0; i < sys.regions(); ++i) {
        const Interval dom = sys.domain_interval(i);
        const auto q0 = detail::sample_stats_1d([&](double x) { return sys.q(i, x)[0]; }, dom, density.points_1d);
        const auto q1 = detail::sample_stats_1d([&](double x) { return sys.q(i, x)[1]; }, dom, density.points_1d);
        rep.L_Q = std::fmax(rep.L_Q, (q0.max_quotient + q1.max_quotient) * kSafetyFactor);
    }
    rep.alpha = sys.value_box(hidden_margin).alpha();
    detail::finish_report(rep);
    return rep;
}

// ---------------------------------------------------------------------------
// Recurrent chaos game

struct TrajectoryCloud {
    std::vector<std::array<double, 3>> points;  // (x, f1, f2)
    std::vector<std::size_t> regions;
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;
};

namespace detail {

inline std::vector<double> cumulative_rows(const ConnectionMatrix& m) {
    const std::size_t n = m.size();
    std::vector<double> cum(n * n);
    for (std::size_t s = 0; s < n; ++s) {
        double acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            acc += m(s, t);
            cum[s * n + t] = acc;
        }
    }
    return cum;
}

// Draws t with probability m(s, t); falls back to the last positive entry when
// rounding leaves u above the final cumulative value.
inline std::size_t draw_next(const std::vector<double>& cum, const ConnectionMatrix& m, std::size_t s, double u) {
    const std::size_t n = m.size();
    const double target = u * cum[s * n + n - 1];
    std::size_t last = n;
    for (std::size_t t = 0; t < n; ++t) {
        if (m(s, t) <= 0.0) continue;
        last = t;
        if (target < cum[s * n + t]) return t;
    }
    if (last == n) throw ConsistencyError("connection matrix row " + std::to_string(s) + " is empty");
    return last;
}

inline void check_chaos_args(const ConnectionMatrix& m, std::size_t regions, std::size_t n_points,
                             std::size_t burn_in) {
    if (m.size() != regions) throw ValidationError("connection matrix size does not match region count");
    for (std::size_t s = 0; s < m.size(); ++s) {
        if (std::fabs(m.row_sum(s) - 1.0) > 1e-12) throw ValidationError("connection matrix is not row-stochastic");
        for (std::size_t t = 0; t < m.size(); ++t)
            if (m(s, t) < 0.0) throw ValidationError("connection matrix has a negative entry");
    }
    if (n_points <= burn_in) throw ValidationError("n_points must exceed burn_in");
}

}  // namespace detail

/// Markov walk over the maps starting from (x_0, y_0) in region 0. Returns the
/// n_points - burn_in points that follow the burn-in.
inline TrajectoryCloud chaos_game_1d(const MapSystem1D& sys, const ConnectionMatrix& m, std::size_t n_points,
                                     std::size_t burn_in, std::uint64_t seed) {
    detail::check_chaos_args(m, sys.regions(), n_points, burn_in);
    const auto cum = detail::cumulative_rows(m);
    Rng rng(seed);
    TrajectoryCloud cloud;
    cloud.seed = seed;
    cloud.burn_in = burn_in;
    cloud.points.reserve(n_points - burn_in);
    cloud.regions.reserve(n_points - burn_in);

    double x = sys.dataset().xs.front();
    Vec2 y = data_point(sys.dataset(), 0);
    std::size_t s = 0;
    for (std::size_t step = 0; step < n_points; ++step) {
        const std::size_t t = detail::draw_next(cum, m, s, rng.uniform());
        const Interval dom = sys.domain_interval(t);
        if (!dom.contains(x, 1e-12 * dom.length()))
            throw ConsistencyError("map " + std::to_string(t) + " drawn for a point outside its domain");
        y = sys.unchecked_F(t, x, y);
        x = sys.map(t)(x);
        s = t;
        if (step >= burn_in) {
            cloud.points.push_back({x, y[0], y[1]});
            cloud.regions.push_back(t);
        }
    }
    return cloud;
}

}  // namespace hvrfif
