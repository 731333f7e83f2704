#pragma once

// Residual checks over solved fields, operators and attractor samples. Each
// check produces a VerificationReport whose pass flag is residual <= threshold
// (and any stated precondition).

#include "hvrfif/grid.hpp"
#include "hvrfif/random.hpp"
#include "hvrfif/system1d.hpp"
#include "hvrfif/system2d.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace hvrfif {

enum class CheckStatus {
    Required,       // counts toward the overall verdict
    Informational,  // computed, never fails a run (uncertified systems)
    NotApplicable,  // skipped
};

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Required: return "required";
        case CheckStatus::Informational: return "informational";
        case CheckStatus::NotApplicable: return "not_applicable";
    }
    return "?";
}

struct VerificationReport {
    std::string name;
    double max_residual = 0.0;
    double threshold = 0.0;
    std::size_t samples = 0;
    bool pass = false;
    CheckStatus status = CheckStatus::Required;
    std::vector<std::pair<std::string, double>> metadata;
    std::string note;

    bool failed() const { return status == CheckStatus::Required && !pass; }

    double meta(const std::string& key) const {
        for (const auto& [k, v] : metadata)
            if (k == key) return v;
        return std::numeric_limits<double>::quiet_NaN();
    }
};

namespace detail {

inline VerificationReport make_report(std::string name, double residual, double threshold, std::size_t samples,
                                      bool precondition = true) {
    VerificationReport r;
    r.name = std::move(name);
    r.max_residual = residual;
    r.threshold = threshold;
    r.samples = samples;
    r.pass = precondition && residual <= threshold;
    return r;
}

inline void accumulate(double& worst, double v) {
    if (std::isnan(v)) worst = std::numeric_limits<double>::infinity();
    else worst = std::fmax(worst, v);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Knot interpolation

inline VerificationReport knot_interpolation_residual(const SampledField1D& field, const HiddenDataset1D& data,
                                                      double threshold = 1e-9) {
    double worst = 0.0;
    for (std::size_t i = 0; i < data.xs.size(); ++i) {
        const Vec2 v = field(data.xs[i]);
        detail::accumulate(worst, std::fmax(std::fabs(v[0] - data.ys[i]), std::fabs(v[1] - data.zs[i])));
    }
    return detail::make_report("knot_interpolation", worst, threshold, data.xs.size());
}

inline VerificationReport knot_interpolation_residual(const SampledField2D& field, const HiddenDataset2D& data,
                                                      double threshold = 1e-9) {
    double worst = 0.0;
    for (std::size_t i = 0; i < data.xs.size(); ++i) {
        for (std::size_t j = 0; j < data.ys.size(); ++j) {
            const Vec2 v = field(data.xs[i], data.ys[j]);
            detail::accumulate(worst, std::fmax(std::fabs(v[0] - data.z(i, j)), std::fabs(v[1] - data.t(i, j))));
        }
    }
    return detail::make_report("knot_interpolation", worst, threshold, data.xs.size() * data.ys.size());
}

// ---------------------------------------------------------------------------
// Functional equation f = F(L^{-1}(x), f(L^{-1}(x)))
//
// The solver's fixed point lives in the piecewise-linear class on its grid, so
// the bound tol/(1 - S) applies at grid nodes; those are what the residual
// samples. The off-grid residual (interpolation error) is reported as metadata.

namespace detail {

inline double fe_threshold(const ContractionReport& rep, double tol) {
    return rep.S_bar_bound < 1.0 ? 1.1 * tol / (1.0 - rep.S_bar_bound) : std::numeric_limits<double>::infinity();
}

inline std::size_t region_of_knot_interval(const std::vector<double>& knots, double x) {
    const auto it = std::upper_bound(knots.begin(), knots.end(), x);
    const auto idx = static_cast<std::size_t>(it - knots.begin());
    return std::min(knots.size() - 2, idx == 0 ? 0 : idx - 1);
}

}  // namespace detail

inline VerificationReport functional_equation_residual(const MapSystem1D& sys, const SolveResult1D& solved,
                                                       const ContractionReport& rep, double tol,
                                                       std::size_t samples = 10000, std::uint64_t seed = 7) {
    const auto& f = solved.field;
    const auto& xs = sys.dataset().xs;
    auto residual_at = [&](double x) {
        const std::size_t i = detail::region_of_knot_interval(xs, x);
        const double u = sys.map(i).inverse(x);
        return norm1(f(x) - sys.unchecked_F(i, u, f(u)));
    };
    Rng rng(seed);
    double worst = 0.0, offgrid = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        detail::accumulate(worst, residual_at(f.grid.nodes[rng.below(f.grid.size())]));
        detail::accumulate(offgrid, residual_at(rng.uniform(xs.front(), xs.back())));
    }
    auto r = detail::make_report("functional_equation", worst, detail::fe_threshold(rep, tol), samples,
                                 solved.converged);
    if (!rep.certified) r.status = CheckStatus::Informational;
    if (!solved.converged) r.note = "solver did not converge";
    r.metadata = {{"grid_points", static_cast<double>(f.grid.size())},
                  {"seed", static_cast<double>(seed)},
                  {"converged", solved.converged ? 1.0 : 0.0},
                  {"offgrid_max_residual", offgrid}};
    return r;
}

inline VerificationReport functional_equation_residual(const MapSystem2D& sys, const SolveResult2D& solved,
                                                       const ContractionReport2D& rep, double tol,
                                                       std::size_t samples = 10000, std::uint64_t seed = 7) {
    const auto& f = solved.field;
    const auto& data = sys.dataset();
    auto residual_at = [&](double x, double y) {
        const std::size_t i = detail::region_of_knot_interval(data.xs, x);
        const std::size_t j = detail::region_of_knot_interval(data.ys, y);
        const std::size_t r = tau(i, j, data.nx());
        const auto u = sys.L_inverse(r, x, y);
        return norm1(f(x, y) - sys.unchecked_F(r, u[0], u[1], f(u[0], u[1])));
    };
    Rng rng(seed);
    double worst = 0.0, offgrid = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double gx = f.gx.nodes[rng.below(f.gx.size())];
        const double gy = f.gy.nodes[rng.below(f.gy.size())];
        detail::accumulate(worst, residual_at(gx, gy));
        const double ox = rng.uniform(data.xs.front(), data.xs.back());
        const double oy = rng.uniform(data.ys.front(), data.ys.back());
        detail::accumulate(offgrid, residual_at(ox, oy));
    }
    auto r = detail::make_report("functional_equation", worst, detail::fe_threshold(rep, tol), samples,
                                 solved.converged);
    if (!rep.certified) r.status = CheckStatus::Informational;
    if (!solved.converged) r.note = "solver did not converge";
    r.metadata = {{"grid_nx", static_cast<double>(f.gx.size())},
                  {"grid_ny", static_cast<double>(f.gy.size())},
                  {"seed", static_cast<double>(seed)},
                  {"converged", solved.converged ? 1.0 : 0.0},
                  {"offgrid_max_residual", offgrid}};
    return r;
}

// ---------------------------------------------------------------------------
// Empirical operator contraction

inline VerificationReport empirical_contraction_ratio(const MapSystem1D& sys, const ContractionReport& rep,
                                                      std::size_t pairs = 20, std::uint64_t seed = 11,
                                                      std::size_t grid_points = 4097, double margin = 0.5) {
    const KnotGrid grid = make_knot_grid(sys.dataset().xs, grid_points);
    const SweepPlan1D plan(sys, grid);
    const ValueBox box = sys.value_box(margin);
    Rng rng(seed);
    std::vector<Vec2> h(grid.size()), hp(grid.size()), th, thp;
    double worst = 0.0;
    for (std::size_t p = 0; p < pairs; ++p) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            h[k] = {rng.uniform(box.visible.lo, box.visible.hi), rng.uniform(box.hidden.lo, box.hidden.hi)};
            hp[k] = {rng.uniform(box.visible.lo, box.visible.hi), rng.uniform(box.hidden.lo, box.hidden.hi)};
        }
        plan.apply(h, th);
        plan.apply(hp, thp);
        const double denom = sup_distance(h, hp);
        if (denom > 0.0) detail::accumulate(worst, sup_distance(th, thp) / denom);
    }
    auto r = detail::make_report("empirical_contraction_ratio", worst, rep.S_bar_bound + 1e-9, pairs);
    if (!rep.certified) r.status = CheckStatus::Informational;
    r.metadata = {{"grid_points", static_cast<double>(grid.size())}, {"seed", static_cast<double>(seed)}};
    return r;
}

inline VerificationReport empirical_contraction_ratio(const MapSystem2D& sys, const ContractionReport2D& rep,
                                                      std::size_t pairs = 20, std::uint64_t seed = 11,
                                                      std::size_t nx = 129, std::size_t ny = 129,
                                                      double margin = 0.5) {
    const auto& data = sys.dataset();
    const KnotGrid gx = make_knot_grid(data.xs, nx), gy = make_knot_grid(data.ys, ny);
    const SweepPlan2D plan(sys, gx, gy);
    const ValueBox box = sys.value_box(margin);
    Rng rng(seed);
    const std::size_t count = gx.size() * gy.size();
    std::vector<Vec2> h(count), hp(count), th, thp;
    double worst = 0.0;
    for (std::size_t p = 0; p < pairs; ++p) {
        for (std::size_t k = 0; k < count; ++k) {
            h[k] = {rng.uniform(box.visible.lo, box.visible.hi), rng.uniform(box.hidden.lo, box.hidden.hi)};
            hp[k] = {rng.uniform(box.visible.lo, box.visible.hi), rng.uniform(box.hidden.lo, box.hidden.hi)};
        }
        plan.apply(h, th);
        plan.apply(hp, thp);
        const double denom = sup_distance(h, hp);
        if (denom > 0.0) detail::accumulate(worst, sup_distance(th, thp) / denom);
    }
    auto r = detail::make_report("empirical_contraction_ratio", worst, rep.S_bar_bound + 1e-9, pairs);
    if (!rep.certified) r.status = CheckStatus::Informational;
    r.metadata = {{"grid_nx", static_cast<double>(gx.size())},
                  {"grid_ny", static_cast<double>(gy.size())},
                  {"seed", static_cast<double>(seed)}};
    return r;
}

// ---------------------------------------------------------------------------
// Metric contraction of the W maps under rho_theta = |dx|_1 + theta * |dy|_1

inline VerificationReport rho_theta_check(const MapSystem1D& sys, const ContractionReport& rep,
                                          std::size_t pairs_per_map = 100, std::uint64_t seed = 13,
                                          double margin = 0.5) {
    if (!rep.certified) {
        auto r = detail::make_report("rho_theta_contraction", std::numeric_limits<double>::quiet_NaN(), 1.0, 0, false);
        r.status = CheckStatus::NotApplicable;
        r.note = "system is not certified";
        return r;
    }
    const double theta = rep.working_theta();
    const double s = rep.contraction_constant(theta);
    const ValueBox box = sys.value_box(margin);
    Rng rng(seed);
    auto rho = [&](double dx, const Vec2& dy) { return std::fabs(dx) + theta * norm1(dy); };
    auto draw_y = [&] {
        return Vec2{rng.uniform(box.visible.lo, box.visible.hi), rng.uniform(box.hidden.lo, box.hidden.hi)};
    };
    double worst = 0.0;
    std::size_t violations = 0, total = 0;
    for (std::size_t i = 0; i < sys.regions(); ++i) {
        const Interval dom = sys.domain_interval(i);
        for (std::size_t k = 0; k < pairs_per_map; ++k) {
            const double x1 = rng.uniform(dom.lo, dom.hi), x2 = rng.uniform(dom.lo, dom.hi);
            const Vec2 y1 = draw_y(), y2 = draw_y();
            const double before = rho(x1 - x2, y1 - y2);
            if (!(before > 0.0)) continue;
            const double after =
                rho(sys.map(i)(x1) - sys.map(i)(x2), sys.unchecked_F(i, x1, y1) - sys.unchecked_F(i, x2, y2));
            const double ratio = after / before;
            detail::accumulate(worst, ratio);
            if (!(ratio <= s)) ++violations;
            ++total;
        }
    }
    auto r = detail::make_report("rho_theta_contraction", worst, s, total);
    r.metadata = {{"theta", theta}, {"s", s}, {"violations", static_cast<double>(violations)},
                  {"seed", static_cast<double>(seed)}};
    return r;
}

inline VerificationReport rho_theta_check(const MapSystem2D& sys, const ContractionReport2D& rep,
                                          std::size_t pairs_per_map = 100, std::uint64_t seed = 13,
                                          double margin = 0.5) {
    if (!rep.certified) {
        auto r = detail::make_report("rho_theta_contraction", std::numeric_limits<double>::quiet_NaN(), 1.0, 0, false);
        r.status = CheckStatus::NotApplicable;
        r.note = "system is not certified";
        return r;
    }
    const double theta = rep.working_theta();
    const double s = rep.contraction_constant(theta);
    const ValueBox box = sys.value_box(margin);
    Rng rng(seed);
    auto draw_z = [&] {
        return Vec2{rng.uniform(box.visible.lo, box.visible.hi), rng.uniform(box.hidden.lo, box.hidden.hi)};
    };
    double worst = 0.0;
    std::size_t violations = 0, total = 0;
    for (std::size_t r = 0; r < sys.regions(); ++r) {
        const auto& d = sys.domain_rect(r);
        for (std::size_t k = 0; k < pairs_per_map; ++k) {
            const double x1 = rng.uniform(d.rx.lo, d.rx.hi), y1 = rng.uniform(d.ry.lo, d.ry.hi);
            const double x2 = rng.uniform(d.rx.lo, d.rx.hi), y2 = rng.uniform(d.ry.lo, d.ry.hi);
            const Vec2 z1 = draw_z(), z2 = draw_z();
            const double before = std::fabs(x1 - x2) + std::fabs(y1 - y2) + theta * norm1(z1 - z2);
            if (!(before > 0.0)) continue;
            const auto p1 = sys.L(r, x1, y1), p2 = sys.L(r, x2, y2);
            const double after = std::fabs(p1[0] - p2[0]) + std::fabs(p1[1] - p2[1]) +
                                 theta * norm1(sys.unchecked_F(r, x1, y1, z1) - sys.unchecked_F(r, x2, y2, z2));
            const double ratio = after / before;
            detail::accumulate(worst, ratio);
            if (!(ratio <= s)) ++violations;
            ++total;
        }
    }
    auto rep_out = detail::make_report("rho_theta_contraction", worst, s, total);
    rep_out.metadata = {{"theta", theta}, {"s", s}, {"violations", static_cast<double>(violations)},
                        {"seed", static_cast<double>(seed)}};
    return rep_out;
}

// ---------------------------------------------------------------------------
// Attractor sample against the solved graph (one-sided)

namespace detail {

// Largest f1 jump between grid neighbours; a rough field cannot be resolved
// by the grid below this scale.
inline double max_neighbour_jump(const SampledField1D& f) {
    double j = 0.0;
    for (std::size_t k = 1; k < f.values.size(); ++k) j = std::fmax(j, std::fabs(f.values[k][0] - f.values[k - 1][0]));
    return j;
}

inline double max_neighbour_jump(const SampledField2D& f) {
    double j = 0.0;
    for (std::size_t iy = 0; iy < f.ny(); ++iy)
        for (std::size_t ix = 0; ix < f.nx(); ++ix) {
            if (ix > 0) j = std::fmax(j, std::fabs(f.at(ix, iy)[0] - f.at(ix - 1, iy)[0]));
            if (iy > 0) j = std::fmax(j, std::fabs(f.at(ix, iy)[0] - f.at(ix, iy - 1)[0]));
        }
    return j;
}

}  // namespace detail

inline VerificationReport cloud_vs_field(const TrajectoryCloud& cloud, const SampledField1D& field, double threshold) {
    double worst = 0.0;
    for (const auto& p : cloud.points) detail::accumulate(worst, std::fabs(p[1] - field(p[0])[0]));
    auto r = detail::make_report("cloud_vs_field", worst, threshold, cloud.points.size());
    r.metadata = {{"seed", static_cast<double>(cloud.seed)},
                  {"burn_in", static_cast<double>(cloud.burn_in)},
                  {"grid_points", static_cast<double>(field.grid.size())},
                  {"max_neighbour_jump", detail::max_neighbour_jump(field)}};
    return r;
}

inline VerificationReport cloud_vs_field(const TrajectoryCloud2D& cloud, const SampledField2D& field,
                                         double threshold) {
    double worst = 0.0;
    for (const auto& p : cloud.points) detail::accumulate(worst, std::fabs(p[2] - field(p[0], p[1])[0]));
    auto r = detail::make_report("cloud_vs_field", worst, threshold, cloud.points.size());
    r.metadata = {{"seed", static_cast<double>(cloud.seed)},
                  {"burn_in", static_cast<double>(cloud.burn_in)},
                  {"grid_nx", static_cast<double>(field.gx.size())},
                  {"grid_ny", static_cast<double>(field.gy.size())},
                  {"max_neighbour_jump", detail::max_neighbour_jump(field)}};
    return r;
}

inline VerificationReport boundary_matching_report(const MapSystem2D& sys, std::size_t samples_per_line = 1000) {
    const auto b = boundary_matching_check(sys, samples_per_line);
    auto r = detail::make_report("boundary_matching", b.max_residual(), b.threshold, b.samples);
    r.metadata = {{"x_edge_residual", b.max_residual_x_edges}, {"y_edge_residual", b.max_residual_y_edges}};
    return r;
}

/// Visible-data range used to scale cloud thresholds.
inline double data_range(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

}  // namespace hvrfif
