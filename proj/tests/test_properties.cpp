#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>

using namespace hvrfif;

namespace {

std::string random_expr(Rng& rng, int depth, int dim) {
    const char* fns[] = {"sin", "cos", "abs", "exp"};
    if (depth == 0 || rng.below(4) == 0) {
        switch (rng.below(3)) {
            case 0: return std::to_string(rng.below(100)) + "." + std::to_string(rng.below(100));
            case 1: return "x";
            default: return dim == 2 ? "y" : "x";
        }
    }
    switch (rng.below(7)) {
        case 0: return random_expr(rng, depth - 1, dim) + "+" + random_expr(rng, depth - 1, dim);
        case 1: return random_expr(rng, depth - 1, dim) + "-" + random_expr(rng, depth - 1, dim);
        case 2: return "(" + random_expr(rng, depth - 1, dim) + ")*" + random_expr(rng, depth - 1, dim);
        case 3: return "-(" + random_expr(rng, depth - 1, dim) + ")";
        case 4: return "(" + random_expr(rng, depth - 1, dim) + ")^" + std::to_string(rng.below(4));
        case 5: return random_expr(rng, depth - 1, dim) + "/(2+" + random_expr(rng, depth - 1, dim) + "*0)";
        default: return std::string(fns[rng.below(4)]) + "(" + random_expr(rng, depth - 1, dim) + ")";
    }
}

}  // namespace

TEST(Property, ConnectionMatrix1DRowsAndSupport) {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + rng.below(10);
        const auto xs = fx::random_knots(rng, n);
        const auto d = validate_dataset_1d(xs, fx::random_values(rng, n + 1), fx::random_values(rng, n + 1));
        const auto p = fx::random_partition_1d(rng, d);
        const auto m = connection_matrix_1d(p);
        for (std::size_t s = 0; s < n; ++s) {
            EXPECT_NEAR(m.row_sum(s), 1.0, 1e-12);
            for (std::size_t t = 0; t < n; ++t)
                EXPECT_EQ(m(s, t) > 0.0, p.domain_of(t).contains_region(s)) << trial;
        }
    }
}

TEST(Property, ConnectionMatrix2DRowsAndSupport) {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(4), m = 2 + rng.below(4);
        const auto xs = fx::random_knots(rng, n), ys = fx::random_knots(rng, m);
        std::vector<std::vector<double>> z(n + 1, std::vector<double>(m + 1, 0.0));
        const auto d = validate_dataset_2d(xs, ys, z, z);
        // Two domains spanning the full grid along y; x halves overlap when n is odd.
        std::vector<Domain2D> domains = {{0, std::max<std::size_t>(2, n / 2 + n % 2), 0, m},
                                         {std::min(n - 2, n / 2), n, 0, m}};
        if (m >= 3) domains.push_back({0, n, 1, 1 + 2 + rng.below(m - 2)});
        std::vector<std::size_t> gamma(n * m);
        for (auto& g : gamma) g = rng.below(domains.size());
        gamma[0] = 0;
        gamma[n * m - 1] = 1;
        const auto p = build_partition_2d(d, domains, gamma, {});
        const auto c = connection_matrix_2d(p);
        for (std::size_t s = 0; s < n * m; ++s) {
            EXPECT_NEAR(c.row_sum(s), 1.0, 1e-12);
            for (std::size_t t = 0; t < n * m; ++t)
                EXPECT_EQ(c(s, t) > 0.0, p.domain_of(t).contains_region(p.region_x(s), p.region_y(s)));
        }
    }
}

TEST(Property, ParsePrintRoundTrip) {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const int dim = 1 + static_cast<int>(rng.below(2));
        const auto text = random_expr(rng, 5, dim);
        const auto e = parse_expr(text, dim);
        const auto back = parse_expr(e.to_string(), dim);
        EXPECT_TRUE(e == back) << text << " -> " << e.to_string();
        EXPECT_EQ(back.to_string(), e.to_string());
    }
}

TEST(Property, EndpointConditionUnderRandomPartitions) {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + rng.below(8);
        const auto d = validate_dataset_1d(fx::random_knots(rng, n), fx::random_values(rng, n + 1), fx::random_values(rng, n + 1));
        const auto p = fx::random_partition_1d(rng, d);
        auto spec = constant_factor_spec(n, rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                                         rng.uniform(-0.5, 0.5));
        spec.s[0] = "0.3*sin(x)";
        const auto sys = build_system_1d(d, p, build_factor_set_1d(spec, d));
        EXPECT_LE(sys.endpoint_residual(), 1e-12 * 100);
    }
}

TEST(Property, OperatorPreservesKnotsForRandomFields) {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + rng.below(6);
        const auto d = validate_dataset_1d(fx::random_knots(rng, n), fx::random_values(rng, n + 1), fx::random_values(rng, n + 1));
        const auto p = fx::random_partition_1d(rng, d);
        const auto sys = build_system_1d(d, p, build_factor_set_1d(constant_factor_spec(n, 0.4, -0.3, 0.2, 0.5), d));
        const auto grid = make_knot_grid(d.xs, 200 + rng.below(300));
        SampledField1D h{grid, std::vector<Vec2>(grid.size())};
        for (auto& v : h.values) v = {rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3)};
        const auto t = rb_apply(sys, h);
        for (std::size_t i = 0; i <= n; ++i) {
            EXPECT_EQ(t.values[grid.knot_nodes[i]][0], d.ys[i]);
            EXPECT_EQ(t.values[grid.knot_nodes[i]][1], d.zs[i]);
        }
    }
}

TEST(Property, OperatorContractsByFactorNorm) {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + rng.below(6);
        const auto d = validate_dataset_1d(fx::random_knots(rng, n), fx::random_values(rng, n + 1), fx::random_values(rng, n + 1));
        const auto p = fx::random_partition_1d(rng, d);
        auto spec = constant_factor_spec(n, 0, 0, 0, 0);
        for (std::size_t i = 0; i < n; ++i) {
            spec.s[i] = std::to_string(rng.uniform(-0.6, 0.6));
            spec.s_prime[i] = std::to_string(rng.uniform(-0.4, 0.4));
            spec.s_tilde[i] = std::to_string(rng.uniform(-0.3, 0.3));
            spec.s_tilde_prime[i] = std::to_string(rng.uniform(-0.5, 0.5));
        }
        const auto sys = build_system_1d(d, p, build_factor_set_1d(spec, d));
        const auto rep = contraction_report_1d(sys);
        const auto grid = make_knot_grid(d.xs, 301);
        SampledField1D a{grid, std::vector<Vec2>(grid.size())}, b = a;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            a.values[k] = {rng.uniform(-10, 10), rng.uniform(-10, 10)};
            b.values[k] = {rng.uniform(-10, 10), rng.uniform(-10, 10)};
        }
        const double before = sup_distance(a.values, b.values);
        const double after = sup_distance(rb_apply(sys, a).values, rb_apply(sys, b).values);
        EXPECT_LE(after, rep.S_bar * before + 1e-9);
    }
}

TEST(Property, ZeroFactorsReproduceInterpolant) {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng.below(6);
        const auto d = validate_dataset_1d(fx::random_knots(rng, n), fx::random_values(rng, n + 1), fx::random_values(rng, n + 1));
        const auto sys = build_system_1d(d, fx::random_partition_1d(rng, d), build_factor_set_1d(constant_factor_spec(n, 0, 0, 0, 0), d));
        const auto res = solve_fixed_point_1d(sys, {1001, 1e-12, 10});
        ASSERT_TRUE(res.converged);
        const auto pl = piecewise_linear_field(d, res.field.grid);
        EXPECT_LE(sup_distance(res.field.values, pl.values), 1e-12 * 100);
    }
}

TEST(Property, BoundaryMatchingForRandomBivariateSystems) {
    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto xs = fx::random_knots(rng, 4), ys = fx::random_knots(rng, 4);
        std::vector<std::vector<double>> z(5, std::vector<double>(5)), t = z;
        for (auto& row : z)
            for (auto& v : row) v = rng.uniform(-50, 50);
        for (auto& row : t)
            for (auto& v : row) v = rng.uniform(-5, 5);
        const auto d = validate_dataset_2d(xs, ys, z, t);
        auto p = fx::quadrant(d);
        for (auto& o : p.orientations)
            o = {rng.below(2) ? Orientation::Reversing : Orientation::Preserving,
                 rng.below(2) ? Orientation::Reversing : Orientation::Preserving};
        auto spec = constant_factor_spec(16, 0.3, 0.1, -0.2, 0.4);
        spec.s[5] = "0.3*cos(x*y)";
        const auto sys = build_system_2d(d, p, build_factor_set_2d(spec, d));
        EXPECT_TRUE(boundary_matching_check(sys, 200).pass());
    }
}
