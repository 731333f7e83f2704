// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include "fixtures.hpp"

#include "hvrfif/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

using namespace hvrfif;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <class Fn>
double seconds(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Each criterion runs guarded so one exception does not hide the rest.
void criterion(int id, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    criterion(1, [] {
        const auto sys = fx::zero_1d();
        SolveResult1D res;
        const double t = seconds([&] { res = solve_fixed_point_1d(sys, {4097, 1e-10, 20000}); });
        const double dev = sup_distance(res.field.values, piecewise_linear_field(sys.dataset(), res.field.grid).values);
        report(1, res.converged && dev <= 1e-12 && res.iterations <= 2 && t < 1.0,
               "zero-factor 1D deviation " + g(dev) + ", sweeps " + std::to_string(res.iterations) + ", " + g(t) + " s");
    });

    criterion(2, [] {
        bool ok = true;
        std::string detail;
        for (int k : {1, 2}) {
            const auto sys = fx::config_1d(k);
            SolveResult1D res;
            const double t = seconds([&] { res = solve_fixed_point_1d(sys, {4097, 1e-10, 20000}); });
            const auto r = knot_interpolation_residual(res.field, sys.dataset(), 1e-9);
            ok = ok && res.converged && r.pass && t < 5.0;
            detail += " config " + std::to_string(k) + ": residual " + g(r.max_residual) + " in " + g(t) + " s;";
        }
        report(2, ok, "knot interpolation" + detail);
    });

    criterion(3, [] {
        const auto r1 = contraction_report_1d(fx::config_1d(1));
        const auto r2 = contraction_report_1d(fx::config_1d(2));
        const auto r3 = contraction_report_1d(fx::config_1d(3));
        const bool ok = std::fabs(r1.S_bar - 0.99) <= 1e-12 && std::fabs(r2.S_bar - 0.99) <= 1e-12 && r1.certified &&
                        r2.certified && r3.S_bar >= 1.98 && r3.S_bar <= 2.00 && !r3.certified;
        report(3, ok, "S_bar " + g(r1.S_bar) + ", " + g(r2.S_bar) + ", " + g(r3.S_bar) +
                          (r3.certified ? " (config 3 certified)" : " (config 3 uncertified)"));
    });

    criterion(4, [] {
        const auto sys = fx::config_1d(1);
        const auto r = empirical_contraction_ratio(sys, contraction_report_1d(sys), 20, 11);
        report(4, r.max_residual <= 0.99 + 1e-9, "max ratio over 20 pairs " + g(r.max_residual));
    });

    criterion(5, [] {
        bool ok = true;
        std::string detail;
        const std::pair<const char*, MapSystem1D> systems[] = {
            {"config 1", fx::config_1d(1)}, {"config 2", fx::config_1d(2)}, {"mild", fx::mild_1d()}, {"zero", fx::zero_1d()}};
        for (const auto& [name, sys] : systems) {
            const auto rep = contraction_report_1d(sys);
            const double tol = 1e-10;
            const auto res = solve_fixed_point_1d(sys, {4097, tol, 20000});
            const auto r = functional_equation_residual(sys, res, rep, tol, 10000, 7);
            const double bound = 1.1 * tol / (1.0 - rep.S_bar);
            ok = ok && rep.certified && r.samples >= 10000 && r.max_residual <= bound;
            detail += std::string(" ") + name + " " + g(r.max_residual) + " <= " + g(bound) + ";";
        }
        report(5, ok, "functional equation" + detail);
    });

    criterion(6, [] {
        const auto res = solve_fixed_point_1d(fx::config_1d(1), {4097, 1e-10, 20000});
        const double v = res.field(0.375)[0];
        report(6, std::fabs(v - 32.75) <= 1e-6, "f1(0.375) = " + g(v) + " vs oracle 32.75");
    });

    criterion(7, [] {
        bool ok = true;
        std::string detail;
        auto check = [&](const std::string& name, const auto& sys, const ContractionReport& rep) {
            const auto r = rho_theta_check(sys, rep, 100, 13);
            ok = ok && rep.certified && r.pass && r.meta("violations") == 0.0;
            detail += " " + name + " violations " + g(r.meta("violations")) + ";";
        };
        for (int k : {1, 2}) {
            const auto s = fx::config_1d(k);
            check("1D config " + std::to_string(k), s, contraction_report_1d(s));
        }
        const auto m1 = fx::mild_1d(), z1 = fx::zero_1d();
        check("1D mild", m1, contraction_report_1d(m1));
        check("1D zero", z1, contraction_report_1d(z1));
        const auto m2 = fx::mild_2d(), z2 = fx::zero_2d();
        check("2D mild", m2, contraction_report_2d(m2));
        check("2D zero", z2, contraction_report_2d(z2));
        report(7, ok, "rho_theta" + detail);
    });

    criterion(8, [] {
        const auto sys = fx::zero_2d();
        const auto res = solve_fixed_point_2d(sys, {257, 257, 1e-9, 20000});
        const double v = res.field(0.125, 0.125)[0];
        std::size_t exact = 0;
        const auto& d = sys.dataset();
        for (std::size_t i = 0; i < d.xs.size(); ++i)
            for (std::size_t j = 0; j < d.ys.size(); ++j)
                if (res.field(d.xs[i], d.ys[j])[0] == d.z(i, j)) ++exact;
        report(8, std::fabs(v - 33.25) <= 1e-12 && exact == 25,
               "f1(0.125, 0.125) = " + g(v) + ", exact knots " + std::to_string(exact) + "/25");
    });

    criterion(9, [] {
        bool ok = true;
        std::string detail;
        for (const auto& name : builtin_example_names()) {
            if (name.rfind("2d-", 0) != 0) continue;
            const auto sys = detail::Ops2D::build(builtin_example(name));
            const auto b = boundary_matching_check(sys, 1000);
            ok = ok && b.max_residual() <= 1e-9;
            detail += " " + name + " " + g(b.max_residual()) + ";";
        }
        report(9, ok, "boundary matching" + detail);
    });

    criterion(10, [] {
        bool ok = true;
        std::string detail;
        {
            const auto sys = fx::mild_1d();
            const auto res = solve_fixed_point_1d(sys, {4097, 1e-10, 20000});
            const auto m = connection_matrix_1d(sys.partition());
            TrajectoryCloud a, b;
            const double t = seconds([&] { a = chaos_game_1d(sys, m, 200000, 100, 1); });
            b = chaos_game_1d(sys, m, 200000, 100, 1);
            const auto r = cloud_vs_field(a, res.field, 0.05 * data_range(sys.dataset().ys));
            const bool same = a.points == b.points;
            ok = ok && r.pass && same && t < 10.0;
            detail += " 1D deviation " + g(r.max_residual) + " <= " + g(r.threshold) + (same ? ", identical" : ", differ") +
                      ", " + g(t) + " s;";
        }
        {
            const auto sys = fx::mild_2d();
            const auto res = solve_fixed_point_2d(sys, {257, 257, 1e-9, 20000});
            const auto m = connection_matrix_2d(sys.partition());
            TrajectoryCloud2D a, b;
            const double t = seconds([&] { a = chaos_game_2d(sys, m, 200000, 100, 1); });
            b = chaos_game_2d(sys, m, 200000, 100, 1);
            const auto r = cloud_vs_field(a, res.field, 0.05 * data_range(sys.dataset().zs));
            const bool same = a.points == b.points;
            ok = ok && r.pass && same && t < 10.0;
            detail += " 2D deviation " + g(r.max_residual) + " <= " + g(r.threshold) + (same ? ", identical" : ", differ") +
                      ", " + g(t) + " s;";
        }
        report(10, ok, "chaos game" + detail);
    });

    criterion(11, [] {
        Rng rng(2024);
        double worst_row = 0.0;
        std::size_t mismatches = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 3 + rng.below(10);
            const auto d = validate_dataset_1d(fx::random_knots(rng, n), fx::random_values(rng, n + 1),
                                               fx::random_values(rng, n + 1));
            const auto p = fx::random_partition_1d(rng, d);
            const auto m = connection_matrix_1d(p);
            for (std::size_t s = 0; s < n; ++s) {
                worst_row = std::fmax(worst_row, std::fabs(m.row_sum(s) - 1.0));
                for (std::size_t t = 0; t < n; ++t)
                    if ((m(s, t) > 0.0) != p.domain_of(t).contains_region(s)) ++mismatches;
            }
        }
        report(11, worst_row <= 1e-12 && mismatches == 0,
               "100 partitions, worst row-sum error " + g(worst_row) + ", support mismatches " + std::to_string(mismatches));
    });

    criterion(12, [] {
        const auto root = std::filesystem::temp_directory_path() / "hvrfif_acceptance";
        std::filesystem::remove_all(root);
        bool ok = true;
        std::string detail;
        for (const char* name : {"1d-config-1", "1d-config-2", "1d-config-3", "1d-config-4", "2d-config-1", "2d-config-2"}) {
            std::ostringstream out, err;
            const auto dir = root / name;
            const int code = run_invocation({"example", std::nullopt, name, dir.string(), std::nullopt}, out, err);
            const bool files = std::filesystem::file_size(dir / "solution.csv") > 0 &&
                               std::filesystem::file_size(dir / "field.pgm") > 0;
            ok = ok && code == 0 && files;
            detail += std::string(" ") + name + (code == 0 && files ? " ok;" : " failed;");
        }
        std::filesystem::remove_all(root);
        report(12, ok, "example outputs" + detail);
    });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures;
}
