#pragma once

// Command dispatch shared by the hvrfif executable and the tests.

#include "hvrfif/config.hpp"
#include "hvrfif/io.hpp"
#include "hvrfif/system1d.hpp"
#include "hvrfif/system2d.hpp"
#include "hvrfif/verify.hpp"

#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace hvrfif {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitVerify = 2, kExitIo = 3 };

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"validate", "solve", "chaos", "render", "verify", "example"};
    return names;
}

namespace detail {

// Without a certificate the attractor need not be the graph of a continuous
// function, so the cloud comparison only informs.
inline VerificationReport cloud_check(const VerificationReport& r, const ContractionReport& rep) {
    auto out = r;
    if (!rep.certified) out.status = CheckStatus::Informational;
    return out;
}

inline VerificationReport convergence_report(bool converged, double change, double tol, std::size_t iterations) {
    auto r = make_report("solver_convergence", change, tol, iterations, converged);
    if (!converged) r.note = "solver stopped before reaching the tolerance";
    return r;
}

struct Ops1D {
    using System = MapSystem1D;
    using Field = SampledField1D;
    using Solve = SolveResult1D;
    using Cloud = TrajectoryCloud;

    static System build(const RunConfig& c) {
        auto factors = build_factor_set_1d(c.factors, *c.data1d, c.sampling);
        return build_system_1d(*c.data1d, *c.partition1d, std::move(factors));
    }
    static ContractionReport certify(const System& s, const RunConfig& c) {
        return contraction_report_1d(s, c.hidden_margin, c.sampling);
    }
    static Solve solve(const System& s, const RunConfig& c) {
        return solve_fixed_point_1d(s, {c.solver.grid_points, c.solver.tolerance(1), c.solver.max_iter});
    }
    static Cloud chaos(const System& s, const RunConfig& c) {
        return chaos_game_1d(s, connection_matrix_1d(s.partition()), c.chaos.points, c.chaos.burn_in, c.chaos.seed);
    }
    static double visible_range(const System& s) { return data_range(s.dataset().ys); }

    static std::vector<VerificationReport> checks(const System& s, const ContractionReport& rep, const Solve& sol,
                                                  const Cloud& cloud, const RunConfig& c) {
        const auto& v = c.verify;
        return {knot_interpolation_residual(sol.field, s.dataset()),
                functional_equation_residual(s, sol, rep, c.solver.tolerance(1), v.samples, v.seed),
                empirical_contraction_ratio(s, rep, v.contraction_pairs, v.seed + 1, c.solver.grid_points,
                                            c.hidden_margin),
                rho_theta_check(s, rep, v.rho_pairs, v.seed + 2, c.hidden_margin),
                cloud_check(cloud_vs_field(cloud, sol.field, v.cloud_fraction * visible_range(s)), rep)};
    }
};

struct Ops2D {
    using System = MapSystem2D;
    using Field = SampledField2D;
    using Solve = SolveResult2D;
    using Cloud = TrajectoryCloud2D;

    static System build(const RunConfig& c) {
        auto factors = build_factor_set_2d(c.factors, *c.data2d, c.sampling);
        return build_system_2d(*c.data2d, *c.partition2d, std::move(factors));
    }
    static ContractionReport certify(const System& s, const RunConfig& c) {
        return contraction_report_2d(s, c.hidden_margin, c.sampling);
    }
    static Solve solve(const System& s, const RunConfig& c) {
        return solve_fixed_point_2d(s, {c.solver.nx, c.solver.ny, c.solver.tolerance(2), c.solver.max_iter});
    }
    static Cloud chaos(const System& s, const RunConfig& c) {
        return chaos_game_2d(s, connection_matrix_2d(s.partition()), c.chaos.points, c.chaos.burn_in, c.chaos.seed);
    }
    static double visible_range(const System& s) { return data_range(s.dataset().zs); }

    static std::vector<VerificationReport> checks(const System& s, const ContractionReport& rep, const Solve& sol,
                                                  const Cloud& cloud, const RunConfig& c) {
        const auto& v = c.verify;
        return {knot_interpolation_residual(sol.field, s.dataset()),
                functional_equation_residual(s, sol, rep, c.solver.tolerance(2), v.samples, v.seed),
                empirical_contraction_ratio(s, rep, v.contraction_pairs, v.seed + 1, 129, 129, c.hidden_margin),
                rho_theta_check(s, rep, v.rho_pairs, v.seed + 2, c.hidden_margin),
                cloud_check(cloud_vs_field(cloud, sol.field, v.cloud_fraction * visible_range(s)), rep),
                boundary_matching_report(s, v.edge_samples)};
    }
};

struct Context {
    const RunConfig& cfg;
    std::filesystem::path out_dir;
    std::ostream& out;
    std::ostream& err;

    std::filesystem::path file(const std::string& name) const { return out_dir / name; }

    void ensure_dir() const {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
    }
};

inline void warn_uncertified(const Context& ctx, const ContractionReport& rep) {
    if (rep.certified) return;
    ctx.err << "warning: system is not certified (S_bar = " << rep.S_bar << ", S_bar_bound = " << rep.S_bar_bound
            << ", max factor sup = " << rep.max_factor_sup
            << "); the contraction theorems do not apply and the iteration may diverge\n";
}

template <class Ops>
nlohmann::json certificate(const typename Ops::System& sys, const ContractionReport& rep, const RunConfig& cfg) {
    nlohmann::json j = to_json(rep);
    j["name"] = cfg.name;
    j["dimension"] = cfg.dimension;
    j["regions"] = sys.regions();
    return j;
}

template <class Ops>
void write_solution(const Context& ctx, const typename Ops::Solve& sol, bool csv, bool pgm) {
    if (csv) write_csv(sol.field, ctx.file("solution.csv"));
    if (pgm) write_pgm(sol.field, ctx.file("field.pgm"));
}

template <class Ops>
int run_typed(const std::string& command, const Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const auto sys = Ops::build(cfg);
    const auto rep = Ops::certify(sys, cfg);
    warn_uncertified(ctx, rep);
    const bool json_out = cfg.output.wants("json");

    if (command == "validate") {
        const auto cert = certificate<Ops>(sys, rep, cfg);
        ctx.out << cert.dump(2) << '\n';
        if (json_out) {
            ctx.ensure_dir();
            write_json(cert, ctx.file("certificate.json"));
        }
        return kExitOk;
    }

    if (command == "chaos") {
        const auto cloud = Ops::chaos(sys, cfg);
        ctx.ensure_dir();
        write_csv(cloud, ctx.file("cloud.csv"));
        ctx.out << "wrote " << cloud.points.size() << " points to " << ctx.file("cloud.csv").string() << '\n';
        return kExitOk;
    }

    const double tol = cfg.solver.tolerance(cfg.dimension);
    const auto sol = Ops::solve(sys, cfg);
    if (!sol.converged)
        ctx.err << "warning: solver did not converge after " << sol.iterations << " sweeps (last change "
                << sol.final_change << ")\n";
    nlohmann::json summary = {{"certificate", certificate<Ops>(sys, rep, cfg)}, {"solve", solve_summary(sol)}};
    ctx.ensure_dir();

    if (command == "solve" || command == "render" || command == "example") {
        const bool csv = command != "render" && cfg.output.wants("csv");
        const bool pgm = command == "render" || (command == "example" && cfg.output.wants("pgm"));
        write_solution<Ops>(ctx, sol, csv, pgm);
        if (json_out) write_json(summary, ctx.file("solve_report.json"));
        ctx.out << "solved in " << sol.iterations << " sweeps, converged=" << (sol.converged ? "true" : "false")
                << ", outputs in " << ctx.out_dir.string() << '\n';
        return kExitOk;
    }

    // verify
    const auto cloud = Ops::chaos(sys, cfg);
    auto checks = Ops::checks(sys, rep, sol, cloud, cfg);
    checks.insert(checks.begin(), convergence_report(sol.converged, sol.final_change, tol, sol.iterations));
    bool ok = true;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : checks) {
        list.push_back(to_json(c));
        ok = ok && !c.failed();
        ctx.out << (c.failed() ? "FAIL " : c.pass ? "pass " : "info ") << c.name << " residual=" << c.max_residual
                << " threshold=" << c.threshold << " [" << to_string(c.status) << "]\n";
    }
    summary["checks"] = list;
    summary["pass"] = ok;
    write_json(summary, ctx.file("verify.json"));
    return ok ? kExitOk : kExitVerify;
}

}  // namespace detail

/// Runs one subcommand. `example` expects the config of the named builtin.
inline int run(const std::string& command, const RunConfig& cfg, const std::filesystem::path& out_dir,
               std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), command) == names.end()) {
        err << "error: unknown command '" << command << "'\n";
        return kExitValidation;
    }
    detail::Context ctx{cfg, out_dir, out, err};
    try {
        if (command == "example") {
            ctx.ensure_dir();
            write_json(builtin_example_json(cfg.name), ctx.file("config.json"));
        }
        return cfg.dimension == 1 ? detail::run_typed<detail::Ops1D>(command, ctx)
                                  : detail::run_typed<detail::Ops2D>(command, ctx);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

/// Full command-line entry point: `hvrfif <command> --config <path> [--out <dir>] [--seed <u64>]`
/// or `hvrfif example <name> [--out <dir>]`.
struct Invocation {
    std::string command;
    std::optional<std::string> config_path;
    std::optional<std::string> example;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
};

inline int run_invocation(const Invocation& inv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig cfg;
    try {
        if (inv.command == "example") {
            if (!inv.example) {
                err << "error: example needs a name; available:";
                for (const auto& n : builtin_example_names()) err << ' ' << n;
                err << '\n';
                return kExitValidation;
            }
            cfg = builtin_example(*inv.example);
        } else {
            if (!inv.config_path) {
                err << "error: --config is required for '" << inv.command << "'\n";
                return kExitValidation;
            }
            cfg = load_config(*inv.config_path);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    if (inv.seed) cfg.chaos.seed = cfg.verify.seed = *inv.seed;
    std::filesystem::path dir = inv.out_dir ? *inv.out_dir : cfg.output.dir;
    if (inv.command == "example" && !inv.out_dir) dir /= cfg.name;
    return run(inv.command, cfg, dir, out, err);
}

}  // namespace hvrfif
