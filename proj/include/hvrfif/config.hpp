#pragma once

// JSON run configuration and the builtin example configurations.

#include "hvrfif/error.hpp"
#include "hvrfif/expr.hpp"
#include "hvrfif/partition.hpp"
#include "hvrfif/random.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace hvrfif {

/// Schema violation; the message starts with the offending field path.
class ConfigError : public ValidationError {
public:
    ConfigError(const std::string& path, const std::string& what)
        : ValidationError(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct SolverSettings {
    std::size_t grid_points = 4097;  // 1D
    std::size_t nx = 257, ny = 257;  // 2D
    std::optional<double> tol;       // default 1e-10 in 1D, 1e-9 in 2D
    std::size_t max_iter = 20000;

    double tolerance(int dimension) const { return tol ? *tol : dimension == 1 ? 1e-10 : 1e-9; }
};

struct ChaosSettings {
    std::size_t points = 200000;
    std::size_t burn_in = 100;
    std::uint64_t seed = 1;
};

struct OutputSettings {
    std::string dir = "out";
    std::vector<std::string> formats = {"csv", "pgm", "json"};

    bool wants(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }
};

struct VerifySettings {
    std::size_t samples = 10000;          // functional-equation sample points
    std::size_t contraction_pairs = 20;
    std::size_t rho_pairs = 100;          // per map
    double cloud_fraction = 0.05;         // cloud deviation threshold as a fraction of the data range
    std::size_t edge_samples = 1000;      // per gridline, bivariate only
    std::uint64_t seed = 7;
};

struct RunConfig {
    std::string name;
    int dimension = 1;
    std::optional<HiddenDataset1D> data1d;
    std::optional<Partition1D> partition1d;
    std::optional<HiddenDataset2D> data2d;
    std::optional<Partition2D> partition2d;
    FactorSpec factors;  // tau order in 2D
    SamplingDensity sampling;
    SolverSettings solver;
    ChaosSettings chaos;
    OutputSettings output;
    VerifySettings verify;
    double hidden_margin = 0.5;
};

namespace detail {

using nlohmann::json;

/// Cursor into the document that knows its own field path.
class Field {
public:
    Field(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

    const json& raw() const { return *j_; }
    const std::string& path() const { return path_; }
    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_, what); }

    bool has(const char* key) const { return j_->is_object() && j_->contains(key); }

    Field operator[](const char* key) const {
        if (!j_->is_object()) fail("expected an object");
        const auto it = j_->find(key);
        if (it == j_->end()) throw ConfigError(child(key), "required field missing");
        return {*it, child(key)};
    }

    Field operator[](std::size_t i) const { return {j_->at(i), path_ + "[" + std::to_string(i) + "]"}; }
    Field operator[](int i) const { return (*this)[static_cast<std::size_t>(i)]; }

    std::size_t size() const { return j_->size(); }

    void only(std::initializer_list<const char*> keys) const {
        if (!j_->is_object()) fail("expected an object");
        for (const auto& [k, v] : j_->items()) {
            (void)v;
            if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
                throw ConfigError(child(k.c_str()), "unknown field");
        }
    }

    const Field& array() const {
        if (!j_->is_array()) fail("expected an array");
        return *this;
    }

    double number() const {
        if (!j_->is_number()) fail("expected a number");
        return j_->get<double>();
    }

    std::uint64_t unsigned_int() const {
        if (!j_->is_number_unsigned() && !(j_->is_number_integer() && j_->get<std::int64_t>() >= 0))
            fail("expected a non-negative integer");
        return j_->get<std::uint64_t>();
    }

    std::string string() const {
        if (!j_->is_string()) fail("expected a string");
        return j_->get<std::string>();
    }

    std::vector<double> numbers() const {
        array();
        std::vector<double> out;
        for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].number());
        return out;
    }

    std::vector<std::vector<double>> table() const {
        array();
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].numbers());
        return out;
    }

private:
    std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* j_;
    std::string path_;
};

inline std::vector<double> uniform_values(const Field& f, std::size_t count) {
    f.only({"uniform"});
    const Field u = f["uniform"];
    u.only({"low", "high", "seed"});
    const double lo = u["low"].number(), hi = u["high"].number();
    if (!(lo <= hi)) u.fail("low must not exceed high");
    Rng rng(u["seed"].unsigned_int());
    std::vector<double> v(count);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

inline Orientation parse_orientation(const Field& f, char c) {
    if (c == '+') return Orientation::Preserving;
    if (c == '-') return Orientation::Reversing;
    f.fail("orientation must be '+' or '-'");
}

// Shortest round-trip spelling, so 0.3 stays "0.3".
inline std::string number_text(const json& v) { return v.dump(); }

/// A factor entry: expression string, number, or {"expr", "sup", "lip"}.
inline std::pair<std::string, BoundOverride> parse_factor_entry(const Field& f, int dim) {
    std::string text;
    BoundOverride ov;
    if (f.raw().is_number()) {
        (void)f.number();
        text = number_text(f.raw());
    } else if (f.raw().is_string()) {
        text = f.string();
    } else if (f.raw().is_object()) {
        f.only({"expr", "sup", "lip"});
        const Field e = f["expr"];
        text = e.raw().is_number() ? number_text(e.raw()) : e.string();
        if (f.has("sup")) ov.sup = f["sup"].number();
        if (f.has("lip")) ov.lipschitz = f["lip"].number();
        if ((ov.sup && *ov.sup < 0.0) || (ov.lipschitz && *ov.lipschitz < 0.0)) f.fail("bounds must be non-negative");
    } else {
        f.fail("expected an expression string, a number, or an object");
    }
    try {
        (void)parse_expr(text, dim);
    } catch (const ParseError& e) {
        f.fail(std::string("invalid expression '") + text + "': " + e.what());
    }
    return {text, ov};
}

inline constexpr const char* kFactorKeys[4] = {"s", "s_prime", "s_tilde", "s_tilde_prime"};

inline std::vector<std::string>& spec_list(FactorSpec& spec, int k) {
    switch (k) {
        case 0: return spec.s;
        case 1: return spec.s_prime;
        case 2: return spec.s_tilde;
        default: return spec.s_tilde_prime;
    }
}

inline FactorSpec parse_factors_1d(const Field& f, std::size_t regions) {
    f.only({"s", "s_prime", "s_tilde", "s_tilde_prime"});
    FactorSpec spec;
    spec.overrides.assign(regions, {});
    bool any_override = false;
    for (int k = 0; k < 4; ++k) {
        const Field list = f[kFactorKeys[k]].array();
        if (list.size() != regions)
            list.fail("has " + std::to_string(list.size()) + " entries for " + std::to_string(regions) + " regions");
        for (std::size_t i = 0; i < regions; ++i) {
            auto [text, ov] = parse_factor_entry(list[i], 1);
            spec_list(spec, k).push_back(text);
            any_override |= ov.sup.has_value() || ov.lipschitz.has_value();
            spec.overrides[i][k] = ov;
        }
    }
    if (!any_override) spec.overrides.clear();
    return spec;
}

/// Tables have one row per x region and one column per y region; the result is in tau order.
inline FactorSpec parse_factors_2d(const Field& f, std::size_t n, std::size_t m) {
    f.only({"s", "s_prime", "s_tilde", "s_tilde_prime"});
    FactorSpec spec;
    spec.overrides.assign(n * m, {});
    for (int k = 0; k < 4; ++k) spec_list(spec, k).assign(n * m, "");
    bool any_override = false;
    for (int k = 0; k < 4; ++k) {
        const Field rows = f[kFactorKeys[k]].array();
        if (rows.size() != n) rows.fail("has " + std::to_string(rows.size()) + " rows for " + std::to_string(n) + " x regions");
        for (std::size_t i = 0; i < n; ++i) {
            const Field row = rows[i].array();
            if (row.size() != m)
                row.fail("has " + std::to_string(row.size()) + " entries for " + std::to_string(m) + " y regions");
            for (std::size_t j = 0; j < m; ++j) {
                auto [text, ov] = parse_factor_entry(row[j], 2);
                const std::size_t r = tau(i, j, n);
                spec_list(spec, k)[r] = text;
                any_override |= ov.sup.has_value() || ov.lipschitz.has_value();
                spec.overrides[r][k] = ov;
            }
        }
    }
    if (!any_override) spec.overrides.clear();
    return spec;
}

template <class Fn>
auto rethrow_at(const Field& f, Fn fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        f.fail(e.what());
    }
}

inline void parse_1d(const Field& root, RunConfig& cfg) {
    const Field ds = root["dataset"];
    ds.only({"x", "y", "z"});
    auto xs = ds["x"].numbers();
    auto ys = ds["y"].numbers();
    const Field zf = ds["z"];
    auto zs = zf.raw().is_object() ? uniform_values(zf, xs.size()) : zf.numbers();
    cfg.data1d = rethrow_at(ds, [&] { return validate_dataset_1d(xs, ys, zs); });
    const std::size_t n = cfg.data1d->regions();

    const Field pt = root["partition"];
    pt.only({"domains", "gamma", "orientations"});
    std::vector<Domain1D> domains;
    const Field dl = pt["domains"].array();
    for (std::size_t k = 0; k < dl.size(); ++k) {
        const auto pair = dl[k].numbers();
        if (pair.size() != 2) dl[k].fail("domain must be a [start, end] knot index pair");
        domains.push_back({dl[k][0].unsigned_int(), dl[k][1].unsigned_int()});
    }
    std::vector<std::size_t> gamma;
    const Field gl = pt["gamma"].array();
    for (std::size_t i = 0; i < gl.size(); ++i) {
        const auto g = gl[i].unsigned_int();
        if (g < 1) gl[i].fail("gamma is 1-based");
        gamma.push_back(g - 1);
    }
    std::vector<Orientation> orient;
    if (pt.has("orientations")) {
        const Field of = pt["orientations"];
        if (of.raw().is_string()) {
            for (char c : of.string()) orient.push_back(parse_orientation(of, c));
        } else {
            of.array();
            for (std::size_t i = 0; i < of.size(); ++i) {
                const auto s = of[i].string();
                if (s.size() != 1) of[i].fail("orientation must be '+' or '-'");
                orient.push_back(parse_orientation(of[i], s[0]));
            }
        }
    }
    cfg.partition1d = rethrow_at(pt, [&] { return build_partition_1d(*cfg.data1d, domains, gamma, orient); });
    cfg.factors = parse_factors_1d(root["factors"], n);
}

inline void parse_2d(const Field& root, RunConfig& cfg) {
    const Field ds = root["dataset"];
    ds.only({"x", "y", "z", "t"});
    auto xs = ds["x"].numbers();
    auto ys = ds["y"].numbers();
    auto zs = ds["z"].table();
    const Field tf = ds["t"];
    std::vector<std::vector<double>> ts;
    if (tf.raw().is_object()) {
        const auto flat = uniform_values(tf, xs.size() * ys.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            ts.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(i * ys.size()),
                            flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * ys.size()));
    } else {
        ts = tf.table();
    }
    cfg.data2d = rethrow_at(ds, [&] { return validate_dataset_2d(xs, ys, zs, ts); });
    const std::size_t n = cfg.data2d->nx(), m = cfg.data2d->ny();

    const Field pt = root["partition"];
    pt.only({"domains", "gamma", "orientations"});
    std::vector<Domain2D> domains;
    const Field dl = pt["domains"].array();
    for (std::size_t k = 0; k < dl.size(); ++k) {
        const auto quad = dl[k].numbers();
        if (quad.size() != 4) dl[k].fail("domain must be a [sx, ex, sy, ey] knot index quadruple");
        domains.push_back({dl[k][0].unsigned_int(), dl[k][1].unsigned_int(), dl[k][2].unsigned_int(),
                           dl[k][3].unsigned_int()});
    }
    std::vector<std::size_t> gamma(n * m);
    const Field gt = pt["gamma"].array();
    if (gt.size() != n) gt.fail("has " + std::to_string(gt.size()) + " rows for " + std::to_string(n) + " x regions");
    for (std::size_t i = 0; i < n; ++i) {
        const Field row = gt[i].array();
        if (row.size() != m) row.fail("has " + std::to_string(row.size()) + " entries for " + std::to_string(m) + " y regions");
        for (std::size_t j = 0; j < m; ++j) {
            const auto g = row[j].unsigned_int();
            if (g < 1) row[j].fail("gamma is 1-based");
            gamma[tau(i, j, n)] = g - 1;
        }
    }
    std::vector<OrientationPair> orient;
    if (pt.has("orientations")) {
        const Field ot = pt["orientations"].array();
        if (ot.size() != n) ot.fail("has " + std::to_string(ot.size()) + " rows for " + std::to_string(n) + " x regions");
        orient.assign(n * m, {});
        for (std::size_t i = 0; i < n; ++i) {
            const Field row = ot[i].array();
            if (row.size() != m) row.fail("has " + std::to_string(row.size()) + " entries for " + std::to_string(m) + " y regions");
            for (std::size_t j = 0; j < m; ++j) {
                const auto s = row[j].string();
                if (s.size() != 2) row[j].fail("orientation pair must look like \"+-\"");
                orient[tau(i, j, n)] = {parse_orientation(row[j], s[0]), parse_orientation(row[j], s[1])};
            }
        }
    }
    cfg.partition2d = rethrow_at(pt, [&] { return build_partition_2d(*cfg.data2d, domains, gamma, orient); });
    cfg.factors = parse_factors_2d(root["factors"], n, m);
}

inline void parse_settings(const Field& root, RunConfig& cfg) {
    if (root.has("sampling")) {
        const Field f = root["sampling"];
        f.only({"points_1d", "points_2d"});
        if (f.has("points_1d")) cfg.sampling.points_1d = f["points_1d"].unsigned_int();
        if (f.has("points_2d")) cfg.sampling.points_2d = f["points_2d"].unsigned_int();
        if (cfg.sampling.points_1d < 2 || cfg.sampling.points_2d < 2) f.fail("sampling needs at least 2 points");
    }
    if (root.has("solver")) {
        const Field f = root["solver"];
        f.only({"grid", "tol", "max_iter"});
        if (f.has("grid")) {
            const Field g = f["grid"];
            if (g.raw().is_array()) {
                if (g.size() != 2) g.fail("expected [nx, ny]");
                cfg.solver.nx = g[0].unsigned_int();
                cfg.solver.ny = g[1].unsigned_int();
            } else {
                cfg.solver.grid_points = cfg.solver.nx = cfg.solver.ny = g.unsigned_int();
            }
        }
        if (f.has("tol")) {
            cfg.solver.tol = f["tol"].number();
            if (!(*cfg.solver.tol > 0.0)) f["tol"].fail("must be positive");
        }
        if (f.has("max_iter")) {
            cfg.solver.max_iter = f["max_iter"].unsigned_int();
            if (cfg.solver.max_iter == 0) f["max_iter"].fail("must be positive");
        }
    }
    if (root.has("chaos")) {
        const Field f = root["chaos"];
        f.only({"points", "burn_in", "seed"});
        if (f.has("points")) cfg.chaos.points = f["points"].unsigned_int();
        if (f.has("burn_in")) cfg.chaos.burn_in = f["burn_in"].unsigned_int();
        if (f.has("seed")) cfg.chaos.seed = f["seed"].unsigned_int();
        if (cfg.chaos.points <= cfg.chaos.burn_in) f.fail("points must exceed burn_in");
    }
    if (root.has("output")) {
        const Field f = root["output"];
        f.only({"dir", "formats"});
        if (f.has("dir")) cfg.output.dir = f["dir"].string();
        if (f.has("formats")) {
            const Field fl = f["formats"].array();
            cfg.output.formats.clear();
            for (std::size_t i = 0; i < fl.size(); ++i) {
                const auto s = fl[i].string();
                if (s != "csv" && s != "pgm" && s != "json") fl[i].fail("format must be csv, pgm, or json");
                cfg.output.formats.push_back(s);
            }
        }
    }
    if (root.has("verify")) {
        const Field f = root["verify"];
        f.only({"samples", "contraction_pairs", "rho_pairs", "cloud_fraction", "edge_samples", "seed"});
        if (f.has("samples")) cfg.verify.samples = f["samples"].unsigned_int();
        if (f.has("contraction_pairs")) cfg.verify.contraction_pairs = f["contraction_pairs"].unsigned_int();
        if (f.has("rho_pairs")) cfg.verify.rho_pairs = f["rho_pairs"].unsigned_int();
        if (f.has("cloud_fraction")) cfg.verify.cloud_fraction = f["cloud_fraction"].number();
        if (f.has("edge_samples")) cfg.verify.edge_samples = f["edge_samples"].unsigned_int();
        if (f.has("seed")) cfg.verify.seed = f["seed"].unsigned_int();
    }
    if (root.has("hidden_margin")) {
        cfg.hidden_margin = root["hidden_margin"].number();
        if (!(cfg.hidden_margin >= 0.0)) root["hidden_margin"].fail("must be non-negative");
    }
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& doc) {
    const detail::Field root(doc, "");
    root.only({"name", "dimension", "dataset", "partition", "factors", "sampling", "solver", "chaos", "output",
               "verify", "hidden_margin"});
    RunConfig cfg;
    if (root.has("name")) cfg.name = root["name"].string();
    const auto dim = root["dimension"].unsigned_int();
    if (dim != 1 && dim != 2) throw ConfigError("dimension", "must be 1 or 2");
    cfg.dimension = static_cast<int>(dim);
    if (cfg.dimension == 1)
        detail::parse_1d(root, cfg);
    else
        detail::parse_2d(root, cfg);
    detail::parse_settings(root, cfg);
    return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// Builtin examples. Hidden values are zero since none are published.

namespace detail {

using nlohmann::json;

inline json example_dataset_1d() {
    return {{"x", {0.0, 0.25, 0.5, 0.75, 1.0}}, {"y", {20.0, 30.0, 10.0, 50.0, 40.0}}, {"z", {0.0, 0.0, 0.0, 0.0, 0.0}}};
}

inline json example_1d(const std::string& name, json factors) {
    return {{"name", name},
            {"dimension", 1},
            {"dataset", example_dataset_1d()},
            {"partition", {{"domains", {{0, 2}, {2, 4}}}, {"gamma", {1, 1, 2, 2}}, {"orientations", "++++"}}},
            {"factors", std::move(factors)},
            {"solver", {{"grid", 4097}, {"tol", 1e-10}, {"max_iter", 20000}}}};
}

inline json table_z_values() {
    return {{46, 32, 65, 73, 39}, {32, 23, 84, 33, 29}, {76, 88, 58, 73, 88}, {62, 79, 33, 86, 43}, {49, 23, 39, 76, 32}};
}

inline json quadrant_partition() {
    return {{"domains", {{0, 2, 0, 2}, {2, 4, 0, 2}, {0, 2, 2, 4}, {2, 4, 2, 4}}},
            {"gamma", {{1, 1, 3, 3}, {1, 1, 3, 3}, {2, 2, 4, 4}, {2, 2, 4, 4}}}};
}

inline json zeros(std::size_t rows, std::size_t cols) { return json(rows, json(cols, 0.0)); }

inline json example_2d(const std::string& name, json factors) {
    return {{"name", name},
            {"dimension", 2},
            {"dataset",
             {{"x", {0.0, 0.25, 0.5, 0.75, 1.0}}, {"y", {0.0, 0.25, 0.5, 0.75, 1.0}}, {"z", table_z_values()},
              {"t", zeros(5, 5)}}},
            {"partition", quadrant_partition()},
            {"factors", std::move(factors)},
            {"solver", {{"grid", 257}, {"tol", 1e-9}, {"max_iter", 20000}}}};
}

/// 4 x 3 regions: the first four y knots of the table, two domains split along x.
inline json example_2d_4x3(const std::string& name, json factors) {
    json z = json::array();
    for (const auto& row : table_z_values()) z.push_back({row[0], row[1], row[2], row[3]});
    return {{"name", name},
            {"dimension", 2},
            {"dataset",
             {{"x", {0.0, 0.25, 0.5, 0.75, 1.0}}, {"y", {0.0, 0.25, 0.5, 0.75}}, {"z", z}, {"t", zeros(5, 4)}}},
            {"partition", {{"domains", {{0, 2, 0, 3}, {2, 4, 0, 3}}}, {"gamma", {{1, 1, 1}, {1, 1, 1}, {2, 2, 2}, {2, 2, 2}}}}},
            {"factors", std::move(factors)},
            {"solver", {{"grid", {257, 193}}, {"tol", 1e-9}, {"max_iter", 20000}}}};
}

inline json table_s_1() {
    return {{0.9, 0.6, -0.9, 0.7}, {-0.94, 0.95, 0.3, 0.85}, {0.5, -0.99, 0.86, 0.79}, {0.87, 0.92, 0.75, -0.87}};
}
inline json table_s_tilde_1() {
    return {{-0.4, 0.9, -0.65, 0.66}, {0.9, 0.36, 0.27, 0.25}, {0.91, -0.89, 0.9, 0.85}, {0.53, 0.96, -0.49, 0.39}};
}
inline json table_s_tilde_prime_1() {
    return {{0.53, 0.03, 0.27, 0.28}, {0.09, 0.55, 0.64, 0.72}, {0.05, 0.01, 0.02, 0.11}, {0.41, 0.03, 0.48, 0.56}};
}
inline json table_s_prime_2() {
    return {{-0.47, -0.07, -0.08, 0.14}, {0.15, -0.04, -0.69, 0.14}, {0.46, -0.69, 0.04, 0.07}, {0.07, -0.13, 0.18, -0.02}};
}

inline json table_4x3_s() {
    return {{"0.45*(cos(x)+sin(y))", "0.9*sin(10*x^2+10*y^2)", "0.9*cos(10*x^2+10*y^2)"},
            {"0.99*cos(10*x^3+10*y^3)", "0.45*(cos(x)-sin(y))", "0.9*sin(x^2+y^9)"},
            {"0.9*cos(50*x+50*y)", "0.99*cos(40*x^3+40*y^3)", "0.9*sin(10*x+10*y)"},
            {"0.9*sin(50*x+50*y)", "0.99*cos(150*x^2+15*y^2)", "0.45*(cos(20*x)-sin(20*y))"}};
}
inline json table_4x3_s_prime() {
    return {{"0.45*(cos(x)+sin(y))", "0.9*sin(10*x^2+10*y^2)", "0.9*cos(30*x^2+30*y^2)"},
            {"0.93*cos(10*x^4+10*y^3)", "0.45*(cos(x)-sin(y))", "0.95*sin(x^2+y^9)"},
            {"0.9*cos(20*x+20*y)", "0.85*cos(30*x^3+40*y^3)", "0.87*sin(20*x+30*y)"},
            {"0.98*sin(40*x+40*y)", "0.93*cos(150*x^2+15*y^2)", "0.4*(cos(30*x)-sin(20*y))"}};
}
inline json table_4x3_s_tilde_prime() {
    return {{"0.93-abs(0.45*(cos(x)+sin(y)))", "0.93-abs(0.9*sin(10*x^2+10*y^2))", "0.92-abs(0.9*cos(30*x^2+30*y^2))"},
            {"0.99-abs(0.93*cos(10*x^4+10*y^3))", "0.91-abs(0.45*(cos(x)-sin(y)))", "0.91-abs(0.95*sin(x^2+y^9))"},
            {"0.96-abs(0.9*cos(20*x+20*y))", "0.99-abs(0.85*cos(30*x^3+40*y^3))", "0.92-abs(0.87*sin(20*x+30*y))"},
            {"0.94-abs(0.98*sin(40*x+40*y))", "0.99-abs(0.93*cos(150*x^2+15*y^2))", "0.97-abs(0.4*(cos(30*x)-sin(20*y)))"}};
}
inline json table_4x3_s_tilde_4() {
    return {{"0.82-abs(0.45*(cos(x)+sin(y)))", "0.84-abs(0.9*sin(10*x^2+10*y^2))", "0.82-abs(0.9*cos(10*x^2+10*y^2))"},
            {"0.79-abs(0.99*cos(10*x^3+10*y^3))", "0.91-abs(0.45*(cos(x)-sin(y)))", "0.99-abs(0.9*sin(x^2+y^9))"},
            {"0.96-abs(0.9*cos(50*x+50*y))", "0.69-abs(0.99*cos(40*x^3+40*y^3))", "0.9-abs(0.9*sin(10*x+10*y))"},
            {"0.94-abs(0.9*sin(50*x+50*y))", "0.79-abs(0.99*cos(150*x^2+15*y^2))", "0.93-abs(0.45*(cos(20*x)-sin(20*y)))"}};
}

}  // namespace detail

inline std::vector<std::string> builtin_example_names() {
    return {"1d-config-1", "1d-config-2", "1d-config-3", "1d-config-4", "1d-mild", "2d-config-1", "2d-config-2",
            "2d-config-3", "2d-config-4", "2d-mild", "2d-zero"};
}

inline nlohmann::json builtin_example_json(const std::string& name) {
    using nlohmann::json;
    using namespace detail;
    const json s12 = {0.3, 0.85, 0.8, 0.5}, sp12 = {0.8, 0.6, 0.4, 0.5}, stp12 = {0.19, 0.37, 0.48, 0.43};
    const json s34 = {"2.9*x", "1.9*x", "x", "x"};
    const json sp34 = {"sin(10*x)", "cos(300*x)", "sin(100*x)", "cos(3*x)"};
    const json stp34 = {"0.99-abs(sin(10*x))", "0.9-abs(cos(300*x))", "0.95-abs(sin(100*x))", "0.9-abs(cos(3*x))"};
    if (name == "1d-config-1")
        return example_1d(name, {{"s", s12}, {"s_tilde", {0, 0, 0, 0}}, {"s_prime", sp12}, {"s_tilde_prime", stp12}});
    if (name == "1d-config-2")
        return example_1d(name, {{"s", s12}, {"s_tilde", {0.64, 0.14, 0.19, 0.49}}, {"s_prime", sp12}, {"s_tilde_prime", stp12}});
    if (name == "1d-config-3")
        return example_1d(name, {{"s", s34}, {"s_tilde", {0, 0, 0, 0}}, {"s_prime", sp34}, {"s_tilde_prime", stp34}});
    if (name == "1d-config-4")
        return example_1d(name, {{"s", s34},
                                 {"s_tilde", {"0.99-2.9*x", "0.99-1.9*x", "0.9-x", "0.9-x"}},
                                 {"s_prime", sp34},
                                 {"s_tilde_prime", stp34}});
    if (name == "1d-mild")
        return example_1d(name, {{"s", {0.3, 0.3, 0.3, 0.3}}, {"s_prime", {0.2, 0.2, 0.2, 0.2}},
                                 {"s_tilde", {0.1, 0.1, 0.1, 0.1}}, {"s_tilde_prime", {0.1, 0.1, 0.1, 0.1}}});
    if (name == "2d-config-1")
        return example_2d(name, {{"s", table_s_1()}, {"s_tilde", table_s_tilde_1()}, {"s_prime", zeros(4, 4)},
                                 {"s_tilde_prime", table_s_tilde_prime_1()}});
    if (name == "2d-config-2")
        return example_2d(name, {{"s", table_s_1()}, {"s_tilde", table_s_tilde_1()}, {"s_prime", table_s_prime_2()},
                                 {"s_tilde_prime", table_s_tilde_prime_1()}});
    if (name == "2d-config-3")
        return example_2d_4x3(name, {{"s", table_4x3_s()}, {"s_tilde", zeros(4, 3)}, {"s_prime", table_4x3_s_prime()},
                                     {"s_tilde_prime", table_4x3_s_tilde_prime()}});
    if (name == "2d-config-4")
        return example_2d_4x3(name, {{"s", table_4x3_s()}, {"s_tilde", table_4x3_s_tilde_4()},
                                     {"s_prime", table_4x3_s_prime()}, {"s_tilde_prime", table_4x3_s_tilde_prime()}});
    if (name == "2d-mild")
        return example_2d(name, {{"s", json(4, json(4, 0.3))}, {"s_prime", json(4, json(4, 0.2))},
                                 {"s_tilde", json(4, json(4, 0.1))}, {"s_tilde_prime", json(4, json(4, 0.1))}});
    if (name == "2d-zero")
        return example_2d(name, {{"s", zeros(4, 4)}, {"s_prime", zeros(4, 4)}, {"s_tilde", zeros(4, 4)},
                                 {"s_tilde_prime", zeros(4, 4)}});
    throw ValidationError("unknown example '" + name + "'");
}

inline RunConfig builtin_example(const std::string& name) { return parse_config(builtin_example_json(name)); }

}  // namespace hvrfif
