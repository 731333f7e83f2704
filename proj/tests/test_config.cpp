#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace hvrfif;
using nlohmann::json;

namespace {

json f1_zero_config() {
    return json::parse(R"({
      "dimension": 1,
      "dataset": {"x": [0, 0.25, 0.5, 0.75, 1], "y": [20, 30, 10, 50, 40], "z": [0, 0, 0, 0, 0]},
      "partition": {"domains": [[0, 2], [2, 4]], "gamma": [1, 1, 2, 2]},
      "factors": {"s": [0, 0, 0, 0], "s_prime": [0, 0, 0, 0], "s_tilde": [0, 0, 0, 0], "s_tilde_prime": [0, 0, 0, 0]}
    })");
}

std::string error_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

}  // namespace

TEST(Builtin, Config1LoadsTabulatedFactors) {
    const auto c = builtin_example("1d-config-1");
    EXPECT_EQ(c.dimension, 1);
    EXPECT_EQ(c.factors.s, (std::vector<std::string>{"0.3", "0.85", "0.8", "0.5"}));
    ASSERT_TRUE(c.data1d);
    EXPECT_EQ(c.data1d->ys, (std::vector<double>{20, 30, 10, 50, 40}));
    EXPECT_EQ(c.partition1d->gamma, (std::vector<std::size_t>{0, 0, 1, 1}));
    const auto f = build_factor_set_1d(c.factors, *c.data1d);
    EXPECT_DOUBLE_EQ(f[1].s(0.3), 0.85);
    EXPECT_DOUBLE_EQ(f[3].s_tilde_prime(0.9), 0.43);
}

TEST(Builtin, AllExamplesParse) {
    for (const auto& n : builtin_example_names()) {
        const auto c = builtin_example(n);
        EXPECT_EQ(c.name, n);
    }
    EXPECT_THROW(builtin_example("nope"), ValidationError);
}

TEST(Builtin, BivariateTablesAreTauOrdered) {
    const auto c = builtin_example("2d-config-2");
    // Table entry (i = 2, j = 1) of s (1-based) is -0.94; tau(1, 0) = 1.
    const auto f = build_factor_set_2d(c.factors, *c.data2d);
    EXPECT_DOUBLE_EQ(f[tau(1, 0, 4)].s(0, 0), -0.94);
    EXPECT_DOUBLE_EQ(f[tau(0, 1, 4)].s(0, 0), 0.6);
    EXPECT_DOUBLE_EQ(f[tau(2, 1, 4)].s_prime(0, 0), -0.69);
    EXPECT_DOUBLE_EQ(f[tau(3, 3, 4)].s_tilde_prime(0, 0), 0.56);
    EXPECT_EQ(c.partition2d->gamma[tau(3, 0, 4)], 1u);
}

TEST(Parse, MinimalConfig) {
    const auto c = parse_config(f1_zero_config());
    EXPECT_EQ(c.solver.grid_points, 4097u);
    EXPECT_DOUBLE_EQ(c.solver.tolerance(1), 1e-10);
    EXPECT_EQ(c.partition1d->orientations.size(), 4u);
}

TEST(Parse, LengthError) {
    auto j = f1_zero_config();
    j["factors"]["s_tilde"] = {"0.1", "0.1", "0.1"};
    EXPECT_EQ(error_of(j), "factors.s_tilde");
}

TEST(Parse, DomainSizeError) {
    auto j = f1_zero_config();
    j["partition"]["domains"] = {{0, 1}, {2, 4}};
    EXPECT_EQ(error_of(j), "partition");
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("fewer than 2"), std::string::npos) << e.what();
    }
}

TEST(Parse, FieldPaths) {
    auto j = f1_zero_config();
    j["factors"]["s"][2] = "2.9x";
    EXPECT_EQ(error_of(j), "factors.s[2]");
    j = f1_zero_config();
    j["dataset"].erase("z");
    EXPECT_EQ(error_of(j), "dataset.z");
    j = f1_zero_config();
    j["solver"] = {{"grid", 4097}, {"tolerance", 1e-9}};
    EXPECT_EQ(error_of(j), "solver.tolerance");
    j = f1_zero_config();
    j["partition"]["gamma"][0] = 0;
    EXPECT_EQ(error_of(j), "partition.gamma[0]");
    j = f1_zero_config();
    j["dimension"] = 3;
    EXPECT_EQ(error_of(j), "dimension");
}

TEST(Parse, MalformedDocument) {
    EXPECT_THROW(parse_config_text("{\"dimension\": 1,"), ConfigError);
}

TEST(Parse, FactorObjectsAndOverrides) {
    auto j = f1_zero_config();
    j["factors"]["s"][1] = {{"expr", "0.4*sin(x)"}, {"sup", 0.4}, {"lip", 0.4}};
    const auto c = parse_config(j);
    ASSERT_EQ(c.factors.overrides.size(), 4u);
    EXPECT_EQ(*c.factors.overrides[1][0].sup, 0.4);
    const auto f = build_factor_set_1d(c.factors, *c.data1d);
    EXPECT_EQ(f[1].s.bounds_mode, BoundsMode::UserSupplied);
    EXPECT_EQ(f[0].s.bounds_mode, BoundsMode::Exact);
}

TEST(Parse, UniformHiddenValues) {
    auto j = f1_zero_config();
    j["dataset"]["z"] = {{"uniform", {{"low", -1}, {"high", 1}, {"seed", 5}}}};
    const auto a = parse_config(j), b = parse_config(j);
    EXPECT_EQ(a.data1d->zs, b.data1d->zs);
    for (double z : a.data1d->zs) {
        EXPECT_GE(z, -1);
        EXPECT_LT(z, 1);
    }
}

TEST(Parse, OrientationsAndSettings) {
    auto j = f1_zero_config();
    j["partition"]["orientations"] = "+-+-";
    j["solver"] = {{"grid", 1025}, {"tol", 1e-8}, {"max_iter", 50}};
    j["chaos"] = {{"points", 1000}, {"burn_in", 10}, {"seed", 99}};
    j["output"] = {{"dir", "elsewhere"}, {"formats", {"csv"}}};
    j["hidden_margin"] = 0.25;
    const auto c = parse_config(j);
    EXPECT_EQ(c.partition1d->orientations[1], Orientation::Reversing);
    EXPECT_EQ(c.solver.grid_points, 1025u);
    EXPECT_EQ(c.chaos.seed, 99u);
    EXPECT_FALSE(c.output.wants("pgm"));
    EXPECT_DOUBLE_EQ(c.hidden_margin, 0.25);
    j["chaos"]["burn_in"] = 1000;
    EXPECT_EQ(error_of(j), "chaos");
}

TEST(Parse, BivariateShapes) {
    auto j = builtin_example_json("2d-config-1");
    j["factors"]["s"][3].erase(0);
    EXPECT_EQ(error_of(j), "factors.s[3]");
    j = builtin_example_json("2d-config-1");
    j["partition"]["orientations"] = json(4, json(4, "+-"));
    const auto c = parse_config(j);
    EXPECT_EQ(c.partition2d->orientations[5].y, Orientation::Reversing);
}

TEST(Load, FromFileAndMissingFile) {
    const auto p = std::filesystem::temp_directory_path() / "hvrfif_cfg.json";
    std::ofstream(p) << f1_zero_config().dump();
    EXPECT_NO_THROW(load_config(p));
    EXPECT_THROW(load_config("/nonexistent/hvrfif.json"), IoError);
}
