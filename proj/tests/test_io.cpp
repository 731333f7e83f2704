#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hvrfif;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "hvrfif_test_io";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(Csv, ZeroFactorField1D) {
    const auto res = solve_fixed_point_1d(fx::zero_1d(), {17, 1e-10, 10});
    const auto p = scratch("zero1d.csv");
    write_csv(res.field, p);
    const auto text = slurp(p);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    const auto ls = lines(text);
    ASSERT_EQ(ls.size(), 18u);
    EXPECT_EQ(ls[0], "x,f1,f2");
    EXPECT_EQ(ls[9], "0.5,10,0");
    EXPECT_EQ(ls[1], "0,20,0");
}

TEST(Csv, SeventeenDigits) {
    SampledField1D f{make_knot_grid({0, 1, 2}, 3), {{0.1, 1.0 / 3.0}, {2, 3}, {4, 5}}};
    const auto p = scratch("digits.csv");
    write_csv(f, p);
    EXPECT_EQ(lines(slurp(p))[1], "0,0.10000000000000001,0.33333333333333331");
}

TEST(Csv, EmptyCloudHeaderOnly) {
    const auto p = scratch("empty.csv");
    write_csv(TrajectoryCloud{}, p);
    EXPECT_EQ(slurp(p), "x,f1,f2\n");
    write_csv(TrajectoryCloud2D{}, p);
    EXPECT_EQ(slurp(p), "x,y,f1,f2\n");
}

TEST(Csv, Field2DRowOrderAndKnots) {
    const auto res = solve_fixed_point_2d(fx::zero_2d(), {17, 17, 1e-9, 10});
    const auto p = scratch("zero2d.csv");
    write_csv(res.field, p);
    const auto ls = lines(slurp(p));
    ASSERT_EQ(ls.size(), 1u + 17 * 17);
    EXPECT_EQ(ls[0], "x,y,f1,f2");
    EXPECT_EQ(ls[1], "0,0,46,0");
    EXPECT_EQ(ls[2].substr(0, 7), "0.0625,");  // x varies fastest
    // (x, y) = (0.25, 0.25) is row 4 * 17 + 4.
    EXPECT_EQ(ls[1 + 4 * 17 + 4], "0.25,0.25,23,0");
}

TEST(Csv, CloudGenerationOrder) {
    TrajectoryCloud c;
    c.points = {{0.5, 1, 2}, {0.25, 3, 4}};
    const auto p = scratch("cloud.csv");
    write_csv(c, p);
    EXPECT_EQ(slurp(p), "x,f1,f2\n0.5,1,2\n0.25,3,4\n");
}

TEST(Csv, UnwritablePath) {
    SampledField1D f{make_knot_grid({0, 1}, 2), {{0, 0}, {1, 1}}};
    EXPECT_THROW(write_csv(f, "/nonexistent_dir_hvrfif/x.csv"), IoError);
}

TEST(Pgm, FlatDatasetIsMidGray) {
    const auto d = validate_dataset_1d({0, 0.25, 0.5, 0.75, 1}, {7, 7, 7, 7, 7}, {0, 0, 0, 0, 0});
    const auto sys = fx::system_1d(constant_factor_spec(4, 0, 0, 0, 0), d);
    const auto res = solve_fixed_point_1d(sys, {65, 1e-10, 10});
    const auto img = render_image(res.field);
    EXPECT_EQ(img.width, 65u);
    EXPECT_EQ(img.height, 256u);
    for (auto v : img.pixels) ASSERT_EQ(v, 128);
}

TEST(Pgm, ZeroFactor2DGradient) {
    const auto res = solve_fixed_point_2d(fx::zero_2d(), {257, 257, 1e-9, 10});
    const auto p = scratch("zero2d.pgm");
    write_pgm(res.field, p);
    const auto img = read_pgm(p);
    EXPECT_EQ(img.width, 257u);
    EXPECT_EQ(img.height, 257u);
    // Top row is y = 1. Data max 88 at (0.5, 0.25) and (1, 0.5); min 23 at (0.25, 0.25) and (1, 0.25).
    EXPECT_EQ(img.at(256 - 64, 128), 255);
    EXPECT_EQ(img.at(256 - 64, 64), 0);
    EXPECT_EQ(img.at(256 - 64, 256), 0);
    EXPECT_EQ(img.at(0, 0), std::lround(255.0 * (39 - 23) / 65.0));
    const auto range = slurp(p.string() + ".range");
    EXPECT_EQ(range, "min 23\nmax 88\n");
}

TEST(Pgm, HeaderBytes) {
    const auto res = solve_fixed_point_2d(fx::zero_2d(), {17, 17, 1e-9, 10});
    const auto p = scratch("small.pgm");
    write_pgm(res.field, p);
    const auto bytes = slurp(p);
    EXPECT_EQ(bytes.substr(0, 13), "P5\n17 17\n255\n");
    EXPECT_EQ(bytes.size(), 13u + 17 * 17);
}

TEST(Pgm, CurveRaster1D) {
    const auto res = solve_fixed_point_1d(fx::zero_1d(), {401, 1e-10, 10});
    const auto img = render_image(res.field);
    EXPECT_EQ(img.width, 401u);
    EXPECT_EQ(img.height, 256u);
    // Every column has a white run; the max (50 at x = 0.75) is in the top row.
    for (std::size_t col = 0; col < img.width; ++col) {
        int lit = 0;
        for (std::size_t row = 0; row < img.height; ++row) lit += img.at(row, col) == 255;
        ASSERT_GT(lit, 0) << col;
    }
    EXPECT_EQ(img.at(0, 300), 255);
    EXPECT_EQ(img.at(255, 200), 255);
    EXPECT_EQ(img.at(128, 200), 0);
}

TEST(Pgm, TinyGridIsError) {
    SampledField2D f{make_knot_grid({0, 1}, 2), make_knot_grid({0, 1}, 2), {{0, 0}, {1, 0}, {2, 0}}};
    f.gy.nodes.resize(1);
    EXPECT_THROW(render_image(f), ValidationError);
    SampledField1D g{make_knot_grid({0, 1}, 2), {{0, 0}}};
    g.grid.nodes.resize(1);
    EXPECT_THROW(render_image(g), ValidationError);
}

TEST(Json, ReportSerialization) {
    const auto rep = contraction_report_1d(fx::config_1d(1));
    const auto j = to_json(rep);
    EXPECT_EQ(j["certified"], true);
    EXPECT_EQ(j["bounds_mode"], "exact");
    EXPECT_DOUBLE_EQ(j["S_bar"].get<double>(), 0.99);
    EXPECT_EQ(j["region_sup_terms"].size(), 4u);
    VerificationReport v;
    v.name = "x";
    v.max_residual = NAN;
    EXPECT_TRUE(to_json(v)["max_residual"].is_null());
}
