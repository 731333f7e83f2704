#pragma once

// CSV and PGM emitters plus JSON serialization of certificates and reports.

#include "hvrfif/error.hpp"
#include "hvrfif/grid.hpp"
#include "hvrfif/system1d.hpp"
#include "hvrfif/system2d.hpp"
#include "hvrfif/verify.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

namespace hvrfif {

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

template <std::size_t N>
void write_rows(const std::filesystem::path& path, const char* header, const std::vector<std::array<double, N>>& rows) {
    auto out = open_output(path);
    std::string line;
    out << header << '\n';
    for (const auto& r : rows) {
        line.clear();
        for (std::size_t c = 0; c < N; ++c) {
            if (c) line += ',';
            line += fmt17(r[c]);
        }
        line += '\n';
        out << line;
    }
    finish(out, path);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CSV

inline void write_csv(const SampledField1D& f, const std::filesystem::path& path) {
    std::vector<std::array<double, 3>> rows(f.grid.size());
    for (std::size_t k = 0; k < rows.size(); ++k) rows[k] = {f.grid.nodes[k], f.values[k][0], f.values[k][1]};
    detail::write_rows(path, "x,f1,f2", rows);
}

/// Row-major with y as the outer loop.
inline void write_csv(const SampledField2D& f, const std::filesystem::path& path) {
    std::vector<std::array<double, 4>> rows;
    rows.reserve(f.values.size());
    for (std::size_t iy = 0; iy < f.ny(); ++iy)
        for (std::size_t ix = 0; ix < f.nx(); ++ix)
            rows.push_back({f.gx.nodes[ix], f.gy.nodes[iy], f.at(ix, iy)[0], f.at(ix, iy)[1]});
    detail::write_rows(path, "x,y,f1,f2", rows);
}

inline void write_csv(const TrajectoryCloud& c, const std::filesystem::path& path) {
    detail::write_rows(path, "x,f1,f2", c.points);
}

inline void write_csv(const TrajectoryCloud2D& c, const std::filesystem::path& path) {
    detail::write_rows(path, "x,y,f1,f2", c.points);
}

// ---------------------------------------------------------------------------
// PGM

struct GrayImage {
    std::size_t width = 0, height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, top row first
    double min = 0.0, max = 0.0;

    std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

namespace detail {

inline std::pair<double, double> f1_range(const std::vector<Vec2>& values) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& v : values) {
        if (!std::isfinite(v[0])) throw ValidationError("field has non-finite values; cannot render");
        lo = std::fmin(lo, v[0]);
        hi = std::fmax(hi, v[0]);
    }
    return {lo, hi};
}

inline std::uint8_t level(double v, double lo, double hi) {
    return static_cast<std::uint8_t>(std::lround(255.0 * (v - lo) / (hi - lo)));
}

}  // namespace detail

/// Heightmap of f1: pixel = round(255 (f1 - min) / (max - min)); the top row is the largest y.
inline GrayImage render_image(const SampledField2D& f) {
    if (f.nx() < 2 || f.ny() < 2) throw ValidationError("field grid too small to render");
    GrayImage img{f.nx(), f.ny(), std::vector<std::uint8_t>(f.nx() * f.ny(), 128), 0.0, 0.0};
    std::tie(img.min, img.max) = detail::f1_range(f.values);
    if (!(img.max > img.min)) return img;
    for (std::size_t row = 0; row < img.height; ++row) {
        const std::size_t iy = img.height - 1 - row;
        for (std::size_t ix = 0; ix < img.width; ++ix)
            img.pixels[row * img.width + ix] = detail::level(f.at(ix, iy)[0], img.min, img.max);
    }
    return img;
}

/// White curve of f1 on black, one column per grid node and 256 rows; adjacent
/// columns are joined by vertical runs.
inline GrayImage render_image(const SampledField1D& f) {
    constexpr std::size_t rows = 256;
    if (f.grid.size() < 2) throw ValidationError("field grid too small to render");
    GrayImage img{f.grid.size(), rows, std::vector<std::uint8_t>(f.grid.size() * rows, 128), 0.0, 0.0};
    std::tie(img.min, img.max) = detail::f1_range(f.values);
    if (!(img.max > img.min)) return img;
    std::fill(img.pixels.begin(), img.pixels.end(), 0);
    auto row_of = [&](double v) { return static_cast<std::size_t>(255 - detail::level(v, img.min, img.max)); };
    std::size_t prev = row_of(f.values[0][0]);
    for (std::size_t col = 0; col < img.width; ++col) {
        const std::size_t cur = row_of(f.values[col][0]);
        const std::size_t lo = col == 0 ? cur : std::min(prev, cur), hi = col == 0 ? cur : std::max(prev, cur);
        for (std::size_t r = lo; r <= hi; ++r) img.pixels[r * img.width + col] = 255;
        prev = cur;
    }
    return img;
}

inline void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    {
        auto out = detail::open_output(path);
        out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
        out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
        detail::finish(out, path);
    }
    const std::filesystem::path side = path.string() + ".range";
    auto out = detail::open_output(side);
    out << "min " << detail::fmt17(img.min) << "\nmax " << detail::fmt17(img.max) << '\n';
    detail::finish(out, side);
}

template <class Field>
void write_pgm(const Field& f, const std::filesystem::path& path) {
    write_pgm(render_image(f), path);
}

inline GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string magic;
    GrayImage img;
    int maxval = 0;
    in >> magic >> img.width >> img.height >> maxval;
    in.get();
    if (magic != "P5" || maxval != 255) throw IoError("'" + path.string() + "' is not an 8-bit binary PGM");
    img.pixels.resize(img.width * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (!in) throw IoError("'" + path.string() + "' is truncated");
    return img;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

// NaN and infinities have no JSON spelling; they serialize as null.
inline nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace detail

inline nlohmann::json to_json(const ContractionReport& r) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : r.region_terms) terms.push_back({detail::num(t.visible_column), detail::num(t.hidden_column)});
    return {{"S_bar", detail::num(r.S_bar)},
            {"S_bar_bound", detail::num(r.S_bar_bound)},
            {"region_sup_terms", terms},
            {"max_factor_sup", detail::num(r.max_factor_sup)},
            {"L_L", detail::num(r.L_L)},
            {"L_S", detail::num(r.L_S)},
            {"L_Q", detail::num(r.L_Q)},
            {"alpha", detail::num(r.alpha)},
            {"theta_max", detail::num(r.theta_max)},
            {"certified", r.certified},
            {"bounds_mode", to_string(r.bounds_mode)}};
}

inline nlohmann::json to_json(const VerificationReport& r) {
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [k, v] : r.metadata) meta[k] = detail::num(v);
    nlohmann::json j = {{"name", r.name},
                        {"max_residual", detail::num(r.max_residual)},
                        {"threshold", detail::num(r.threshold)},
                        {"samples", r.samples},
                        {"pass", r.pass},
                        {"status", to_string(r.status)},
                        {"metadata", meta}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

template <class Result>
nlohmann::json solve_summary(const Result& r) {
    return {{"iterations", r.iterations}, {"final_change", detail::num(r.final_change)}, {"converged", r.converged}};
}

inline void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
    auto out = detail::open_output(path);
    out << j.dump(2) << '\n';
    detail::finish(out, path);
}

}  // namespace hvrfif
