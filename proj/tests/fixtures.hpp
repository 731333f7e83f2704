#pragma once

#include "hvrfif/hvrfif.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace fx {

using namespace hvrfif;

inline HiddenDataset1D example_data(std::vector<double> z = {0, 0, 0, 0, 0}) {
    return validate_dataset_1d({0, 0.25, 0.5, 0.75, 1}, {20, 30, 10, 50, 40}, std::move(z));
}

// Domains (0,2), (2,4); gamma = (1,1,2,2); all orientations preserving.
inline Partition1D partition_f1(const HiddenDataset1D& d) {
    return build_partition_1d(d, {{0, 2}, {2, 4}}, {0, 0, 1, 1}, {});
}

inline FactorSpec example_factors_1d(const std::string& name) { return builtin_example(name).factors; }

inline MapSystem1D system_1d(const FactorSpec& spec, const HiddenDataset1D& d = example_data()) {
    return build_system_1d(d, partition_f1(d), build_factor_set_1d(spec, d));
}

inline MapSystem1D config_1d(int k) { return system_1d(example_factors_1d("1d-config-" + std::to_string(k))); }

inline MapSystem1D zero_1d() { return system_1d(constant_factor_spec(4, 0, 0, 0, 0)); }

inline MapSystem1D mild_1d() { return system_1d(constant_factor_spec(4, 0.3, 0.2, 0.1, 0.1)); }

inline const std::vector<std::vector<double>>& table_z() {
    static const std::vector<std::vector<double>> z = {{46, 32, 65, 73, 39},
                                                       {32, 23, 84, 33, 29},
                                                       {76, 88, 58, 73, 88},
                                                       {62, 79, 33, 86, 43},
                                                       {49, 23, 39, 76, 32}};
    return z;
}

inline HiddenDataset2D table_data(std::vector<std::vector<double>> t = std::vector<std::vector<double>>(5, std::vector<double>(5, 0.0))) {
    const std::vector<double> k = {0, 0.25, 0.5, 0.75, 1};
    return validate_dataset_2d(k, k, table_z(), t);
}

inline Partition2D quadrant(const HiddenDataset2D& d) {
    std::vector<std::size_t> gamma(16);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 4; ++i) gamma[tau(i, j, 4)] = (i < 2 ? 0 : 1) + (j < 2 ? 0 : 2);
    return build_partition_2d(d, {{0, 2, 0, 2}, {2, 4, 0, 2}, {0, 2, 2, 4}, {2, 4, 2, 4}}, gamma, {});
}

inline MapSystem2D system_2d(const FactorSpec& spec, const HiddenDataset2D& d = table_data()) {
    return build_system_2d(d, quadrant(d), build_factor_set_2d(spec, d));
}

inline MapSystem2D config_2d(int k) { return system_2d(builtin_example("2d-config-" + std::to_string(k)).factors); }

inline MapSystem2D zero_2d() { return system_2d(constant_factor_spec(16, 0, 0, 0, 0)); }

inline MapSystem2D mild_2d() { return system_2d(constant_factor_spec(16, 0.3, 0.2, 0.1, 0.1)); }

inline std::vector<double> random_knots(Rng& rng, std::size_t n) {
    std::vector<double> x(n + 1);
    x[0] = rng.uniform(-2, 2);
    for (std::size_t i = 1; i <= n; ++i) x[i] = x[i - 1] + rng.uniform(0.1, 1.0);
    return x;
}

inline std::vector<double> random_values(Rng& rng, std::size_t n, double lo = -50, double hi = 50) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Random valid partition: domain 0 is the whole interval and region 0 uses it,
// so every region is covered and always has a domain longer than itself.
inline Partition1D random_partition_1d(Rng& rng, const HiddenDataset1D& d) {
    const std::size_t n = d.regions();
    const std::size_t l = 2 + rng.below(std::min<std::size_t>(n - 1, 4));
    std::vector<Domain1D> domains = {{0, n}};
    while (domains.size() < l) {
        const std::size_t s = rng.below(n - 1);
        domains.push_back({s, s + 2 + rng.below(n - s - 1)});
    }
    auto length = [&](std::size_t a, std::size_t b) { return d.xs[b] - d.xs[a]; };
    std::vector<std::size_t> gamma(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> ok;
        for (std::size_t k = 0; k < l; ++k)
            if (length(domains[k].start, domains[k].end) > length(i, i + 1)) ok.push_back(k);
        gamma[i] = ok[rng.below(ok.size())];
    }
    gamma[0] = 0;
    std::vector<Orientation> o(n);
    for (auto& x : o) x = rng.below(2) ? Orientation::Reversing : Orientation::Preserving;
    return build_partition_1d(d, domains, gamma, o);
}

}  // namespace fx
