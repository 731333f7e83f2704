#pragma once

// Datasets, region/domain partitions and the row-stochastic connection
// matrix that drives the recurrent system.
//
// All indices are zero-based: region i is [x_i, x_{i+1}], a domain is a
// pair of knot indices (start, end) with end - start >= 2.

#include "hvrfif/error.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace hvrfif {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
};

enum class Orientation { Preserving, Reversing };

inline char orientation_symbol(Orientation o) { return o == Orientation::Preserving ? '+' : '-'; }

struct HiddenDataset1D {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> zs;

    std::size_t regions() const { return xs.size() - 1; }
    Interval span() const { return {xs.front(), xs.back()}; }
    Interval region(std::size_t i) const { return {xs[i], xs[i + 1]}; }
};

namespace detail {

inline void require_strictly_increasing(const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]))
            throw ValidationError(std::string(name) + "[" + std::to_string(i) + "] is not finite");
        if (i > 0 && !(v[i] > v[i - 1]))
            throw ValidationError(std::string(name) + " not strictly increasing at index " + std::to_string(i));
    }
}

inline void require_finite(const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw ValidationError(std::string(name) + "[" + std::to_string(i) + "] is not finite");
}

}  // namespace detail

inline HiddenDataset1D validate_dataset_1d(std::vector<double> xs, std::vector<double> ys, std::vector<double> zs) {
    if (xs.size() != ys.size() || xs.size() != zs.size())
        throw ValidationError("dataset length mismatch: x=" + std::to_string(xs.size()) + " y=" +
                              std::to_string(ys.size()) + " z=" + std::to_string(zs.size()));
    if (xs.size() < 3)
        throw ValidationError("dataset needs n >= 2 regions, got " +
                              std::to_string(xs.empty() ? 0 : xs.size() - 1));
    detail::require_strictly_increasing(xs, "x");
    detail::require_finite(ys, "y");
    detail::require_finite(zs, "z");
    return {std::move(xs), std::move(ys), std::move(zs)};
}

struct Domain1D {
    std::size_t start = 0;  // knot index s(k)
    std::size_t end = 0;    // knot index e(k)

    bool contains_region(std::size_t i) const { return start <= i && i + 1 <= end; }
};

struct Partition1D {
    std::size_t n = 0;
    std::vector<Domain1D> domains;
    std::vector<std::size_t> gamma;          // region -> domain
    std::vector<Orientation> orientations;   // region -> orientation of its L map

    const Domain1D& domain_of(std::size_t region) const { return domains[gamma[region]]; }
};

/// Builds a validated 1D partition. Every listed invariant is checked; nothing is repaired.
inline Partition1D build_partition_1d(const HiddenDataset1D& data, std::vector<Domain1D> domains,
                                      std::vector<std::size_t> gamma, std::vector<Orientation> orientations) {
    const std::size_t n = data.regions();
    if (domains.size() < 2 || domains.size() > n)
        throw ValidationError("domain count l=" + std::to_string(domains.size()) + " outside [2, " +
                              std::to_string(n) + "]");
    for (std::size_t k = 0; k < domains.size(); ++k) {
        const auto& d = domains[k];
        if (d.end > n || d.start >= d.end)
            throw ValidationError("domain " + std::to_string(k) + " has invalid knot range");
        if (d.end - d.start < 2)
            throw ValidationError("domain " + std::to_string(k) + " spans fewer than 2 regions");
    }
    if (gamma.size() != n)
        throw ValidationError("gamma has " + std::to_string(gamma.size()) + " entries for " + std::to_string(n) +
                              " regions");
    for (std::size_t i = 0; i < n; ++i)
        if (gamma[i] >= domains.size())
            throw ValidationError("gamma[" + std::to_string(i) + "] out of range");
    if (orientations.empty())
        orientations.assign(n, Orientation::Preserving);
    if (orientations.size() != n)
        throw ValidationError("orientation count does not match region count");
    return {n, std::move(domains), std::move(gamma), std::move(orientations)};
}

/// Dense N x N row-stochastic matrix, row-major.
class ConnectionMatrix {
public:
    ConnectionMatrix() = default;
    explicit ConnectionMatrix(std::size_t size) : size_(size), p_(size * size, 0.0) {}

    std::size_t size() const { return size_; }
    double operator()(std::size_t s, std::size_t t) const { return p_[s * size_ + t]; }
    double& operator()(std::size_t s, std::size_t t) { return p_[s * size_ + t]; }

    double row_sum(std::size_t s) const {
        double sum = 0.0;
        for (std::size_t t = 0; t < size_; ++t) sum += (*this)(s, t);
        return sum;
    }

private:
    std::size_t size_ = 0;
    std::vector<double> p_;
};

namespace detail {

// Fills support[s][t] = contained(s, t) and normalizes by the positive count of each row.
template <class Contained>
ConnectionMatrix normalized_support(std::size_t size, Contained contained) {
    ConnectionMatrix m(size);
    for (std::size_t s = 0; s < size; ++s) {
        std::size_t count = 0;
        for (std::size_t t = 0; t < size; ++t)
            if (contained(s, t)) ++count;
        if (count == 0)
            throw ValidationError("region " + std::to_string(s) + " lies in no map's domain (zero row)");
        const double w = 1.0 / static_cast<double>(count);
        for (std::size_t t = 0; t < size; ++t)
            if (contained(s, t)) m(s, t) = w;
    }
    return m;
}

}  // namespace detail

/// p[s][t] > 0 exactly when region s lies inside the domain of map t. Rows are
/// normalized by their number of positive entries.
inline ConnectionMatrix connection_matrix_1d(const Partition1D& p) {
    return detail::normalized_support(p.n, [&](std::size_t s, std::size_t t) {
        return p.domain_of(t).contains_region(s);
    });
}

// ---------------------------------------------------------------------------
// Bivariate grid

struct HiddenDataset2D {
    std::vector<double> xs;  // n + 1
    std::vector<double> ys;  // m + 1
    std::vector<double> zs;  // (n+1)*(m+1), index i*(m+1) + j
    std::vector<double> ts;  // same layout

    std::size_t nx() const { return xs.size() - 1; }
    std::size_t ny() const { return ys.size() - 1; }
    double z(std::size_t i, std::size_t j) const { return zs[i * ys.size() + j]; }
    double t(std::size_t i, std::size_t j) const { return ts[i * ys.size() + j]; }
};

/// Grid tables are given as rows indexed by the x knot, columns by the y knot.
inline HiddenDataset2D validate_dataset_2d(std::vector<double> xs, std::vector<double> ys,
                                           const std::vector<std::vector<double>>& zss,
                                           const std::vector<std::vector<double>>& tss) {
    if (xs.size() < 3 || ys.size() < 3)
        throw ValidationError("bivariate dataset needs n >= 2 and m >= 2");
    detail::require_strictly_increasing(xs, "x");
    detail::require_strictly_increasing(ys, "y");
    auto flatten = [&](const std::vector<std::vector<double>>& table, const char* name) {
        if (table.size() != xs.size())
            throw ValidationError(std::string(name) + " has " + std::to_string(table.size()) + " rows, expected " +
                                  std::to_string(xs.size()));
        std::vector<double> flat;
        flat.reserve(xs.size() * ys.size());
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (table[i].size() != ys.size())
                throw ValidationError(std::string(name) + " row " + std::to_string(i) + " has " +
                                      std::to_string(table[i].size()) + " entries, expected " +
                                      std::to_string(ys.size()));
            flat.insert(flat.end(), table[i].begin(), table[i].end());
        }
        detail::require_finite(flat, name);
        return flat;
    };
    auto z = flatten(zss, "z");
    auto t = flatten(tss, "t");
    return {std::move(xs), std::move(ys), std::move(z), std::move(t)};
}

struct Domain2D {
    std::size_t sx = 0, ex = 0, sy = 0, ey = 0;

    bool contains_region(std::size_t i, std::size_t j) const {
        return sx <= i && i + 1 <= ex && sy <= j && j + 1 <= ey;
    }
};

struct OrientationPair {
    Orientation x = Orientation::Preserving;
    Orientation y = Orientation::Preserving;
};

/// Region linearization: tau(i, j) = i + j * n (zero-based form of i + (j-1)n).
inline std::size_t tau(std::size_t i, std::size_t j, std::size_t n) { return i + j * n; }

struct Partition2D {
    std::size_t n = 0, m = 0;
    std::vector<Domain2D> domains;
    std::vector<std::size_t> gamma;               // indexed by tau(i, j)
    std::vector<OrientationPair> orientations;    // indexed by tau(i, j)

    std::size_t regions() const { return n * m; }
    std::size_t index(std::size_t i, std::size_t j) const { return tau(i, j, n); }
    std::size_t region_x(std::size_t r) const { return r % n; }
    std::size_t region_y(std::size_t r) const { return r / n; }
    const Domain2D& domain_of(std::size_t r) const { return domains[gamma[r]]; }
};

inline Partition2D build_partition_2d(const HiddenDataset2D& data, std::vector<Domain2D> domains,
                                      std::vector<std::size_t> gamma, std::vector<OrientationPair> orientations) {
    const std::size_t n = data.nx(), m = data.ny(), count = n * m;
    if (domains.size() < 2 || domains.size() > count)
        throw ValidationError("domain count l=" + std::to_string(domains.size()) + " outside [2, " +
                              std::to_string(count) + "]");
    for (std::size_t k = 0; k < domains.size(); ++k) {
        const auto& d = domains[k];
        if (d.ex > n || d.ey > m || d.sx >= d.ex || d.sy >= d.ey)
            throw ValidationError("domain " + std::to_string(k) + " has invalid knot range");
        if (d.ex - d.sx < 2 || d.ey - d.sy < 2)
            throw ValidationError("domain " + std::to_string(k) + " spans fewer than 2 regions along an axis");
    }
    if (gamma.size() != count)
        throw ValidationError("gamma has " + std::to_string(gamma.size()) + " entries for " +
                              std::to_string(count) + " regions");
    for (std::size_t r = 0; r < count; ++r)
        if (gamma[r] >= domains.size())
            throw ValidationError("gamma[" + std::to_string(r) + "] out of range");
    if (orientations.empty())
        orientations.assign(count, OrientationPair{});
    if (orientations.size() != count)
        throw ValidationError("orientation count does not match region count");
    return {n, m, std::move(domains), std::move(gamma), std::move(orientations)};
}

/// N x N matrix over tau-linearized regions.
inline ConnectionMatrix connection_matrix_2d(const Partition2D& p) {
    return detail::normalized_support(p.regions(), [&](std::size_t s, std::size_t t) {
        return p.domain_of(t).contains_region(p.region_x(s), p.region_y(s));
    });
}

}  // namespace hvrfif
