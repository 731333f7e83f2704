#pragma once

#include "hvrfif/error.hpp"
#include "hvrfif/partition.hpp"

#include <cmath>

namespace hvrfif {

/// Affine contraction L sending a domain onto a region. Evaluation uses the
/// two-point form so domain endpoints land on region endpoints exactly.
class AffineMap {
public:
    AffineMap() = default;

    AffineMap(Interval domain, Interval region, Orientation orientation)
        : domain_(domain), region_(region), orientation_(orientation) {
        if (!(domain.hi > domain.lo) || !(region.hi > region.lo))
            throw ValidationError("affine map needs non-degenerate intervals");
        const double ratio = region.length() / domain.length();
        slope_ = orientation == Orientation::Preserving ? ratio : -ratio;
        intercept_ = orientation == Orientation::Preserving ? region.lo - slope_ * domain.lo
                                                            : region.hi - slope_ * domain.lo;
        if (!(std::fabs(slope_) < 1.0))
            throw ValidationError("map from domain [" + std::to_string(domain.lo) + ", " + std::to_string(domain.hi) +
                                  "] onto region [" + std::to_string(region.lo) + ", " + std::to_string(region.hi) +
                                  "] is not a contraction (|a| = " + std::to_string(std::fabs(slope_)) + ")");
    }

    double slope() const { return slope_; }
    double intercept() const { return intercept_; }
    double ratio() const { return std::fabs(slope_); }
    const Interval& domain() const { return domain_; }
    const Interval& region() const { return region_; }
    Orientation orientation() const { return orientation_; }

    double operator()(double x) const {
        const double t = (x - domain_.lo) / domain_.length();
        return orientation_ == Orientation::Preserving ? (1.0 - t) * region_.lo + t * region_.hi
                                                       : (1.0 - t) * region_.hi + t * region_.lo;
    }

    double inverse(double x) const {
        double t = (x - region_.lo) / region_.length();
        if (orientation_ == Orientation::Reversing) t = 1.0 - t;
        return (1.0 - t) * domain_.lo + t * domain_.hi;
    }

private:
    Interval domain_{0.0, 1.0};
    Interval region_{0.0, 0.5};
    Orientation orientation_ = Orientation::Preserving;
    double slope_ = 0.5;
    double intercept_ = 0.0;
};

inline AffineMap make_L(Interval domain, Interval region, Orientation orientation) {
    return AffineMap(domain, region, orientation);
}

/// Product of two affine maps acting on (x, y).
struct ProductMap {
    AffineMap x_map;
    AffineMap y_map;

    double ratio() const { return std::fmax(x_map.ratio(), y_map.ratio()); }
};

}  // namespace hvrfif
