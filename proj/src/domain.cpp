/**
 * @file domain.cpp
 * @brief Built-in signed distance functions.
 */

#include "nlstokes/geometry/domain.hpp"

#include <algorithm>
#include <cmath>

namespace nls {

Domain Domain::unit_disk() {
    Domain d;
    d.shape_ = Shape::Disk;
    d.name_ = "unit-disk";
    d.dim_ = 2;
    d.lo_ = {-1.0, -1.0, 0.0};
    d.hi_ = {1.0, 1.0, 0.0};
    d.volume_ = M_PI;
    d.surface_ = 2.0 * M_PI;
    return d;
}

Domain Domain::unit_square() {
    Domain d;
    d.shape_ = Shape::Square;
    d.name_ = "unit-square";
    d.dim_ = 2;
    d.lo_ = {0.0, 0.0, 0.0};
    d.hi_ = {1.0, 1.0, 0.0};
    d.volume_ = 1.0;
    d.surface_ = 4.0;
    return d;
}

Domain Domain::by_name(const std::string& name) {
    if (name == "unit-disk") return unit_disk();
    if (name == "unit-square") return unit_square();
    throw ConfigError("unknown domain '" + name + "' (built-ins: unit-disk, unit-square)");
}

double Domain::signed_distance(const double* x) const {
    switch (shape_) {
        case Shape::Disk:
            return std::hypot(x[0], x[1]) - 1.0;
        case Shape::Square: {
            // Exact SDF of an axis-aligned box: split off the per-axis
            // excess over the half-width, combine outside distances by the
            // Euclidean norm and inside ones by the max.
            const double qx = std::abs(x[0] - 0.5) - 0.5;
            const double qy = std::abs(x[1] - 0.5) - 0.5;
            const double ox = std::max(qx, 0.0);
            const double oy = std::max(qy, 0.0);
            return std::hypot(ox, oy) + std::min(std::max(qx, qy), 0.0);
        }
    }
    return 0.0;
}

}  // namespace nls
