#pragma once

/**
 * @file domain.hpp
 * @brief Built-in domains described by exact signed distance functions.
 *
 * Signed distance is negative inside, positive outside and 1-Lipschitz;
 * all region logic (inclusion, interior/layer partition) reduces to
 * comparisons against it.
 */

#include <array>
#include <string>

#include "nlstokes/common.hpp"

namespace nls {

/**
 * @brief Planar domain with exact signed distance.
 *
 * Built-ins:
 *  - "unit-disk":   radius-1 disk centered at the origin (C² boundary),
 *  - "unit-square": [0,1]² (corners are only Lipschitz; offered for
 *                   convenience, verification studies run on the disk).
 */
class Domain {
public:
    /** @brief Look up a built-in by name. @throws ConfigError otherwise. */
    static Domain by_name(const std::string& name);

    static Domain unit_disk();
    static Domain unit_square();

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }

    /** @brief Negative inside, positive outside, zero on the boundary. */
    double signed_distance(const double* x) const;

    const std::array<double, 3>& bbox_lo() const { return lo_; }
    const std::array<double, 3>& bbox_hi() const { return hi_; }

    /** @brief Exact measure of the domain (area in 2-D). */
    double volume() const { return volume_; }
    /** @brief Exact boundary measure (perimeter in 2-D). */
    double surface_area() const { return surface_; }

private:
    enum class Shape { Disk, Square };

    Shape shape_ = Shape::Disk;
    std::string name_;
    int dim_ = 2;
    std::array<double, 3> lo_{}, hi_{};
    double volume_ = 0.0;
    double surface_ = 0.0;
};

}  // namespace nls
