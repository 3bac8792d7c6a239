#pragma once

/**
 * @file cloud.hpp
 * @brief Lattice point clouds, interior/layer partition and neighbor search.
 *
 * Points are midpoints of a uniform lattice of spacing h clipped strictly to
 * the domain; each carries the cell volume h^dim. The partition splits the
 * cloud at signed distance -2*delta: strictly deeper points are Interior
 * (where the momentum equation is imposed), the rest form the Layer that
 * carries the volume constraint. Neighbor queries return every point within
 * the interaction radius 2*delta (strict, self included) through a uniform
 * cell grid whose results are independent of threading.
 */

#include <cstdint>
#include <vector>

#include "nlstokes/geometry/domain.hpp"

namespace nls {

enum class RegionTag : std::uint8_t { Interior = 0, Layer = 1 };

/**
 * @brief Points, volumes, tags and the neighbor index of one discretization.
 *
 * Built in two stages: sample_grid() fills points and volumes,
 * partition() fixes the interaction radius, tags every point and builds
 * the cell grid. Neighbor queries require the second stage.
 */
class PointCloud {
public:
    int dim() const { return dim_; }
    int size() const { return static_cast<int>(vol_.size()); }
    double spacing() const { return h_; }
    /** @brief Interaction-radius parameter; 0 until partition() ran. */
    double delta() const { return delta_; }

    const double* point(int i) const { return pts_.data() + static_cast<std::size_t>(i) * dim_; }
    double volume(int i) const { return vol_[i]; }
    RegionTag tag(int i) const { return tag_[i]; }

    const std::vector<double>& points() const { return pts_; }
    const std::vector<double>& volumes() const { return vol_; }
    const std::vector<RegionTag>& tags() const { return tag_; }

    /** @brief Ascending ids of the Interior region (empty before partition). */
    const std::vector<int>& interior() const { return interior_; }
    /** @brief Ascending ids of the Layer region. */
    const std::vector<int>& layer() const { return layer_; }

    /**
     * @brief Ids j with ||x_j - x_i|| < 2*delta, including i itself.
     *
     * With sorted=true ids come back ascending; with sorted=false they come
     * back in a fixed cell-scan order (still deterministic, cheaper for
     * streaming consumers that only accumulate).
     *
     * @throws Error when called before partition().
     */
    void neighbors_into(int i, std::vector<int>& out, bool sorted = true) const;
    std::vector<int> neighbors(int i) const;

    friend PointCloud sample_grid(const Domain& dom, double h);
    friend void partition(PointCloud& cloud, const Domain& dom, double delta);

private:
    int cell_of(const double* x) const;

    int dim_ = 0;
    double h_ = 0.0;
    double delta_ = 0.0;
    std::vector<double> pts_;
    std::vector<double> vol_;
    std::vector<RegionTag> tag_;
    std::vector<int> interior_;
    std::vector<int> layer_;

    // Uniform cell grid over the bounding box of the points. Cells are at
    // least 2*delta wide, so any interaction partner lies in the 3^dim block
    // around a point's own cell. order_ lists point ids grouped by cell,
    // ascending within each cell; cell_start_ holds the group offsets.
    double cell_w_ = 0.0;
    std::array<int, 3> ncell_{1, 1, 1};
    std::array<double, 3> grid_lo_{};
    std::vector<int> cell_start_;
    std::vector<int> order_;
};

/**
 * @brief Sample the lattice (k + 1/2) h and keep strictly interior points.
 *
 * Points are ordered lexicographically in the lattice index (last coordinate
 * slowest), volumes are h^dim.
 *
 * @throws ConfigError     when h <= 0.
 * @throws ValidationError when no lattice point falls inside the domain.
 */
PointCloud sample_grid(const Domain& dom, double h);

/**
 * @brief Tag Interior/Layer at radius delta and build the neighbor index.
 *
 * A point is Interior iff signed_distance < -2*delta strictly; ties go to
 * the Layer.
 *
 * @throws ConfigError     when delta <= 0.
 * @throws ValidationError when the Interior comes out empty (the layer
 *                         swallowed the whole cloud; refine or shrink delta).
 */
void partition(PointCloud& cloud, const Domain& dom, double delta);

/** @brief Convenience: sample_grid + partition in one call. */
PointCloud build_cloud(const Domain& dom, double h, double delta);

}  // namespace nls
