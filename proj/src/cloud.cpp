/**
 * @file cloud.cpp
 * @brief Lattice sampling, partition tagging and the cell-grid neighbor index.
 */

#include "nlstokes/geometry/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nls {

namespace {

/// First lattice index k with (k + 1/2) h >= lo.
long first_index(double lo, double h) {
    return static_cast<long>(std::ceil(lo / h - 0.5));
}

/// Last lattice index k with (k + 1/2) h <= hi.
long last_index(double hi, double h) {
    return static_cast<long>(std::floor(hi / h - 0.5));
}

}  // namespace

PointCloud sample_grid(const Domain& dom, double h) {
    if (!(h > 0.0)) throw ConfigError("lattice spacing h must be positive");

    const int dim = dom.dim();
    PointCloud cloud;
    cloud.dim_ = dim;
    cloud.h_ = h;

    long k_lo[3] = {0, 0, 0};
    long k_hi[3] = {0, 0, 0};
    for (int c = 0; c < dim; ++c) {
        k_lo[c] = first_index(dom.bbox_lo()[c], h);
        k_hi[c] = last_index(dom.bbox_hi()[c], h);
        if (k_hi[c] < k_lo[c])
            throw ValidationError("empty cloud: spacing h exceeds the domain extent");
    }

    double vol = 1.0;
    for (int c = 0; c < dim; ++c) vol *= h;

    // Lexicographic lattice order, last coordinate slowest. Unused axes
    // collapse to the single index 0.
    double x[3] = {0.0, 0.0, 0.0};
    for (long k2 = k_lo[2]; k2 <= (dim > 2 ? k_hi[2] : k_lo[2]); ++k2) {
        if (dim > 2) x[2] = (static_cast<double>(k2) + 0.5) * h;
        for (long k1 = k_lo[1]; k1 <= (dim > 1 ? k_hi[1] : k_lo[1]); ++k1) {
            if (dim > 1) x[1] = (static_cast<double>(k1) + 0.5) * h;
            for (long k0 = k_lo[0]; k0 <= k_hi[0]; ++k0) {
                x[0] = (static_cast<double>(k0) + 0.5) * h;
                if (dom.signed_distance(x) < 0.0) {
                    for (int c = 0; c < dim; ++c) cloud.pts_.push_back(x[c]);
                    cloud.vol_.push_back(vol);
                }
            }
        }
    }

    if (cloud.vol_.empty())
        throw ValidationError("empty cloud: no lattice point of spacing " + format_g17(h) +
                              " lies inside '" + dom.name() + "'");
    return cloud;
}

void partition(PointCloud& cloud, const Domain& dom, double delta) {
    if (!(delta > 0.0)) throw ConfigError("interaction radius delta must be positive");
    if (cloud.size() == 0) throw ValidationError("cannot partition an empty cloud");
    if (dom.dim() != cloud.dim_) throw ConfigError("domain/cloud dimension mismatch");

    // Everything is staged in locals and committed at the end, so a throw
    // (notably the degenerate-partition check) leaves the cloud untouched.
    const int n = cloud.size();
    std::vector<RegionTag> tag(static_cast<std::size_t>(n), RegionTag::Layer);
    std::vector<int> interior, layer;

    const double cutoff = -2.0 * delta;
    for (int i = 0; i < n; ++i) {
        // Strict inequality: a point exactly 2*delta deep still touches the
        // complement through its interaction ball, so it stays in the Layer.
        if (dom.signed_distance(cloud.point(i)) < cutoff) {
            tag[static_cast<std::size_t>(i)] = RegionTag::Interior;
            interior.push_back(i);
        } else {
            layer.push_back(i);
        }
    }

    if (interior.empty())
        throw ValidationError("degenerate partition: no point lies deeper than 2*delta = " +
                              format_g17(2.0 * delta) + "; refine h or shrink delta");

    // Cell grid over the bounding box of the points. A hair above 2*delta
    // keeps every interaction partner within one cell of its center even
    // when a pair sits right at the cutoff distance.
    const int dim = cloud.dim_;
    const double cell_w = 2.0 * delta * (1.0 + 1e-12);
    double lo[3] = {0.0, 0.0, 0.0};
    double hi[3] = {0.0, 0.0, 0.0};
    for (int c = 0; c < dim; ++c) {
        lo[c] = std::numeric_limits<double>::infinity();
        hi[c] = -std::numeric_limits<double>::infinity();
    }
    for (int i = 0; i < n; ++i) {
        const double* x = cloud.point(i);
        for (int c = 0; c < dim; ++c) {
            lo[c] = std::min(lo[c], x[c]);
            hi[c] = std::max(hi[c], x[c]);
        }
    }
    std::array<int, 3> ncell{1, 1, 1};
    std::array<double, 3> grid_lo{};
    long ncells = 1;
    for (int c = 0; c < 3; ++c) {
        grid_lo[c] = (c < dim) ? lo[c] : 0.0;
        ncell[c] = (c < dim) ? 1 + static_cast<int>(std::floor((hi[c] - lo[c]) / cell_w)) : 1;
        ncells *= ncell[c];
    }

    cloud.delta_ = delta;
    cloud.tag_ = std::move(tag);
    cloud.interior_ = std::move(interior);
    cloud.layer_ = std::move(layer);
    cloud.cell_w_ = cell_w;
    cloud.ncell_ = ncell;
    cloud.grid_lo_ = grid_lo;

    // Counting sort of point ids into cells; filling in ascending id order
    // makes each cell's list ascending, hence queries deterministic.
    cloud.cell_start_.assign(static_cast<std::size_t>(ncells) + 1, 0);
    std::vector<int> cell_id(n);
    for (int i = 0; i < n; ++i) {
        cell_id[i] = cloud.cell_of(cloud.point(i));
        ++cloud.cell_start_[static_cast<std::size_t>(cell_id[i]) + 1];
    }
    for (long c = 0; c < ncells; ++c)
        cloud.cell_start_[static_cast<std::size_t>(c) + 1] +=
            cloud.cell_start_[static_cast<std::size_t>(c)];
    cloud.order_.assign(n, 0);
    std::vector<int> fill(cloud.cell_start_.begin(), cloud.cell_start_.end() - 1);
    for (int i = 0; i < n; ++i) cloud.order_[static_cast<std::size_t>(fill[cell_id[i]]++)] = i;
}

PointCloud build_cloud(const Domain& dom, double h, double delta) {
    PointCloud cloud = sample_grid(dom, h);
    partition(cloud, dom, delta);
    return cloud;
}

int PointCloud::cell_of(const double* x) const {
    int ix[3] = {0, 0, 0};
    for (int c = 0; c < dim_; ++c) {
        int k = static_cast<int>(std::floor((x[c] - grid_lo_[c]) / cell_w_));
        ix[c] = std::clamp(k, 0, ncell_[c] - 1);
    }
    return ix[0] + ncell_[0] * (ix[1] + ncell_[1] * ix[2]);
}

void PointCloud::neighbors_into(int i, std::vector<int>& out, bool sorted) const {
    if (delta_ <= 0.0 || cell_start_.empty())
        throw Error("neighbor query before partition(): interaction radius not set");

    out.clear();
    const double* xi = point(i);
    const double r2 = 4.0 * delta_ * delta_;

    int ic[3] = {0, 0, 0};
    for (int c = 0; c < dim_; ++c)
        ic[c] = std::clamp(static_cast<int>(std::floor((xi[c] - grid_lo_[c]) / cell_w_)), 0,
                           ncell_[c] - 1);

    const int z0 = (dim_ > 2) ? std::max(ic[2] - 1, 0) : 0;
    const int z1 = (dim_ > 2) ? std::min(ic[2] + 1, ncell_[2] - 1) : 0;
    const int y0 = (dim_ > 1) ? std::max(ic[1] - 1, 0) : 0;
    const int y1 = (dim_ > 1) ? std::min(ic[1] + 1, ncell_[1] - 1) : 0;
    const int x0 = std::max(ic[0] - 1, 0);
    const int x1 = std::min(ic[0] + 1, ncell_[0] - 1);

    for (int z = z0; z <= z1; ++z)
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const std::size_t cell =
                    static_cast<std::size_t>(x) +
                    static_cast<std::size_t>(ncell_[0]) *
                        (static_cast<std::size_t>(y) +
                         static_cast<std::size_t>(ncell_[1]) * static_cast<std::size_t>(z));
                for (int s = cell_start_[cell]; s < cell_start_[cell + 1]; ++s) {
                    const int j = order_[static_cast<std::size_t>(s)];
                    const double* xj = point(j);
                    double d2 = 0.0;
                    for (int c = 0; c < dim_; ++c) {
                        const double d = xj[c] - xi[c];
                        d2 += d * d;
                    }
                    if (d2 < r2) out.push_back(j);
                }
            }

    if (sorted) std::sort(out.begin(), out.end());
}

std::vector<int> PointCloud::neighbors(int i) const {
    std::vector<int> out;
    neighbors_into(i, out);
    return out;
}

}  // namespace nls
