/**
 * @file test_geometry.cpp
 * @brief Domains, lattice sampling, partition rule and neighbor search.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nlstokes/geometry/cloud.hpp"

using namespace nls;

namespace {

std::vector<int> brute_force_neighbors(const PointCloud& cloud, int i) {
    std::vector<int> out;
    const double r2 = 4.0 * cloud.delta() * cloud.delta();
    const double* xi = cloud.point(i);
    for (int j = 0; j < cloud.size(); ++j) {
        const double* xj = cloud.point(j);
        double d2 = 0.0;
        for (int c = 0; c < cloud.dim(); ++c) {
            const double d = xj[c] - xi[c];
            d2 += d * d;
        }
        if (d2 < r2) out.push_back(j);
    }
    return out;
}

}  // namespace

TEST_CASE("signed distances are exact and 1-Lipschitz") {
    const Domain disk = Domain::unit_disk();
    const double origin[2] = {0.0, 0.0};
    const double rim[2] = {1.0, 0.0};
    const double outside[2] = {3.0, 4.0};
    CHECK(disk.signed_distance(origin) == -1.0);
    CHECK(disk.signed_distance(rim) == 0.0);
    CHECK(disk.signed_distance(outside) == doctest::Approx(4.0).epsilon(1e-15));

    const Domain square = Domain::unit_square();
    const double center[2] = {0.5, 0.5};
    const double edge[2] = {0.0, 0.5};
    const double corner_out[2] = {1.3, 1.4};
    CHECK(square.signed_distance(center) == -0.5);
    CHECK(square.signed_distance(edge) == 0.0);
    CHECK(square.signed_distance(corner_out) == doctest::Approx(0.5).epsilon(1e-15));

    // 1-Lipschitz along random segments.
    std::uint64_t s = 42;
    auto rnd = [&s]() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return -2.0 + 4.0 * static_cast<double>(s >> 11) / 9007199254740992.0;
    };
    for (const Domain& dom : {disk, square}) {
        for (int k = 0; k < 200; ++k) {
            const double a[2] = {rnd(), rnd()};
            const double b[2] = {rnd(), rnd()};
            const double gap = std::abs(dom.signed_distance(a) - dom.signed_distance(b));
            const double len = std::hypot(a[0] - b[0], a[1] - b[1]);
            CHECK(gap <= len + 1e-14);
        }
    }

    CHECK_THROWS_AS(Domain::by_name("unit-banana"), ConfigError);
}

TEST_CASE("unit square at h=0.25 yields the 16-point lattice") {
    const PointCloud cloud = sample_grid(Domain::unit_square(), 0.25);
    REQUIRE(cloud.size() == 16);
    for (int i = 0; i < cloud.size(); ++i) {
        CHECK(cloud.volume(i) == 0.0625);
        for (int c = 0; c < 2; ++c) {
            const double x = cloud.point(i)[c];
            const double k = x / 0.25 - 0.5;
            CHECK(k == std::round(k));
            CHECK(x > 0.0);
            CHECK(x < 1.0);
        }
    }
    // Lexicographic order, y slowest: first row y = 0.125, x ascending.
    CHECK(cloud.point(0)[0] == 0.125);
    CHECK(cloud.point(0)[1] == 0.125);
    CHECK(cloud.point(3)[0] == 0.875);
    CHECK(cloud.point(3)[1] == 0.125);
    CHECK(cloud.point(15)[0] == 0.875);
    CHECK(cloud.point(15)[1] == 0.875);
}

TEST_CASE("disk volumes sum to the area up to a boundary rind") {
    for (const double h : {0.1, 0.02}) {
        const Domain dom = Domain::unit_disk();
        const PointCloud cloud = sample_grid(dom, h);
        double total = 0.0;
        for (int i = 0; i < cloud.size(); ++i) {
            total += cloud.volume(i);
            CHECK(dom.signed_distance(cloud.point(i)) < 0.0);
        }
        CHECK(std::abs(total - dom.volume()) <= 5.0 * h * dom.surface_area());
    }
}

TEST_CASE("degenerate lattices are rejected") {
    CHECK_THROWS_AS(sample_grid(Domain::unit_disk(), 3.0), ValidationError);
    CHECK_THROWS_AS(sample_grid(Domain::unit_square(), 2.0), ValidationError);
    CHECK_THROWS_AS(sample_grid(Domain::unit_disk(), 0.0), ConfigError);
    CHECK_THROWS_AS(sample_grid(Domain::unit_disk(), -0.1), ConfigError);
}

TEST_CASE("partition follows the strict signed-distance rule") {
    const Domain dom = Domain::unit_disk();
    PointCloud cloud = build_cloud(dom, 0.05, 0.15);

    REQUIRE_FALSE(cloud.interior().empty());
    REQUIRE_FALSE(cloud.layer().empty());
    CHECK(static_cast<int>(cloud.interior().size() + cloud.layer().size()) == cloud.size());

    for (int i = 0; i < cloud.size(); ++i) {
        const double sd = dom.signed_distance(cloud.point(i));
        const bool deep = sd < -2.0 * cloud.delta();
        CHECK((cloud.tag(i) == RegionTag::Interior) == deep);
        if (cloud.tag(i) == RegionTag::Layer)
            CHECK(sd >= -2.0 * cloud.delta() - cloud.spacing() * std::sqrt(2.0));
    }

    // Ascending id lists.
    CHECK(std::is_sorted(cloud.interior().begin(), cloud.interior().end()));
    CHECK(std::is_sorted(cloud.layer().begin(), cloud.layer().end()));
}

TEST_CASE("a point exactly 2*delta deep lands in the layer") {
    // Dyadic data keeps every quantity exact: on the unit square with
    // h = 0.25 the outermost points sit at signed distance -0.125, which is
    // exactly -2*delta for delta = 0.0625.
    const Domain dom = Domain::unit_square();
    PointCloud cloud = build_cloud(dom, 0.25, 0.0625);
    REQUIRE(cloud.size() == 16);
    CHECK(cloud.interior().size() == 4);
    for (const int i : cloud.interior()) {
        CHECK(cloud.point(i)[0] > 0.25);
        CHECK(cloud.point(i)[0] < 0.75);
        CHECK(cloud.point(i)[1] > 0.25);
        CHECK(cloud.point(i)[1] < 0.75);
    }
    for (const int i : cloud.layer()) {
        const double sd = dom.signed_distance(cloud.point(i));
        CHECK(sd >= -0.125);
    }
}

TEST_CASE("interior shrinks monotonically as delta grows") {
    const Domain dom = Domain::unit_disk();
    PointCloud coarse = sample_grid(dom, 0.05);
    PointCloud wide = coarse;
    partition(coarse, dom, 0.1);
    partition(wide, dom, 0.2);
    CHECK(wide.interior().size() < coarse.interior().size());
    for (const int i : wide.interior()) CHECK(coarse.tag(i) == RegionTag::Interior);
}

TEST_CASE("partition failure modes") {
    const Domain dom = Domain::unit_disk();
    PointCloud cloud = sample_grid(dom, 0.2);
    CHECK_THROWS_AS(partition(cloud, dom, 0.6), ValidationError);
    CHECK_THROWS_AS(partition(cloud, dom, 0.0), ConfigError);
    CHECK_THROWS_AS(cloud.neighbors(0), Error);  // radius never set
}

TEST_CASE("grid neighbors equal brute force on a moderate cloud") {
    const PointCloud cloud = build_cloud(Domain::unit_disk(), 0.05, 0.15);
    REQUIRE(cloud.size() <= 2000);
    std::vector<int> buf;
    for (int i = 0; i < cloud.size(); ++i) {
        const std::vector<int> expect = brute_force_neighbors(cloud, i);
        CHECK(cloud.neighbors(i) == expect);
        // The unsorted scan returns the same set in its fixed cell order.
        cloud.neighbors_into(i, buf, false);
        std::sort(buf.begin(), buf.end());
        CHECK(buf == expect);
    }
}

TEST_CASE("neighbor lists contain self, stay sorted and are symmetric") {
    const PointCloud cloud = build_cloud(Domain::unit_disk(), 0.02, 0.1);
    for (int i = 0; i < cloud.size(); i += 37) {
        const std::vector<int> nb = cloud.neighbors(i);
        CHECK(std::binary_search(nb.begin(), nb.end(), i));
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        for (const int j : nb) {
            const std::vector<int> back = cloud.neighbors(j);
            CHECK(std::binary_search(back.begin(), back.end(), i));
        }
    }
}

TEST_CASE("deep-interior neighbor count matches the ball area") {
    const PointCloud cloud = build_cloud(Domain::unit_disk(), 0.02, 0.1);
    int center = 0;
    double best = 1e300;
    for (int i = 0; i < cloud.size(); ++i) {
        const double r = std::hypot(cloud.point(i)[0], cloud.point(i)[1]);
        if (r < best) {
            best = r;
            center = i;
        }
    }
    const double count = static_cast<double>(cloud.neighbors(center).size());
    // pi (2 delta)^2 / h^2 = pi * 0.04 / 0.0004 ~ 314 lattice cells.
    CHECK(count == doctest::Approx(M_PI * 0.04 / 0.0004).epsilon(40.0 / 314.0));
}
