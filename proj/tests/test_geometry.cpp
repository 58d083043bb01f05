#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unordered_set>

#include "support/testmaps.hpp"
#include "topomap/geometry.hpp"

using namespace topomap;

TEST_CASE("supercover joins endpoints and is 4-connected through corners") {
    testmaps::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        CellPoint a{rng.below(40) - 20, rng.below(40) - 20};
        CellPoint b{rng.below(40) - 20, rng.below(40) - 20};
        auto cells = supercover_line(a, b);
        REQUIRE(!cells.empty());
        CHECK(cells.front() == a);
        CHECK(cells.back() == b);
        // consecutive cells share an edge or a corner; corner steps must have
        // been accompanied by one of the two adjacent cells earlier
        std::unordered_set<CellPoint> seen;
        for (size_t k = 0; k < cells.size(); ++k) {
            seen.insert(cells[k]);
            if (k == 0) continue;
            int di = std::abs(cells[k].i - cells[k - 1].i);
            int dj = std::abs(cells[k].j - cells[k - 1].j);
            CHECK(di <= 1);
            CHECK(dj <= 1);
        }
        // every touched lattice point of the exact segment is covered
        for (CellPoint p : lattice_points_on_segment(a, b)) CHECK(seen.count(p));
    }
}

TEST_CASE("supercover diagonal corner emits both side cells") {
    auto cells = supercover_line({0, 0}, {2, 2});
    std::unordered_set<CellPoint> set(cells.begin(), cells.end());
    // the exact corner at (0,0)-(1,1) requires both (0,1) and (1,0)
    CHECK(set.count({0, 1}));
    CHECK(set.count({1, 0}));
    CHECK(set.count({1, 1}));
}

TEST_CASE("on_segment and lattice points") {
    CHECK(on_segment({2, 2}, {0, 0}, {4, 4}));
    CHECK(!on_segment({2, 3}, {0, 0}, {4, 4}));
    CHECK(on_segment({0, 3}, {0, 0}, {0, 5}));
    auto pts = lattice_points_on_segment({0, 0}, {4, 6});
    CHECK(pts.size() == 3);  // gcd(4,6)=2 -> 3 points
    CHECK(pts[1] == CellPoint{2, 3});
}

TEST_CASE("point_in_polygon: boundary counts as inside, even-odd interior") {
    std::vector<CellPoint> tri{{0, 0}, {0, 4}, {4, 0}};
    int count = 0;
    for (int i = -1; i <= 5; ++i)
        for (int j = -1; j <= 5; ++j)
            if (point_in_polygon({i, j}, tri)) ++count;
    CHECK(count == 15);

    std::vector<CellPoint> sq{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    CHECK(point_in_polygon({0, 0}, sq));
    CHECK(point_in_polygon({1, 1}, sq));
    CHECK(!point_in_polygon({2, 1}, sq));
}

TEST_CASE("polygon_stats centroid of a rectangle") {
    std::vector<Vec2> rect{{0, 0}, {0, 10}, {4, 10}, {4, 0}};
    auto st = polygon_stats(rect);
    CHECK(std::abs(std::abs(st.area) - 40.0) < 1e-9);
    CHECK(std::abs(st.centroid.i - 2.0) < 1e-9);
    CHECK(std::abs(st.centroid.j - 5.0) < 1e-9);
}

TEST_CASE("affine rotation round-trips") {
    Affine f = Affine::rotation(0.7, {3, 4}, {10, 12});
    Affine inv = f.inverse();
    Vec2 p{1.5, -2.25};
    Vec2 q = inv.apply(f.apply(p));
    CHECK(std::abs(q.i - p.i) < 1e-9);
    CHECK(std::abs(q.j - p.j) < 1e-9);
}
