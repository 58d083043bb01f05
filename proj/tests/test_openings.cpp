#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "support/testmaps.hpp"
#include "topomap/openings.hpp"

using namespace topomap;

namespace {

// Doorway scene: two open halves separated by a thick wall slab with one
// door of `span+1` cells. Returns the grid and the door's column range.
struct DoorScene {
    OccupancyGrid grid;
    int wall_top, wall_bot;  // slab rows
    int door_j0, door_j1;
};

DoorScene door_scene(int span, int slab = 3, int rows = 20, int cols = 40, int door_j0 = 12) {
    DoorScene s{OccupancyGrid(rows, cols, CellState::Free), 0, 0, door_j0, door_j0 + span};
    int mid = rows / 2;
    s.wall_top = mid - slab / 2;
    s.wall_bot = s.wall_top + slab - 1;
    for (int i = s.wall_top; i <= s.wall_bot; ++i)
        for (int j = 0; j < s.grid.cols(); ++j)
            if (j < s.door_j0 || j > s.door_j1) s.grid.set(i, j, CellState::Occupied);
    return s;
}

// Exhaustive oracle: minimal valid opening over the wall point sets of the
// seed endpoints (same candidate universe and validity rules as the
// implementation: wall-adjacent, wall-backed, clear segment).
double exhaustive_min_length(const OccupancyGrid& g, const Opening& seed, int cap) {
    auto ws = wall_point_set(g, seed.start, cap);
    auto we = wall_point_set(g, seed.end, cap);
    double best = std::numeric_limits<double>::max();
    for (CellPoint a : ws) {
        if (!g.wall_adjacent(a)) continue;
        for (CellPoint b : we) {
            if (a == b || !g.wall_adjacent(b)) continue;
            if (!segment_clear(g, a, b)) continue;
            if (!wall_backed(g, a, b)) continue;
            best = std::min(best, distance(a, b));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("wall_point_set: straight wall gives cap points each way plus self") {
    OccupancyGrid g(5, 40, CellState::Free);
    for (int j = 0; j < 40; ++j) g.set(0, j, CellState::Occupied);
    auto pts = wall_point_set(g, {1, 20}, 5);
    CHECK(pts.size() == 11);
    for (CellPoint p : pts) {
        CHECK(p.i == 1);
        CHECK(g.wall_adjacent(p));
    }
    CHECK(pts[5] == CellPoint{1, 20});

    auto none = wall_point_set(g, {1, 20}, 0);
    REQUIRE(none.size() == 1);
    CHECK(none[0] == CellPoint{1, 20});
}

TEST_CASE("segment_clear uses the supercover") {
    OccupancyGrid g = load_ascii(".....\n..#..\n.....");
    CHECK(!segment_clear(g, {1, 0}, {1, 4}));
    CHECK(segment_clear(g, {0, 0}, {0, 4}));
    CHECK(segment_clear(g, {0, 0}, {2, 0}));
    // diagonal corner past the obstacle cell is blocked by the supercover
    CHECK(!segment_clear(g, {0, 2}, {2, 2}));
}

TEST_CASE("seed orientation: normal points toward the junction") {
    GapDetection det;
    det.seeds.push_back({{5, 10}, {5, 18}, {1, 0}});    // junction below
    det.seeds.push_back({{12, 10}, {12, 18}, {-1, 0}});  // junction above

    OccupancyGrid g(20, 30, CellState::Free);
    for (int j = 0; j < 30; ++j) {
        g.set(4, j, CellState::Occupied);
        g.set(13, j, CellState::Occupied);
    }
    OpeningSearchParams p;
    auto seeds = seed_openings(g, det, p);
    REQUIRE(seeds.size() == 2);
    CHECK(seeds[0].normal_unit().dot({1, 0}) > 0.5);
    CHECK(seeds[1].normal_unit().dot({-1, 0}) > 0.5);
    for (const Opening& o : seeds) {
        CHECK(g.wall_adjacent(o.start));
        CHECK(g.wall_adjacent(o.end));
    }
}

TEST_CASE("seed snapping fails cleanly in open space") {
    OccupancyGrid g(20, 20, CellState::Free);
    GapDetection det;
    det.seeds.push_back({{10, 5}, {10, 15}, {1, 0}});
    OpeningSearchParams p;
    CHECK(seed_openings(g, det, p).empty());  // nothing wall-adjacent nearby
}

TEST_CASE("diagonal seed across a thick-wall doorway refines to the door span") {
    DoorScene s = door_scene(6);
    Opening seed;
    seed.start = {s.wall_top - 1, s.door_j0 - 4};  // above slab, wall-adjacent
    seed.end = {s.wall_bot + 1, s.door_j1 + 4};    // below slab
    seed.seed_normal = {0, 0};                     // orientation free
    REQUIRE(s.grid.wall_adjacent(seed.start));
    REQUIRE(s.grid.wall_adjacent(seed.end));

    OpeningSearchParams p;
    p.min_length = 4;
    auto refined = refine_opening(s.grid, seed, p);
    REQUIRE(refined.has_value());
    CHECK(refined->length() <= seed.length());
    CHECK(refined->length() == doctest::Approx(6.0).epsilon(0.2));
    double oracle = exhaustive_min_length(s.grid, seed, p.wall_cap);
    CHECK(refined->length() <= oracle + 1.0);
}

TEST_CASE("refinement matches the exhaustive oracle on random doorway scenes") {
    testmaps::Rng rng(404);
    int tested = 0;
    for (int trial = 0; trial < 50; ++trial) {
        int span = 6 + rng.below(6);
        int slab = 3 + rng.below(3);
        int door_j0 = 8 + rng.below(16);
        DoorScene s = door_scene(span, slab, 20 + rng.below(8), 40 + rng.below(10), door_j0);
        Opening seed;
        seed.start = {s.wall_top - 1, std::max(0, s.door_j0 - 2 - rng.below(5))};
        seed.end = {s.wall_bot + 1, std::min(s.grid.cols() - 1, s.door_j1 + 2 + rng.below(5))};
        seed.seed_normal = {0, 0};
        if (!s.grid.wall_adjacent(seed.start) || !s.grid.wall_adjacent(seed.end)) continue;

        OpeningSearchParams p;
        p.min_length = 3;
        auto refined = refine_opening(s.grid, seed, p);
        REQUIRE(refined.has_value());
        double oracle = exhaustive_min_length(s.grid, seed, p.wall_cap);
        CHECK(refined->length() <= oracle + 1.0);  // within one cell of optimal
        ++tested;
    }
    CHECK(tested >= 40);
}

TEST_CASE("refined opening in a constant-width corridor spans the width") {
    // corridor 7 free rows: perpendicular wall-to-wall distance 6
    OccupancyGrid g(11, 40, CellState::Occupied);
    testmaps::carve_rect(g, 2, 0, 8, 39);
    Opening seed;
    seed.start = {2, 10};
    seed.end = {8, 22};
    seed.seed_normal = {0, 0};
    OpeningSearchParams p;
    p.min_length = 4;
    auto refined = refine_opening(g, seed, p);
    REQUIRE(refined.has_value());
    CHECK(std::abs(refined->length() - 6.0) <= 1.0);
}

TEST_CASE("refinement is a fixed point at convergence") {
    DoorScene s = door_scene(7);
    Opening seed;
    seed.start = {s.wall_top - 1, s.door_j0 - 3};
    seed.end = {s.wall_bot + 1, s.door_j1 + 3};
    seed.seed_normal = {0, 0};
    OpeningSearchParams p;
    p.min_length = 4;
    auto r1 = refine_opening(s.grid, seed, p);
    REQUIRE(r1.has_value());
    auto r2 = refine_opening(s.grid, *r1, p);
    REQUIRE(r2.has_value());
    CHECK(r1->start == r2->start);
    CHECK(r1->end == r2->end);
}

TEST_CASE("openings shorter than the traversability floor are discarded") {
    // L-corner: descent collapses toward the corner, the floor rejects it
    OccupancyGrid g(20, 20, CellState::Free);
    for (int j = 0; j <= 10; ++j) g.set(10, j, CellState::Occupied);  // horizontal wall
    for (int i = 0; i <= 10; ++i) g.set(i, 10, CellState::Occupied);  // vertical wall
    Opening seed;
    seed.start = {9, 2};  // above the horizontal wall
    seed.end = {2, 9};    // left of the vertical wall
    seed.seed_normal = {0, 0};
    OpeningSearchParams p;
    p.min_length = 6;
    auto refined = refine_opening(g, seed, p);
    if (refined) CHECK(refined->length() >= 6.0 - 1e-9);
}

TEST_CASE("build_openings assigns sequential ids and valid openings") {
    OccupancyGrid g = testmaps::make_plus(25, 9);
    ScanParams sp;
    auto dets = scan_all_directions(g, sp);
    OpeningSearchParams p;
    p.min_length = sp.g_min;
    auto openings = build_openings(g, dets, p);
    CHECK(!openings.empty());
    for (size_t k = 0; k < openings.size(); ++k) CHECK(openings[k].id == k);
    for (const Opening& o : openings) {
        CHECK(g.wall_adjacent(o.start));
        CHECK(g.wall_adjacent(o.end));
        CHECK(segment_clear(g, o.start, o.end));
        CHECK(o.length() >= sp.g_min - 1e-9);
    }
}
