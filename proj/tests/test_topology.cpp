#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "support/testmaps.hpp"
#include "topomap/pipeline.hpp"

using namespace topomap;

namespace {

std::vector<Opening> cleaned_openings(const OccupancyGrid& g, const PipelineConfig& raw) {
    PipelineConfig cfg = effective_config(raw, g.cell_size());
    OccupancyGrid f = filter_map(g, cfg.scan, cfg.filter);
    auto dets = scan_all_directions(f, cfg.scan);
    auto openings = build_openings(f, dets, cfg.search);
    return run_cleanup(f, std::move(openings), cfg.cleanup).openings;
}

SemanticMap semantic_of(const OccupancyGrid& g, std::vector<Opening> openings) {
    PipelineConfig cfg = effective_config(PipelineConfig{}, g.cell_size());
    TopologyParams tp;
    tp.search = cfg.search;
    return build_semantic_map(g, std::move(openings), tp);
}

Opening mk(uint32_t id, CellPoint s, CellPoint e) {
    Opening o;
    o.id = id;
    o.start = s;
    o.end = e;
    return o;
}

}  // namespace

TEST_CASE("wall following in a two-door room connects the openings") {
    // room rows 2..11, cols 2..21; doors in the top wall
    OccupancyGrid g(14, 24, CellState::Occupied);
    testmaps::carve_rect(g, 2, 2, 11, 21);
    testmaps::carve_rect(g, 0, 5, 1, 10, CellState::Free);   // door A shaft
    testmaps::carve_rect(g, 0, 14, 1, 19, CellState::Free);  // door B shaft

    // openings across the door shafts, normals pointing into the room
    Opening a = mk(0, {1, 10}, {1, 5});  // east-to-west: left normal = down
    Opening b = mk(1, {1, 19}, {1, 14});
    REQUIRE(a.normal_unit().dot({1, 0}) > 0.9);
    REQUIRE(g.wall_adjacent(a.start));
    REQUIRE(g.wall_adjacent(a.end));
    std::vector<Opening> openings{a, b};

    WallFollower wf(g, openings);
    // inward from a.start: along the wall pier between the doors to b.end
    WallFollowResult r = wf.follow(a, true, FollowSide::Inward);
    REQUIRE(r.hit);
    CHECK(r.opening_id == 1);
    CHECK(!r.hit_start);
    CHECK(!r.frontier_passed);

    // inward from b.start: around the room back to a.end
    WallFollowResult r2 = wf.follow(b, true, FollowSide::Inward);
    REQUIRE(r2.hit);
    CHECK(r2.opening_id == 0);
    CHECK(!r2.hit_start);

    // the room forms a two-opening loop; the semantic map flips the pair and
    // classifies the region from the flipped sides
    SemanticMap sm = semantic_of(g, openings);
    for (const Opening& o : sm.openings) CHECK(o.flipped);
}

TEST_CASE("dead-end corridor: outward self-connection") {
    OccupancyGrid g(11, 40, CellState::Occupied);
    testmaps::carve_rect(g, 2, 2, 8, 37);
    Opening o = mk(0, {2, 30}, {8, 30});  // normal (0,1): intersection side right
    REQUIRE(o.normal_unit().dot({0, 1}) > 0.9);
    std::vector<Opening> openings{o};
    WallFollower wf(g, openings);
    // outward (left region) from the end: around the dead end to own start
    WallFollowResult r = wf.follow(o, false, FollowSide::Outward);
    REQUIRE(r.hit);
    CHECK(r.opening_id == 0);
    CHECK(r.hit_start);
    CHECK(!r.frontier_passed);
}

TEST_CASE("frontier-terminated corridor raises the frontier flag") {
    OccupancyGrid g(11, 40, CellState::Occupied);
    testmaps::carve_rect(g, 2, 2, 8, 35);
    testmaps::carve_rect(g, 2, 36, 8, 39, CellState::Unknown);  // open end
    Opening o = mk(0, {8, 10}, {2, 10});  // normal (0,-1): intersection left
    std::vector<Opening> openings{o};
    WallFollower wf(g, openings);
    WallFollowResult r = wf.follow(o, false, FollowSide::Outward);
    REQUIRE(r.hit);
    CHECK(r.opening_id == 0);
    CHECK(r.frontier_passed);

    SemanticMap sm = semantic_of(g, openings);
    REQUIRE(sm.pathways.size() >= 1);
    CHECK(sm.pathways[0].kind == PathwayKind::FrontierPathway);
}

TEST_CASE("plus map: one intersection, four openings, four dead ends") {
    OccupancyGrid g = testmaps::make_plus(25, 9);
    PipelineConfig cfg;
    auto openings = cleaned_openings(g, cfg);
    REQUIRE(openings.size() == 4);
    SemanticMap sm = semantic_of(g, openings);
    REQUIRE(sm.intersections.size() == 1);
    CHECK(sm.intersections[0].openings.size() == 4);
    CHECK(!sm.intersections[0].recovered);
    REQUIRE(sm.pathways.size() == 4);
    for (const Pathway& p : sm.pathways) {
        CHECK(p.kind == PathwayKind::DeadEnd);
        CHECK(p.openings.size() == 1);
    }
    CHECK(sm.dropped.empty());

    // conservation: each opening consumed once inward and once outward
    std::map<uint32_t, int> inward, outward;
    for (uint32_t id : sm.intersections[0].openings) inward[id]++;
    for (const Pathway& p : sm.pathways)
        for (uint32_t id : p.openings) outward[id]++;
    for (const Opening& o : sm.openings) {
        CHECK(inward[o.id] == 1);
        CHECK(outward[o.id] == 1);
    }
}

TEST_CASE("open plus map: frontier pathways at arm ends") {
    OccupancyGrid g = testmaps::make_plus(25, 9, true);
    PipelineConfig cfg;
    auto openings = cleaned_openings(g, cfg);
    SemanticMap sm = semantic_of(g, openings);
    REQUIRE(sm.intersections.size() == 1);
    CHECK(sm.intersections[0].openings.size() == 4);
    REQUIRE(sm.pathways.size() == 4);
    for (const Pathway& p : sm.pathways) CHECK(p.kind == PathwayKind::FrontierPathway);
}

TEST_CASE("missing opening is recovered by synthesis") {
    OccupancyGrid g = testmaps::make_plus(25, 9, true);
    PipelineConfig cfg;
    auto openings = cleaned_openings(g, cfg);
    REQUIRE(openings.size() == 4);
    for (size_t drop = 0; drop < openings.size(); ++drop) {
        auto reduced = openings;
        reduced.erase(reduced.begin() + long(drop));
        SemanticMap sm = semantic_of(g, reduced);
        REQUIRE(sm.intersections.size() == 1);
        CHECK(sm.intersections[0].openings.size() == 4);
        CHECK(sm.intersections[0].recovered);
        bool has_synth = false;
        for (const Opening& o : sm.openings) has_synth |= o.synthesized;
        CHECK(has_synth);
    }
}

TEST_CASE("intersection centers are inside their boundary") {
    OccupancyGrid g = testmaps::make_plus(25, 9);
    PipelineConfig cfg;
    auto openings = cleaned_openings(g, cfg);
    SemanticMap sm = semantic_of(g, openings);
    REQUIRE(sm.intersections.size() == 1);
    const Intersection& in = sm.intersections[0];
    CHECK(g.is_free(in.center));
    CHECK(point_in_polygon(in.center, in.boundary));
    // symmetric junction: the centre sits at the junction middle
    CHECK(std::abs(in.center.i - 31) <= 1);
    CHECK(std::abs(in.center.j - 31) <= 1);
}

TEST_CASE("centre of an L-shaped boundary lands inside the L") {
    OccupancyGrid g(20, 20, CellState::Free);
    // L polygon: outer corner at (2,2), inner corner at (10,10)
    std::vector<CellPoint> L{{2, 2}, {2, 18}, {10, 18}, {10, 10}, {18, 10}, {18, 2}};
    CellPoint c = intersection_center(g, L, {}, {});
    CHECK(point_in_polygon(c, L));
    CHECK(g.is_free(c));
}

TEST_CASE("intersection boundary interiors are free cells") {
    OccupancyGrid g = testmaps::make_t();
    PipelineConfig cfg;
    auto openings = cleaned_openings(g, cfg);
    SemanticMap sm = semantic_of(g, openings);
    REQUIRE(!sm.intersections.empty());
    for (const Intersection& in : sm.intersections)
        for (CellPoint p : polygon_fill(in.boundary)) CHECK(g.is_free(p));
}

TEST_CASE("corridor between rooms yields a path with two openings") {
    OccupancyGrid g = testmaps::make_corridor_between_rooms();
    PipelineConfig cfg;
    auto openings = cleaned_openings(g, cfg);
    SemanticMap sm = semantic_of(g, openings);
    int paths = 0;
    for (const Pathway& p : sm.pathways)
        if (p.kind == PathwayKind::Path) {
            ++paths;
            CHECK(p.openings.size() == 2);
        }
    CHECK(paths >= 1);
}

TEST_CASE("maps without unknown cells never produce frontier pathways") {
    for (const OccupancyGrid& g : {testmaps::make_plus(20, 9), testmaps::make_t(),
                                   testmaps::make_corridor_between_rooms()}) {
        PipelineConfig cfg;
        auto openings = cleaned_openings(g, cfg);
        SemanticMap sm = semantic_of(g, openings);
        for (const Pathway& p : sm.pathways) CHECK(p.kind != PathwayKind::FrontierPathway);
    }
}

TEST_CASE("office map: semantic invariants hold") {
    OccupancyGrid g = testmaps::make_office();
    PipelineConfig cfg;
    AnalysisResult res = analyze_grid(g, cfg);
    CHECK(!validate_analysis(res).has_value());
    CHECK(res.semantic.intersections.size() >= 1);
    int paths = 0;
    for (const Pathway& p : res.semantic.pathways) paths += p.kind == PathwayKind::Path;
    CHECK(paths >= 1);
}
