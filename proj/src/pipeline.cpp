#include "topomap/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

namespace topomap {

using json = nlohmann::json;

namespace {

struct StageClock {
    using clock = std::chrono::steady_clock;
    clock::time_point t0 = clock::now();
    clock::time_point mark = t0;
    StageTimings timings;

    void lap(const std::string& name) {
        auto now = clock::now();
        timings.stages.emplace_back(name, std::chrono::duration<double>(now - mark).count());
        mark = now;
    }
    void finish() {
        timings.total = std::chrono::duration<double>(clock::now() - t0).count();
    }
};

}  // namespace

PipelineConfig effective_config(PipelineConfig cfg, double cell_size) {
    if (cfg.r_min > 0.0) cfg.scan.g_min = int(std::ceil(cfg.r_min / cell_size));
    cfg.filter.f_uk = cfg.scan.f_uk;
    cfg.search.min_length = cfg.scan.g_min;
    cfg.search.d_w = cfg.cleanup.d_w;
    return cfg;
}

AnalysisResult analyze_grid(const OccupancyGrid& grid, const PipelineConfig& raw_cfg) {
    PipelineConfig cfg = effective_config(raw_cfg, grid.cell_size());
    AnalysisResult res;
    res.config = cfg;
    StageClock clk;

    res.filtered = filter_map(grid, cfg.scan, cfg.filter);
    clk.lap("filter");

    res.detections = scan_all_directions(res.filtered, cfg.scan, cfg.threads);
    clk.lap("scan");

    std::vector<Opening> openings =
        build_openings(res.filtered, res.detections, cfg.search, &res.refine_trace);
    res.seeded_openings = openings.size();
    clk.lap("openings");

    res.cleaned = run_cleanup(res.filtered, std::move(openings), cfg.cleanup);
    clk.lap("cleanup");

    TopologyParams topo;
    topo.search = cfg.search;
    res.semantic = build_semantic_map(res.filtered, res.cleaned.openings, topo);
    clk.lap("topology");

    if (res.semantic.intersections.empty() && res.semantic.pathways.empty()) {
        // featureless map: fall back to a whole-map skeleton
        res.fallback_skeleton = true;
        res.graph = gvg(res.filtered);
    } else {
        res.paths = region_paths(res.filtered, res.semantic, cfg.skeleton);
        res.graph = assemble(res.paths);
    }
    clk.lap("skeleton");

    clk.finish();
    res.timings = clk.timings;
    return res;
}

std::optional<std::string> validate_analysis(const AnalysisResult& res) {
    // openings referenced by at most one intersection side / pathway side
    std::map<uint32_t, int> inward, outward;
    for (const Intersection& in : res.semantic.intersections)
        for (uint32_t id : in.openings)
            in.promoted ? outward[id]++ : inward[id]++;
    for (const Pathway& p : res.semantic.pathways)
        for (uint32_t id : p.openings) outward[id]++;
    for (auto [id, n] : inward)
        if (n > 1) return "opening " + std::to_string(id) + " consumed by multiple intersections";
    for (auto [id, n] : outward)
        if (n > 1) return "opening " + std::to_string(id) + " consumed by multiple pathways";

    for (const Pathway& p : res.semantic.pathways) {
        size_t want = p.kind == PathwayKind::Path ? 2 : 1;
        if (p.openings.size() != want)
            return "pathway " + std::to_string(p.id) + " has wrong opening count";
    }
    for (const Intersection& in : res.semantic.intersections)
        if (in.openings.size() < 2)
            return "intersection " + std::to_string(in.id) + " has fewer than 2 openings";

    for (size_t i = 0; i < res.cleaned.openings.size(); ++i)
        for (size_t j = i + 1; j < res.cleaned.openings.size(); ++j)
            if (openings_overlap(res.cleaned.openings[i], res.cleaned.openings[j]))
                return "overlapping openings survived cleanup";
    return std::nullopt;
}

std::vector<CompareRow> compare_methods(const OccupancyGrid& grid, const PipelineConfig& cfg) {
    using clock = std::chrono::steady_clock;
    std::vector<CompareRow> rows;

    auto t0 = clock::now();
    AnalysisResult pm = analyze_grid(grid, cfg);
    rows.push_back({"PM", pm.graph.node_count(),
                    std::chrono::duration<double>(clock::now() - t0).count()});

    t0 = clock::now();
    SkeletonGraph r = rgvg(grid, cfg.baseline.prune_length);
    rows.push_back({"RGVG", r.node_count(),
                    std::chrono::duration<double>(clock::now() - t0).count()});

    t0 = clock::now();
    SkeletonGraph g = gvg(grid);
    rows.push_back({"GVG", g.node_count(),
                    std::chrono::duration<double>(clock::now() - t0).count()});
    return rows;
}

namespace {

json point_json(CellPoint p) { return json::array({p.i, p.j}); }

json params_json(const PipelineConfig& cfg) {
    return json{{"g_min", cfg.scan.g_min},   {"n_dir", cfg.scan.n_dir},
                {"f_uk", cfg.scan.f_uk},     {"g_dep", cfg.scan.g_dep},
                {"f_obj", cfg.filter.f_obj}, {"d_w", cfg.cleanup.d_w},
                {"s_o", cfg.cleanup.s_o},    {"s_c", cfg.cleanup.s_c},
                {"prune_length", cfg.baseline.prune_length},
                {"clearance_width", cfg.skeleton.clearance_width},
                {"r_min", cfg.r_min}};
}

const char* label_name(OpeningLabel l) {
    switch (l) {
        case OpeningLabel::Intersection: return "intersection";
        case OpeningLabel::Path: return "path";
        case OpeningLabel::DeadEnd: return "dead_end";
        case OpeningLabel::Frontier: return "frontier";
        default: return "none";
    }
}

const char* kind_name(PathwayKind k) {
    switch (k) {
        case PathwayKind::Path: return "path";
        case PathwayKind::DeadEnd: return "dead_end";
        default: return "frontier_pathway";
    }
}

const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Branch: return "branch";
        case NodeKind::LoopAnchor: return "loop";
        default: return "endpoint";
    }
}

}  // namespace

std::string semantic_json(const AnalysisResult& res, const PipelineConfig& cfg,
                          const OccupancyGrid& grid) {
    (void)cfg;
    json j;
    j["schema_version"] = 1;
    j["grid"] = {{"rows", grid.rows()}, {"cols", grid.cols()}, {"cell_size", grid.cell_size()}};
    j["params"] = params_json(res.config);

    json openings = json::array();
    for (const Opening& o : res.semantic.openings) {
        openings.push_back({{"id", o.id},
                            {"start", point_json(o.start)},
                            {"end", point_json(o.end)},
                            {"length", o.length()},
                            {"label", label_name(o.label)},
                            {"synthesized", o.synthesized}});
    }
    j["openings"] = std::move(openings);

    json inters = json::array();
    for (const Intersection& in : res.semantic.intersections) {
        json b = json::array();
        for (CellPoint p : in.boundary) b.push_back(point_json(p));
        inters.push_back({{"id", in.id},
                          {"openings", in.openings},
                          {"center", point_json(in.center)},
                          {"boundary", std::move(b)},
                          {"recovered", in.recovered},
                          {"promoted", in.promoted}});
    }
    j["intersections"] = std::move(inters);

    json paths = json::array();
    for (const Pathway& p : res.semantic.pathways) {
        json b = json::array();
        for (CellPoint q : p.boundary) b.push_back(point_json(q));
        paths.push_back({{"id", p.id},
                         {"kind", kind_name(p.kind)},
                         {"openings", p.openings},
                         {"boundary", std::move(b)}});
    }
    j["pathways"] = std::move(paths);

    json dropped = json::array();
    for (const DroppedOpening& d : res.semantic.dropped)
        dropped.push_back({{"id", d.id}, {"reason", d.reason}});
    j["dropped"] = std::move(dropped);

    return j.dump(2) + "\n";
}

std::string graph_json(const SkeletonGraph& g) {
    json j;
    j["schema_version"] = 1;
    json nodes = json::array();
    for (const SkeletonNode& n : g.nodes) {
        nodes.push_back({{"id", n.id},
                         {"pos", point_json(n.pos)},
                         {"kind", node_kind_name(n.kind)},
                         {"degree", n.degree},
                         {"frontier", n.frontier}});
    }
    j["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const SkeletonEdge& e : g.edges) {
        json poly = json::array();
        for (CellPoint p : e.polyline) poly.push_back(point_json(p));
        edges.push_back({{"a", e.a}, {"b", e.b}, {"length", e.length}, {"polyline", std::move(poly)}});
    }
    j["edges"] = std::move(edges);
    j["node_count"] = g.node_count();
    return j.dump(2) + "\n";
}

std::string graph_dot(const SkeletonGraph& g) {
    std::string out = "graph skeleton {\n";
    for (const SkeletonNode& n : g.nodes) {
        out += "  n" + std::to_string(n.id) + " [kind=" + node_kind_name(n.kind) +
               " pos=\"" + std::to_string(n.pos.j) + "," + std::to_string(n.pos.i) + "\"];\n";
    }
    for (const SkeletonEdge& e : g.edges) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", e.length);
        out += "  n" + std::to_string(e.a) + " -- n" + std::to_string(e.b) +
               " [len=" + buf + "];\n";
    }
    out += "}\n";
    return out;
}

std::string metrics_json(const AnalysisResult& res, const PipelineConfig& cfg) {
    (void)cfg;
    size_t branches = 0, endpoints = 0;
    for (const SkeletonNode& n : res.graph.nodes) {
        if (n.kind == NodeKind::Branch) ++branches;
        else if (n.kind == NodeKind::Endpoint) ++endpoints;
    }
    size_t dead_ends = 0, frontier_paths = 0, plain_paths = 0;
    for (const Pathway& p : res.semantic.pathways) {
        if (p.kind == PathwayKind::Path) ++plain_paths;
        else if (p.kind == PathwayKind::DeadEnd) ++dead_ends;
        else ++frontier_paths;
    }
    json j{{"schema_version", 1},
           {"nodes", res.graph.node_count()},
           {"branch_points", branches},
           {"endpoints", endpoints},
           {"edges", res.graph.edges.size()},
           {"intersections", res.semantic.intersections.size()},
           {"pathways",
            {{"path", plain_paths}, {"dead_end", dead_ends}, {"frontier_pathway", frontier_paths}}},
           {"openings", res.semantic.openings.size()},
           {"detections", res.detections.size()},
           {"fallback_skeleton", res.fallback_skeleton},
           {"params", params_json(res.config)}};
    return j.dump(2) + "\n";
}

std::string timings_json(const StageTimings& t) {
    json stages;
    for (auto& [name, sec] : t.stages) stages[name] = sec;
    json j{{"stages", std::move(stages)}, {"total_seconds", t.total}};
    return j.dump(2) + "\n";
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::string out = "method,nodes,seconds\n";
    for (const CompareRow& r : rows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", r.seconds);
        out += r.method + "," + std::to_string(r.nodes) + "," + buf + "\n";
    }
    return out;
}

std::string debug_json(const AnalysisResult& res) {
    json dets = json::array();
    for (const GapDetection& d : res.detections) {
        json seeds = json::array();
        for (const SeedSegment& s : d.seeds) {
            seeds.push_back({{"a", json::array({s.a.i, s.a.j})},
                             {"b", json::array({s.b.i, s.b.j})},
                             {"junction_dir", json::array({s.junction_dir.i, s.junction_dir.j})}});
        }
        dets.push_back({{"angle", d.angle},
                        {"angle_index", d.angle_index},
                        {"anchor_row", d.anchor.row},
                        {"anchor_span", json::array({d.anchor.start, d.anchor.end})},
                        {"side", d.side == Side::Above ? "above" : "below"},
                        {"seeds", std::move(seeds)}});
    }
    json refines = json::array();
    for (const RefineTrace& t : res.refine_trace) {
        refines.push_back({{"seed", {point_json(t.seed_start), point_json(t.seed_end)}},
                           {"refined", {point_json(t.refined_start), point_json(t.refined_end)}}});
    }
    json events = json::array();
    for (const CleanupEvent& e : res.cleaned.log) {
        events.push_back({{"o1", e.o1},
                          {"o2", e.o2},
                          {"scenario", std::string(1, e.scenario)},
                          {"action", e.action}});
    }
    json j{{"schema_version", 1},
           {"detections", std::move(dets)},
           {"refinements", std::move(refines)},
           {"cleanup_events", std::move(events)}};
    return j.dump(2) + "\n";
}

}  // namespace topomap
