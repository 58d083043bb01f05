#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topomap/baseline.hpp"
#include "topomap/cleanup.hpp"
#include "topomap/filter.hpp"
#include "topomap/gaps.hpp"
#include "topomap/skeleton.hpp"
#include "topomap/topology.hpp"

namespace topomap {

struct PipelineConfig {
    ScanParams scan;
    FilterParams filter;
    OpeningSearchParams search;
    CleanupParams cleanup;
    BaselineParams baseline;
    SkeletonParams skeleton;
    double r_min = 0.0;  ///< metres; overrides g_min via ceil(r_min / cell_size)
    int threads = 1;
};

/// Per-stage wall-clock seconds, in pipeline order.
struct StageTimings {
    std::vector<std::pair<std::string, double>> stages;
    double total = 0.0;
};

struct AnalysisResult {
    PipelineConfig config;  ///< effective parameters (g_min resolved)
    OccupancyGrid filtered;
    std::vector<GapDetection> detections;
    std::vector<RefineTrace> refine_trace;
    size_t seeded_openings = 0;
    CleanupResult cleaned;
    SemanticMap semantic;
    std::vector<RegionPath> paths;
    SkeletonGraph graph;
    StageTimings timings;
    bool fallback_skeleton = false;  ///< no regions: whole-map thinning used
};

/// Resolve derived parameters (g_min from r_min, opening length floor).
PipelineConfig effective_config(PipelineConfig cfg, double cell_size);

/// Full grid -> semantic map -> skeleton pipeline.
AnalysisResult analyze_grid(const OccupancyGrid& grid, const PipelineConfig& cfg);

/// Invariant audit; returns a diagnostic when the result is inconsistent.
std::optional<std::string> validate_analysis(const AnalysisResult& res);

struct CompareRow {
    std::string method;
    size_t nodes = 0;
    double seconds = 0.0;
};

/// PM plus the Voronoi baselines on the same grid.
std::vector<CompareRow> compare_methods(const OccupancyGrid& grid, const PipelineConfig& cfg);

// --- artifact serialisation (deterministic; timings kept separate) --------

std::string semantic_json(const AnalysisResult& res, const PipelineConfig& cfg,
                          const OccupancyGrid& grid);
std::string graph_json(const SkeletonGraph& g);
std::string graph_dot(const SkeletonGraph& g);
std::string metrics_json(const AnalysisResult& res, const PipelineConfig& cfg);
std::string timings_json(const StageTimings& t);
std::string compare_csv(const std::vector<CompareRow>& rows);

/// Diagnostic dump: detections (angle, anchor span, neighbour seeds),
/// seed -> refined endpoint pairs, and the cleanup event log.
std::string debug_json(const AnalysisResult& res);

}  // namespace topomap
