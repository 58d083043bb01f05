#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "topomap/cleanup.hpp"
#include "topomap/openings.hpp"

namespace topomap {

struct Intersection {
    uint32_t id = 0;
    std::vector<uint32_t> openings;  ///< loop order
    std::vector<CellPoint> boundary; ///< opening segments + wall arcs
    CellPoint center;
    bool recovered = false;  ///< one opening was synthesized
    bool promoted = false;   ///< reclassified from a pathway region
};

enum class PathwayKind : uint8_t { Path, DeadEnd, FrontierPathway };

struct Pathway {
    uint32_t id = 0;
    PathwayKind kind = PathwayKind::Path;
    std::vector<uint32_t> openings;  ///< 2 for Path, 1 otherwise
    std::vector<CellPoint> boundary;
};

struct DroppedOpening {
    uint32_t id = 0;
    std::string reason;
};

struct SemanticMap {
    std::vector<Opening> openings;
    std::vector<Intersection> intersections;
    std::vector<Pathway> pathways;
    std::vector<DroppedOpening> dropped;
};

enum class FollowSide : uint8_t { Inward, Outward };

struct WallFollowResult {
    bool hit = false;
    uint32_t opening_id = 0;
    bool hit_start = false;          ///< endpoint role at the hit
    bool frontier_passed = false;
    std::vector<CellPoint> arc;      ///< walked cells, inclusive
};

/// Follow the free-region boundary from one endpoint of an opening, on the
/// intersection side (Inward) or the pathway side (Outward), until another
/// opening endpoint is reached. Inward walks leave from `start` endpoints,
/// outward walks from `end` endpoints; `from_start` selects the departure
/// endpoint for recovery walks that run the loop backwards.
class WallFollower {
public:
    WallFollower(const OccupancyGrid& grid, const std::vector<Opening>& openings);

    WallFollowResult follow(const Opening& from, bool from_start, FollowSide side) const;

    /// Re-register endpoints after an opening changed (flip / insertion).
    void reindex(const std::vector<Opening>& openings);

private:
    const OccupancyGrid* grid_;
    std::vector<uint8_t> frontier_;
    std::unordered_map<CellPoint, std::pair<uint32_t, bool>> endpoint_index_;
    size_t step_cap_ = 0;
};

/// Centroid of the boundary polygon snapped to the nearest interior free
/// cell; falls back to the midpoint of the longest opening.
CellPoint intersection_center(const OccupancyGrid& grid, const std::vector<CellPoint>& boundary,
                              const std::vector<Opening>& openings,
                              const std::vector<uint32_t>& member_ids);

struct TopologyParams {
    OpeningSearchParams search;  ///< used to refine recovered openings
};

/// Build the semantic map: close opening loops into intersections (with
/// single-opening-recovery and two-opening flipping), then classify the
/// outward regions into paths, dead ends and frontier pathways. Regions
/// whose outward loop touches three or more openings are promoted to
/// intersections.
SemanticMap build_semantic_map(const OccupancyGrid& grid, std::vector<Opening> openings,
                               const TopologyParams& params);

}  // namespace topomap
