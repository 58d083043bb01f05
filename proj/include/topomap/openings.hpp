#pragma once

#include <optional>
#include <span>
#include <vector>

#include "topomap/contour.hpp"
#include "topomap/gaps.hpp"
#include "topomap/grid.hpp"

namespace topomap {

enum class OpeningLabel : uint8_t { None, Intersection, Path, DeadEnd, Frontier };

/// Directed wall-to-wall segment marking where a corridor meets an
/// intersection. Walking start -> end, the intersection lies on the left;
/// equivalently the positive normal points into the intersection.
struct Opening {
    uint32_t id = 0;
    CellPoint start;
    CellPoint end;
    OpeningLabel label = OpeningLabel::None;
    Vec2 seed_normal;        ///< junction direction captured at seeding
    bool flipped = false;    ///< endpoint order swapped by intersection repair
    bool synthesized = false;

    double length() const { return distance(start, end); }
    Vec2 dir_unit() const {
        Vec2 d = Vec2::of(end) - Vec2::of(start);
        double n = d.norm();
        return n > 0 ? d * (1.0 / n) : Vec2{};
    }
    /// Left of start->end in image coordinates (row down).
    Vec2 normal_unit() const {
        Vec2 d = dir_unit();
        return {-d.j, d.i};
    }
    void flip() {
        std::swap(start, end);
        seed_normal = seed_normal * -1.0;
        flipped = true;
    }
};

struct OpeningSearchParams {
    double d_w = 0.5;        ///< centre-distance weight (used by cleanup)
    int wall_cap = 64;       ///< wall point set extent each way
    int max_sweeps = 16;     ///< alternating descent cap
    int snap_radius = 2;     ///< endpoint snap search radius
    double min_length = 6.0; ///< traversability floor for refined openings
};

/// True when the supercover of the segment touches no Occupied cell.
bool segment_clear(const OccupancyGrid& grid, CellPoint a, CellPoint b);

/// True when both endpoints have an occupied 4-neighbour strictly behind
/// them relative to the segment, i.e. the segment spans wall-to-wall across
/// free space rather than running alongside a wall.
bool wall_backed(const OccupancyGrid& grid, CellPoint a, CellPoint b);

/// Free cells along the wall contour through `endpoint`, ordered by contour
/// position, up to `cap` each way. Directional walks stop where the contour
/// closes back on itself.
std::vector<CellPoint> wall_point_set(const OccupancyGrid& grid, CellPoint endpoint, int cap);

/// Seed openings from a detection: one per neighbour gap, endpoints snapped
/// to wall-adjacent free cells, oriented so the normal faces the junction.
/// Seeds whose endpoints cannot be snapped within snap_radius are skipped.
std::vector<Opening> seed_openings(const OccupancyGrid& grid, const GapDetection& det,
                                   const OpeningSearchParams& params);

/// Alternating single-endpoint descent of the segment length over the wall
/// point sets, with the no-wall-crossing constraint. Returns nullopt when no
/// valid opening of at least min_length survives.
std::optional<Opening> refine_opening(const OccupancyGrid& grid, const Opening& seed,
                                      const OpeningSearchParams& params);

/// Seed -> refined endpoint pair, kept for debug dumps.
struct RefineTrace {
    CellPoint seed_start, seed_end;
    CellPoint refined_start, refined_end;
};

/// Seed + refine a whole detection batch; ids assigned in order. When
/// `trace` is given, every surviving opening records its seed.
std::vector<Opening> build_openings(const OccupancyGrid& grid,
                                    std::span<const GapDetection> detections,
                                    const OpeningSearchParams& params,
                                    std::vector<RefineTrace>* trace = nullptr);

}  // namespace topomap
