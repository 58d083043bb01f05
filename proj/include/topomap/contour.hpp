#pragma once

#include <optional>
#include <unordered_set>
#include <vector>

#include "topomap/geometry.hpp"
#include "topomap/grid.hpp"

namespace topomap {

enum class Rotation { CW, CCW };

/// Moore-neighbourhood contour trace over occupied cells.
struct WallTrace {
    std::vector<CellPoint> points;
    bool closed = false;
};

/// Trace the obstacle contour starting at `start` (must be Occupied with a
/// Free 4-neighbour). Stops after `limit` points or when the trace returns
/// to `start` (closed). Orientation picks the scan direction around the
/// Moore neighbourhood.
WallTrace trace_wall(const OccupancyGrid& grid, CellPoint start, Rotation orientation,
                     int limit);

/// Step-wise walk along the boundary of the free region (free cells flanked
/// by Occupied/Unknown/out-of-bounds). Each advance() moves to the next
/// boundary cell in the configured rotational sense; the walk follows wall
/// tips and frontier lines, so it stays on the free side of whatever bounds
/// the region.
class BoundaryWalker {
public:
    /// `start` must be a free boundary cell. `wall_hint`, when given, selects
    /// which adjacent non-free cell anchors the walk; otherwise the first
    /// non-free 4-neighbour in N,E,S,W order is used.
    BoundaryWalker(const OccupancyGrid& grid, CellPoint start, Rotation rot,
                   std::optional<CellPoint> wall_hint = std::nullopt);

    bool valid() const { return valid_; }
    CellPoint pos() const { return pos_; }

    /// Advance one boundary cell. Returns false when no step exists
    /// (isolated cell) or the walk already looped.
    bool advance();

    /// True once the walk re-entered a previous (cell, backtrack) state,
    /// i.e. the contour cycle is complete.
    bool looped() const { return looped_; }

private:
    const OccupancyGrid* grid_ = nullptr;
    CellPoint pos_;
    int back_dir_ = 0;  // direction index from pos_ toward the backtrack cell
    Rotation rot_ = Rotation::CW;
    bool valid_ = false;
    bool looped_ = false;
    std::unordered_set<uint64_t> seen_states_;  // loop detection
};

/// Free boundary cells collected around `center`: indices -steps..+steps,
/// where result[steps] == center, negative offsets walk one rotational
/// sense and positive offsets the other. Entries stop early where the walk
/// cannot continue; the vector always has 2*steps+1 slots with unreachable
/// slots left as nullopt.
std::vector<std::optional<CellPoint>> boundary_span(const OccupancyGrid& grid,
                                                    CellPoint center, int steps,
                                                    std::optional<CellPoint> wall_hint = std::nullopt);

/// Step-wise free-side walk along ONE occupied component's Moore contour:
/// emits the free cells swept while tracing the wall, in contour order.
/// Unlike BoundaryWalker this never leaves the anchor wall, so the walk
/// stays on "the wall the endpoint is connected to".
class WallSideWalker {
public:
    /// `free_start` must be free and 4-adjacent to `wall_anchor` (occupied).
    /// `max_steps` bounds the underlying wall-contour trace.
    WallSideWalker(const OccupancyGrid& grid, CellPoint free_start, CellPoint wall_anchor,
                   Rotation rot, int max_steps = 1 << 28);

    bool valid() const { return valid_; }

    /// Next free-side cell along the contour; nullopt when the contour loop
    /// completed, the step budget ran out, or the walk cannot continue.
    std::optional<CellPoint> next();

private:
    const OccupancyGrid* grid_ = nullptr;
    CellPoint wall_;
    int back_dir_ = 0;
    Rotation rot_ = Rotation::CW;
    int steps_left_ = 0;
    bool valid_ = false;
    bool done_ = false;
    CellPoint last_emitted_;
    bool have_emitted_ = false;
    std::vector<CellPoint> pending_;
    std::unordered_set<uint64_t> seen_states_;
};

/// Free cells along the wall component flanking `center`, as a span indexed
/// -steps..+steps with result[steps] == center (the CW walk fills positive
/// offsets). Unreachable slots stay nullopt.
std::vector<std::optional<CellPoint>> wall_side_span(const OccupancyGrid& grid,
                                                     CellPoint center, int steps,
                                                     std::optional<CellPoint> wall_hint = std::nullopt);

/// 8-direction table shared by the contour walkers: index 0 = North,
/// clockwise in image coordinates (row down, column right).
inline constexpr CellPoint kDir8[8] = {
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}};

/// First Occupied 4-neighbour of `p` in N,E,S,W order, if any.
std::optional<CellPoint> adjacent_wall(const OccupancyGrid& grid, CellPoint p);

}  // namespace topomap
