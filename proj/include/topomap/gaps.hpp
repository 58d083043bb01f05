#pragma once

#include <span>
#include <vector>

#include "topomap/grid.hpp"

namespace topomap {

/// Maximal run of free cells on one grid row. Interior runs of at most
/// f_uk consecutive Unknown cells are absorbed; first and last cell are
/// always Free. `start`/`end` are inclusive column indices.
struct Gap {
    int row = 0;
    int start = 0;
    int end = 0;
    bool traversable = false;

    int span() const { return end - start; }
    friend bool operator==(const Gap&, const Gap&) = default;
};

/// Scan parameters (conventional short names).
struct ScanParams {
    int g_min = 6;  ///< minimum traversable span, cells
    int n_dir = 6;  ///< number of scan directions
    int f_uk = 1;   ///< max absorbed unknown run, cells
    int g_dep = 5;  ///< minimum connected-gap chain depth
};

enum class Side : uint8_t { Above, Below };

/// Traversable adjacent-row gaps overlapping an anchor gap (open-interval
/// overlap: n.start < anchor.end and n.end > anchor.start).
struct GapGroup {
    Gap anchor;
    Side side = Side::Above;
    std::vector<Gap> neighbors;
};

/// One seeded opening candidate from a gap detection, already mapped to the
/// original frame.
struct SeedSegment {
    Vec2 a, b;          ///< neighbour-gap endpoints, original frame
    Vec2 junction_dir;  ///< unit vector toward the anchor row, original frame
};

/// A row event where a traversable gap connects to >= 2 traversable gaps on
/// an adjacent row and the chain-depth condition holds.
struct GapDetection {
    int angle_index = 0;
    double angle = 0.0;
    Gap anchor;      ///< scan-frame anchor gap
    Side side = Side::Above;
    std::vector<SeedSegment> seeds;  ///< one per neighbour gap, >= 2
};

std::vector<Gap> extract_row_gaps(std::span<const CellState> row, int f_uk);

/// Mark gaps traversable per span >= g_min; returns the same list.
void classify_gaps(std::vector<Gap>& gaps, int g_min);

/// All rows of a grid, gaps classified.
std::vector<std::vector<Gap>> extract_gaps(const OccupancyGrid& grid, int f_uk, int g_min);

GapGroup neighbor_group(const Gap& anchor, std::span<const Gap> adjacent_row, Side side);

/// Memoised chain-depth evaluator over one scan frame.
class GapChains {
public:
    explicit GapChains(const std::vector<std::vector<Gap>>& rows);

    /// Length of the longest traversable chain headed by rows[row][k]
    /// walking in `dir` (+1 = increasing row), capped at `cap`.
    int chain_depth(int row, int k, int dir, int cap) const;

    /// Chain-depth condition: the anchor heads a chain away from the neighbours and at least
    /// two neighbours head chains away from the anchor, all of depth g_dep.
    bool depth_ok(const Gap& anchor, int anchor_row, const GapGroup& group, int g_dep) const;

private:
    const std::vector<std::vector<Gap>>* rows_;
    mutable std::vector<std::vector<int>> up_;    // memo, dir = -1
    mutable std::vector<std::vector<int>> down_;  // memo, dir = +1
    int cap_ = 0;
};

/// Detections for a single already-extracted frame (no coordinate mapping).
std::vector<GapGroup> frame_detections(const std::vector<std::vector<Gap>>& rows,
                                       const ScanParams& params);

/// Full multi-direction scan: rotates the grid n_dir times, collects
/// depth-filtered detections and maps their seed segments back to the
/// original frame. Output is sorted by (angle, anchor row, anchor start,
/// side) so downstream stages are deterministic.
std::vector<GapDetection> scan_all_directions(const OccupancyGrid& grid,
                                              const ScanParams& params, int threads = 1);

}  // namespace topomap
