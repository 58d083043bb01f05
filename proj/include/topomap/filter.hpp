#pragma once

#include <vector>

#include "topomap/contour.hpp"
#include "topomap/gaps.hpp"
#include "topomap/grid.hpp"

namespace topomap {

struct FilterParams {
    int f_obj = 40;  ///< wall-trace length threshold for object removal, cells
    int f_uk = 1;    ///< shared with ScanParams
};

/// Set every cell of each traversable gap to Free (erases absorbed holes).
OccupancyGrid fill_holes(OccupancyGrid grid, const std::vector<std::vector<Gap>>& rows);

/// Set cells of non-traversable gaps to Occupied when the gap is bounded by
/// an Occupied cell on either side (scan frame, horizontal adjacency).
OccupancyGrid close_slivers(OccupancyGrid grid, const std::vector<std::vector<Gap>>& rows);

/// Cells whose centres lie inside or on the boundary of the polygon
/// (even-odd rule). Result is sorted and unique.
std::vector<CellPoint> polygon_fill(const std::vector<CellPoint>& vertices);

/// For each gap taking part in a detection, trace its two flanking walls;
/// contours that close within f_obj points are filled and erased.
OccupancyGrid remove_small_objects(OccupancyGrid grid, const std::vector<GapGroup>& detections,
                                   int f_obj);

/// One hole-fill / sliver-close / object-removal sequence on the angle-0
/// frame (gaps re-extracted between steps).
OccupancyGrid filter_pass(const OccupancyGrid& grid, const ScanParams& scan,
                          const FilterParams& filter);

/// Full sanitising filter: filter_pass iterated to a fixed point (small cap;
/// in practice the second pass is already a no-op).
OccupancyGrid filter_map(const OccupancyGrid& grid, const ScanParams& scan,
                         const FilterParams& filter);

}  // namespace topomap
