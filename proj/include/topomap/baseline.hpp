#pragma once

#include "topomap/skeleton.hpp"

namespace topomap {

struct BaselineParams {
    int prune_length = 9;  ///< RGVG leaf-branch pruning threshold, cells
};

/// Grid-approximated general Voronoi graph: thin the entire free region
/// (no anchors) and extract the skeleton graph.
SkeletonGraph gvg(const OccupancyGrid& grid);

/// Skeleton cells of the full free region (exposed for reuse/tests).
std::vector<CellPoint> gvg_skeleton(const OccupancyGrid& grid);

/// Reduced GVG: iteratively remove leaf branches shorter than prune_length,
/// then re-extract the graph.
SkeletonGraph rgvg(const OccupancyGrid& grid, int prune_length);

/// Leaf pruning on a raw skeleton raster (iterated to a fixed point).
std::vector<CellPoint> prune_skeleton(std::vector<CellPoint> cells, double prune_length);

}  // namespace topomap
