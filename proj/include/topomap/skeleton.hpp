#pragma once

#include <vector>

#include "topomap/topology.hpp"

namespace topomap {

enum class NodeKind : uint8_t { Endpoint, Branch, LoopAnchor };

struct SkeletonNode {
    uint32_t id = 0;
    CellPoint pos;
    NodeKind kind = NodeKind::Endpoint;
    int degree = 0;
    bool frontier = false;
};

struct SkeletonEdge {
    uint32_t a = 0;
    uint32_t b = 0;
    std::vector<CellPoint> polyline;
    double length = 0.0;
};

struct SkeletonGraph {
    std::vector<SkeletonNode> nodes;
    std::vector<SkeletonEdge> edges;

    /// Branch points + endpoints (loop anchors are bookkeeping only).
    size_t node_count() const {
        size_t n = 0;
        for (const SkeletonNode& nd : nodes)
            if (nd.kind != NodeKind::LoopAnchor) ++n;
        return n;
    }
};

/// True when the supercover of a->b touches no Occupied cell.
bool straight_clear(const OccupancyGrid& grid, CellPoint a, CellPoint b);

/// Swept-rectangle variant: a band of `width` cells around the segment must
/// be clear (the single-ray test when width <= 1).
bool straight_clear_rect(const OccupancyGrid& grid, CellPoint a, CellPoint b, int width);

/// Topology-preserving iterative thinning (Zhang-Suen passes via the kernel
/// layer) of an 8-connected region down to a 1-cell-wide skeleton. Anchor
/// cells are never deleted.
std::vector<CellPoint> thin_region(const std::vector<CellPoint>& region,
                                   const std::vector<CellPoint>& anchors);

/// Skeleton raster -> graph: endpoints and clustered branch cells become
/// nodes, chains become polyline edges, node-free cycles get a loop anchor.
SkeletonGraph graph_from_skeleton(const std::vector<CellPoint>& skeleton_cells);

struct SkeletonParams {
    int clearance_width = 0;  ///< 0/1 = single-ray straight test
};

struct RegionPath {
    std::vector<CellPoint> polyline;
    bool frontier_tip = false;  ///< deepest point of a frontier pathway
};

/// Robot paths per semantic region: straight opening-to-centre (or
/// opening-to-opening) lines where clear, anchored thinning of the region
/// polygon otherwise; dead ends keep the longest skeleton branch reachable
/// from their opening.
std::vector<RegionPath> region_paths(const OccupancyGrid& grid, const SemanticMap& semantic,
                                     const SkeletonParams& params);

/// Snap coincident polyline ends into shared nodes, absorb degree-2 chain
/// vertices, classify the rest.
SkeletonGraph assemble(const std::vector<RegionPath>& paths);

}  // namespace topomap
