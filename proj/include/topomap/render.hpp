#pragma once

#include <string>
#include <vector>

#include "topomap/pipeline.hpp"

namespace topomap {

struct RenderLayers {
    bool grid = true;
    bool semantic = true;
    bool openings = true;
    bool skeleton = true;
    bool nodes = true;
};

/// Layered SVG: filtered grid, semantic polygons coloured by kind, openings
/// as directed segments, skeleton polylines and nodes.
std::string render_svg(const OccupancyGrid& grid, const AnalysisResult& res,
                       const RenderLayers& layers);

}  // namespace topomap
