#include "topomap/render.hpp"

#include <cstdio>

namespace topomap {

namespace {

constexpr double kScale = 4.0;  // svg units per cell

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

// (i, j) -> svg (x, y)
std::string xy(double i, double j) { return num(j * kScale) + "," + num(i * kScale); }

void cell_runs(std::string& svg, const OccupancyGrid& g, CellState want, const char* fill) {
    for (int i = 0; i < g.rows(); ++i) {
        int j = 0;
        while (j < g.cols()) {
            if (g.at(i, j) != want) {
                ++j;
                continue;
            }
            int start = j;
            while (j < g.cols() && g.at(i, j) == want) ++j;
            svg += "<rect x=\"" + num(start * kScale) + "\" y=\"" + num(i * kScale) +
                   "\" width=\"" + num((j - start) * kScale) + "\" height=\"" + num(kScale) +
                   "\" fill=\"" + fill + "\"/>\n";
        }
    }
}

const char* pathway_fill(PathwayKind k) {
    switch (k) {
        case PathwayKind::Path: return "#7fc97f";
        case PathwayKind::DeadEnd: return "#fdc086";
        default: return "#beaed4";
    }
}

void polygon(std::string& svg, const std::vector<CellPoint>& poly, const char* fill) {
    if (poly.size() < 3) return;
    svg += "<polygon points=\"";
    for (CellPoint p : poly) svg += xy(p.i + 0.5, p.j + 0.5) + " ";
    svg += "\" fill=\"";
    svg += fill;
    svg += "\" fill-opacity=\"0.45\" stroke=\"none\"/>\n";
}

}  // namespace

std::string render_svg(const OccupancyGrid& grid, const AnalysisResult& res,
                       const RenderLayers& layers) {
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           num(grid.cols() * kScale) + "\" height=\"" + num(grid.rows() * kScale) +
           "\" viewBox=\"0 0 " + num(grid.cols() * kScale) + " " + num(grid.rows() * kScale) +
           "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    if (layers.grid) {
        cell_runs(svg, grid, CellState::Unknown, "#d9d9d9");
        cell_runs(svg, grid, CellState::Occupied, "#333333");
    }

    if (layers.semantic) {
        for (const Intersection& in : res.semantic.intersections)
            polygon(svg, in.boundary, "#fb8072");
        for (const Pathway& p : res.semantic.pathways)
            polygon(svg, p.boundary, pathway_fill(p.kind));
    }

    if (layers.openings) {
        for (const Opening& o : res.semantic.openings) {
            svg += "<line x1=\"" + num((o.start.j + 0.5) * kScale) + "\" y1=\"" +
                   num((o.start.i + 0.5) * kScale) + "\" x2=\"" + num((o.end.j + 0.5) * kScale) +
                   "\" y2=\"" + num((o.end.i + 0.5) * kScale) +
                   "\" stroke=\"#e41a1c\" stroke-width=\"1.5\"/>\n";
            // normal tick marking the intersection side
            Vec2 mid = (Vec2::of(o.start) + Vec2::of(o.end)) * 0.5;
            Vec2 n = o.normal_unit();
            svg += "<line x1=\"" + num((mid.j + 0.5) * kScale) + "\" y1=\"" +
                   num((mid.i + 0.5) * kScale) + "\" x2=\"" +
                   num((mid.j + 0.5 + n.j * 1.5) * kScale) + "\" y2=\"" +
                   num((mid.i + 0.5 + n.i * 1.5) * kScale) +
                   "\" stroke=\"#e41a1c\" stroke-width=\"0.8\"/>\n";
        }
    }

    if (layers.skeleton) {
        for (const SkeletonEdge& e : res.graph.edges) {
            svg += "<polyline points=\"";
            for (CellPoint p : e.polyline) svg += xy(p.i + 0.5, p.j + 0.5) + " ";
            svg += "\" fill=\"none\" stroke=\"#1f78b4\" stroke-width=\"1.2\"/>\n";
        }
    }

    if (layers.nodes) {
        for (const SkeletonNode& n : res.graph.nodes) {
            const char* color = n.kind == NodeKind::Branch ? "#ff7f00"
                              : n.frontier ? "#984ea3"
                                           : "#4daf4a";
            svg += "<circle cx=\"" + num((n.pos.j + 0.5) * kScale) + "\" cy=\"" +
                   num((n.pos.i + 0.5) * kScale) + "\" r=\"" + num(kScale * 0.6) +
                   "\" fill=\"" + color + "\"/>\n";
        }
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace topomap
