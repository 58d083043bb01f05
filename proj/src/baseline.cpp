#include "topomap/baseline.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace topomap {

std::vector<CellPoint> gvg_skeleton(const OccupancyGrid& grid) {
    std::vector<CellPoint> free_cells;
    for (int i = 0; i < grid.rows(); ++i)
        for (int j = 0; j < grid.cols(); ++j)
            if (grid.at(i, j) == CellState::Free) free_cells.push_back({i, j});
    if (free_cells.empty()) return {};
    return thin_region(free_cells, {});
}

SkeletonGraph gvg(const OccupancyGrid& grid) {
    return graph_from_skeleton(gvg_skeleton(grid));
}

namespace {
const CellPoint kN8[8] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};
}

std::vector<CellPoint> prune_skeleton(std::vector<CellPoint> cells, double prune_length) {
    if (prune_length <= 0) return cells;
    bool changed = true;
    while (changed) {
        changed = false;
        std::unordered_set<CellPoint> set(cells.begin(), cells.end());
        auto deg = [&](CellPoint p) {
            int n = 0;
            for (CellPoint d : kN8)
                if (set.count({p.i + d.i, p.j + d.j})) ++n;
            return n;
        };
        std::vector<CellPoint> tips;
        for (CellPoint p : cells)
            if (deg(p) == 1) tips.push_back(p);
        std::sort(tips.begin(), tips.end());

        std::unordered_set<CellPoint> to_remove;
        for (CellPoint tip : tips) {
            if (to_remove.count(tip)) continue;
            // tip -> junction walk; chain cells have exactly one continuation
            std::vector<CellPoint> branch{tip};
            CellPoint prev = tip, cur = tip;
            bool junction = false;
            for (;;) {
                CellPoint next{};
                bool found = false;
                for (CellPoint d : kN8) {
                    CellPoint nb{cur.i + d.i, cur.j + d.j};
                    if (!set.count(nb) || nb == prev) continue;
                    next = nb;
                    found = true;
                    break;
                }
                if (!found) break;  // other end is a tip: isolated segment, keep
                if (deg(next) >= 3) {
                    junction = true;  // branch stops before the junction cell
                    break;
                }
                prev = cur;
                cur = next;
                branch.push_back(cur);
            }
            if (!junction) continue;
            if (polyline_length(branch) < prune_length) {
                for (CellPoint p : branch) to_remove.insert(p);
            }
        }
        if (!to_remove.empty()) {
            cells.erase(std::remove_if(cells.begin(), cells.end(),
                                       [&](CellPoint p) { return to_remove.count(p) != 0; }),
                        cells.end());
            // clean attachment nubs left where a spur met a straight run
            // (a thinning pass deletes them but keeps endpoints and bends)
            if (!cells.empty()) cells = thin_region(cells, {});
            changed = true;
        }
    }
    return cells;
}

SkeletonGraph rgvg(const OccupancyGrid& grid, int prune_length) {
    return graph_from_skeleton(prune_skeleton(gvg_skeleton(grid), prune_length));
}

}  // namespace topomap
