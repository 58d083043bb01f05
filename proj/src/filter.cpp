#include "topomap/filter.hpp"

#include <algorithm>
#include <map>

namespace topomap {

OccupancyGrid fill_holes(OccupancyGrid grid, const std::vector<std::vector<Gap>>& rows) {
    for (const auto& row : rows)
        for (const Gap& g : row) {
            if (!g.traversable) continue;
            for (int j = g.start; j <= g.end; ++j) grid.set(g.row, j, CellState::Free);
        }
    return grid;
}

OccupancyGrid close_slivers(OccupancyGrid grid, const std::vector<std::vector<Gap>>& rows) {
    for (const auto& row : rows)
        for (const Gap& g : row) {
            if (g.traversable) continue;
            if (!grid.is_occupied(g.row, g.start - 1) && !grid.is_occupied(g.row, g.end + 1))
                continue;
            for (int j = g.start; j <= g.end; ++j) grid.set(g.row, j, CellState::Occupied);
        }
    return grid;
}

namespace {

// Rational scanline crossing, exact integer arithmetic.
struct Crossing {
    long long num;
    long long den;  // > 0
    bool operator<(const Crossing& o) const { return num * o.den < o.num * den; }
};

long long floor_div(long long a, long long b) {
    long long q = a / b, r = a % b;
    return r != 0 && ((r < 0) != (b < 0)) ? q - 1 : q;
}
long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

}  // namespace

std::vector<CellPoint> polygon_fill(const std::vector<CellPoint>& vertices) {
    if (vertices.size() < 3)
        throw PreconditionError("polygon_fill: need at least 3 vertices");

    std::vector<CellPoint> cells;
    size_t n = vertices.size();
    for (size_t k = 0; k < n; ++k) {
        auto pts = lattice_points_on_segment(vertices[k], vertices[(k + 1) % n]);
        cells.insert(cells.end(), pts.begin(), pts.end());
    }

    int min_i = vertices[0].i, max_i = vertices[0].i;
    for (const CellPoint& v : vertices) {
        min_i = std::min(min_i, v.i);
        max_i = std::max(max_i, v.i);
    }

    std::vector<Crossing> crossings;
    for (int row = min_i; row <= max_i; ++row) {
        crossings.clear();
        for (size_t k = 0; k < n; ++k) {
            CellPoint a = vertices[k], b = vertices[(k + 1) % n];
            if (a.i == b.i) continue;
            int lo = std::min(a.i, b.i), hi = std::max(a.i, b.i);
            if (row < lo || row >= hi) continue;  // half-open vertex rule
            long long den = b.i - a.i;
            long long num = (long long)a.j * den + (long long)(row - a.i) * (b.j - a.j);
            if (den < 0) {
                num = -num;
                den = -den;
            }
            crossings.push_back({num, den});
        }
        std::sort(crossings.begin(), crossings.end());
        for (size_t k = 0; k + 1 < crossings.size(); k += 2) {
            // strictly-interior columns; boundary cells were added above
            long long jlo = floor_div(crossings[k].num, crossings[k].den) + 1;
            long long jhi = ceil_div(crossings[k + 1].num, crossings[k + 1].den) - 1;
            for (long long j = jlo; j <= jhi; ++j) cells.push_back({row, int(j)});
        }
    }

    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
}

OccupancyGrid remove_small_objects(OccupancyGrid grid, const std::vector<GapGroup>& detections,
                                   int f_obj) {
    auto try_remove = [&](CellPoint wall) {
        if (!grid.is_occupied(wall)) return;
        WallTrace tr;
        try {
            tr = trace_wall(grid, wall, Rotation::CW, f_obj);
        } catch (const PreconditionError&) {
            return;
        }
        if (!tr.closed) return;
        if (tr.points.size() < 3) {
            for (CellPoint p : tr.points) grid.set(p, CellState::Free);
            return;
        }
        for (CellPoint p : polygon_fill(tr.points))
            if (grid.in_bounds(p)) grid.set(p, CellState::Free);
    };

    auto handle_gap = [&](const Gap& g, int row) {
        try_remove({row, g.start - 1});
        try_remove({row, g.end + 1});
    };

    for (const GapGroup& grp : detections) {
        handle_gap(grp.anchor, grp.anchor.row);
        int nr = grp.anchor.row + (grp.side == Side::Above ? -1 : 1);
        for (const Gap& n : grp.neighbors) handle_gap(n, nr);
    }
    return grid;
}

OccupancyGrid filter_pass(const OccupancyGrid& grid, const ScanParams& scan,
                          const FilterParams& filter) {
    auto rows = extract_gaps(grid, filter.f_uk, scan.g_min);
    OccupancyGrid out = fill_holes(grid, rows);
    out = close_slivers(std::move(out), rows);
    auto rows2 = extract_gaps(out, filter.f_uk, scan.g_min);
    auto dets = frame_detections(rows2, scan);
    out = remove_small_objects(std::move(out), dets, filter.f_obj);
    return out;
}

OccupancyGrid filter_map(const OccupancyGrid& grid, const ScanParams& scan,
                         const FilterParams& filter) {
    OccupancyGrid cur = grid;
    for (int pass = 0; pass < 8; ++pass) {
        OccupancyGrid next = filter_pass(cur, scan, filter);
        if (next == cur) break;
        cur = std::move(next);
    }
    return cur;
}

}  // namespace topomap
