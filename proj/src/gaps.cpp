#include "topomap/gaps.hpp"

#include <algorithm>
#include <atomic>
#include <numbers>
#include <thread>

namespace topomap {

std::vector<Gap> extract_row_gaps(std::span<const CellState> row, int f_uk) {
    std::vector<Gap> gaps;
    int n = int(row.size());
    int start = -1;    // first free cell of the open gap
    int last_free = -1;
    int unknown_run = 0;
    auto close = [&]() {
        if (start >= 0) gaps.push_back({0, start, last_free, false});
        start = -1;
        unknown_run = 0;
    };
    for (int j = 0; j < n; ++j) {
        switch (row[j]) {
            case CellState::Free:
                if (start < 0) start = j;
                last_free = j;
                unknown_run = 0;
                break;
            case CellState::Unknown:
                if (start >= 0 && ++unknown_run > f_uk) close();
                break;
            case CellState::Occupied:
                close();
                break;
        }
    }
    close();
    return gaps;
}

void classify_gaps(std::vector<Gap>& gaps, int g_min) {
    for (Gap& g : gaps) g.traversable = g.span() >= g_min;
}

std::vector<std::vector<Gap>> extract_gaps(const OccupancyGrid& grid, int f_uk, int g_min) {
    std::vector<std::vector<Gap>> rows(size_t(grid.rows()));
    const CellState* base = reinterpret_cast<const CellState*>(grid.data());
    for (int i = 0; i < grid.rows(); ++i) {
        rows[size_t(i)] = extract_row_gaps({base + size_t(i) * grid.cols(), size_t(grid.cols())}, f_uk);
        for (Gap& g : rows[size_t(i)]) g.row = i;
        classify_gaps(rows[size_t(i)], g_min);
    }
    return rows;
}

GapGroup neighbor_group(const Gap& anchor, std::span<const Gap> adjacent_row, Side side) {
    GapGroup grp;
    grp.anchor = anchor;
    grp.side = side;
    for (const Gap& g : adjacent_row) {
        if (!g.traversable) continue;
        if (g.start < anchor.end && g.end > anchor.start) grp.neighbors.push_back(g);
    }
    return grp;
}

GapChains::GapChains(const std::vector<std::vector<Gap>>& rows) : rows_(&rows) {
    up_.resize(rows.size());
    down_.resize(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        up_[r].assign(rows[r].size(), -1);
        down_[r].assign(rows[r].size(), -1);
    }
}

int GapChains::chain_depth(int row, int k, int dir, int cap) const {
    auto& memo = dir < 0 ? up_ : down_;
    // Memo entries are only comparable for one cap; recompute when the cap
    // grows (in practice a single g_dep is used per frame).
    if (cap != cap_) {
        for (auto& v : up_) std::fill(v.begin(), v.end(), -1);
        for (auto& v : down_) std::fill(v.begin(), v.end(), -1);
        const_cast<GapChains*>(this)->cap_ = cap;
    }
    int cached = memo[size_t(row)][size_t(k)];
    if (cached >= 0) return cached;
    memo[size_t(row)][size_t(k)] = 1;  // cycle guard; rows are acyclic anyway
    const Gap& g = (*rows_)[size_t(row)][size_t(k)];
    int best = 1;
    int next = row + dir;
    if (best < cap && next >= 0 && next < int(rows_->size())) {
        const auto& nrow = (*rows_)[size_t(next)];
        for (size_t nk = 0; nk < nrow.size(); ++nk) {
            const Gap& n = nrow[nk];
            if (!n.traversable) continue;
            if (!(n.start < g.end && n.end > g.start)) continue;
            best = std::max(best, 1 + chain_depth(next, int(nk), dir, cap));
            if (best >= cap) break;
        }
    }
    best = std::min(best, cap);
    memo[size_t(row)][size_t(k)] = best;
    return best;
}

namespace {
int gap_index(const std::vector<Gap>& row, const Gap& g) {
    for (size_t k = 0; k < row.size(); ++k)
        if (row[k].start == g.start && row[k].end == g.end) return int(k);
    return -1;
}
}  // namespace

bool GapChains::depth_ok(const Gap& anchor, int anchor_row, const GapGroup& group,
                         int g_dep) const {
    if (g_dep <= 1) return group.neighbors.size() >= 2;
    int neigh_row = anchor_row + (group.side == Side::Above ? -1 : 1);
    int neigh_dir = group.side == Side::Above ? -1 : 1;  // away from the anchor
    int anchor_dir = -neigh_dir;                          // away from the neighbours

    int ak = gap_index((*rows_)[size_t(anchor_row)], anchor);
    if (ak < 0) return false;
    if (chain_depth(anchor_row, ak, anchor_dir, g_dep) < g_dep) return false;

    int qualifying = 0;
    for (const Gap& n : group.neighbors) {
        int nk = gap_index((*rows_)[size_t(neigh_row)], n);
        if (nk < 0) continue;
        if (chain_depth(neigh_row, nk, neigh_dir, g_dep) >= g_dep) ++qualifying;
        if (qualifying >= 2) return true;
    }
    return false;
}

std::vector<GapGroup> frame_detections(const std::vector<std::vector<Gap>>& rows,
                                       const ScanParams& params) {
    std::vector<GapGroup> out;
    GapChains chains(rows);
    for (int i = 0; i < int(rows.size()); ++i) {
        for (const Gap& g : rows[size_t(i)]) {
            if (!g.traversable) continue;
            for (Side side : {Side::Above, Side::Below}) {
                int nr = i + (side == Side::Above ? -1 : 1);
                if (nr < 0 || nr >= int(rows.size())) continue;
                GapGroup grp = neighbor_group(g, rows[size_t(nr)], side);
                if (grp.neighbors.size() < 2) continue;
                if (!chains.depth_ok(g, i, grp, params.g_dep)) continue;
                out.push_back(std::move(grp));
            }
        }
    }
    return out;
}

namespace {

std::vector<GapDetection> scan_one_direction(const OccupancyGrid& grid,
                                             const ScanParams& params, int angle_index) {
    double angle = angle_index * std::numbers::pi / params.n_dir;
    RotatedView view = rotate(grid, angle);
    auto rows = extract_gaps(view.grid, params.f_uk, params.g_min);
    std::vector<GapDetection> dets;
    for (GapGroup& grp : frame_detections(rows, params)) {
        GapDetection d;
        d.angle_index = angle_index;
        d.angle = angle;
        d.anchor = grp.anchor;
        d.side = grp.side;
        int neigh_row = grp.anchor.row + (grp.side == Side::Above ? -1 : 1);
        Vec2 jdir_frame{double(grp.anchor.row - neigh_row), 0.0};
        Vec2 jdir = view.to_original.apply_linear(jdir_frame);
        for (const Gap& n : grp.neighbors) {
            SeedSegment seg;
            seg.a = view.to_original.apply({double(neigh_row), double(n.start)});
            seg.b = view.to_original.apply({double(neigh_row), double(n.end)});
            seg.junction_dir = jdir;
            d.seeds.push_back(seg);
        }
        dets.push_back(std::move(d));
    }
    return dets;
}

}  // namespace

std::vector<GapDetection> scan_all_directions(const OccupancyGrid& grid,
                                              const ScanParams& params, int threads) {
    std::vector<std::vector<GapDetection>> per_angle(size_t(params.n_dir));
    if (threads > 1 && params.n_dir > 1) {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        int workers = std::min(threads, params.n_dir);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int a; (a = next.fetch_add(1)) < params.n_dir;)
                    per_angle[size_t(a)] = scan_one_direction(grid, params, a);
            });
        }
        for (auto& t : pool) t.join();
    } else {
        for (int a = 0; a < params.n_dir; ++a)
            per_angle[size_t(a)] = scan_one_direction(grid, params, a);
    }

    std::vector<GapDetection> out;
    for (auto& v : per_angle)
        for (auto& d : v) out.push_back(std::move(d));
    std::stable_sort(out.begin(), out.end(), [](const GapDetection& a, const GapDetection& b) {
        if (a.angle_index != b.angle_index) return a.angle_index < b.angle_index;
        if (a.anchor.row != b.anchor.row) return a.anchor.row < b.anchor.row;
        if (a.anchor.start != b.anchor.start) return a.anchor.start < b.anchor.start;
        return a.side < b.side;
    });
    return out;
}

}  // namespace topomap
