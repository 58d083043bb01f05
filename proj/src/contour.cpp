#include "topomap/contour.hpp"

namespace topomap {

namespace {

int dir_index(CellPoint from, CellPoint to) {
    int di = to.i - from.i, dj = to.j - from.j;
    for (int d = 0; d < 8; ++d)
        if (kDir8[d].i == di && kDir8[d].j == dj) return d;
    return -1;
}

inline CellPoint step(CellPoint p, int d) {
    return {p.i + kDir8[d].i, p.j + kDir8[d].j};
}

inline uint64_t pack_state(CellPoint p, int back) {
    return (uint64_t(uint32_t(p.i)) << 35) ^ (uint64_t(uint32_t(p.j)) << 3) ^ uint64_t(back);
}

}  // namespace

std::optional<CellPoint> adjacent_wall(const OccupancyGrid& grid, CellPoint p) {
    const CellPoint n4[4] = {{p.i - 1, p.j}, {p.i, p.j + 1}, {p.i + 1, p.j}, {p.i, p.j - 1}};
    for (CellPoint q : n4)
        if (grid.is_occupied(q)) return q;
    return std::nullopt;
}

WallTrace trace_wall(const OccupancyGrid& grid, CellPoint start, Rotation orientation,
                     int limit) {
    if (!grid.is_occupied(start))
        throw PreconditionError("trace_wall: start is not occupied");
    const CellPoint n4[4] = {{start.i - 1, start.j}, {start.i, start.j + 1},
                             {start.i + 1, start.j}, {start.i, start.j - 1}};
    std::optional<CellPoint> free_nb;
    for (CellPoint q : n4)
        if (grid.is_free(q)) {
            free_nb = q;
            break;
        }
    if (!free_nb) throw PreconditionError("trace_wall: start has no free 4-neighbour");

    WallTrace tr;
    if (limit <= 0) return tr;
    tr.points.push_back(start);

    CellPoint pos = start;
    int back = dir_index(start, *free_nb);
    while (int(tr.points.size()) < limit || limit == 0) {
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            int d = orientation == Rotation::CW ? (back + k) % 8 : (back - k + 16) % 8;
            CellPoint q = step(pos, d);
            if (grid.is_occupied(q)) {
                found = d;
                break;
            }
        }
        if (found < 0) {
            // isolated cell
            tr.closed = true;
            return tr;
        }
        CellPoint next = step(pos, found);
        int prev = orientation == Rotation::CW ? (found + 7) % 8 : (found + 1) % 8;
        CellPoint back_cell = step(pos, prev);
        pos = next;
        back = dir_index(pos, back_cell);
        if (back < 0) back = (found + 4) % 8;
        if (pos == start) {
            tr.closed = true;
            return tr;
        }
        if (int(tr.points.size()) >= limit) break;
        tr.points.push_back(pos);
    }
    return tr;
}

BoundaryWalker::BoundaryWalker(const OccupancyGrid& grid, CellPoint start, Rotation rot,
                               std::optional<CellPoint> wall_hint)
    : grid_(&grid), pos_(start), rot_(rot) {
    if (!grid.is_free(start)) return;
    CellPoint anchor;
    if (wall_hint && !grid.is_free(*wall_hint) &&
        std::abs(wall_hint->i - start.i) + std::abs(wall_hint->j - start.j) == 1) {
        anchor = *wall_hint;
    } else {
        const CellPoint n4[4] = {{start.i - 1, start.j}, {start.i, start.j + 1},
                                 {start.i + 1, start.j}, {start.i, start.j - 1}};
        bool got = false;
        for (CellPoint q : n4) {
            if (!grid.is_free(q)) {
                anchor = q;
                got = true;
                break;
            }
        }
        if (!got) return;  // not a boundary cell
    }
    back_dir_ = dir_index(start, anchor);
    seen_states_.insert(pack_state(pos_, back_dir_));
    valid_ = true;
}

bool BoundaryWalker::advance() {
    if (!valid_ || looped_) return false;
    int found = -1;
    for (int k = 1; k <= 8; ++k) {
        int d = rot_ == Rotation::CW ? (back_dir_ + k) % 8 : (back_dir_ - k + 16) % 8;
        CellPoint q = step(pos_, d);
        if (grid_->is_free(q)) {
            found = d;
            break;
        }
    }
    if (found < 0) return false;  // isolated free cell
    CellPoint next = step(pos_, found);
    int prev = rot_ == Rotation::CW ? (found + 7) % 8 : (found + 1) % 8;
    CellPoint back_cell = step(pos_, prev);
    pos_ = next;
    back_dir_ = dir_index(pos_, back_cell);
    if (back_dir_ < 0) back_dir_ = (found + 4) % 8;
    if (!seen_states_.insert(pack_state(pos_, back_dir_)).second) looped_ = true;
    return true;
}

std::vector<std::optional<CellPoint>> boundary_span(const OccupancyGrid& grid,
                                                    CellPoint center, int steps,
                                                    std::optional<CellPoint> wall_hint) {
    std::vector<std::optional<CellPoint>> out(size_t(2 * steps + 1));
    out[size_t(steps)] = center;
    BoundaryWalker fwd(grid, center, Rotation::CW, wall_hint);
    for (int h = 1; h <= steps; ++h) {
        if (!fwd.valid() || !fwd.advance() || fwd.looped()) break;
        out[size_t(steps + h)] = fwd.pos();
    }
    BoundaryWalker bwd(grid, center, Rotation::CCW, wall_hint);
    for (int h = 1; h <= steps; ++h) {
        if (!bwd.valid() || !bwd.advance() || bwd.looped()) break;
        out[size_t(steps - h)] = bwd.pos();
    }
    return out;
}

WallSideWalker::WallSideWalker(const OccupancyGrid& grid, CellPoint free_start,
                               CellPoint wall_anchor, Rotation rot, int max_steps)
    : grid_(&grid), wall_(wall_anchor), rot_(rot), steps_left_(max_steps) {
    if (!grid.is_free(free_start) || !grid.is_occupied(wall_anchor)) return;
    if (std::abs(free_start.i - wall_anchor.i) + std::abs(free_start.j - wall_anchor.j) != 1)
        return;
    back_dir_ = dir_index(wall_anchor, free_start);
    last_emitted_ = free_start;
    have_emitted_ = true;
    seen_states_.insert(pack_state(wall_, back_dir_));
    valid_ = true;
}

std::optional<CellPoint> WallSideWalker::next() {
    if (!valid_) return std::nullopt;
    for (;;) {
        if (!pending_.empty()) {
            CellPoint out = pending_.front();
            pending_.erase(pending_.begin());
            if (have_emitted_ && out == last_emitted_) continue;
            last_emitted_ = out;
            have_emitted_ = true;
            return out;
        }
        if (done_ || steps_left_ <= 0) return std::nullopt;
        // advance the wall trace one contour step, sweeping free cells
        --steps_left_;
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            int d = rot_ == Rotation::CW ? (back_dir_ + k) % 8 : (back_dir_ - k + 16) % 8;
            CellPoint q = step(wall_, d);
            if (grid_->is_occupied(q)) {
                found = d;
                break;
            }
            if (grid_->is_free(q)) pending_.push_back(q);
        }
        if (found < 0) {
            done_ = true;  // isolated wall cell: one sweep already queued
            continue;
        }
        int prev = rot_ == Rotation::CW ? (found + 7) % 8 : (found + 1) % 8;
        CellPoint back_cell = step(wall_, prev);
        wall_ = step(wall_, found);
        back_dir_ = dir_index(wall_, back_cell);
        if (back_dir_ < 0) back_dir_ = (found + 4) % 8;
        if (!seen_states_.insert(pack_state(wall_, back_dir_)).second) done_ = true;
    }
}

std::vector<std::optional<CellPoint>> wall_side_span(const OccupancyGrid& grid,
                                                     CellPoint center, int steps,
                                                     std::optional<CellPoint> wall_hint) {
    std::vector<std::optional<CellPoint>> out(size_t(2 * steps + 1));
    out[size_t(steps)] = center;
    CellPoint anchor;
    if (wall_hint && grid.is_occupied(*wall_hint) &&
        std::abs(wall_hint->i - center.i) + std::abs(wall_hint->j - center.j) == 1) {
        anchor = *wall_hint;
    } else {
        auto w = adjacent_wall(grid, center);
        if (!w) return out;
        anchor = *w;
    }
    WallSideWalker fwd(grid, center, anchor, Rotation::CW, steps);
    for (int h = 1; h <= steps; ++h) {
        auto p = fwd.next();
        if (!p) break;
        out[size_t(steps + h)] = *p;
    }
    WallSideWalker bwd(grid, center, anchor, Rotation::CCW, steps);
    for (int h = 1; h <= steps; ++h) {
        auto p = bwd.next();
        if (!p) break;
        out[size_t(steps - h)] = *p;
    }
    return out;
}

}  // namespace topomap
