#include "topomap/openings.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace topomap {

bool segment_clear(const OccupancyGrid& grid, CellPoint a, CellPoint b) {
    for (CellPoint p : supercover_line(a, b))
        if (grid.state(p) == CellState::Occupied) return false;
    return true;
}

namespace {

bool backed_endpoint(const OccupancyGrid& g, CellPoint p, CellPoint other) {
    const CellPoint n4[4] = {{p.i - 1, p.j}, {p.i, p.j + 1}, {p.i + 1, p.j}, {p.i, p.j - 1}};
    Vec2 toward = Vec2::of(other) - Vec2::of(p);
    for (CellPoint w : n4) {
        if (!g.is_occupied(w)) continue;
        Vec2 dir{double(w.i - p.i), double(w.j - p.j)};
        if (dir.dot(toward) < -1e-9) return true;
    }
    return false;
}

}  // namespace

bool wall_backed(const OccupancyGrid& grid, CellPoint a, CellPoint b) {
    return backed_endpoint(grid, a, b) && backed_endpoint(grid, b, a);
}

std::vector<CellPoint> wall_point_set(const OccupancyGrid& grid, CellPoint endpoint, int cap) {
    auto span = wall_side_span(grid, endpoint, cap, adjacent_wall(grid, endpoint));
    std::vector<CellPoint> out;
    std::unordered_set<CellPoint> seen;
    for (const auto& p : span) {
        if (!p) continue;
        if (seen.insert(*p).second) out.push_back(*p);
    }
    return out;
}

namespace {

/// Nearest wall-adjacent free cell within Chebyshev radius; ties resolved by
/// Euclidean distance then (i, j).
std::optional<CellPoint> snap_to_wall(const OccupancyGrid& grid, CellPoint p, int radius) {
    std::optional<CellPoint> best;
    double best_d2 = std::numeric_limits<double>::max();
    for (int di = -radius; di <= radius; ++di) {
        for (int dj = -radius; dj <= radius; ++dj) {
            CellPoint q{p.i + di, p.j + dj};
            if (!grid.is_free(q) || !grid.wall_adjacent(q)) continue;
            double d2 = double(di) * di + double(dj) * dj;
            if (d2 < best_d2 - 1e-12 ||
                (std::abs(d2 - best_d2) <= 1e-12 && best && q < *best)) {
                best = q;
                best_d2 = d2;
            }
        }
    }
    return best;
}

void orient_toward(Opening& o, Vec2 junction_dir) {
    if (o.normal_unit().dot(junction_dir) < 0.0) std::swap(o.start, o.end);
}

}  // namespace

std::vector<Opening> seed_openings(const OccupancyGrid& grid, const GapDetection& det,
                                   const OpeningSearchParams& params) {
    std::vector<Opening> out;
    for (const SeedSegment& seg : det.seeds) {
        auto a = snap_to_wall(grid, round_cell(seg.a), params.snap_radius);
        auto b = snap_to_wall(grid, round_cell(seg.b), params.snap_radius);
        if (!a || !b || *a == *b) continue;  // resampling artifact
        Opening o;
        o.start = *a;
        o.end = *b;
        double n = seg.junction_dir.norm();
        o.seed_normal = n > 0 ? seg.junction_dir * (1.0 / n) : Vec2{};
        orient_toward(o, o.seed_normal);
        out.push_back(o);
    }
    return out;
}

namespace {

struct Candidate {
    CellPoint pos;
    double len;
    double seed_d2;
};

/// Best move for one endpoint with the other held fixed. Candidates with a
/// wall strictly behind them (proper wall-to-wall bridges) are preferred;
/// wall-parallel positions are admitted only as traversable-length stepping
/// stones when no backed candidate exists, so the descent can round corners
/// without collapsing into slivers along a wall face.
std::optional<CellPoint> best_move(const OccupancyGrid& grid, CellPoint current,
                                   CellPoint fixed, bool moving_start, Vec2 seed_normal,
                                   CellPoint seed_pos, double current_len,
                                   const OpeningSearchParams& params) {
    auto hint = adjacent_wall(grid, current);
    std::optional<Candidate> backed, sideways;
    auto consider = [&](CellPoint c) {
        if (c == fixed || c == current) return;
        if (!grid.wall_adjacent(c)) return;
        double len = distance(c, fixed);
        if (len >= current_len - 1e-9) return;
        bool is_backed = backed_endpoint(grid, c, fixed);
        if (!is_backed && len + 1e-9 < params.min_length) return;
        // orientation: the junction must stay on the positive-normal side
        if (seed_normal.norm() > 1e-9) {
            Vec2 d = moving_start ? Vec2::of(fixed) - Vec2::of(c) : Vec2::of(c) - Vec2::of(fixed);
            Vec2 normal{-d.j, d.i};
            if (normal.dot(seed_normal) <= 1e-12) return;
        }
        if (!segment_clear(grid, c, fixed)) return;
        double d2 = double(c.i - seed_pos.i) * (c.i - seed_pos.i) +
                    double(c.j - seed_pos.j) * (c.j - seed_pos.j);
        auto& slot = is_backed ? backed : sideways;
        if (!slot || len < slot->len - 1e-9 ||
            (len < slot->len + 1e-9 &&
             (d2 < slot->seed_d2 - 1e-9 || (d2 < slot->seed_d2 + 1e-9 && c < slot->pos)))) {
            slot = Candidate{c, len, d2};
        }
    };
    if (!hint) return std::nullopt;
    for (Rotation rot : {Rotation::CCW, Rotation::CW}) {
        WallSideWalker w(grid, current, *hint, rot, params.wall_cap);
        for (int h = 0; h < params.wall_cap && w.valid(); ++h) {
            auto p = w.next();
            if (!p) break;
            consider(*p);
        }
    }
    if (backed) return backed->pos;
    if (sideways) return sideways->pos;
    return std::nullopt;
}

}  // namespace

std::optional<Opening> refine_opening(const OccupancyGrid& grid, const Opening& seed,
                                      const OpeningSearchParams& params) {
    Opening cur = seed;
    if (!grid.is_free(cur.start) || !grid.is_free(cur.end)) return std::nullopt;
    CellPoint seed_start = seed.start, seed_end = seed.end;

    auto fully_valid = [&](const Opening& o) {
        return o.start != o.end && grid.wall_adjacent(o.start) && grid.wall_adjacent(o.end) &&
               segment_clear(grid, o.start, o.end) && wall_backed(grid, o.start, o.end) &&
               o.length() + 1e-9 >= params.min_length;
    };
    std::optional<Opening> best_valid;
    auto remember = [&](const Opening& o) {
        if (fully_valid(o) && (!best_valid || o.length() < best_valid->length()))
            best_valid = o;
    };
    remember(cur);

    for (int sweep = 0; sweep < params.max_sweeps; ++sweep) {
        bool moved = false;
        // an unclear segment has effectively infinite length, so the first
        // clear candidate is always accepted
        double cur_len = segment_clear(grid, cur.start, cur.end)
                             ? cur.length()
                             : std::numeric_limits<double>::max();
        if (auto m = best_move(grid, cur.start, cur.end, true, cur.seed_normal, seed_start,
                               cur_len, params)) {
            cur.start = *m;
            moved = true;
            remember(cur);
        }
        cur_len = segment_clear(grid, cur.start, cur.end) ? cur.length()
                                                          : std::numeric_limits<double>::max();
        if (auto m = best_move(grid, cur.end, cur.start, false, cur.seed_normal, seed_end,
                               cur_len, params)) {
            cur.end = *m;
            moved = true;
            remember(cur);
        }
        if (!moved) break;
    }

    if (fully_valid(cur)) return cur;
    return best_valid;  // nullopt when no valid state was ever reached
}

std::vector<Opening> build_openings(const OccupancyGrid& grid,
                                    std::span<const GapDetection> detections,
                                    const OpeningSearchParams& params,
                                    std::vector<RefineTrace>* trace) {
    std::vector<Opening> out;
    for (const GapDetection& det : detections) {
        for (const Opening& seed : seed_openings(grid, det, params)) {
            if (auto refined = refine_opening(grid, seed, params)) {
                if (trace)
                    trace->push_back({seed.start, seed.end, refined->start, refined->end});
                out.push_back(*refined);
            }
        }
    }
    for (size_t k = 0; k < out.size(); ++k) out[k].id = uint32_t(k);
    return out;
}

}  // namespace topomap
