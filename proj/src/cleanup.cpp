#include "topomap/cleanup.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace topomap {

bool openings_overlap(const Opening& a, const Opening& b) {
    std::unordered_set<CellPoint> cells;
    for (CellPoint p : supercover_line(a.start, a.end)) cells.insert(p);
    for (CellPoint p : supercover_line(b.start, b.end))
        if (cells.count(p)) return true;
    return false;
}

namespace {

/// Signed wall offset (smallest |h|) at which either endpoint of `o2` shows
/// up in a boundary span; `span[steps]` is the centre.
std::optional<int> find_offset(const std::vector<std::optional<CellPoint>>& span, int steps,
                               const Opening& o2) {
    for (int a = 0; a <= steps; ++a) {
        for (int sign : {1, -1}) {
            if (a == 0 && sign < 0) continue;
            int idx = steps + sign * a;
            const auto& cell = span[size_t(idx)];
            if (cell && (*cell == o2.start || *cell == o2.end)) return sign * a;
        }
    }
    return std::nullopt;
}

bool valid_endpoint_move(const OccupancyGrid& grid, const Opening& cand,
                         const std::unordered_set<CellPoint>& other_cells) {
    if (cand.start == cand.end) return false;
    if (!grid.wall_adjacent(cand.start) || !grid.wall_adjacent(cand.end)) return false;
    if (!wall_backed(grid, cand.start, cand.end)) return false;
    for (CellPoint p : supercover_line(cand.start, cand.end)) {
        if (grid.state(p) == CellState::Occupied) return false;
        if (other_cells.count(p)) return false;
    }
    return true;
}

}  // namespace

ResolveOutcome resolve_overlap(const OccupancyGrid& grid, const Opening& o1,
                               const Opening& o2, const CleanupParams& params) {
    ResolveOutcome out;
    out.event.o1 = o1.id;
    out.event.o2 = o2.id;

    auto drop_longer = [&](char scen) {
        bool drop_first = o1.length() > o2.length() ||
                          (o1.length() == o2.length() && o1.id > o2.id);
        out.event.scenario = scen;
        out.event.action = drop_first ? "dropped first" : "dropped second";
        if (drop_first) out.second = o2;
        else out.first = o1;
    };

    auto shared = [&](CellPoint p) { return p == o2.start || p == o2.end; };
    if (shared(o1.start) && shared(o1.end)) {
        // coincident pair: no slide can separate them
        drop_longer('f');
        return out;
    }

    auto w_s = wall_side_span(grid, o1.start, params.s_o, adjacent_wall(grid, o1.start));
    auto w_e = wall_side_span(grid, o1.end, params.s_o, adjacent_wall(grid, o1.end));
    auto h_s = find_offset(w_s, params.s_o, o2);
    auto h_e = find_offset(w_e, params.s_o, o2);

    if (!h_s && !h_e) {
        drop_longer('a');
        return out;
    }

    bool move_start;
    char scen;
    if (h_s && h_e) {
        move_start = std::abs(*h_s) < std::abs(*h_e);
        scen = 'd';
    } else {
        move_start = bool(h_s);
        scen = move_start ? 'b' : 'c';
    }

    // a fixed endpoint sitting on an o2 endpoint keeps every slide
    // overlapping, so skip straight to the fallback
    if (shared(move_start ? o1.end : o1.start)) {
        drop_longer('f');
        return out;
    }

    const auto& span = move_start ? w_s : w_e;
    int h = move_start ? *h_s : *h_e;
    int sign = h >= 0 ? 1 : -1;

    std::unordered_set<CellPoint> o2_cells;
    for (CellPoint p : supercover_line(o2.start, o2.end)) o2_cells.insert(p);

    for (int g = 1; std::abs(h) + g <= params.s_o; ++g) {
        Opening cand_out = o1, cand_in = o1;
        bool ok_out = false, ok_in = false;
        int idx_out = params.s_o + h + sign * g;
        int idx_in = params.s_o + h - sign * g;
        if (idx_out >= 0 && idx_out <= 2 * params.s_o && span[size_t(idx_out)]) {
            (move_start ? cand_out.start : cand_out.end) = *span[size_t(idx_out)];
            ok_out = valid_endpoint_move(grid, cand_out, o2_cells);
        }
        if (idx_in >= 0 && idx_in <= 2 * params.s_o && span[size_t(idx_in)]) {
            (move_start ? cand_in.start : cand_in.end) = *span[size_t(idx_in)];
            ok_in = valid_endpoint_move(grid, cand_in, o2_cells);
        }
        if (ok_out && ok_in) {
            // prefer the slide that shortens o1
            if (cand_in.length() < cand_out.length()) std::swap(cand_out, cand_in);
            ok_in = false;
        } else if (ok_in) {
            cand_out = cand_in;
        } else if (!ok_out) {
            continue;
        }
        out.event.scenario = scen;
        out.event.action = move_start ? "moved start" : "moved end";
        out.first = cand_out;
        out.second = o2;
        return out;
    }

    drop_longer('f');
    return out;
}

namespace {

/// Directional wall-side cells for the duplicate search; collection stops at
/// the first frontier cell so unexplored walls never pair openings.
std::vector<CellPoint> dedup_walk(const OccupancyGrid& grid, const std::vector<uint8_t>& frontier,
                                  CellPoint from, Rotation rot, int steps) {
    std::vector<CellPoint> out;
    auto anchor = adjacent_wall(grid, from);
    if (!anchor) return out;
    WallSideWalker w(grid, from, *anchor, rot, steps);
    for (int h = 0; h < steps && w.valid(); ++h) {
        auto p = w.next();
        if (!p) break;
        if (frontier[size_t(p->i) * grid.cols() + p->j]) break;
        out.push_back(*p);
    }
    return out;
}

std::optional<int> offset_of(const std::vector<CellPoint>& fwd, const std::vector<CellPoint>& bwd,
                             CellPoint center, CellPoint target) {
    if (target == center) return 0;
    for (int a = 0; a < int(std::max(fwd.size(), bwd.size())); ++a) {
        if (a < int(fwd.size()) && fwd[size_t(a)] == target) return a + 1;
        if (a < int(bwd.size()) && bwd[size_t(a)] == target) return a + 1;
    }
    return std::nullopt;
}

DuplicateTest duplicate_test_impl(const OccupancyGrid& grid, const std::vector<uint8_t>& frontier,
                                  const Opening& o1, const Opening& o2,
                                  const CleanupParams& params) {
    DuplicateTest t;
    auto s_fwd = dedup_walk(grid, frontier, o1.start, Rotation::CCW, params.s_c);
    auto s_bwd = dedup_walk(grid, frontier, o1.start, Rotation::CW, params.s_c);
    auto e_fwd = dedup_walk(grid, frontier, o1.end, Rotation::CW, params.s_c);
    auto e_bwd = dedup_walk(grid, frontier, o1.end, Rotation::CCW, params.s_c);

    // one o2 endpoint along the start wall, the other along the end wall
    struct Assign {
        std::optional<int> h1, h2;
    };
    Assign a{offset_of(s_fwd, s_bwd, o1.start, o2.start), offset_of(e_fwd, e_bwd, o1.end, o2.end)};
    Assign b{offset_of(s_fwd, s_bwd, o1.start, o2.end), offset_of(e_fwd, e_bwd, o1.end, o2.start)};
    std::optional<Assign> pick;
    if (a.h1 && a.h2 && b.h1 && b.h2)
        pick = (*a.h1 + *a.h2 <= *b.h1 + *b.h2) ? a : b;
    else if (a.h1 && a.h2)
        pick = a;
    else if (b.h1 && b.h2)
        pick = b;
    if (!pick) return t;

    t.is_duplicate = true;
    t.h1 = *pick->h1;
    t.h2 = *pick->h2;
    t.remove_second = o1.length() + params.d_w * (t.h1 + t.h2) / 2.0 < o2.length();
    return t;
}

}  // namespace

DuplicateTest duplicate_test(const OccupancyGrid& grid, const Opening& o1, const Opening& o2,
                             const CleanupParams& params) {
    return duplicate_test_impl(grid, frontier_raster(grid), o1, o2, params);
}

CleanupResult run_cleanup(const OccupancyGrid& grid, std::vector<Opening> openings,
                          const CleanupParams& params) {
    CleanupResult res;
    std::sort(openings.begin(), openings.end(),
              [](const Opening& a, const Opening& b) { return a.id < b.id; });
    std::vector<uint8_t> frontier = frontier_raster(grid);

    size_t n = openings.size();
    std::vector<bool> alive(n, true);
    std::vector<std::unordered_set<CellPoint>> cells(n);
    auto refresh_cells = [&](size_t k) {
        cells[k].clear();
        for (CellPoint p : supercover_line(openings[k].start, openings[k].end))
            cells[k].insert(p);
    };
    for (size_t k = 0; k < n; ++k) refresh_cells(k);
    auto pair_overlaps = [&](size_t a, size_t b) {
        const auto& small = cells[a].size() < cells[b].size() ? cells[a] : cells[b];
        const auto& big = cells[a].size() < cells[b].size() ? cells[b] : cells[a];
        for (CellPoint p : small)
            if (big.count(p)) return true;
        return false;
    };

    // overlap phase: incremental queue keyed by (id, id)
    std::set<std::pair<uint32_t, uint32_t>> queue;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (pair_overlaps(i, j)) queue.insert({openings[i].id, openings[j].id});

    auto index_of = [&](uint32_t id) -> size_t {
        for (size_t k = 0; k < n; ++k)
            if (openings[k].id == id) return k;
        return n;
    };
    auto recheck = [&](size_t k) {
        for (size_t m = 0; m < n; ++m) {
            if (m == k || !alive[m]) continue;
            auto key = std::minmax(openings[k].id, openings[m].id);
            if (pair_overlaps(k, m)) queue.insert({key.first, key.second});
            else queue.erase({key.first, key.second});
        }
    };
    auto drop = [&](size_t k) {
        alive[k] = false;
        for (auto it = queue.begin(); it != queue.end();) {
            if (it->first == openings[k].id || it->second == openings[k].id)
                it = queue.erase(it);
            else
                ++it;
        }
    };

    size_t budget = 8 * n + 64;
    while (!queue.empty()) {
        auto [id_a, id_b] = *queue.begin();
        size_t i = index_of(id_a), j = index_of(id_b);
        if (budget == 0) {
            // safety valve for non-converging move chains
            size_t victim = openings[i].length() >= openings[j].length() ? i : j;
            res.log.push_back({id_a, id_b, 'f', "forced drop"});
            drop(victim);
            continue;
        }
        --budget;
        ResolveOutcome r = resolve_overlap(grid, openings[i], openings[j], params);
        res.log.push_back(r.event);
        if (r.first && r.second) {
            openings[i] = *r.first;
            refresh_cells(i);
            queue.erase({id_a, id_b});
            recheck(i);
        } else if (r.first) {
            openings[i] = *r.first;
            refresh_cells(i);
            drop(j);
            recheck(i);
        } else {
            drop(i);
            if (r.second) {
                openings[j] = *r.second;
                refresh_cells(j);
                recheck(j);
            }
        }
    }

    // duplicate phase: removals cannot create new overlaps or duplicates,
    // so one ordered sweep suffices. The wall walks depend only on the
    // first opening, so they are cached as cell -> offset maps.
    struct WallOffsets {
        std::unordered_map<CellPoint, int> near_start, near_end;
        bool built = false;
    };
    std::vector<WallOffsets> walls(n);
    auto offsets_of = [&](size_t k) -> WallOffsets& {
        WallOffsets& w = walls[k];
        if (w.built) return w;
        w.built = true;
        auto fill = [&](CellPoint from, Rotation pos_rot, Rotation neg_rot,
                        std::unordered_map<CellPoint, int>& map) {
            map[from] = 0;
            auto fwd = dedup_walk(grid, frontier, from, pos_rot, params.s_c);
            auto bwd = dedup_walk(grid, frontier, from, neg_rot, params.s_c);
            for (size_t a = 0; a < std::max(fwd.size(), bwd.size()); ++a) {
                if (a < fwd.size()) map.try_emplace(fwd[a], int(a) + 1);
                if (a < bwd.size()) map.try_emplace(bwd[a], int(a) + 1);
            }
        };
        fill(openings[k].start, Rotation::CCW, Rotation::CW, w.near_start);
        fill(openings[k].end, Rotation::CW, Rotation::CCW, w.near_end);
        return w;
    };
    auto cached_test = [&](size_t a, size_t b) {
        DuplicateTest t;
        const WallOffsets& w = offsets_of(a);
        auto h = [&](const std::unordered_map<CellPoint, int>& map,
                     CellPoint p) -> std::optional<int> {
            auto it = map.find(p);
            if (it == map.end()) return std::nullopt;
            return it->second;
        };
        auto s1 = h(w.near_start, openings[b].start), e1 = h(w.near_end, openings[b].end);
        auto s2 = h(w.near_start, openings[b].end), e2 = h(w.near_end, openings[b].start);
        std::optional<std::pair<int, int>> pick;
        if (s1 && e1 && s2 && e2)
            pick = (*s1 + *e1 <= *s2 + *e2) ? std::pair{*s1, *e1} : std::pair{*s2, *e2};
        else if (s1 && e1)
            pick = std::pair{*s1, *e1};
        else if (s2 && e2)
            pick = std::pair{*s2, *e2};
        if (!pick) return t;
        t.is_duplicate = true;
        t.h1 = pick->first;
        t.h2 = pick->second;
        t.remove_second =
            openings[a].length() + params.d_w * (t.h1 + t.h2) / 2.0 < openings[b].length();
        return t;
    };
    auto endpoints_near = [&](size_t i, size_t j) {
        // contour distance is at least euclidean distance
        double lim = params.s_c + 1.0;
        auto close = [&](CellPoint p, CellPoint q) {
            return std::abs(p.i - q.i) <= lim && std::abs(p.j - q.j) <= lim &&
                   distance(p, q) <= lim;
        };
        return (close(openings[i].start, openings[j].start) ||
                close(openings[i].start, openings[j].end)) &&
               (close(openings[i].end, openings[j].start) ||
                close(openings[i].end, openings[j].end));
    };

    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (!alive[i] || !alive[j]) continue;
            if (!endpoints_near(i, j)) continue;
            for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                DuplicateTest t = cached_test(a, b);
                if (!t.is_duplicate) continue;
                size_t victim = t.remove_second ? b : a;
                res.log.push_back({openings[a].id, openings[b].id, 'u',
                                   t.remove_second ? "removed second" : "removed first"});
                alive[victim] = false;
                break;
            }
        }
    }

    for (size_t k = 0; k < n; ++k)
        if (alive[k]) res.openings.push_back(openings[k]);
    return res;
}

}  // namespace topomap
