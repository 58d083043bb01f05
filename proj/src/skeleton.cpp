#include "topomap/skeleton.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "topomap/filter.hpp"
#include "topomap/kernels.hpp"

namespace topomap {

bool straight_clear(const OccupancyGrid& grid, CellPoint a, CellPoint b) {
    return segment_clear(grid, a, b);
}

bool straight_clear_rect(const OccupancyGrid& grid, CellPoint a, CellPoint b, int width) {
    if (width <= 1) return straight_clear(grid, a, b);
    Vec2 d = Vec2::of(b) - Vec2::of(a);
    double len = d.norm();
    if (len == 0.0) return straight_clear(grid, a, b);
    Vec2 n{-d.j / len, d.i / len};
    double half = (width - 1) / 2.0;
    for (double off : {-half, half}) {
        CellPoint pa = round_cell(Vec2::of(a) + n * off);
        CellPoint pb = round_cell(Vec2::of(b) + n * off);
        if (!straight_clear(grid, pa, pb)) return false;
    }
    return straight_clear(grid, a, b);
}

namespace {

struct Raster {
    int rows = 0, cols = 0;
    int off_i = 0, off_j = 0;  // cell (i,j) -> raster (i - off_i + 1, j - off_j + 1)
    std::vector<uint8_t> px;

    uint8_t& at(CellPoint p) {
        return px[size_t(p.i - off_i + 1) * cols + (p.j - off_j + 1)];
    }
};

Raster make_raster(const std::vector<CellPoint>& cells) {
    Raster r;
    if (cells.empty()) return r;
    int min_i = cells[0].i, max_i = cells[0].i, min_j = cells[0].j, max_j = cells[0].j;
    for (CellPoint p : cells) {
        min_i = std::min(min_i, p.i);
        max_i = std::max(max_i, p.i);
        min_j = std::min(min_j, p.j);
        max_j = std::max(max_j, p.j);
    }
    r.off_i = min_i;
    r.off_j = min_j;
    r.rows = max_i - min_i + 3;  // 1-cell zero border
    r.cols = max_j - min_j + 3;
    r.px.assign(size_t(r.rows) * r.cols, 0);
    for (CellPoint p : cells) r.at(p) = 1;
    return r;
}

}  // namespace

std::vector<CellPoint> thin_region(const std::vector<CellPoint>& region,
                                   const std::vector<CellPoint>& anchors) {
    if (region.empty()) throw PreconditionError("thin_region: empty region");
    Raster img = make_raster(region);
    Raster anc = img;
    std::fill(anc.px.begin(), anc.px.end(), 0);
    for (CellPoint p : anchors) anc.at(p) = 1;
    std::vector<uint8_t> marker(img.px.size());

    for (;;) {
        size_t d0 = kernels::thin_pass(img.px.data(), marker.data(), anc.px.data(), img.rows,
                                       img.cols, img.cols, 0);
        size_t d1 = kernels::thin_pass(img.px.data(), marker.data(), anc.px.data(), img.rows,
                                       img.cols, img.cols, 1);
        if (d0 + d1 == 0) break;
    }

    std::vector<CellPoint> out;
    for (int i = 1; i < img.rows - 1; ++i)
        for (int j = 1; j < img.cols - 1; ++j)
            if (img.px[size_t(i) * img.cols + j])
                out.push_back({i - 1 + img.off_i, j - 1 + img.off_j});
    return out;
}

namespace {

const CellPoint kN8[8] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};

struct CellSet {
    std::unordered_set<CellPoint> s;
    bool has(CellPoint p) const { return s.count(p) != 0; }
};

}  // namespace

SkeletonGraph graph_from_skeleton(const std::vector<CellPoint>& skeleton_cells) {
    SkeletonGraph g;
    CellSet set;
    for (CellPoint p : skeleton_cells) set.s.insert(p);

    auto degree = [&](CellPoint p) {
        int n = 0;
        for (CellPoint d : kN8)
            if (set.has({p.i + d.i, p.j + d.j})) ++n;
        return n;
    };

    std::vector<CellPoint> cells = skeleton_cells;
    std::sort(cells.begin(), cells.end());

    // node cells: endpoints (1 neighbour), branch cells (>=3), isolated (0)
    std::unordered_map<CellPoint, uint32_t> node_of;
    auto add_node = [&](CellPoint pos, NodeKind kind) {
        SkeletonNode nd;
        nd.id = uint32_t(g.nodes.size());
        nd.pos = pos;
        nd.kind = kind;
        g.nodes.push_back(nd);
        return nd.id;
    };

    // cluster 8-connected branch cells into single nodes
    std::unordered_set<CellPoint> branch_cells;
    for (CellPoint p : cells) {
        int n = degree(p);
        if (n >= 3) branch_cells.insert(p);
        else if (n == 1) node_of[p] = add_node(p, NodeKind::Endpoint);
        else if (n == 0) node_of[p] = add_node(p, NodeKind::Endpoint);
    }
    std::unordered_set<CellPoint> seen;
    for (CellPoint p : cells) {
        if (!branch_cells.count(p) || seen.count(p)) continue;
        std::vector<CellPoint> cluster;
        std::deque<CellPoint> q{p};
        seen.insert(p);
        while (!q.empty()) {
            CellPoint c = q.front();
            q.pop_front();
            cluster.push_back(c);
            for (CellPoint d : kN8) {
                CellPoint nb{c.i + d.i, c.j + d.j};
                if (branch_cells.count(nb) && !seen.count(nb)) {
                    seen.insert(nb);
                    q.push_back(nb);
                }
            }
        }
        std::sort(cluster.begin(), cluster.end());
        uint32_t id = add_node(cluster.front(), NodeKind::Branch);
        for (CellPoint c : cluster) node_of[c] = id;
    }

    // walk chains between node cells
    std::unordered_set<CellPoint> chain_visited;
    auto walk_chain = [&](CellPoint from_node_cell, CellPoint first) {
        std::vector<CellPoint> poly{from_node_cell, first};
        CellPoint prev = from_node_cell, cur = first;
        while (!node_of.count(cur)) {
            chain_visited.insert(cur);
            CellPoint next{};
            bool found = false;
            for (CellPoint d : kN8) {
                CellPoint nb{cur.i + d.i, cur.j + d.j};
                if (nb == prev || !set.has(nb)) continue;
                next = nb;
                found = true;
                break;
            }
            if (!found) break;  // dangling (shouldn't happen on clean skeletons)
            prev = cur;
            cur = next;
            poly.push_back(cur);
        }
        return poly;
    };

    std::unordered_set<uint64_t> emitted;  // dedup node-node direct edges
    auto edge_key = [](uint32_t a, uint32_t b, CellPoint via) {
        uint64_t lo = std::min(a, b), hi = std::max(a, b);
        return (lo << 40) ^ (hi << 16) ^ (uint64_t(uint16_t(via.i)) << 8) ^ uint16_t(via.j);
    };

    for (CellPoint p : cells) {
        auto it = node_of.find(p);
        if (it == node_of.end()) continue;
        for (CellPoint d : kN8) {
            CellPoint nb{p.i + d.i, p.j + d.j};
            if (!set.has(nb)) continue;
            auto nbn = node_of.find(nb);
            if (nbn != node_of.end()) {
                if (nbn->second == it->second) continue;  // same cluster
                uint64_t key = edge_key(it->second, nbn->second, p < nb ? p : nb);
                if (!emitted.insert(key).second) continue;
                SkeletonEdge e;
                e.a = it->second;
                e.b = nbn->second;
                e.polyline = {p, nb};
                e.length = distance(p, nb);
                g.edges.push_back(e);
                continue;
            }
            if (chain_visited.count(nb)) continue;
            std::vector<CellPoint> poly = walk_chain(p, nb);
            CellPoint tail = poly.back();
            auto tn = node_of.find(tail);
            if (tn == node_of.end()) continue;  // open chain fragment
            SkeletonEdge e;
            e.a = it->second;
            e.b = tn->second;
            e.polyline = std::move(poly);
            e.length = polyline_length(e.polyline);
            g.edges.push_back(e);
        }
    }

    // node-free cycles: anchor one cell so the loop is represented
    for (CellPoint p : cells) {
        if (node_of.count(p) || chain_visited.count(p)) continue;
        uint32_t id = add_node(p, NodeKind::LoopAnchor);
        node_of[p] = id;
        for (CellPoint d : kN8) {
            CellPoint nb{p.i + d.i, p.j + d.j};
            if (!set.has(nb) || chain_visited.count(nb) || node_of.count(nb)) continue;
            std::vector<CellPoint> poly = walk_chain(p, nb);
            if (node_of.count(poly.back())) {
                SkeletonEdge e;
                e.a = id;
                e.b = node_of[poly.back()];
                e.polyline = std::move(poly);
                e.length = polyline_length(e.polyline);
                g.edges.push_back(e);
                break;  // full cycle collected in one walk
            }
        }
    }

    // degrees
    for (const SkeletonEdge& e : g.edges) {
        g.nodes[e.a].degree += 1;
        g.nodes[e.b].degree += 1;
    }
    return g;
}

namespace {

std::optional<CellPoint> snap_free(const OccupancyGrid& grid, CellPoint p, int radius) {
    if (grid.is_free(p)) return p;
    for (int r = 1; r <= radius; ++r)
        for (int di = -r; di <= r; ++di)
            for (int dj = -r; dj <= r; ++dj) {
                if (std::max(std::abs(di), std::abs(dj)) != r) continue;
                CellPoint q{p.i + di, p.j + dj};
                if (grid.is_free(q)) return q;
            }
    return std::nullopt;
}

std::optional<CellPoint> opening_midpoint(const OccupancyGrid& grid, const Opening& o) {
    return snap_free(grid, round_cell((Vec2::of(o.start) + Vec2::of(o.end)) * 0.5), 2);
}

/// Region raster for thinning: polygon interior plus the opening segments,
/// restricted to free cells so paths never cross residual obstacles.
std::vector<CellPoint> region_cells(const OccupancyGrid& grid, const std::vector<CellPoint>& boundary,
                                    const std::vector<const Opening*>& members) {
    std::vector<CellPoint> cells;
    if (boundary.size() >= 3) {
        for (CellPoint p : polygon_fill(boundary))
            if (grid.is_free(p)) cells.push_back(p);
    }
    for (const Opening* o : members)
        for (CellPoint p : supercover_line(o->start, o->end))
            if (grid.is_free(p)) cells.push_back(p);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
}

/// Shortest path between two anchors along skeleton cells (8-connected BFS).
std::vector<CellPoint> skeleton_path(const std::vector<CellPoint>& skel, CellPoint from,
                                     CellPoint to) {
    std::unordered_set<CellPoint> set(skel.begin(), skel.end());
    if (!set.count(from) || !set.count(to)) return {};
    std::unordered_map<CellPoint, CellPoint> parent;
    std::deque<CellPoint> q{from};
    parent[from] = from;
    while (!q.empty()) {
        CellPoint c = q.front();
        q.pop_front();
        if (c == to) break;
        for (CellPoint d : kN8) {
            CellPoint nb{c.i + d.i, c.j + d.j};
            if (!set.count(nb) || parent.count(nb)) continue;
            parent[nb] = c;
            q.push_back(nb);
        }
    }
    if (!parent.count(to)) return {};
    std::vector<CellPoint> path;
    for (CellPoint c = to;; c = parent[c]) {
        path.push_back(c);
        if (c == parent[c]) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

/// Farthest skeleton cell from the anchor by BFS hops, with its path.
std::vector<CellPoint> longest_branch(const std::vector<CellPoint>& skel, CellPoint from) {
    std::unordered_set<CellPoint> set(skel.begin(), skel.end());
    if (!set.count(from)) return {};
    std::unordered_map<CellPoint, CellPoint> parent;
    std::deque<std::pair<CellPoint, int>> q{{from, 0}};
    parent[from] = from;
    CellPoint far = from;
    int far_d = 0;
    while (!q.empty()) {
        auto [c, dist] = q.front();
        q.pop_front();
        if (dist > far_d || (dist == far_d && c < far)) {
            far = c;
            far_d = dist;
        }
        for (CellPoint d : kN8) {
            CellPoint nb{c.i + d.i, c.j + d.j};
            if (!set.count(nb) || parent.count(nb)) continue;
            parent[nb] = c;
            q.push_back({nb, dist + 1});
        }
    }
    std::vector<CellPoint> path;
    for (CellPoint c = far;; c = parent[c]) {
        path.push_back(c);
        if (c == parent[c]) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::vector<RegionPath> region_paths(const OccupancyGrid& grid, const SemanticMap& semantic,
                                     const SkeletonParams& params) {
    std::vector<RegionPath> out;
    auto find_opening = [&](uint32_t id) -> const Opening* {
        for (const Opening& o : semantic.openings)
            if (o.id == id) return &o;
        return nullptr;
    };
    auto clear_line = [&](CellPoint a, CellPoint b) {
        return params.clearance_width > 1 ? straight_clear_rect(grid, a, b, params.clearance_width)
                                          : straight_clear(grid, a, b);
    };

    for (const Intersection& in : semantic.intersections) {
        std::vector<const Opening*> members;
        for (uint32_t id : in.openings)
            if (const Opening* o = find_opening(id)) members.push_back(o);
        std::vector<std::pair<const Opening*, CellPoint>> mids;
        for (const Opening* o : members)
            if (auto m = opening_midpoint(grid, *o)) mids.push_back({o, *m});

        std::vector<const Opening*> blocked;
        for (auto& [o, mid] : mids) {
            if (clear_line(mid, in.center)) {
                RegionPath rp;
                rp.polyline = supercover_line(mid, in.center);
                out.push_back(std::move(rp));
            } else {
                blocked.push_back(o);
            }
        }
        if (!blocked.empty()) {
            std::vector<CellPoint> cells = region_cells(grid, in.boundary, members);
            if (!cells.empty()) {
                std::vector<CellPoint> anchors{in.center};
                for (auto& [o, mid] : mids) anchors.push_back(mid);
                std::vector<CellPoint> present;
                std::unordered_set<CellPoint> cs(cells.begin(), cells.end());
                for (CellPoint a : anchors)
                    if (cs.count(a)) present.push_back(a);
                std::vector<CellPoint> skel = thin_region(cells, present);
                for (const Opening* o : blocked) {
                    CellPoint mid{};
                    for (auto& [oo, m] : mids)
                        if (oo == o) mid = m;
                    std::vector<CellPoint> path = skeleton_path(skel, mid, in.center);
                    if (path.empty()) {
                        // fallback: shortest free path inside the region
                        path = skeleton_path(cells, mid, in.center);
                    }
                    if (!path.empty()) out.push_back({std::move(path), false});
                }
            }
        }
    }

    for (const Pathway& pw : semantic.pathways) {
        std::vector<const Opening*> members;
        for (uint32_t id : pw.openings)
            if (const Opening* o = find_opening(id)) members.push_back(o);
        if (members.empty()) continue;

        if (pw.kind == PathwayKind::Path && members.size() == 2) {
            auto m0 = opening_midpoint(grid, *members[0]);
            auto m1 = opening_midpoint(grid, *members[1]);
            if (!m0 || !m1) continue;
            if (clear_line(*m0, *m1)) {
                out.push_back({supercover_line(*m0, *m1), false});
            } else {
                std::vector<CellPoint> cells = region_cells(grid, pw.boundary, members);
                if (cells.empty()) continue;
                std::vector<CellPoint> anchors;
                std::unordered_set<CellPoint> cs(cells.begin(), cells.end());
                if (cs.count(*m0)) anchors.push_back(*m0);
                if (cs.count(*m1)) anchors.push_back(*m1);
                std::vector<CellPoint> skel = thin_region(cells, anchors);
                std::vector<CellPoint> path = skeleton_path(skel, *m0, *m1);
                if (path.empty()) path = skeleton_path(cells, *m0, *m1);
                if (!path.empty()) out.push_back({std::move(path), false});
            }
        } else {
            auto mid = opening_midpoint(grid, *members[0]);
            if (!mid) continue;
            std::vector<CellPoint> cells = region_cells(grid, pw.boundary, members);
            if (cells.empty()) continue;
            std::unordered_set<CellPoint> cs(cells.begin(), cells.end());
            std::vector<CellPoint> anchors;
            if (cs.count(*mid)) anchors.push_back(*mid);
            std::vector<CellPoint> skel = thin_region(cells, anchors);
            std::vector<CellPoint> path = longest_branch(skel, *mid);
            if (path.empty()) path = {*mid};
            bool frontier_tip = pw.kind == PathwayKind::FrontierPathway;
            out.push_back({std::move(path), frontier_tip});
        }
    }
    return out;
}

SkeletonGraph assemble(const std::vector<RegionPath>& paths) {
    SkeletonGraph g;

    // snap terminals within 1 cell (Chebyshev) into shared nodes
    struct Terminal {
        CellPoint pos;
        size_t path;
        bool front;
    };
    std::vector<Terminal> terms;
    for (size_t k = 0; k < paths.size(); ++k) {
        if (paths[k].polyline.empty()) continue;
        terms.push_back({paths[k].polyline.front(), k, true});
        terms.push_back({paths[k].polyline.back(), k, false});
    }
    std::vector<uint32_t> rep(terms.size());
    for (size_t k = 0; k < terms.size(); ++k) rep[k] = uint32_t(k);
    std::function<uint32_t(uint32_t)> find_rep = [&](uint32_t x) {
        while (rep[x] != x) x = rep[x] = rep[rep[x]];
        return x;
    };
    for (size_t a = 0; a < terms.size(); ++a)
        for (size_t b = a + 1; b < terms.size(); ++b) {
            if (std::abs(terms[a].pos.i - terms[b].pos.i) <= 1 &&
                std::abs(terms[a].pos.j - terms[b].pos.j) <= 1)
                rep[find_rep(uint32_t(b))] = find_rep(uint32_t(a));
        }

    std::unordered_map<uint32_t, uint32_t> cluster_node;
    auto node_for = [&](size_t term_idx) {
        uint32_t r = find_rep(uint32_t(term_idx));
        auto it = cluster_node.find(r);
        if (it != cluster_node.end()) return it->second;
        SkeletonNode nd;
        nd.id = uint32_t(g.nodes.size());
        nd.pos = terms[r].pos;
        // representative position: lexicographic minimum of the cluster
        for (size_t k = 0; k < terms.size(); ++k)
            if (find_rep(uint32_t(k)) == r && terms[k].pos < nd.pos) nd.pos = terms[k].pos;
        g.nodes.push_back(nd);
        cluster_node[r] = nd.id;
        return nd.id;
    };

    std::vector<SkeletonEdge> edges;
    std::vector<bool> frontier_flag;
    for (size_t k = 0, t = 0; k < paths.size(); ++k) {
        if (paths[k].polyline.empty()) continue;
        uint32_t a = node_for(t);
        uint32_t b = node_for(t + 1);
        t += 2;
        if (paths[k].frontier_tip) {
            g.nodes[b].frontier = true;  // tip is the back terminal
        }
        if (paths[k].polyline.size() < 2 && a == b) continue;  // degenerate dot
        SkeletonEdge e;
        e.a = a;
        e.b = b;
        e.polyline = paths[k].polyline;
        e.length = polyline_length(e.polyline);
        edges.push_back(std::move(e));
    }

    // absorb degree-2 nodes (chain vertices)
    std::vector<int> degree(g.nodes.size(), 0);
    for (const SkeletonEdge& e : edges) {
        degree[e.a]++;
        degree[e.b]++;
    }
    bool changed = true;
    std::vector<bool> edge_dead(edges.size(), false);
    while (changed) {
        changed = false;
        for (size_t n = 0; n < g.nodes.size(); ++n) {
            if (degree[n] != 2 || g.nodes[n].frontier) continue;
            int e1 = -1, e2 = -1;
            for (size_t e = 0; e < edges.size(); ++e) {
                if (edge_dead[e]) continue;
                if (edges[e].a == n || edges[e].b == n) {
                    if (e1 < 0) e1 = int(e);
                    else if (e2 < 0) e2 = int(e);
                }
            }
            if (e1 < 0 || e2 < 0 || e1 == e2) continue;
            if (edges[e1].a == edges[e1].b || edges[e2].a == edges[e2].b) continue;
            // orient e1 to end at n, e2 to start at n
            SkeletonEdge& ea = edges[size_t(e1)];
            SkeletonEdge& eb = edges[size_t(e2)];
            if (ea.a == n) {
                std::reverse(ea.polyline.begin(), ea.polyline.end());
                std::swap(ea.a, ea.b);
            }
            if (eb.b == n) {
                std::reverse(eb.polyline.begin(), eb.polyline.end());
                std::swap(eb.a, eb.b);
            }
            ea.polyline.insert(ea.polyline.end(), eb.polyline.begin() + 1, eb.polyline.end());
            ea.b = eb.b;
            ea.length += eb.length;
            edge_dead[size_t(e2)] = true;
            degree[n] = -1;  // absorbed
            changed = true;
        }
    }

    for (size_t e = 0; e < edges.size(); ++e)
        if (!edge_dead[e]) g.edges.push_back(std::move(edges[e]));

    // recompute degrees and classify
    for (SkeletonNode& nd : g.nodes) nd.degree = degree[nd.id] < 0 ? -1 : 0;
    for (const SkeletonEdge& e : g.edges) {
        g.nodes[e.a].degree++;
        g.nodes[e.b].degree++;
    }
    SkeletonGraph out;
    std::unordered_map<uint32_t, uint32_t> remap;
    for (const SkeletonNode& nd : g.nodes) {
        if (nd.degree < 0) continue;  // absorbed chain vertex
        SkeletonNode copy = nd;
        copy.id = uint32_t(out.nodes.size());
        copy.kind = nd.degree == 2 ? NodeKind::LoopAnchor
                 : nd.degree >= 3 ? NodeKind::Branch
                                  : NodeKind::Endpoint;
        remap[nd.id] = copy.id;
        out.nodes.push_back(copy);
    }
    for (SkeletonEdge e : g.edges) {
        e.a = remap[e.a];
        e.b = remap[e.b];
        out.edges.push_back(std::move(e));
    }
    return out;
}

}  // namespace topomap
