#include "topomap/topology.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace topomap {

WallFollower::WallFollower(const OccupancyGrid& grid, const std::vector<Opening>& openings)
    : grid_(&grid), frontier_(frontier_raster(grid)) {
    step_cap_ = size_t(grid.rows()) * grid.cols() * 4 + 64;
    reindex(openings);
}

void WallFollower::reindex(const std::vector<Opening>& openings) {
    endpoint_index_.clear();
    for (const Opening& o : openings) {
        endpoint_index_[o.start] = {o.id, true};
        endpoint_index_[o.end] = {o.id, false};
    }
}

WallFollowResult WallFollower::follow(const Opening& from, bool from_start,
                                      FollowSide side) const {
    WallFollowResult res;
    CellPoint cell = from_start ? from.start : from.end;
    Vec2 target = from.normal_unit();
    if (side == FollowSide::Outward) target = target * -1.0;

    auto hint = adjacent_wall(*grid_, cell);

    // pick the rotational sense whose early displacement points to the
    // requested side of the opening
    double best_score = 0.0;
    Rotation best_rot = Rotation::CW;
    bool have = false;
    for (Rotation rot : {Rotation::CW, Rotation::CCW}) {
        BoundaryWalker probe(*grid_, cell, rot, hint);
        double score = 0.0;
        for (int k = 1; k <= 6 && probe.valid() && probe.advance() && !probe.looped(); ++k) {
            Vec2 d = Vec2::of(probe.pos()) - Vec2::of(cell);
            score += d.dot(target) / double(k);
        }
        if (!have || score > best_score) {
            best_score = score;
            best_rot = rot;
            have = true;
        }
    }

    BoundaryWalker w(*grid_, cell, best_rot, hint);
    if (!w.valid()) return res;
    res.arc.push_back(cell);
    for (size_t steps = 0; steps < step_cap_; ++steps) {
        if (!w.advance()) return res;  // isolated cell
        CellPoint p = w.pos();
        res.arc.push_back(p);
        if (frontier_[size_t(p.i) * grid_->cols() + p.j]) res.frontier_passed = true;
        auto it = endpoint_index_.find(p);
        if (it != endpoint_index_.end()) {
            res.hit = true;
            res.opening_id = it->second.first;
            res.hit_start = it->second.second;
            return res;
        }
        if (w.looped()) return res;  // full loop, nothing found
    }
    throw TraceError("wall follow exceeded the contour safety cap");
}

CellPoint intersection_center(const OccupancyGrid& grid, const std::vector<CellPoint>& boundary,
                              const std::vector<Opening>& openings,
                              const std::vector<uint32_t>& member_ids) {
    auto longest_mid = [&]() -> CellPoint {
        const Opening* best = nullptr;
        for (uint32_t id : member_ids)
            for (const Opening& o : openings)
                if (o.id == id && (!best || o.length() > best->length())) best = &o;
        if (!best) return boundary.empty() ? CellPoint{} : boundary.front();
        CellPoint mid = round_cell((Vec2::of(best->start) + Vec2::of(best->end)) * 0.5);
        return mid;
    };
    if (boundary.size() < 3) return longest_mid();

    std::vector<Vec2> poly;
    poly.reserve(boundary.size());
    for (CellPoint p : boundary) poly.push_back(Vec2::of(p));
    Vec2 c = polygon_stats(poly).centroid;
    CellPoint base = round_cell(c);

    for (int radius = 0; radius <= 4; ++radius) {
        CellPoint best{};
        double best_d2 = -1.0;
        for (int di = -radius; di <= radius; ++di) {
            for (int dj = -radius; dj <= radius; ++dj) {
                if (std::max(std::abs(di), std::abs(dj)) != radius) continue;
                CellPoint q{base.i + di, base.j + dj};
                if (!grid.is_free(q)) continue;
                if (!point_in_polygon(q, boundary)) continue;
                double d2 = double(di) * di + double(dj) * dj;
                if (best_d2 < 0 || d2 < best_d2 || (d2 == best_d2 && q < best)) {
                    best = q;
                    best_d2 = d2;
                }
            }
        }
        if (best_d2 >= 0) return best;
    }
    return longest_mid();
}

namespace {

struct OpeningState {
    bool inward_done = false;
    bool outward_done = false;
    bool removed = false;
};

class TopologyBuilder {
public:
    TopologyBuilder(const OccupancyGrid& grid, std::vector<Opening> openings,
                    const TopologyParams& params)
        : grid_(grid), params_(params), openings_(std::move(openings)),
          follower_(grid, openings_) {
        for (const Opening& o : openings_)
            state_[o.id] = OpeningState{};
    }

    SemanticMap run() {
        detect_intersections();
        classify_pathways();
        SemanticMap sm;
        sm.openings = openings_;
        sm.intersections = std::move(intersections_);
        sm.pathways = std::move(pathways_);
        sm.dropped = std::move(dropped_);
        return sm;
    }

private:
    Opening* find(uint32_t id) {
        for (Opening& o : openings_)
            if (o.id == id) return &o;
        return nullptr;
    }

    struct LoopTrace {
        bool closed = false;
        bool bad = false;
        std::vector<uint32_t> chain;
        std::vector<std::vector<CellPoint>> arcs;
        bool frontier = false;
    };

    // Inward loops: start endpoints connect to the next opening's end.
    // Outward loops: end endpoints connect to the next opening's start.
    LoopTrace trace_loop(uint32_t first, FollowSide side) {
        LoopTrace t;
        bool inward = side == FollowSide::Inward;
        uint32_t cur = first;
        t.chain.push_back(first);
        for (size_t hop = 0; hop <= openings_.size() + 1; ++hop) {
            Opening* o = find(cur);
            WallFollowResult r = follower_.follow(*o, inward, side);
            t.frontier |= r.frontier_passed;
            if (!r.hit || (inward && r.frontier_passed)) {
                t.bad = true;
                return t;
            }
            // valid parity: inward walks land on end endpoints, outward on starts
            if (r.hit_start == inward) {
                t.bad = true;
                return t;
            }
            t.arcs.push_back(std::move(r.arc));
            if (r.opening_id == first) {
                t.closed = true;
                return t;
            }
            if (std::find(t.chain.begin(), t.chain.end(), r.opening_id) != t.chain.end()) {
                t.bad = true;
                return t;
            }
            if (state_[r.opening_id].removed ||
                (inward ? state_[r.opening_id].inward_done : state_[r.opening_id].outward_done)) {
                t.bad = true;
                return t;
            }
            t.chain.push_back(r.opening_id);
            cur = r.opening_id;
        }
        t.bad = true;
        return t;
    }

    /// Boundary polygon from a closed loop trace: wall arcs in loop order,
    /// opening segments implicit between consecutive arcs.
    std::vector<CellPoint> loop_boundary(const LoopTrace& t) const {
        std::vector<CellPoint> poly;
        for (const auto& arc : t.arcs)
            for (CellPoint p : arc)
                if (poly.empty() || !(poly.back() == p)) poly.push_back(p);
        if (poly.size() > 1 && poly.front() == poly.back()) poly.pop_back();
        return poly;
    }

    void emit_intersection(const LoopTrace& t, bool recovered, bool promoted) {
        Intersection in;
        in.id = uint32_t(intersections_.size());
        in.openings = t.chain;
        in.boundary = loop_boundary(t);
        in.center = intersection_center(grid_, in.boundary, openings_, in.openings);
        in.recovered = recovered;
        in.promoted = promoted;
        for (uint32_t id : t.chain) {
            if (promoted) {
                state_[id].outward_done = true;
                if (Opening* o = find(id)) o->label = OpeningLabel::Intersection;
            } else {
                state_[id].inward_done = true;
            }
        }
        intersections_.push_back(std::move(in));
    }

    /// One missing opening is tolerated per intersection: collect the loop
    /// remnant in both directions, bridge the loose ends with a synthesized
    /// opening, refine it, and retry.
    bool try_recovery(uint32_t seed_id) {
        std::vector<uint32_t> chain{seed_id};
        // forward: start -> next end
        for (size_t hop = 0; hop < openings_.size(); ++hop) {
            Opening* cur = find(chain.back());
            WallFollowResult r = follower_.follow(*cur, true, FollowSide::Inward);
            if (!r.hit || r.frontier_passed || r.hit_start) break;
            if (std::find(chain.begin(), chain.end(), r.opening_id) != chain.end()) break;
            if (state_[r.opening_id].inward_done || state_[r.opening_id].removed) break;
            chain.push_back(r.opening_id);
        }
        // backward: end -> previous start
        for (size_t hop = 0; hop < openings_.size(); ++hop) {
            Opening* cur = find(chain.front());
            WallFollowResult r = follower_.follow(*cur, false, FollowSide::Inward);
            if (!r.hit || r.frontier_passed || !r.hit_start) break;
            if (std::find(chain.begin(), chain.end(), r.opening_id) != chain.end()) break;
            if (state_[r.opening_id].inward_done || state_[r.opening_id].removed) break;
            chain.insert(chain.begin(), r.opening_id);
        }
        if (chain.size() < 2) return false;

        Opening* last = find(chain.back());
        Opening* head = find(chain.front());

        Opening seed;
        seed.start = head->end;
        seed.end = last->start;
        if (seed.start == seed.end) return false;
        Vec2 centroid{};
        for (uint32_t id : chain) {
            Opening* o = find(id);
            centroid = centroid + (Vec2::of(o->start) + Vec2::of(o->end)) * 0.5;
        }
        centroid = centroid * (1.0 / double(chain.size()));
        Vec2 mid = (Vec2::of(seed.start) + Vec2::of(seed.end)) * 0.5;
        Vec2 n = centroid - mid;
        double nn = n.norm();
        seed.seed_normal = nn > 0 ? n * (1.0 / nn) : Vec2{1, 0};
        if (seed.normal_unit().dot(seed.seed_normal) < 0) std::swap(seed.start, seed.end);

        auto refined = refine_opening(grid_, seed, params_.search);
        if (!refined) return false;
        for (const Opening& o : openings_)
            if (!state_[o.id].removed && openings_overlap(o, *refined)) return false;

        Opening synth = *refined;
        synth.id = next_id();
        synth.synthesized = true;
        openings_.push_back(synth);
        state_[synth.id] = OpeningState{};
        follower_.reindex(active_openings());

        LoopTrace t = trace_loop(chain.front(), FollowSide::Inward);
        if (t.closed && t.chain.size() >= 2 &&
            std::find(t.chain.begin(), t.chain.end(), synth.id) != t.chain.end()) {
            emit_intersection(t, true, false);
            return true;
        }
        // roll back the synthesized opening
        state_[synth.id].removed = true;
        openings_.erase(std::remove_if(openings_.begin(), openings_.end(),
                                       [&](const Opening& o) { return o.id == synth.id; }),
                        openings_.end());
        state_.erase(synth.id);
        follower_.reindex(active_openings());
        return false;
    }

    std::vector<Opening> active_openings() const {
        std::vector<Opening> act;
        for (const Opening& o : openings_)
            if (!state_.at(o.id).removed) act.push_back(o);
        return act;
    }

    uint32_t next_id() const {
        uint32_t m = 0;
        for (const Opening& o : openings_) m = std::max(m, o.id + 1);
        return m;
    }

    void drop_inward(const std::vector<uint32_t>& ids, const std::string& reason) {
        for (uint32_t id : ids) {
            state_[id].inward_done = true;
            dropped_.push_back({id, reason});
        }
    }

    void detect_intersections() {
        std::deque<uint32_t> pending;
        for (const Opening& o : openings_) pending.push_back(o.id);
        while (!pending.empty()) {
            uint32_t id = pending.front();
            pending.pop_front();
            if (!state_.count(id) || state_[id].removed || state_[id].inward_done) continue;

            LoopTrace t = trace_loop(id, FollowSide::Inward);
            if (t.closed) {
                if (t.chain.size() == 1) {
                    drop_inward(t.chain, "single-opening loop");
                } else if (t.chain.size() == 2) {
                    Opening* a = find(t.chain[0]);
                    Opening* b = find(t.chain[1]);
                    if (!a->flipped || !b->flipped) {
                        a->flip();
                        b->flip();
                        follower_.reindex(active_openings());
                        pending.push_back(a->id);
                        pending.push_back(b->id);
                    } else {
                        emit_intersection(t, false, false);
                    }
                } else {
                    emit_intersection(t, false, false);
                }
            } else {
                if (!try_recovery(id)) drop_inward({id}, "open loop, recovery failed");
            }
        }
    }

    void classify_pathways() {
        for (size_t k = 0; k < openings_.size(); ++k) {
            uint32_t id = openings_[k].id;
            if (state_[id].removed || state_[id].outward_done) continue;
            LoopTrace t = trace_loop(id, FollowSide::Outward);
            if (!t.closed) {
                state_[id].outward_done = true;
                dropped_.push_back({id, "outward walk unresolved"});
                continue;
            }
            if (t.chain.size() >= 3) {
                emit_intersection(t, false, true);
                continue;
            }
            Pathway p;
            p.id = uint32_t(pathways_.size());
            p.openings = t.chain;
            p.boundary = loop_boundary(t);
            if (t.chain.size() == 2) {
                p.kind = PathwayKind::Path;
            } else {
                p.kind = t.frontier ? PathwayKind::FrontierPathway : PathwayKind::DeadEnd;
            }
            for (uint32_t oid : t.chain) {
                state_[oid].outward_done = true;
                if (Opening* o = find(oid)) {
                    o->label = p.kind == PathwayKind::Path ? OpeningLabel::Path
                               : p.kind == PathwayKind::DeadEnd ? OpeningLabel::DeadEnd
                                                                : OpeningLabel::Frontier;
                }
            }
            pathways_.push_back(std::move(p));
        }
    }

    const OccupancyGrid& grid_;
    TopologyParams params_;
    std::vector<Opening> openings_;
    WallFollower follower_;
    std::unordered_map<uint32_t, OpeningState> state_;
    std::vector<Intersection> intersections_;
    std::vector<Pathway> pathways_;
    std::vector<DroppedOpening> dropped_;
};

}  // namespace

SemanticMap build_semantic_map(const OccupancyGrid& grid, std::vector<Opening> openings,
                               const TopologyParams& params) {
    TopologyBuilder builder(grid, std::move(openings), params);
    return builder.run();
}

}  // namespace topomap
