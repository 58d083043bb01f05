#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topomap/openings.hpp"

namespace topomap {

struct CleanupParams {
    int s_o = 600;    ///< contour steps for overlap resolution
    int s_c = 50;     ///< contour steps for duplicate search
    double d_w = 0.5; ///< centre-distance weight in the duplicate test
};

/// Two openings overlap when their supercover cell sets intersect (covers
/// both proper segment crossings and shared endpoint cells).
bool openings_overlap(const Opening& a, const Opening& b);

struct CleanupEvent {
    uint32_t o1 = 0;
    uint32_t o2 = 0;
    char scenario = '?';  // 'a'..'d' overlap cases, 'f' fallback, 'u' duplicate
    std::string action;
};

struct ResolveOutcome {
    std::optional<Opening> first;   ///< surviving / modified o1 (nullopt = dropped)
    std::optional<Opening> second;  ///< surviving o2
    CleanupEvent event;
};

/// Resolve one overlapping pair per the wall-offset scenarios; afterwards
/// the pair no longer overlaps or one opening is gone.
ResolveOutcome resolve_overlap(const OccupancyGrid& grid, const Opening& o1,
                               const Opening& o2, const CleanupParams& params);

struct DuplicateTest {
    bool is_duplicate = false;
    int h1 = 0;  ///< wall offset of the matched endpoint near o1.start
    int h2 = 0;  ///< wall offset near o1.end
    bool remove_second = false;  ///< duplicate-test outcome: true removes the second opening
};

/// Same-opening test: both o2 endpoints found along the walls flanking o1
/// within s_c contour steps (one per side). Walks that meet a frontier stop
/// early, so partially explored walls never pair openings.
DuplicateTest duplicate_test(const OccupancyGrid& grid, const Opening& o1, const Opening& o2,
                             const CleanupParams& params);

struct CleanupResult {
    std::vector<Opening> openings;
    std::vector<CleanupEvent> log;
};

/// Fixed-point loop: resolve overlapping pairs, then remove duplicates,
/// until neither predicate fires; processing order is (id_min, id_max).
CleanupResult run_cleanup(const OccupancyGrid& grid, std::vector<Opening> openings,
                          const CleanupParams& params);

}  // namespace topomap
