#include "evgrid/directing.hpp"

#include <algorithm>

namespace evgrid {

std::vector<Assignment> direct(const MatchInput& input) {
    std::vector<PendingDemand> pending = input.pending;
    std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
        if (a.demand != b.demand) return a.demand > b.demand;
        return a.entry < b.entry;
    });

    std::vector<FreeOutlet> free = input.free;
    std::vector<bool> used(free.size(), false);

    std::vector<Assignment> out;
    out.reserve(std::min(pending.size(), free.size()));
    for (const auto& p : pending) {
        int best = -1;
        for (int z = 0; z < static_cast<int>(free.size()); ++z) {
            if (used[static_cast<std::size_t>(z)]) continue;
            if (best < 0) {
                best = z;
                continue;
            }
            const auto& cand = free[static_cast<std::size_t>(z)];
            const auto& cur = free[static_cast<std::size_t>(best)];
            // objective: demand + score; demand is fixed here, so the score
            // decides, ties toward the lower (station, outlet) index
            if (cand.score > cur.score ||
                (cand.score == cur.score &&
                 (cand.station < cur.station ||
                  (cand.station == cur.station && cand.outlet < cur.outlet))))
                best = z;
        }
        if (best < 0) break; // outlets exhausted, rest is blocked
        used[static_cast<std::size_t>(best)] = true;
        const auto& o = free[static_cast<std::size_t>(best)];
        out.push_back({p.entry, o.station, o.outlet, p.demand});
    }
    return out;
}

} // namespace evgrid
