#pragma once

#include <vector>

#include "evgrid/types.hpp"

namespace evgrid {

struct PendingDemand {
    int entry = 0;
    double demand = 0.0; // kWh, > 0
};

// An empty outlet offered for matching; score is the station's shifted
// battery level weighted by its discharge efficiency.
struct FreeOutlet {
    int station = 0;
    int outlet = 0;
    double score = 0.0;
};

struct MatchInput {
    std::vector<PendingDemand> pending;
    std::vector<FreeOutlet> free;
};

// Greedy one-shot matching: largest demand first, each paired with the free
// outlet maximizing demand + score. Ties break toward the lower entry index
// and the lower (station, outlet) index. Every demand is matched while free
// outlets remain; leftovers are unmatched (blocked this slot).
std::vector<Assignment> direct(const MatchInput& input);

} // namespace evgrid
