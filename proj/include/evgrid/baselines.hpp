#pragma once

#include "evgrid/scheduler.hpp"

namespace evgrid {

// Myopic baseline: every arrival goes to an idle outlet of the station with
// the highest battery level, outlets always charge at the maximum rate, and
// supply is resolved renewable first, battery second, grid last. Node caps
// and battery feasibility go through the same repair machinery as the main
// policy.
StageDecision greedy_decide(const SystemState& state, const SlotInputs& inputs,
                            const SimContext& ctx);

} // namespace evgrid
