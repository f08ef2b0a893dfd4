#pragma once

#include "evgrid/types.hpp"

namespace evgrid {

// One-slot backlog update for a single outlet. Admission is gated on an
// exactly empty queue; passing a positive arrival into a busy outlet is a
// caller bug. Result clips at zero.
double step_queue(double queue, double rate, double admitted_arrival);

// One-slot battery update: discharge covers the part of the delivered outlet
// energy not met by renewable or grid, charge stores routed renewable.
//   b' = b - eta_discharge * ((outlet_sum - renewable)^+ - grid_draw) + eta_charge * battery_charge
// Throws policy_violation if the discharge exceeds the stored level or the
// result exceeds capacity (beyond rounding tolerance).
double step_battery(double battery, double outlet_sum, double renewable,
                    double grid_draw, double battery_charge, const StationConfig& cfg);

// Battery level shifted by the policy offset; negative means the battery
// still wants energy, positive means it can afford to serve and sell.
double shifted_level(double battery, const StationConfig& cfg, double t_max);

// Physical energy an outlet can absorb this slot: the rate decision capped by
// remaining demand (backlog, or the admitted arrival when the queue is empty).
double delivered_energy(double queue, double admitted_arrival, double rate);

} // namespace evgrid
