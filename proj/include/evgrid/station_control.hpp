#pragma once

#include "evgrid/types.hpp"

namespace evgrid {

// Bang-bang per-outlet rate decision. The linear coefficient is the served
// backlog (or the admitted arrival on an empty outlet) plus the weighted
// shifted battery level; positive coefficient switches the outlet fully on.
// An outlet with nothing to serve stays off regardless of the coefficient.
double outlet_rate(double queue, double admitted_arrival, double shifted,
                   const StationConfig& cfg);

// Renewable-to-battery routing: when the shifted level is nonpositive the
// battery absorbs the surplus left after outlets, up to the charge cap.
double renewable_input(double shifted, double renewable, double outlet_sum,
                       const StationConfig& cfg);

} // namespace evgrid
