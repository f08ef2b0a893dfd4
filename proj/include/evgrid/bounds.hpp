#pragma once

#include "evgrid/types.hpp"

namespace evgrid {

// Constants of the drift-plus-penalty analysis. alpha_max bounds one queue's
// per-slot drift, beta_max one battery's, delta_max the whole system's.
// t_max is the battery shift offset for the configured tradeoff weight v;
// v_max is the largest weight for which the battery box is provably safe.
struct LyapunovConstants {
    double alpha_max = 0.0;
    double beta_max = 0.0;
    double delta_max = 0.0;
    double t_max = 0.0;
    double v_max = 0.0;
    double lambda_max = 0.0;
    double v = 0.0;
};

// Derives the constants above from fleet, feeder size and environment bounds.
// Throws config_error when v_max comes out nonpositive (battery capacities too
// small for the chosen lambda_max) or v falls outside (0, v_max].
LyapunovConstants compute_constants(const StationFleet& fleet, const FeederTopology& topo,
                                    const EnvBounds& env, double lambda_max, double v);

// Grid-draw budget of one node: line capacity minus expected uncontrollable
// load minus a one-sided Chebyshev margin sized by the overload budget
// epsilon. May be negative, meaning no draw keeps the overload risk in budget.
double node_headroom(const FeederTopology& topo, double epsilon, int node);

} // namespace evgrid
