#pragma once

#include <span>
#include <vector>

#include "evgrid/exec.hpp"
#include "evgrid/types.hpp"

namespace evgrid {

// Subgradient loop parameters for the per-slot grid-draw solve.
struct DualConfig {
    double step = 0.01;       // multiplier step size
    int max_iters = 200;      // iteration cap per slot
    double tol = 1e-6;        // convergence threshold on the objective delta
    double lambda_init = 1.0; // initial (and ceiling) multiplier value
};

struct GridDrawResult {
    std::vector<double> draws;       // per station, post repair
    std::vector<double> multipliers; // per node; best dual iterate when not converged
    int iterations = 0;
    bool converged = false;
    double dual_best = 0.0;    // best dual value seen (best-value bookkeeping)
    double gap_estimate = 0.0; // primal value of the returned draws minus dual_best
};

// One station's draw under fixed node prices: linear objective over
// [0, min(demand_gap, grid_draw_max)], drawing fully when
// shifted*eta_discharge + v*price + lambda_sum is negative, else nothing
// (ties prefer battery/renewable, i.e. zero draw).
double station_subproblem(double shifted, double price, double v, double lambda_sum,
                          double demand_gap, const StationConfig& cfg);

// Projected subgradient step on one node price; headroom enters with its raw
// (possibly negative) value.
double update_multiplier(double lambda, double step, double headroom, double draw_sum);

// Scales down the draws at any node whose total exceeds its enforcement cap
// max(0, headroom), proportionally, one ordered pass (draws only shrink, so
// earlier nodes stay satisfied).
void repair_node_caps(std::vector<double>& draws, const FeederTopology& topo,
                      std::span<const double> headroom);

// Full per-slot solve: multipliers start at lambda_init, stations re-solve
// their subproblems each iteration (in parallel under ExecMode::openmp),
// multipliers follow the projected subgradient of the node constraints, and
// the loop stops when the objective stalls below tol or max_iters is hit.
// On a stall the final iterate is returned; on budget exhaustion the
// cheapest repaired iterate is (a near-optimal price can place every draw on
// the wrong side of its bang-bang flip, so the best feasible point is
// tracked separately from the best dual value). Returned draws are always
// node-cap repaired.
GridDrawResult solve_grid_draws(const StationFleet& fleet, const FeederTopology& topo,
                                std::span<const double> shifted,
                                std::span<const double> demand_gap, double price, double v,
                                std::span<const double> headroom, const DualConfig& cfg,
                                ExecMode exec);

// Plain serial reference of the same solve, written independently of the
// execution-mode machinery; kept as the oracle for kernel equivalence tests.
GridDrawResult solve_grid_draws_reference(const StationFleet& fleet,
                                          const FeederTopology& topo,
                                          std::span<const double> shifted,
                                          std::span<const double> demand_gap, double price,
                                          double v, std::span<const double> headroom,
                                          const DualConfig& cfg);

} // namespace evgrid
