#pragma once

#include <span>
#include <vector>

#include "evgrid/bounds.hpp"
#include "evgrid/dual_solver.hpp"
#include "evgrid/exec.hpp"
#include "evgrid/types.hpp"

namespace evgrid {

enum class Policy { proposed, greedy };

// Immutable per-run context: fleet, feeder, derived constants, solver knobs
// and the cached per-node headrooms.
struct SimContext {
    StationFleet fleet;
    FeederTopology topo;
    EnvBounds env;
    LyapunovConstants consts;
    DualConfig dual;
    double epsilon = 0.05;
    Policy policy = Policy::proposed;
    ExecMode exec = ExecMode::serial;
    std::vector<double> headroom;

    // Validates cross-references and derives constants (the greedy baseline
    // skips the tradeoff-weight validation; it has no such parameter).
    static SimContext make(StationFleet fleet, FeederTopology topo, EnvBounds env,
                           double lambda_max, double v, DualConfig dual, double epsilon,
                           Policy policy, ExecMode exec);
};

// Everything observable about one simulated slot.
struct SlotRecord {
    long slot = 0;
    double price = 0.0;
    double cost = 0.0;              // price * total grid draw
    double grid_draw = 0.0;
    double delivered = 0.0;         // kWh into vehicles
    double renewable_direct = 0.0;  // renewable serving outlets
    double renewable_stored = 0.0;  // renewable routed to batteries
    double battery_discharge = 0.0; // energy taken out of batteries
    double battery_total = 0.0;
    double queue_total = 0.0;
    double queue_max = 0.0;
    int arrivals = 0;
    int admitted = 0;
    int blocked = 0;
    int completions = 0;
    int dual_iterations = 0;
    bool dual_converged = true;
    double dual_gap = 0.0;
    int overloaded_nodes = 0;       // realized draw + load above capacity
    double lambda_peak = 0.0;
    double audit_residual = 0.0;    // worst station energy-balance residual
    std::vector<double> node_draw;
    std::vector<double> node_load;
    std::vector<double> battery;    // per station, end of slot
};

struct StepResult {
    SlotDecision decision;
    SlotRecord record;
};

// Decision-stage output before the shared settle stage.
struct StageDecision {
    std::vector<Assignment> assignments;
    std::vector<std::vector<double>> delivered; // per outlet, pre battery repair
    std::vector<double> battery_charge;
    std::vector<double> grid_draw;              // post node-cap repair
    std::vector<double> multipliers;
    int dual_iterations = 0;
    bool dual_converged = true;
    double dual_gap = 0.0;
};

// Shrinks a station's delivered rates (lowest-queue outlets first) until the
// implied battery discharge fits the stored level. Returns the final demand
// gap. queues are the backlogs at slot start.
double apply_battery_limit(std::span<double> delivered, std::span<const double> queues,
                           double renewable, double grid_draw, double battery,
                           const StationConfig& cfg);

// One slot of the configured policy: directing, rate decisions, renewable
// routing, grid-draw solve, then the shared settle stage that repairs
// battery feasibility, steps the state and records the slot.
StepResult run_slot(SystemState& state, const SlotInputs& inputs, const SimContext& ctx,
                    long slot);

struct RunResult {
    std::vector<SlotRecord> records;
    std::vector<double> wait_samples; // slots per kWh, completed services
    int censored_services = 0;        // still open at horizon end
    SystemState final_state;
};

RunResult run_horizon(SystemState state, std::span<const SlotInputs> trace,
                      const SimContext& ctx);

} // namespace evgrid
