#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace evgrid {

// Configuration or input-data problem; recoverable by fixing the inputs.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A control decision violated a state constraint it is supposed to guarantee.
// Indicates a policy bug, not a recoverable runtime condition.
struct policy_violation : std::logic_error {
    using std::logic_error::logic_error;
};

// Per-station hardware and efficiency parameters. Units: kW for rates,
// kWh for capacities; slot length is one time unit, so the two are
// numerically interchangeable inside a slot.
struct StationConfig {
    int outlet_count = 1;
    double outlet_rate_max = 0.0;   // per-outlet charging cap
    double battery_capacity = 0.0;  // storage box upper bound
    double battery_charge_max = 0.0; // renewable-to-battery cap per slot
    double grid_draw_max = 0.0;     // station grid-draw cap per slot
    double eta_charge = 1.0;        // in (0, 1]
    double eta_discharge = 1.0;     // >= 1
    double battery_init = -1.0;     // initial level; <0 means capacity/2

    void validate() const;
};

struct StationFleet {
    std::vector<StationConfig> stations;

    int size() const { return static_cast<int>(stations.size()); }
    int total_outlets() const;
    int max_outlets() const;
    double max_outlet_rate() const;
    double max_eta_charge() const;
    double max_eta_discharge() const;
    double min_battery_capacity() const;
    void validate() const;
};

// Distribution feeder: per-node line capacity and uncontrollable-load model,
// plus the node-station incidence stored as each station's feeding-node list
// (the nodes whose line limits that station's grid draw).
struct FeederTopology {
    std::vector<double> capacity;   // kW per node
    std::vector<double> load_mean;  // kW
    std::vector<double> load_std;   // kW
    std::vector<std::vector<int>> feeders; // [station] -> node indices

    int node_count() const { return static_cast<int>(capacity.size()); }
    int station_count() const { return static_cast<int>(feeders.size()); }
    std::vector<std::vector<int>> stations_by_node() const;
    void validate() const;
};

// Environment box bounds shared by every stream.
struct EnvBounds {
    double e_max = 0.0; // largest admissible demand, kWh
    double u_max = 0.0; // renewable generation cap, kW
    double c_min = 0.0; // price floor
    double c_max = 0.0; // price cap
};

// Queue backlogs (kWh per outlet), battery levels, and the battery levels
// shifted by the policy offset. `shifted` is derived from `batteries` at the
// top of every slot; batteries are the single source of truth.
struct SystemState {
    std::vector<std::vector<double>> queues;
    std::vector<double> batteries;
    std::vector<double> shifted;

    static SystemState initial(const StationFleet& fleet);
    double queue_total() const;
    double queue_max() const;
};

// Exogenous inputs realized in one slot.
struct SlotInputs {
    std::vector<double> arrivals;  // kWh per entry point, 0 = no request
    std::vector<double> renewable; // kW per station
    double price = 0.0;
    std::vector<double> loads;     // kW per node, realized uncontrollable load
};

// One admitted request: entry point -> (station, outlet).
struct Assignment {
    int entry = 0;
    int station = 0;
    int outlet = 0;
    double demand = 0.0;
};

// Controls chosen in one slot. outlet_rates hold the effective delivered
// rate per outlet (post feasibility repair); multipliers are the node prices
// from the grid-draw solve.
struct SlotDecision {
    std::vector<Assignment> assignments;
    std::vector<std::vector<double>> outlet_rates;
    std::vector<double> battery_charge;
    std::vector<double> grid_draw;
    std::vector<double> multipliers;
};

} // namespace evgrid
