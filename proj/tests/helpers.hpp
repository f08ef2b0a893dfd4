#pragma once

#include <vector>

#include "evgrid/ingest.hpp"
#include "evgrid/scheduler.hpp"
#include "evgrid/types.hpp"

namespace testutil {

inline evgrid::StationConfig station(int outlets = 3, double rate = 20.0,
                                     double capacity = 500.0, double charge = 225.0,
                                     double draw = 20.0) {
    evgrid::StationConfig cfg;
    cfg.outlet_count = outlets;
    cfg.outlet_rate_max = rate;
    cfg.battery_capacity = capacity;
    cfg.battery_charge_max = charge;
    cfg.grid_draw_max = draw;
    return cfg;
}

// fleet of `count` identical stations, all fed by node 0
inline evgrid::StationFleet fleet_of(int count, const evgrid::StationConfig& cfg) {
    evgrid::StationFleet fleet;
    fleet.stations.assign(static_cast<std::size_t>(count), cfg);
    return fleet;
}

inline evgrid::FeederTopology single_node(int stations, double capacity = 1000.0,
                                          double mean = 0.0, double std = 0.0) {
    evgrid::FeederTopology topo;
    topo.capacity = {capacity};
    topo.load_mean = {mean};
    topo.load_std = {std};
    topo.feeders.assign(static_cast<std::size_t>(stations), {0});
    return topo;
}

inline evgrid::EnvBounds env_bounds(double e_max = 30.0, double u_max = 225.0,
                                    double c_min = 0.02, double c_max = 0.2) {
    return {e_max, u_max, c_min, c_max};
}

inline evgrid::SlotInputs slot_inputs(const evgrid::SimContext& ctx,
                                      std::vector<double> arrivals, double renewable,
                                      double price, double load = 0.0) {
    evgrid::SlotInputs in;
    in.arrivals = std::move(arrivals);
    in.renewable.assign(static_cast<std::size_t>(ctx.fleet.size()), renewable);
    in.price = price;
    in.loads.assign(static_cast<std::size_t>(ctx.topo.node_count()), load);
    return in;
}

} // namespace testutil
