#include "evgrid/types.hpp"

#include <algorithm>
#include <limits>

namespace evgrid {

void StationConfig::validate() const {
    if (outlet_count < 1) throw config_error("station needs at least one outlet");
    if (outlet_rate_max <= 0.0) throw config_error("outlet_rate_max must be positive");
    if (battery_capacity <= 0.0) throw config_error("battery_capacity must be positive");
    if (battery_charge_max < 0.0) throw config_error("battery_charge_max must be nonnegative");
    if (grid_draw_max < outlet_rate_max)
        throw config_error("grid_draw_max must be at least outlet_rate_max");
    if (eta_charge <= 0.0 || eta_charge > 1.0)
        throw config_error("eta_charge must be in (0, 1]");
    if (eta_discharge < 1.0) throw config_error("eta_discharge must be at least 1");
    if (battery_init > battery_capacity)
        throw config_error("battery_init exceeds battery_capacity");
}

int StationFleet::total_outlets() const {
    int n = 0;
    for (const auto& s : stations) n += s.outlet_count;
    return n;
}

int StationFleet::max_outlets() const {
    int n = 0;
    for (const auto& s : stations) n = std::max(n, s.outlet_count);
    return n;
}

double StationFleet::max_outlet_rate() const {
    double r = 0.0;
    for (const auto& s : stations) r = std::max(r, s.outlet_rate_max);
    return r;
}

double StationFleet::max_eta_charge() const {
    double e = 0.0;
    for (const auto& s : stations) e = std::max(e, s.eta_charge);
    return e;
}

double StationFleet::max_eta_discharge() const {
    double e = 0.0;
    for (const auto& s : stations) e = std::max(e, s.eta_discharge);
    return e;
}

double StationFleet::min_battery_capacity() const {
    double b = std::numeric_limits<double>::infinity();
    for (const auto& s : stations) b = std::min(b, s.battery_capacity);
    return b;
}

void StationFleet::validate() const {
    if (stations.empty()) throw config_error("fleet has no stations");
    for (const auto& s : stations) s.validate();
}

std::vector<std::vector<int>> FeederTopology::stations_by_node() const {
    std::vector<std::vector<int>> rows(capacity.size());
    for (int i = 0; i < station_count(); ++i)
        for (int l : feeders[i]) rows[static_cast<std::size_t>(l)].push_back(i);
    return rows;
}

void FeederTopology::validate() const {
    const int nodes = node_count();
    if (nodes < 1) throw config_error("feeder has no nodes");
    if (capacity.size() != load_mean.size() || capacity.size() != load_std.size())
        throw config_error("feeder node arrays disagree in length");
    for (int l = 0; l < nodes; ++l) {
        if (capacity[static_cast<std::size_t>(l)] <= 0.0)
            throw config_error("node capacity must be positive");
        if (load_std[static_cast<std::size_t>(l)] < 0.0)
            throw config_error("node load_std must be nonnegative");
    }
    for (const auto& nodes_of_station : feeders) {
        if (nodes_of_station.empty())
            throw config_error("every station must be fed by at least one node");
        for (int l : nodes_of_station)
            if (l < 0 || l >= nodes) throw config_error("station references unknown node");
    }
}

SystemState SystemState::initial(const StationFleet& fleet) {
    SystemState st;
    st.queues.resize(static_cast<std::size_t>(fleet.size()));
    st.batteries.resize(static_cast<std::size_t>(fleet.size()));
    st.shifted.assign(static_cast<std::size_t>(fleet.size()), 0.0);
    for (int i = 0; i < fleet.size(); ++i) {
        const auto& cfg = fleet.stations[static_cast<std::size_t>(i)];
        st.queues[static_cast<std::size_t>(i)].assign(
            static_cast<std::size_t>(cfg.outlet_count), 0.0);
        st.batteries[static_cast<std::size_t>(i)] =
            cfg.battery_init >= 0.0 ? cfg.battery_init : cfg.battery_capacity * 0.5;
    }
    return st;
}

double SystemState::queue_total() const {
    double t = 0.0;
    for (const auto& row : queues)
        for (double q : row) t += q;
    return t;
}

double SystemState::queue_max() const {
    double m = 0.0;
    for (const auto& row : queues)
        for (double q : row) m = std::max(m, q);
    return m;
}

} // namespace evgrid
