#include "evgrid/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "evgrid/model.hpp"

namespace evgrid {

StageDecision greedy_decide(const SystemState& state, const SlotInputs& inputs,
                            const SimContext& ctx) {
    const int stations = ctx.fleet.size();
    StageDecision stage;

    // idle outlets per station, ascending outlet index
    std::vector<std::vector<int>> idle(static_cast<std::size_t>(stations));
    for (int i = 0; i < stations; ++i) {
        const auto si = static_cast<std::size_t>(i);
        for (int j = 0; j < ctx.fleet.stations[si].outlet_count; ++j)
            if (state.queues[si][static_cast<std::size_t>(j)] == 0.0)
                idle[si].push_back(j);
    }
    std::vector<std::size_t> next_idle(static_cast<std::size_t>(stations), 0);

    // each arrival goes to the fullest battery that still has an idle outlet
    for (int k = 0; k < static_cast<int>(inputs.arrivals.size()); ++k) {
        const double demand = inputs.arrivals[static_cast<std::size_t>(k)];
        if (demand <= 0.0) continue;
        int best = -1;
        for (int i = 0; i < stations; ++i) {
            const auto si = static_cast<std::size_t>(i);
            if (next_idle[si] >= idle[si].size()) continue;
            if (best < 0 ||
                state.batteries[si] > state.batteries[static_cast<std::size_t>(best)])
                best = i;
        }
        if (best < 0) continue; // blocked
        const auto sb = static_cast<std::size_t>(best);
        const int outlet = idle[sb][next_idle[sb]++];
        stage.assignments.push_back({k, best, outlet, demand});
    }

    std::vector<std::vector<double>> admitted(static_cast<std::size_t>(stations));
    for (int i = 0; i < stations; ++i)
        admitted[static_cast<std::size_t>(i)].assign(
            static_cast<std::size_t>(ctx.fleet.stations[static_cast<std::size_t>(i)].outlet_count),
            0.0);
    for (const auto& a : stage.assignments)
        admitted[static_cast<std::size_t>(a.station)][static_cast<std::size_t>(a.outlet)] =
            a.demand;

    stage.delivered.resize(static_cast<std::size_t>(stations));
    stage.battery_charge.assign(static_cast<std::size_t>(stations), 0.0);
    stage.grid_draw.assign(static_cast<std::size_t>(stations), 0.0);
    for (int i = 0; i < stations; ++i) {
        const auto si = static_cast<std::size_t>(i);
        const auto& cfg = ctx.fleet.stations[si];
        auto& row = stage.delivered[si];
        row.assign(static_cast<std::size_t>(cfg.outlet_count), 0.0);
        double sum = 0.0;
        for (int j = 0; j < cfg.outlet_count; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            // busy outlets always run flat out
            row[sj] = delivered_energy(state.queues[si][sj], admitted[si][sj],
                                       cfg.outlet_rate_max);
            sum += row[sj];
        }
        const double renewable = inputs.renewable[si];
        const double surplus = std::max(0.0, renewable - sum);
        const double room =
            (cfg.battery_capacity - state.batteries[si]) / cfg.eta_charge;
        stage.battery_charge[si] =
            std::min(cfg.battery_charge_max, std::min(surplus, room));

        // supply order: renewable, then battery, grid only for the rest
        const double gap = std::max(0.0, sum - renewable);
        const double from_battery =
            std::min(gap, state.batteries[si] / cfg.eta_discharge);
        stage.grid_draw[si] = std::min(gap - from_battery, cfg.grid_draw_max);
    }

    repair_node_caps(stage.grid_draw, ctx.topo, ctx.headroom);
    stage.multipliers.assign(static_cast<std::size_t>(ctx.topo.node_count()), 0.0);
    return stage;
}

} // namespace evgrid
