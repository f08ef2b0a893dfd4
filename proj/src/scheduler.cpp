#include "evgrid/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evgrid/baselines.hpp"
#include "evgrid/directing.hpp"
#include "evgrid/model.hpp"
#include "evgrid/station_control.hpp"

namespace evgrid {

SimContext SimContext::make(StationFleet fleet, FeederTopology topo, EnvBounds env,
                            double lambda_max, double v, DualConfig dual, double epsilon,
                            Policy policy, ExecMode exec) {
    fleet.validate();
    topo.validate();
    if (topo.station_count() != fleet.size())
        throw config_error("feeder and fleet disagree on the number of stations");
    if (env.e_max <= 0.0) throw config_error("e_max must be positive");
    if (env.u_max < 0.0) throw config_error("u_max must be nonnegative");
    if (env.c_min < 0.0 || env.c_max < env.c_min || env.c_max <= 0.0)
        throw config_error("price bounds must satisfy 0 <= c_min <= c_max, c_max > 0");
    if (epsilon <= 0.0 || epsilon >= 1.0) throw config_error("epsilon must be in (0, 1)");

    SimContext ctx;
    ctx.env = env;
    ctx.dual = dual;
    ctx.dual.lambda_init = lambda_max;
    ctx.epsilon = epsilon;
    ctx.policy = policy;
    ctx.exec = exec;
    if (policy == Policy::proposed) {
        ctx.consts = compute_constants(fleet, topo, env, lambda_max, v);
    } else {
        ctx.consts.lambda_max = lambda_max;
        ctx.consts.v = v;
    }
    ctx.headroom.resize(static_cast<std::size_t>(topo.node_count()));
    for (int l = 0; l < topo.node_count(); ++l)
        ctx.headroom[static_cast<std::size_t>(l)] = node_headroom(topo, epsilon, l);
    ctx.fleet = std::move(fleet);
    ctx.topo = std::move(topo);
    return ctx;
}

double apply_battery_limit(std::span<double> delivered, std::span<const double> queues,
                           double renewable, double grid_draw, double battery,
                           const StationConfig& cfg) {
    double sum = std::accumulate(delivered.begin(), delivered.end(), 0.0);
    double gap = std::max(0.0, sum - renewable);
    double excess = (gap - grid_draw) - battery / cfg.eta_discharge;
    if (excess <= 0.0) return gap;

    // the battery cannot cover the remainder; shed delivery, emptiest
    // backlogs first, until the discharge fits
    std::vector<int> order(delivered.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double qa = queues[static_cast<std::size_t>(a)];
        const double qb = queues[static_cast<std::size_t>(b)];
        if (qa != qb) return qa < qb;
        return a < b;
    });
    for (int j : order) {
        if (excess <= 0.0) break;
        const double cut = std::min(delivered[static_cast<std::size_t>(j)], excess);
        delivered[static_cast<std::size_t>(j)] -= cut;
        excess -= cut;
    }
    sum = std::accumulate(delivered.begin(), delivered.end(), 0.0);
    return std::max(0.0, sum - renewable);
}

namespace {

StageDecision propose_decide(const SystemState& state, const SlotInputs& inputs,
                             const SimContext& ctx) {
    const int stations = ctx.fleet.size();
    StageDecision stage;

    MatchInput match;
    for (int k = 0; k < static_cast<int>(inputs.arrivals.size()); ++k)
        if (inputs.arrivals[static_cast<std::size_t>(k)] > 0.0)
            match.pending.push_back({k, inputs.arrivals[static_cast<std::size_t>(k)]});
    for (int i = 0; i < stations; ++i) {
        const auto& cfg = ctx.fleet.stations[static_cast<std::size_t>(i)];
        const double score = state.shifted[static_cast<std::size_t>(i)] * cfg.eta_discharge;
        for (int j = 0; j < cfg.outlet_count; ++j)
            if (state.queues[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 0.0)
                match.free.push_back({i, j, score});
    }
    stage.assignments = direct(match);

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
    std::vector<double> gap(static_cast<std::size_t>(stations), 0.0);
    for_each_station(ctx.exec, stations, [&](int i) {
        const auto si = static_cast<std::size_t>(i);
        const auto& cfg = ctx.fleet.stations[si];
        auto& row = stage.delivered[si];
        row.assign(static_cast<std::size_t>(cfg.outlet_count), 0.0);
        double sum = 0.0;
        for (int j = 0; j < cfg.outlet_count; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            const double q = state.queues[si][sj];
            const double rate = outlet_rate(q, admitted[si][sj], state.shifted[si], cfg);
            row[sj] = delivered_energy(q, admitted[si][sj], rate);
            sum += row[sj];
        }
        stage.battery_charge[si] =
            renewable_input(state.shifted[si], inputs.renewable[si], sum, cfg);
        gap[si] = std::max(0.0, sum - inputs.renewable[si]);
    });

    const GridDrawResult grid =
        solve_grid_draws(ctx.fleet, ctx.topo, state.shifted, gap, inputs.price,
                         ctx.consts.v, ctx.headroom, ctx.dual, ctx.exec);
    stage.grid_draw = grid.draws;
    stage.multipliers = grid.multipliers;
    stage.dual_iterations = grid.iterations;
    stage.dual_converged = grid.converged;
    stage.dual_gap = grid.gap_estimate;
    return stage;
}

} // namespace

StepResult run_slot(SystemState& state, const SlotInputs& inputs, const SimContext& ctx,
                    long slot) {
    const int stations = ctx.fleet.size();
    for (int i = 0; i < stations; ++i)
        state.shifted[static_cast<std::size_t>(i)] =
            shifted_level(state.batteries[static_cast<std::size_t>(i)],
                          ctx.fleet.stations[static_cast<std::size_t>(i)], ctx.consts.t_max);

    StageDecision stage = ctx.policy == Policy::proposed
                              ? propose_decide(state, inputs, ctx)
                              : greedy_decide(state, inputs, ctx);

    std::vector<std::vector<double>> admitted(static_cast<std::size_t>(stations));
    for (int i = 0; i < stations; ++i)
        admitted[static_cast<std::size_t>(i)].assign(
            static_cast<std::size_t>(ctx.fleet.stations[static_cast<std::size_t>(i)].outlet_count),
            0.0);
    for (const auto& a : stage.assignments)
        admitted[static_cast<std::size_t>(a.station)][static_cast<std::size_t>(a.outlet)] =
            a.demand;

    StepResult out;
    auto& rec = out.record;
    rec.slot = slot;
    rec.price = inputs.price;
    rec.battery.resize(static_cast<std::size_t>(stations));

    // settle: battery feasibility, state stepping, bookkeeping
    for (int i = 0; i < stations; ++i) {
        const auto si = static_cast<std::size_t>(i);
        const auto& cfg = ctx.fleet.stations[si];
        auto& row = stage.delivered[si];
        const double renewable = inputs.renewable[si];
        const double draw = stage.grid_draw[si];
        const double gap =
            apply_battery_limit(row, state.queues[si], renewable, draw,
                                state.batteries[si], cfg);
        const double sum = std::accumulate(row.begin(), row.end(), 0.0);
        const double next =
            step_battery(state.batteries[si], sum, renewable, draw,
                         stage.battery_charge[si], cfg);

        const double direct_renewable = std::min(renewable, sum);
        const double from_battery = gap - draw;
        rec.audit_residual =
            std::max(rec.audit_residual,
                     std::fabs(sum - direct_renewable - from_battery - draw));
        rec.delivered += sum;
        rec.renewable_direct += direct_renewable;
        rec.renewable_stored += stage.battery_charge[si];
        rec.battery_discharge += cfg.eta_discharge * from_battery;
        rec.grid_draw += draw;

        for (int j = 0; j < cfg.outlet_count; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            state.queues[si][sj] =
                step_queue(state.queues[si][sj], row[sj], admitted[si][sj]);
        }
        state.batteries[si] = next;
        rec.battery[si] = next;
        rec.battery_total += next;
    }

    rec.cost = inputs.price * rec.grid_draw;
    rec.queue_total = state.queue_total();
    rec.queue_max = state.queue_max();
    for (double e : inputs.arrivals)
        if (e > 0.0) ++rec.arrivals;
    rec.admitted = static_cast<int>(stage.assignments.size());
    rec.blocked = rec.arrivals - rec.admitted;
    rec.dual_iterations = stage.dual_iterations;
    rec.dual_converged = stage.dual_converged;
    rec.dual_gap = stage.dual_gap;

    rec.node_draw.assign(static_cast<std::size_t>(ctx.topo.node_count()), 0.0);
    const auto rows = ctx.topo.stations_by_node();
    for (int l = 0; l < ctx.topo.node_count(); ++l)
        for (int i : rows[static_cast<std::size_t>(l)])
            rec.node_draw[static_cast<std::size_t>(l)] +=
                stage.grid_draw[static_cast<std::size_t>(i)];
    rec.node_load = inputs.loads;
    for (int l = 0; l < ctx.topo.node_count(); ++l)
        if (rec.node_draw[static_cast<std::size_t>(l)] +
                inputs.loads[static_cast<std::size_t>(l)] >
            ctx.topo.capacity[static_cast<std::size_t>(l)])
            ++rec.overloaded_nodes;

    for (double m : stage.multipliers) rec.lambda_peak = std::max(rec.lambda_peak, m);
    if (rec.lambda_peak > ctx.consts.lambda_max * (1.0 + 1e-9))
        throw policy_violation("node multiplier exceeded its ceiling; raise lambda_max");

    out.decision.assignments = std::move(stage.assignments);
    out.decision.outlet_rates = std::move(stage.delivered);
    out.decision.battery_charge = std::move(stage.battery_charge);
    out.decision.grid_draw = std::move(stage.grid_draw);
    out.decision.multipliers = std::move(stage.multipliers);
    return out;
}

RunResult run_horizon(SystemState state, std::span<const SlotInputs> trace,
                      const SimContext& ctx) {
    struct OpenService {
        bool active = false;
        long since = 0;
        double kwh = 0.0;
    };
    std::vector<std::vector<OpenService>> open(static_cast<std::size_t>(ctx.fleet.size()));
    for (int i = 0; i < ctx.fleet.size(); ++i)
        open[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(
            ctx.fleet.stations[static_cast<std::size_t>(i)].outlet_count));

    RunResult result;
    result.records.reserve(trace.size());
    for (long t = 0; t < static_cast<long>(trace.size()); ++t) {
        StepResult step = run_slot(state, trace[static_cast<std::size_t>(t)], ctx, t);
        for (const auto& a : step.decision.assignments)
            open[static_cast<std::size_t>(a.station)][static_cast<std::size_t>(a.outlet)] = {
                true, t, a.demand};
        for (int i = 0; i < ctx.fleet.size(); ++i) {
            const auto si = static_cast<std::size_t>(i);
            for (int j = 0;
                 j < ctx.fleet.stations[si].outlet_count; ++j) {
                const auto sj = static_cast<std::size_t>(j);
                auto& svc = open[si][sj];
                if (svc.active && state.queues[si][sj] == 0.0) {
                    // completion slot minus acceptance slot, per requested kWh
                    result.wait_samples.push_back(
                        static_cast<double>(t - svc.since) / svc.kwh);
                    svc.active = false;
                    ++step.record.completions;
                }
            }
        }
        result.records.push_back(std::move(step.record));
    }
    for (const auto& row : open)
        for (const auto& svc : row)
            if (svc.active) ++result.censored_services;
    result.final_state = std::move(state);
    return result;
}

} // namespace evgrid
