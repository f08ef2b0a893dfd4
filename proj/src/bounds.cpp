#include "evgrid/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace evgrid {

LyapunovConstants compute_constants(const StationFleet& fleet, const FeederTopology& topo,
                                    const EnvBounds& env, double lambda_max, double v) {
    if (lambda_max < 0.0) throw config_error("lambda_max must be nonnegative");

    LyapunovConstants k;
    k.lambda_max = lambda_max;
    k.v = v;

    const double r_max = fleet.max_outlet_rate();
    k.alpha_max = 0.5 * r_max * r_max + 0.5 * env.e_max * env.e_max;

    const double charge_peak = fleet.max_eta_charge() * env.u_max;
    double serve_peak = 0.0;
    for (const auto& s : fleet.stations)
        serve_peak = std::max(serve_peak, s.outlet_count * s.outlet_rate_max);
    k.beta_max = 0.5 * std::max(charge_peak * charge_peak, serve_peak * serve_peak);

    k.delta_max = 0.0;
    for (const auto& s : fleet.stations) k.delta_max += s.outlet_count * k.alpha_max;
    k.delta_max += fleet.size() * k.beta_max;

    const double nodes = static_cast<double>(topo.node_count());
    k.t_max = v * env.c_max + nodes * lambda_max;

    const double reserve = fleet.max_eta_charge() * env.u_max +
                           fleet.max_eta_discharge() * fleet.max_outlets() * r_max +
                           nodes * lambda_max;
    k.v_max = (fleet.min_battery_capacity() - reserve) / env.c_max;
    if (k.v_max <= 0.0)
        throw config_error("battery capacities too small for the chosen lambda_max "
                           "(v_max is nonpositive)");
    if (v <= 0.0 || v > k.v_max)
        throw config_error("tradeoff weight v must satisfy 0 < v <= v_max");
    return k;
}

double node_headroom(const FeederTopology& topo, double epsilon, int node) {
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw config_error("epsilon must be in (0, 1)");
    const auto l = static_cast<std::size_t>(node);
    return topo.capacity[l] - topo.load_mean[l] -
           topo.load_std[l] / std::sqrt(2.0 * epsilon);
}

} // namespace evgrid
