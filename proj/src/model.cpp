#include "evgrid/model.hpp"

#include <algorithm>
#include <cmath>

namespace evgrid {

namespace {
// Rounding slack for the battery box checks, relative to the level involved.
double tol(double scale) { return 1e-9 * std::max(1.0, std::fabs(scale)); }
} // namespace

double step_queue(double queue, double rate, double admitted_arrival) {
    if (admitted_arrival > 0.0 && queue > 0.0)
        throw policy_violation("arrival admitted into a busy outlet");
    return std::max(0.0, queue - rate + admitted_arrival);
}

double step_battery(double battery, double outlet_sum, double renewable,
                    double grid_draw, double battery_charge, const StationConfig& cfg) {
    const double gap = std::max(0.0, outlet_sum - renewable);
    const double discharge = cfg.eta_discharge * (gap - grid_draw);
    if (discharge < -tol(gap))
        throw policy_violation("grid draw exceeds the demand gap");
    if (discharge > battery + tol(battery))
        throw policy_violation("battery discharge exceeds stored level");
    double next = battery - discharge + cfg.eta_charge * battery_charge;
    if (next > cfg.battery_capacity + tol(cfg.battery_capacity))
        throw policy_violation("battery charged beyond capacity");
    return std::clamp(next, 0.0, cfg.battery_capacity);
}

double shifted_level(double battery, const StationConfig& cfg, double t_max) {
    return battery - t_max - cfg.eta_discharge * cfg.outlet_count * cfg.outlet_rate_max;
}

double delivered_energy(double queue, double admitted_arrival, double rate) {
    const double remaining = queue > 0.0 ? queue : admitted_arrival;
    return std::min(rate, remaining);
}

} // namespace evgrid
