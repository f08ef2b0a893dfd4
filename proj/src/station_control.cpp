#include "evgrid/station_control.hpp"

#include <algorithm>

namespace evgrid {

double outlet_rate(double queue, double admitted_arrival, double shifted,
                   const StationConfig& cfg) {
    const double remaining = queue > 0.0 ? queue : admitted_arrival;
    if (remaining <= 0.0) return 0.0; // nothing plugged in, never idle-charge
    const double coefficient = remaining + shifted * cfg.eta_discharge;
    return coefficient > 0.0 ? cfg.outlet_rate_max : 0.0;
}

double renewable_input(double shifted, double renewable, double outlet_sum,
                       const StationConfig& cfg) {
    if (shifted > 0.0) return 0.0; // battery full enough, curtail
    const double surplus = std::max(0.0, renewable - outlet_sum);
    return std::min(cfg.battery_charge_max, surplus);
}

} // namespace evgrid
