#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "evgrid/dual_solver.hpp"
#include "evgrid/scheduler.hpp"
#include "evgrid/types.hpp"

namespace evgrid {

// Irregularly sampled scalar series; times in minutes from the first sample.
struct TimeSeries {
    std::vector<double> minutes;
    std::vector<double> values;
};

// Loads a `timestamp_iso8601,value` CSV. The first line is a header with a
// unit annotation and is validated to be non-numeric. Timestamps must be
// strictly increasing.
TimeSeries load_timeseries_csv(const std::filesystem::path& path);

enum class Resample { linear, cubic_spline };

// Resamples onto a slot grid anchored at the first sample. Linear needs two
// points, the natural cubic spline four. Queries never extrapolate.
std::vector<double> resample(const TimeSeries& series, Resample method, double slot_minutes);

// Turbine power curve: piecewise-linear table in [cut_in, cut_out], zero
// outside, output clamped to [0, rated].
struct PowerCurve {
    std::vector<double> speeds; // m/s, strictly increasing
    std::vector<double> powers; // kW
    double cut_in = 0.0;
    double cut_out = 0.0;
    double rated = 0.0;

    void validate() const;
};

PowerCurve default_power_curve(); // representative 225 kW turbine

double wind_to_power(double speed, const PowerCurve& curve);

// Seeded synthetic streams. Draw order is fixed and documented: loads walk
// nodes in index order each slot; arrivals walk entry points in index order,
// drawing the demand size only for slots with an arrival.
std::vector<std::vector<double>> synth_loads(const FeederTopology& topo, std::uint64_t seed,
                                             long slots);
std::vector<std::vector<double>> synth_arrivals(int entries, double p_arrival,
                                                double demand_min, double demand_max,
                                                std::uint64_t seed, long slots);
std::vector<double> synth_price(const EnvBounds& env, int slot_minutes, std::uint64_t seed,
                                long slots);
std::vector<double> synth_wind_speed(std::uint64_t seed, long slots);

// Whole scenario: fleet, feeder, environment, policy knobs, streams.
// Loaded from a line-oriented `key value...` file; see data/default.cfg for
// the documented schema.
struct ScenarioConfig {
    StationFleet fleet;
    FeederTopology topo;
    EnvBounds env{30.0, 225.0, 0.02, 0.2};
    int entry_points = 1;
    double p_arrival = 0.9;
    double demand_min = 5.0;
    double demand_max = 30.0;
    double v = 1.0;
    double epsilon = 0.05;
    double lambda_max = 1.0;
    DualConfig dual;
    std::uint64_t seed = 1;
    long horizon_slots = 360;
    int slot_minutes = 10;
    Policy policy = Policy::proposed;
    double renewable_scale = 1.0;
    double tail_window_frac = 0.5;
    std::string wind_trace;  // optional CSV path, relative to the config file
    std::string price_trace; // optional CSV path
    std::filesystem::path base_dir = ".";

    static ScenarioConfig load(const std::filesystem::path& path);
    void apply_override(const std::string& key, const std::string& value);
    void validate() const;
};

// Materializes the exogenous inputs for every slot from traces or the seeded
// synthetic generators. Trace-driven series repeat periodically when shorter
// than the horizon.
std::vector<SlotInputs> build_traces(const ScenarioConfig& cfg);

} // namespace evgrid
