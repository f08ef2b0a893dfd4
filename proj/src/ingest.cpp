#include "evgrid/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "evgrid/rng.hpp"

namespace evgrid {

namespace {

// "YYYY-MM-DDTHH:MM[:SS]" to absolute minutes
double parse_iso_minutes(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    const int got = std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &s);
    if (got < 5) throw config_error("bad timestamp: " + text);
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw config_error("bad calendar date: " + text);
    const auto days = std::chrono::sys_days(ymd).time_since_epoch().count();
    return static_cast<double>(days) * 1440.0 + h * 60.0 + mi + s / 60.0;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("expected a number for " + what + ", got '" + s + "'");
    }
}

long to_long(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("expected an integer for " + what + ", got '" + s + "'");
    }
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("expected an unsigned integer for " + what + ", got '" + s + "'");
    }
}

std::vector<int> parse_node_list(const std::string& csv) {
    std::vector<int> nodes;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw config_error("empty entry in node list '" + csv + "'");
        nodes.push_back(static_cast<int>(to_long(item, "node id")) - 1);
    }
    if (nodes.empty()) throw config_error("empty node list");
    return nodes;
}

} // namespace

TimeSeries load_timeseries_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open trace file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty trace file " + path.string());
    const std::string header = trim(line);
    if (header.empty() || std::isdigit(static_cast<unsigned char>(header[0])))
        throw config_error("trace file " + path.string() +
                           " is missing its header row (unit annotation)");

    TimeSeries ts;
    while (std::getline(in, line)) {
        const std::string row = trim(line);
        if (row.empty()) continue;
        const std::size_t comma = row.find(',');
        if (comma == std::string::npos)
            throw config_error("malformed trace row '" + row + "' in " + path.string());
        ts.minutes.push_back(parse_iso_minutes(trim(row.substr(0, comma))));
        ts.values.push_back(to_double(trim(row.substr(comma + 1)), "trace value"));
    }
    if (ts.minutes.empty()) throw config_error("trace file " + path.string() + " has no data");
    for (std::size_t i = 1; i < ts.minutes.size(); ++i)
        if (ts.minutes[i] <= ts.minutes[i - 1])
            throw config_error("trace timestamps must be strictly increasing in " +
                               path.string());
    const double t0 = ts.minutes.front();
    for (double& m : ts.minutes) m -= t0;
    return ts;
}

namespace {

// natural cubic spline second derivatives via the Thomas algorithm
std::vector<double> spline_second_derivatives(const std::vector<double>& x,
                                              const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    if (n < 3) return m;
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x[i] - x[i - 1];
        const double hr = x[i + 1] - x[i];
        diag[i] = (x[i + 1] - x[i - 1]) / 3.0;
        upper[i] = hr / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl;
        // forward elimination against the previous row's lower entry hl/6
        if (i > 1) {
            const double w = (hl / 6.0) / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
        if (i == 1) break;
    }
    return m;
}

double spline_eval(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& m, double t) {
    std::size_t hi = 1;
    while (hi + 1 < x.size() && x[hi] < t) ++hi;
    const std::size_t lo = hi - 1;
    const double h = x[hi] - x[lo];
    const double a = (x[hi] - t) / h;
    const double b = (t - x[lo]) / h;
    return a * y[lo] + b * y[hi] +
           ((a * a * a - a) * m[lo] + (b * b * b - b) * m[hi]) * (h * h) / 6.0;
}

} // namespace

std::vector<double> resample(const TimeSeries& series, Resample method, double slot_minutes) {
    if (slot_minutes <= 0.0) throw config_error("slot length must be positive");
    const std::size_t n = series.minutes.size();
    if (method == Resample::linear && n < 2)
        throw config_error("linear resampling needs at least 2 points");
    if (method == Resample::cubic_spline && n < 4)
        throw config_error("cubic spline resampling needs at least 4 points");
    for (std::size_t i = 1; i < n; ++i)
        if (series.minutes[i] <= series.minutes[i - 1])
            throw config_error("series timestamps must be strictly increasing");

    const double span = series.minutes.back() - series.minutes.front();
    const long out_n = static_cast<long>(std::floor(span / slot_minutes)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(out_n));

    std::vector<double> m;
    if (method == Resample::cubic_spline)
        m = spline_second_derivatives(series.minutes, series.values);

    for (long k = 0; k < out_n; ++k) {
        const double t = series.minutes.front() + static_cast<double>(k) * slot_minutes;
        if (method == Resample::linear) {
            std::size_t hi = 1;
            while (hi + 1 < n && series.minutes[hi] < t) ++hi;
            const std::size_t lo = hi - 1;
            const double w =
                (t - series.minutes[lo]) / (series.minutes[hi] - series.minutes[lo]);
            out.push_back(series.values[lo] + w * (series.values[hi] - series.values[lo]));
        } else {
            out.push_back(spline_eval(series.minutes, series.values, m, t));
        }
    }
    return out;
}

void PowerCurve::validate() const {
    if (speeds.size() != powers.size() || speeds.size() < 2)
        throw config_error("power curve table needs matching speed/power columns");
    for (std::size_t i = 1; i < speeds.size(); ++i)
        if (speeds[i] <= speeds[i - 1])
            throw config_error("power curve breakpoints must be strictly increasing");
    for (double p : powers)
        if (p < 0.0 || p > rated) throw config_error("power curve values outside [0, rated]");
    if (cut_in > speeds.front() || cut_out < speeds.back())
        throw config_error("power curve table must lie inside [cut_in, cut_out]");
}

PowerCurve default_power_curve() {
    PowerCurve c;
    c.speeds = {3.5, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 13.0, 14.0, 25.0};
    c.powers = {0.0, 3.0, 15.0, 33.0, 55.0, 82.0, 115.0, 150.0, 180.0, 203.0, 218.0,
                225.0, 225.0};
    c.cut_in = 3.5;
    c.cut_out = 25.0;
    c.rated = 225.0;
    return c;
}

double wind_to_power(double speed, const PowerCurve& curve) {
    if (speed < curve.cut_in || speed > curve.cut_out) return 0.0;
    const auto& x = curve.speeds;
    const auto& y = curve.powers;
    if (speed <= x.front()) return std::clamp(y.front(), 0.0, curve.rated);
    if (speed >= x.back()) return std::clamp(y.back(), 0.0, curve.rated);
    std::size_t hi = 1;
    while (x[hi] < speed) ++hi;
    const double w = (speed - x[hi - 1]) / (x[hi] - x[hi - 1]);
    return std::clamp(y[hi - 1] + w * (y[hi] - y[hi - 1]), 0.0, curve.rated);
}

std::vector<std::vector<double>> synth_loads(const FeederTopology& topo, std::uint64_t seed,
                                             long slots) {
    Rng rng(seed);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(slots));
    for (auto& row : out) {
        row.resize(static_cast<std::size_t>(topo.node_count()));
        for (int l = 0; l < topo.node_count(); ++l) {
            const auto sl = static_cast<std::size_t>(l);
            row[sl] = std::max(0.0, rng.gaussian(topo.load_mean[sl], topo.load_std[sl]));
        }
    }
    return out;
}

std::vector<std::vector<double>> synth_arrivals(int entries, double p_arrival,
                                                double demand_min, double demand_max,
                                                std::uint64_t seed, long slots) {
    Rng rng(seed);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(slots));
    for (auto& row : out) {
        row.assign(static_cast<std::size_t>(entries), 0.0);
        for (int k = 0; k < entries; ++k)
            if (rng.bernoulli(p_arrival))
                // half-open (demand_min, demand_max]
                row[static_cast<std::size_t>(k)] =
                    demand_max - (demand_max - demand_min) * rng.uniform();
    }
    return out;
}

std::vector<double> synth_price(const EnvBounds& env, int slot_minutes, std::uint64_t seed,
                                long slots) {
    Rng rng(seed);
    const double mid = 0.5 * (env.c_min + env.c_max);
    const double amp = 0.4 * (env.c_max - env.c_min);
    const double jitter = 0.1 * (env.c_max - env.c_min);
    std::vector<double> out(static_cast<std::size_t>(slots));
    for (long t = 0; t < slots; ++t) {
        const double day = static_cast<double>(t) * slot_minutes / 1440.0;
        const double base = mid + amp * std::sin(6.283185307179586 * day);
        out[static_cast<std::size_t>(t)] =
            std::clamp(base + jitter * rng.uniform(-1.0, 1.0), env.c_min, env.c_max);
    }
    return out;
}

std::vector<double> synth_wind_speed(std::uint64_t seed, long slots) {
    Rng rng(seed);
    std::vector<double> out(static_cast<std::size_t>(slots));
    double s = 8.0;
    for (long t = 0; t < slots; ++t) {
        out[static_cast<std::size_t>(t)] = s;
        s = std::clamp(9.0 + 0.97 * (s - 9.0) + 1.2 * rng.gaussian(), 0.0, 30.0);
    }
    return out;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path.string());

    ScenarioConfig cfg;
    cfg.base_dir = path.has_parent_path() ? path.parent_path() : ".";
    int declared_nodes = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::stringstream ss(trim(line));
        std::string key;
        if (!(ss >> key)) continue;

        auto next = [&](const std::string& what) {
            std::string tok;
            if (!(ss >> tok))
                throw config_error("config line " + std::to_string(line_no) +
                                   ": missing value for " + what);
            return tok;
        };

        if (key == "nodes") {
            declared_nodes = static_cast<int>(to_long(next(key), key));
            if (declared_nodes < 1) throw config_error("nodes must be at least 1");
            cfg.topo.capacity.assign(static_cast<std::size_t>(declared_nodes), 0.0);
            cfg.topo.load_mean.assign(static_cast<std::size_t>(declared_nodes), 0.0);
            cfg.topo.load_std.assign(static_cast<std::size_t>(declared_nodes), 0.0);
        } else if (key == "node") {
            const int id = static_cast<int>(to_long(next("node id"), "node id"));
            if (declared_nodes < 0)
                throw config_error("'nodes <count>' must precede node lines");
            if (id < 1 || id > declared_nodes)
                throw config_error("node id " + std::to_string(id) + " out of range");
            std::string field;
            while (ss >> field) {
                const std::string value = next(field);
                const auto sl = static_cast<std::size_t>(id - 1);
                if (field == "capacity") cfg.topo.capacity[sl] = to_double(value, field);
                else if (field == "load_mean") cfg.topo.load_mean[sl] = to_double(value, field);
                else if (field == "load_std") cfg.topo.load_std[sl] = to_double(value, field);
                else throw config_error("unknown node field '" + field + "'");
            }
        } else if (key == "station") {
            const int id = static_cast<int>(to_long(next("station id"), "station id"));
            if (id != static_cast<int>(cfg.fleet.stations.size()) + 1)
                throw config_error("station ids must be sequential starting at 1");
            StationConfig sc;
            std::vector<int> feed;
            std::string field;
            while (ss >> field) {
                const std::string value = next(field);
                if (field == "nodes") feed = parse_node_list(value);
                else if (field == "outlets")
                    sc.outlet_count = static_cast<int>(to_long(value, field));
                else if (field == "outlet_rate_max") sc.outlet_rate_max = to_double(value, field);
                else if (field == "battery_capacity") sc.battery_capacity = to_double(value, field);
                else if (field == "battery_charge_max")
                    sc.battery_charge_max = to_double(value, field);
                else if (field == "grid_draw_max") sc.grid_draw_max = to_double(value, field);
                else if (field == "eta_charge") sc.eta_charge = to_double(value, field);
                else if (field == "eta_discharge") sc.eta_discharge = to_double(value, field);
                else if (field == "battery_init") sc.battery_init = to_double(value, field);
                else throw config_error("unknown station field '" + field + "'");
            }
            if (feed.empty())
                throw config_error("station " + std::to_string(id) + " lists no feeding nodes");
            cfg.fleet.stations.push_back(sc);
            cfg.topo.feeders.push_back(std::move(feed));
        } else {
            cfg.apply_override(key, next(key));
        }
    }
    return cfg;
}

void ScenarioConfig::apply_override(const std::string& key, const std::string& value) {
    if (key == "V" || key == "v") v = to_double(value, key);
    else if (key == "epsilon") epsilon = to_double(value, key);
    else if (key == "kappa") dual.step = to_double(value, key);
    else if (key == "max_iters") dual.max_iters = static_cast<int>(to_long(value, key));
    else if (key == "xi") dual.tol = to_double(value, key);
    else if (key == "lambda_max") lambda_max = to_double(value, key);
    else if (key == "seed") seed = to_u64(value, key);
    else if (key == "horizon_slots") horizon_slots = to_long(value, key);
    else if (key == "slot_minutes") slot_minutes = static_cast<int>(to_long(value, key));
    else if (key == "entry_points") entry_points = static_cast<int>(to_long(value, key));
    else if (key == "p_arrival") p_arrival = to_double(value, key);
    else if (key == "demand_min") demand_min = to_double(value, key);
    else if (key == "demand_max") demand_max = to_double(value, key);
    else if (key == "e_max") env.e_max = to_double(value, key);
    else if (key == "u_max") env.u_max = to_double(value, key);
    else if (key == "c_min") env.c_min = to_double(value, key);
    else if (key == "c_max") env.c_max = to_double(value, key);
    else if (key == "renewable_scale") renewable_scale = to_double(value, key);
    else if (key == "tail_window_frac") tail_window_frac = to_double(value, key);
    else if (key == "wind_trace") wind_trace = value;
    else if (key == "price_trace") price_trace = value;
    else if (key == "battery_capacity") {
        const double b = to_double(value, key);
        for (auto& s : fleet.stations) s.battery_capacity = b;
    } else if (key == "battery_init") {
        const double b = to_double(value, key);
        for (auto& s : fleet.stations) s.battery_init = b;
    } else if (key == "policy") {
        if (value == "proposed") policy = Policy::proposed;
        else if (value == "greedy") policy = Policy::greedy;
        else throw config_error("unknown policy '" + value + "'");
    } else {
        throw config_error("unknown config key '" + key + "'");
    }
}

void ScenarioConfig::validate() const {
    fleet.validate();
    topo.validate();
    if (topo.station_count() != fleet.size())
        throw config_error("config declares " + std::to_string(fleet.size()) +
                           " stations but " + std::to_string(topo.station_count()) +
                           " feeder columns");
    if (entry_points < 1) throw config_error("entry_points must be at least 1");
    if (p_arrival < 0.0 || p_arrival > 1.0) throw config_error("p_arrival must be in [0, 1]");
    if (demand_min < 0.0 || demand_max < demand_min)
        throw config_error("demand bounds must satisfy 0 <= demand_min <= demand_max");
    if (demand_max > env.e_max)
        throw config_error("demand_max exceeds the demand bound e_max");
    if (v <= 0.0) throw config_error("tradeoff weight V must be positive");
    if (epsilon <= 0.0 || epsilon >= 1.0) throw config_error("epsilon must be in (0, 1)");
    if (lambda_max < 0.0) throw config_error("lambda_max must be nonnegative");
    if (dual.step <= 0.0) throw config_error("kappa must be positive");
    if (dual.max_iters < 1) throw config_error("max_iters must be at least 1");
    if (dual.tol <= 0.0) throw config_error("xi must be positive");
    if (horizon_slots < 1) throw config_error("horizon_slots must be at least 1");
    if (slot_minutes < 1) throw config_error("slot_minutes must be at least 1");
    if (renewable_scale < 0.0) throw config_error("renewable_scale must be nonnegative");
    if (tail_window_frac <= 0.0 || tail_window_frac > 1.0)
        throw config_error("tail_window_frac must be in (0, 1]");
}

std::vector<SlotInputs> build_traces(const ScenarioConfig& cfg) {
    const long slots = cfg.horizon_slots;
    const auto arrivals =
        synth_arrivals(cfg.entry_points, cfg.p_arrival, cfg.demand_min, cfg.demand_max,
                       derive_seed(cfg.seed, 1), slots);
    const auto loads = synth_loads(cfg.topo, derive_seed(cfg.seed, 2), slots);

    std::vector<double> power;
    const PowerCurve curve = default_power_curve();
    if (!cfg.wind_trace.empty()) {
        TimeSeries speeds = load_timeseries_csv(cfg.base_dir / cfg.wind_trace);
        TimeSeries kw{speeds.minutes, {}};
        kw.values.reserve(speeds.values.size());
        for (double s : speeds.values) kw.values.push_back(wind_to_power(s, curve));
        power = resample(kw, Resample::cubic_spline, cfg.slot_minutes);
        for (double& p : power) p = std::clamp(p, 0.0, curve.rated);
    } else {
        const auto speeds = synth_wind_speed(derive_seed(cfg.seed, 3), slots);
        power.reserve(static_cast<std::size_t>(slots));
        for (double s : speeds) power.push_back(wind_to_power(s, curve));
    }

    std::vector<double> price;
    if (!cfg.price_trace.empty()) {
        const TimeSeries ts = load_timeseries_csv(cfg.base_dir / cfg.price_trace);
        price = resample(ts, Resample::linear, cfg.slot_minutes);
        for (double& c : price) c = std::clamp(c, cfg.env.c_min, cfg.env.c_max);
    } else {
        price = synth_price(cfg.env, cfg.slot_minutes, derive_seed(cfg.seed, 4), slots);
    }

    std::vector<SlotInputs> trace(static_cast<std::size_t>(slots));
    for (long t = 0; t < slots; ++t) {
        auto& in = trace[static_cast<std::size_t>(t)];
        in.arrivals = arrivals[static_cast<std::size_t>(t)];
        in.loads = loads[static_cast<std::size_t>(t)];
        in.price = price[static_cast<std::size_t>(t) % price.size()];
        const double p =
            std::min(cfg.env.u_max,
                     cfg.renewable_scale * power[static_cast<std::size_t>(t) % power.size()]);
        in.renewable.assign(static_cast<std::size_t>(cfg.fleet.size()), p);
    }
    return trace;
}

} // namespace evgrid
