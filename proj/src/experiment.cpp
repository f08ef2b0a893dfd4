#include "evgrid/experiment.hpp"

#include <atomic>
#include <cctype>
#include <exception>
#include <fstream>
#include <thread>

#include "evgrid/baselines.hpp"

namespace evgrid {

RunReport run_experiment(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                         ExecMode exec) {
    cfg.validate();
    const SimContext ctx = SimContext::make(cfg.fleet, cfg.topo, cfg.env, cfg.lambda_max,
                                            cfg.v, cfg.dual, cfg.epsilon, cfg.policy, exec);
    const std::vector<SlotInputs> trace = build_traces(cfg);
    const RunResult result = run_horizon(SystemState::initial(ctx.fleet), trace, ctx);
    const RunReport report = aggregate(result, ctx.topo, cfg.tail_window_frac);

    std::filesystem::create_directories(out_dir);
    write_report_csv(out_dir / "report.csv", result);
    RunMeta meta;
    meta.policy = cfg.policy == Policy::proposed ? "proposed" : "greedy";
    meta.seed = cfg.seed;
    meta.slot_minutes = cfg.slot_minutes;
    meta.v = cfg.v;
    meta.epsilon = cfg.epsilon;
    meta.stations = ctx.fleet.size();
    meta.nodes = ctx.topo.node_count();
    meta.entry_points = cfg.entry_points;
    write_summary(out_dir / "summary.txt", report, meta);
    return report;
}

namespace {

std::string sanitize(const std::string& value) {
    std::string s = value;
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-') c = '_';
    return s;
}

} // namespace

std::vector<SweepEntry> run_sweep(const ScenarioConfig& base, const std::string& key,
                                  const std::vector<std::string>& values,
                                  const std::filesystem::path& out_dir, int jobs,
                                  ExecMode exec) {
    if (values.empty()) throw config_error("sweep has no values");
    std::vector<SweepEntry> entries(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        entries[k].value = values[k];
        entries[k].dir = out_dir / ("run_" + sanitize(key) + "_" + sanitize(values[k]));
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(values.size());
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= values.size()) return;
            try {
                ScenarioConfig cfg = base;
                cfg.apply_override(key, values[k]);
                entries[k].report = run_experiment(cfg, entries[k].dir, exec);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
    };

    const int pool = std::max(1, std::min<int>(jobs, static_cast<int>(values.size())));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (int w = 0; w < pool; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    for (std::size_t k = 0; k < values.size(); ++k)
        if (!errors[k].empty())
            throw config_error("sweep " + key + "=" + values[k] + " failed: " + errors[k]);

    std::ofstream index(out_dir / "index.txt");
    if (!index) throw config_error("cannot write " + (out_dir / "index.txt").string());
    for (const auto& e : entries)
        index << key << '=' << e.value << " dir=" << e.dir.filename().string()
              << " time_avg_cost=" << format_number(e.report.time_avg_cost)
              << " overload_freq_max=" << format_number(e.report.overload_freq_max)
              << " queue_max=" << format_number(e.report.queue_max) << '\n';
    return entries;
}

} // namespace evgrid
