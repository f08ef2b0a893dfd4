#include <cstdlib>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evgrid/experiment.hpp"

namespace {

std::pair<std::string, std::string> split_kv(const std::string& text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size())
        throw evgrid::config_error("expected key=value, got '" + text + "'");
    return {text.substr(0, eq), text.substr(eq + 1)};
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"EV charging fleet simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute a configured scenario");
    std::string config_path;
    std::vector<std::string> overrides;
    std::string sweep_spec;
    std::string policy;
    std::string seed;
    std::string out_dir;
    int jobs = 1;
    bool parallel = false;
    run->add_option("--config", config_path, "scenario config file")->required();
    run->add_option("--override", overrides, "key=value, repeatable, applied in order");
    run->add_option("--sweep", sweep_spec, "key=v1,v2,... one run per value");
    run->add_option("--policy", policy, "proposed or greedy");
    run->add_option("--seed", seed, "PRNG master seed");
    run->add_option("--out", out_dir, "output directory (default $EVGRID_OUT or ./out)");
    run->add_option("--jobs", jobs, "sweep worker threads")->check(CLI::PositiveNumber);
    run->add_flag("--parallel", parallel, "use the OpenMP station kernels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (out_dir.empty()) {
        const char* env = std::getenv("EVGRID_OUT");
        out_dir = env != nullptr && *env != '\0' ? env : "out";
    }
    const auto exec = parallel ? evgrid::ExecMode::openmp : evgrid::ExecMode::serial;

    try {
        evgrid::ScenarioConfig cfg = evgrid::ScenarioConfig::load(config_path);
        if (!policy.empty()) cfg.apply_override("policy", policy);
        if (!seed.empty()) cfg.apply_override("seed", seed);
        for (const auto& ov : overrides) {
            const auto [k, v] = split_kv(ov);
            cfg.apply_override(k, v);
        }

        if (!sweep_spec.empty()) {
            const auto [key, list] = split_kv(sweep_spec);
            const auto entries =
                evgrid::run_sweep(cfg, key, split_csv(list), out_dir, jobs, exec);
            for (const auto& e : entries)
                std::cout << key << '=' << e.value
                          << " time_avg_cost=" << evgrid::format_number(e.report.time_avg_cost)
                          << " -> " << e.dir.string() << '\n';
        } else {
            const evgrid::RunReport rep = evgrid::run_experiment(cfg, out_dir, exec);
            std::cout << "slots=" << rep.slots
                      << " time_avg_cost=" << evgrid::format_number(rep.time_avg_cost)
                      << " overload_freq_max=" << evgrid::format_number(rep.overload_freq_max)
                      << " queue_max=" << evgrid::format_number(rep.queue_max) << " -> "
                      << out_dir << '\n';
        }
    } catch (const evgrid::policy_violation& e) {
        std::cerr << "policy bug: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
