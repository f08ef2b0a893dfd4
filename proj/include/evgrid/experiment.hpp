#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "evgrid/ingest.hpp"
#include "evgrid/metrics.hpp"

namespace evgrid {

// Builds traces, runs the configured policy over the horizon and writes
// report.csv + summary.txt into out_dir. Returns the aggregated report.
RunReport run_experiment(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                         ExecMode exec = ExecMode::serial);

struct SweepEntry {
    std::string value;
    std::filesystem::path dir;
    RunReport report;
};

// One run per value of the swept key, in a worker pool of `jobs` threads.
// Per-run outputs land in out_dir/run_<key>_<value>/; index.txt summarizes
// all runs in sweep order.
std::vector<SweepEntry> run_sweep(const ScenarioConfig& base, const std::string& key,
                                  const std::vector<std::string>& values,
                                  const std::filesystem::path& out_dir, int jobs,
                                  ExecMode exec = ExecMode::serial);

} // namespace evgrid
