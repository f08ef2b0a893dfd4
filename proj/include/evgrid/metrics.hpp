#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "evgrid/scheduler.hpp"

namespace evgrid {

// Horizon-level aggregates derived from the slot records.
struct RunReport {
    long slots = 0;
    double total_cost = 0.0;
    double time_avg_cost = 0.0;
    std::vector<long> overload_count;  // per node
    std::vector<double> overload_freq; // per node
    double overload_freq_max = 0.0;
    long wait_count = 0;
    double wait_mean = 0.0; // slots per kWh
    double wait_p50 = 0.0;
    double wait_p95 = 0.0;
    double wait_max = 0.0;
    int censored_services = 0;
    std::vector<double> battery_tail_mean; // per station, tail window
    double queue_max = 0.0;
    double mean_queue_total = 0.0;
    double running_avg_queue_peak = 0.0; // stability diagnostic
    double dual_converged_frac = 1.0;
    double dual_mean_iterations = 0.0;
    double lambda_peak = 0.0;
    long arrivals = 0;
    long admitted = 0;
    long blocked = 0;
    double audit_residual_max = 0.0;
};

// Echoed run identity for the summary file.
struct RunMeta {
    std::string policy;
    std::uint64_t seed = 0;
    int slot_minutes = 0;
    double v = 0.0;
    double epsilon = 0.0;
    int stations = 0;
    int nodes = 0;
    int entry_points = 0;
};

// tail_frac is the fraction of trailing slots used for the battery means.
RunReport aggregate(const RunResult& result, const FeederTopology& topo, double tail_frac);

// Per-slot CSV with a fixed column order; formatting is deterministic so
// identical runs produce byte-identical files.
void write_report_csv(const std::filesystem::path& path, const RunResult& result);

// Key-value summary, fixed line order.
void write_summary(const std::filesystem::path& path, const RunReport& report,
                   const RunMeta& meta);

// Deterministic float formatting shared by the writers.
std::string format_number(double value);

} // namespace evgrid
