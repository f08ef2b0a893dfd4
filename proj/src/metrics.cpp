#include "evgrid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace evgrid {

std::string format_number(double value) {
    if (value == 0.0) value = 0.0; // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

namespace {

double percentile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double w = pos - static_cast<double>(lo);
    return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

} // namespace

RunReport aggregate(const RunResult& result, const FeederTopology& topo, double tail_frac) {
    RunReport rep;
    const auto& recs = result.records;
    rep.slots = static_cast<long>(recs.size());
    rep.overload_count.assign(static_cast<std::size_t>(topo.node_count()), 0);
    rep.overload_freq.assign(static_cast<std::size_t>(topo.node_count()), 0.0);
    rep.battery_tail_mean.assign(recs.empty() ? 0 : recs.front().battery.size(), 0.0);
    rep.censored_services = result.censored_services;
    if (recs.empty()) return rep;

    double queue_sum = 0.0;
    double running_sum = 0.0;
    long iter_sum = 0;
    long converged = 0;
    for (const auto& r : recs) {
        rep.total_cost += r.cost;
        queue_sum += r.queue_total;
        running_sum += r.queue_total;
        rep.running_avg_queue_peak =
            std::max(rep.running_avg_queue_peak,
                     running_sum / static_cast<double>(r.slot + 1));
        rep.queue_max = std::max(rep.queue_max, r.queue_max);
        rep.lambda_peak = std::max(rep.lambda_peak, r.lambda_peak);
        rep.audit_residual_max = std::max(rep.audit_residual_max, r.audit_residual);
        rep.arrivals += r.arrivals;
        rep.admitted += r.admitted;
        rep.blocked += r.blocked;
        iter_sum += r.dual_iterations;
        converged += r.dual_converged ? 1 : 0;
        for (std::size_t l = 0; l < rep.overload_count.size(); ++l)
            if (r.node_draw[l] + r.node_load[l] >
                topo.capacity[l] * (1.0 + 1e-12) + 1e-9)
                ++rep.overload_count[l];
    }
    const auto n = static_cast<double>(recs.size());
    rep.time_avg_cost = rep.total_cost / n;
    rep.mean_queue_total = queue_sum / n;
    rep.dual_mean_iterations = static_cast<double>(iter_sum) / n;
    rep.dual_converged_frac = static_cast<double>(converged) / n;
    for (std::size_t l = 0; l < rep.overload_count.size(); ++l) {
        rep.overload_freq[l] = static_cast<double>(rep.overload_count[l]) / n;
        rep.overload_freq_max = std::max(rep.overload_freq_max, rep.overload_freq[l]);
    }

    const auto tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(tail_frac * n)));
    const std::size_t start = recs.size() - std::min(tail, recs.size());
    for (std::size_t t = start; t < recs.size(); ++t)
        for (std::size_t i = 0; i < rep.battery_tail_mean.size(); ++i)
            rep.battery_tail_mean[i] += recs[t].battery[i];
    for (double& b : rep.battery_tail_mean)
        b /= static_cast<double>(recs.size() - start);

    std::vector<double> waits = result.wait_samples;
    std::sort(waits.begin(), waits.end());
    rep.wait_count = static_cast<long>(waits.size());
    if (!waits.empty()) {
        double sum = 0.0;
        for (double w : waits) sum += w;
        rep.wait_mean = sum / static_cast<double>(waits.size());
        rep.wait_p50 = percentile(waits, 0.50);
        rep.wait_p95 = percentile(waits, 0.95);
        rep.wait_max = waits.back();
    }
    return rep;
}

void write_report_csv(const std::filesystem::path& path, const RunResult& result) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path.string());
    out << "slot,price,cost,grid_draw,delivered,renewable_direct,renewable_stored,"
           "battery_discharge,battery_total,queue_total,queue_max,arrivals,admitted,"
           "blocked,completions,dual_iterations,dual_converged,dual_gap,"
           "overloaded_nodes,lambda_peak\n";
    for (const auto& r : result.records) {
        out << r.slot << ',' << format_number(r.price) << ',' << format_number(r.cost)
            << ',' << format_number(r.grid_draw) << ',' << format_number(r.delivered)
            << ',' << format_number(r.renewable_direct) << ','
            << format_number(r.renewable_stored) << ','
            << format_number(r.battery_discharge) << ',' << format_number(r.battery_total)
            << ',' << format_number(r.queue_total) << ',' << format_number(r.queue_max)
            << ',' << r.arrivals << ',' << r.admitted << ',' << r.blocked << ','
            << r.completions << ',' << r.dual_iterations << ','
            << (r.dual_converged ? 1 : 0) << ',' << format_number(r.dual_gap) << ','
            << r.overloaded_nodes << ',' << format_number(r.lambda_peak) << '\n';
    }
}

void write_summary(const std::filesystem::path& path, const RunReport& report,
                   const RunMeta& meta) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path.string());
    out << "policy " << meta.policy << '\n';
    out << "seed " << meta.seed << '\n';
    out << "stations " << meta.stations << '\n';
    out << "nodes " << meta.nodes << '\n';
    out << "entry_points " << meta.entry_points << '\n';
    out << "slot_minutes " << meta.slot_minutes << '\n';
    out << "V " << format_number(meta.v) << '\n';
    out << "epsilon " << format_number(meta.epsilon) << '\n';
    out << "slots " << report.slots << '\n';
    out << "total_cost " << format_number(report.total_cost) << '\n';
    out << "time_avg_cost " << format_number(report.time_avg_cost) << '\n';
    out << "overload_freq_max " << format_number(report.overload_freq_max) << '\n';
    out << "arrivals " << report.arrivals << '\n';
    out << "admitted " << report.admitted << '\n';
    out << "blocked " << report.blocked << '\n';
    out << "services_completed " << report.wait_count << '\n';
    out << "services_censored " << report.censored_services << '\n';
    out << "wait_mean_slots_per_kwh " << format_number(report.wait_mean) << '\n';
    out << "wait_p50 " << format_number(report.wait_p50) << '\n';
    out << "wait_p95 " << format_number(report.wait_p95) << '\n';
    out << "wait_max " << format_number(report.wait_max) << '\n';
    out << "queue_max " << format_number(report.queue_max) << '\n';
    out << "mean_queue_total " << format_number(report.mean_queue_total) << '\n';
    out << "running_avg_queue_peak " << format_number(report.running_avg_queue_peak)
        << '\n';
    out << "dual_converged_frac " << format_number(report.dual_converged_frac) << '\n';
    out << "dual_mean_iterations " << format_number(report.dual_mean_iterations) << '\n';
    out << "lambda_peak " << format_number(report.lambda_peak) << '\n';
    out << "audit_residual_max " << format_number(report.audit_residual_max) << '\n';
    out << "battery_tail_mean";
    for (double b : report.battery_tail_mean) out << ' ' << format_number(b);
    out << '\n';
    out << "overload_freq";
    for (double f : report.overload_freq) out << ' ' << format_number(f);
    out << '\n';
}

} // namespace evgrid
