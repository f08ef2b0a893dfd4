#include "evgrid/dual_solver.hpp"

#include <algorithm>
#include <cmath>

namespace evgrid {

double station_subproblem(double shifted, double price, double v, double lambda_sum,
                          double demand_gap, const StationConfig& cfg) {
    const double box = std::min(demand_gap, cfg.grid_draw_max);
    if (box <= 0.0) return 0.0;
    const double coefficient = shifted * cfg.eta_discharge + v * price + lambda_sum;
    return coefficient < 0.0 ? box : 0.0; // tie prefers battery/renewable
}

double update_multiplier(double lambda, double step, double headroom, double draw_sum) {
    return std::max(0.0, lambda - step * (headroom - draw_sum));
}

void repair_node_caps(std::vector<double>& draws, const FeederTopology& topo,
                      std::span<const double> headroom) {
    const auto rows = topo.stations_by_node();
    for (int l = 0; l < topo.node_count(); ++l) {
        const double cap = std::max(0.0, headroom[static_cast<std::size_t>(l)]);
        double sum = 0.0;
        for (int i : rows[static_cast<std::size_t>(l)]) sum += draws[static_cast<std::size_t>(i)];
        if (sum <= cap) continue;
        const double factor = sum > 0.0 ? cap / sum : 0.0;
        for (int i : rows[static_cast<std::size_t>(l)]) draws[static_cast<std::size_t>(i)] *= factor;
    }
}

namespace {

// Objective of the relaxed problem at the current draws and prices.
double dual_value(const std::vector<double>& draws, const std::vector<double>& coef0,
                  const std::vector<double>& lambda, const std::vector<double>& node_sum,
                  std::span<const double> headroom) {
    double phi = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) phi += draws[i] * coef0[i];
    for (std::size_t l = 0; l < lambda.size(); ++l)
        phi += lambda[l] * (node_sum[l] - headroom[l]);
    return phi;
}

} // namespace

GridDrawResult solve_grid_draws(const StationFleet& fleet, const FeederTopology& topo,
                                std::span<const double> shifted,
                                std::span<const double> demand_gap, double price, double v,
                                std::span<const double> headroom, const DualConfig& cfg,
                                ExecMode exec) {
    const int stations = fleet.size();
    const int nodes = topo.node_count();

    GridDrawResult res;
    res.draws.assign(static_cast<std::size_t>(stations), 0.0);
    res.multipliers.assign(static_cast<std::size_t>(nodes), cfg.lambda_init);

    bool any_gap = false;
    for (int i = 0; i < stations; ++i)
        if (demand_gap[static_cast<std::size_t>(i)] > 0.0) any_gap = true;
    if (!any_gap) {
        res.iterations = 1;
        res.converged = true;
        return res;
    }

    // price-independent part of each station's coefficient
    std::vector<double> coef0(static_cast<std::size_t>(stations));
    for (int i = 0; i < stations; ++i)
        coef0[static_cast<std::size_t>(i)] =
            shifted[static_cast<std::size_t>(i)] *
                fleet.stations[static_cast<std::size_t>(i)].eta_discharge +
            v * price;

    const auto rows = topo.stations_by_node();
    std::vector<double> node_sum(static_cast<std::size_t>(nodes), 0.0);

    auto solve_stations = [&] {
        for_each_station(exec, stations, [&](int i) {
            double lambda_sum = 0.0;
            for (int l : topo.feeders[static_cast<std::size_t>(i)])
                lambda_sum += res.multipliers[static_cast<std::size_t>(l)];
            res.draws[static_cast<std::size_t>(i)] = station_subproblem(
                shifted[static_cast<std::size_t>(i)], price, v, lambda_sum,
                demand_gap[static_cast<std::size_t>(i)],
                fleet.stations[static_cast<std::size_t>(i)]);
        });
        // node totals reduced serially in fixed order
        for (int l = 0; l < nodes; ++l) {
            double s = 0.0;
            for (int i : rows[static_cast<std::size_t>(l)])
                s += res.draws[static_cast<std::size_t>(i)];
            node_sum[static_cast<std::size_t>(l)] = s;
        }
    };

    const auto primal_of = [&](const std::vector<double>& d) {
        double p = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) p += d[i] * coef0[i];
        return p;
    };

    solve_stations();
    double phi_prev = dual_value(res.draws, coef0, res.multipliers, node_sum, headroom);
    res.dual_best = phi_prev;
    res.iterations = 1;
    std::vector<double> best_multipliers = res.multipliers;
    std::vector<double> repaired = res.draws;
    repair_node_caps(repaired, topo, headroom);
    std::vector<double> best_draws = repaired;
    double best_primal = primal_of(repaired);

    while (res.iterations < cfg.max_iters) {
        for (int l = 0; l < nodes; ++l)
            res.multipliers[static_cast<std::size_t>(l)] = update_multiplier(
                res.multipliers[static_cast<std::size_t>(l)], cfg.step,
                headroom[static_cast<std::size_t>(l)], node_sum[static_cast<std::size_t>(l)]);
        solve_stations();
        const double phi = dual_value(res.draws, coef0, res.multipliers, node_sum, headroom);
        if (phi > res.dual_best) {
            res.dual_best = phi;
            best_multipliers = res.multipliers;
        }
        repaired = res.draws;
        repair_node_caps(repaired, topo, headroom);
        const double primal = primal_of(repaired);
        if (primal < best_primal) {
            best_primal = primal;
            best_draws = repaired;
        }
        ++res.iterations;
        if (std::fabs(phi - phi_prev) < cfg.tol) {
            res.converged = true;
            break;
        }
        phi_prev = phi;
    }

    if (res.converged) {
        repair_node_caps(res.draws, topo, headroom);
        res.gap_estimate = primal_of(res.draws) - res.dual_best;
    } else {
        // budget exhausted: hand back the cheapest repaired point found
        // (the draws of a near-optimal price can sit on the wrong side of
        // the bang-bang flip) plus the prices of the best dual iterate
        res.draws = std::move(best_draws);
        res.multipliers = std::move(best_multipliers);
        res.gap_estimate = best_primal - res.dual_best;
    }
    return res;
}

GridDrawResult solve_grid_draws_reference(const StationFleet& fleet,
                                          const FeederTopology& topo,
                                          std::span<const double> shifted,
                                          std::span<const double> demand_gap, double price,
                                          double v, std::span<const double> headroom,
                                          const DualConfig& cfg) {
    const std::size_t stations = static_cast<std::size_t>(fleet.size());
    const std::size_t nodes = static_cast<std::size_t>(topo.node_count());

    GridDrawResult res;
    res.draws.assign(stations, 0.0);
    res.multipliers.assign(nodes, cfg.lambda_init);

    bool any_gap = false;
    for (std::size_t i = 0; i < stations; ++i)
        if (demand_gap[i] > 0.0) any_gap = true;
    if (!any_gap) {
        res.iterations = 1;
        res.converged = true;
        return res;
    }

    double phi_prev = 0.0;
    double best_primal = 0.0;
    std::vector<double> best_draws;
    std::vector<double> best_multipliers;
    for (int n = 0;; ++n) {
        if (n > 0) {
            // projected subgradient step on every node price
            for (std::size_t l = 0; l < nodes; ++l) {
                double s = 0.0;
                for (std::size_t i = 0; i < stations; ++i)
                    for (int fl : topo.feeders[i])
                        if (static_cast<std::size_t>(fl) == l) s += res.draws[i];
                res.multipliers[l] =
                    update_multiplier(res.multipliers[l], cfg.step, headroom[l], s);
            }
        }
        for (std::size_t i = 0; i < stations; ++i) {
            double lambda_sum = 0.0;
            for (int l : topo.feeders[i])
                lambda_sum += res.multipliers[static_cast<std::size_t>(l)];
            res.draws[i] = station_subproblem(shifted[i], price, v, lambda_sum,
                                              demand_gap[i], fleet.stations[i]);
        }
        double phi = 0.0;
        for (std::size_t i = 0; i < stations; ++i)
            phi += res.draws[i] *
                   (shifted[i] * fleet.stations[i].eta_discharge + v * price);
        for (std::size_t l = 0; l < nodes; ++l) {
            double s = 0.0;
            for (std::size_t i = 0; i < stations; ++i)
                for (int fl : topo.feeders[i])
                    if (static_cast<std::size_t>(fl) == l) s += res.draws[i];
            phi += res.multipliers[l] * (s - headroom[l]);
        }
        if (n == 0 || phi > res.dual_best) {
            res.dual_best = phi;
            best_multipliers = res.multipliers;
        }
        std::vector<double> repaired = res.draws;
        repair_node_caps(repaired, topo, headroom);
        double primal = 0.0;
        for (std::size_t i = 0; i < stations; ++i)
            primal +=
                repaired[i] * (shifted[i] * fleet.stations[i].eta_discharge + v * price);
        if (n == 0 || primal < best_primal) {
            best_primal = primal;
            best_draws = repaired;
        }
        res.iterations = n + 1;
        if (n > 0 && std::fabs(phi - phi_prev) < cfg.tol) {
            res.converged = true;
            break;
        }
        phi_prev = phi;
        if (res.iterations >= cfg.max_iters) break;
    }

    if (res.converged) {
        repair_node_caps(res.draws, topo, headroom);
        double primal = 0.0;
        for (std::size_t i = 0; i < stations; ++i)
            primal +=
                res.draws[i] * (shifted[i] * fleet.stations[i].eta_discharge + v * price);
        res.gap_estimate = primal - res.dual_best;
    } else {
        res.draws = best_draws;
        res.multipliers = best_multipliers;
        res.gap_estimate = best_primal - res.dual_best;
    }
    return res;
}

} // namespace evgrid
