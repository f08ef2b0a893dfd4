#include <doctest.h>

#include <algorithm>

#include "evgrid/bounds.hpp"
#include "evgrid/model.hpp"
#include "evgrid/rng.hpp"
#include "evgrid/station_control.hpp"
#include "helpers.hpp"

using namespace evgrid;

TEST_CASE("outlet switches fully on when backlog outweighs the battery deficit") {
    const auto cfg = testutil::station(1, 20.0, 500.0);
    CHECK(outlet_rate(10.0, 0.0, -5.0, cfg) == 20.0); // coefficient 5 > 0
}

TEST_CASE("outlet stays off when the battery deficit dominates") {
    const auto cfg = testutil::station(1, 20.0, 500.0);
    CHECK(outlet_rate(2.0, 0.0, -100.0, cfg) == 0.0); // coefficient -98
}

TEST_CASE("outlet with nothing to serve stays off") {
    const auto cfg = testutil::station(1, 20.0, 500.0);
    CHECK(outlet_rate(0.0, 0.0, 0.0, cfg) == 0.0);
    CHECK(outlet_rate(0.0, 0.0, 1000.0, cfg) == 0.0); // no idle charging
}

TEST_CASE("admitted arrival drives the coefficient on an empty outlet") {
    const auto cfg = testutil::station(1, 20.0, 500.0);
    CHECK(outlet_rate(0.0, 30.0, -5.0, cfg) == 20.0);
    CHECK(outlet_rate(0.0, 30.0, -31.0, cfg) == 0.0); // coefficient -1
}

TEST_CASE("zero coefficient conserves the battery") {
    const auto cfg = testutil::station(1, 20.0, 500.0);
    CHECK(outlet_rate(10.0, 0.0, -10.0, cfg) == 0.0);
}

TEST_CASE("rate decisions are bang-bang") {
    auto cfg = testutil::station(1, 20.0, 500.0);
    cfg.eta_discharge = 1.3;
    Rng rng(5);
    for (int n = 0; n < 2000; ++n) {
        const bool empty = rng.bernoulli(0.5);
        const double q = empty ? 0.0 : rng.uniform(0.0, 30.0);
        const double arrival = empty && rng.bernoulli(0.5) ? rng.uniform(0.0, 30.0) : 0.0;
        const double r = outlet_rate(q, arrival, rng.uniform(-300.0, 300.0), cfg);
        CHECK((r == 0.0 || r == cfg.outlet_rate_max));
    }
}

TEST_CASE("thirsty battery absorbs the renewable surplus") {
    auto cfg = testutil::station(3, 20.0, 500.0, 225.0);
    CHECK(renewable_input(-460.0, 225.0, 60.0, cfg) == 165.0);
}

TEST_CASE("saturated battery refuses renewable") {
    const auto cfg = testutil::station(3, 20.0, 500.0, 225.0);
    CHECK(renewable_input(40.0, 225.0, 0.0, cfg) == 0.0);
    CHECK(renewable_input(1e-9, 10.0, 0.0, cfg) == 0.0); // h > 0 branch is strict
}

TEST_CASE("no surplus means no battery charging") {
    const auto cfg = testutil::station(3, 20.0, 500.0, 225.0);
    CHECK(renewable_input(-10.0, 50.0, 60.0, cfg) == 0.0);
}

TEST_CASE("battery input never exceeds the surplus or the charge cap") {
    auto cfg = testutil::station(3, 20.0, 500.0, 80.0);
    Rng rng(17);
    for (int n = 0; n < 2000; ++n) {
        const double u = rng.uniform(0.0, 225.0);
        const double sum = rng.uniform(0.0, 60.0);
        const double h = rng.uniform(-500.0, 500.0);
        const double r = renewable_input(h, u, sum, cfg);
        CHECK(r >= 0.0);
        CHECK(r <= std::max(0.0, u - sum));
        CHECK(r <= cfg.battery_charge_max);
    }
}

TEST_CASE("a nearly full battery never charges under an admissible weight") {
    // battery above capacity minus the absorbable renewable implies a
    // positive shifted level, hence zero renewable input
    const auto fleet = testutil::fleet_of(1, testutil::station(3, 20.0, 500.0, 225.0, 20.0));
    const auto topo = testutil::single_node(1, 1000.0, 0.0, 0.0);
    const auto env = testutil::env_bounds(30.0, 225.0, 0.02, 0.2);
    const auto& cfg = fleet.stations[0];
    Rng rng(29);
    for (int n = 0; n < 500; ++n) {
        const double probe = compute_constants(fleet, topo, env, 1.0, 1.0).v_max;
        const double v = rng.uniform(probe * 1e-6, probe);
        const auto c = compute_constants(fleet, topo, env, 1.0, v);
        const double b =
            rng.uniform(cfg.battery_capacity - cfg.eta_charge * env.u_max,
                        cfg.battery_capacity);
        const double h = shifted_level(b, cfg, c.t_max);
        CHECK(h > 0.0);
        CHECK(renewable_input(h, rng.uniform(0.0, env.u_max), 0.0, cfg) == 0.0);
    }
}
