#include <doctest.h>

#include <cmath>

#include "evgrid/bounds.hpp"
#include "evgrid/rng.hpp"
#include "helpers.hpp"

using namespace evgrid;

namespace {

// 18 identical stations on a 19-node feeder, matching the default scenario
FeederTopology feeder19(int stations = 18) {
    FeederTopology topo;
    topo.capacity.assign(19, 800.0);
    topo.load_mean.assign(19, 200.0);
    topo.load_std.assign(19, 100.0);
    for (int i = 0; i < stations; ++i) topo.feeders.push_back({0, (i % 18) + 1});
    return topo;
}

} // namespace

TEST_CASE("constants at the default scale") {
    const auto fleet = testutil::fleet_of(18, testutil::station(3, 20.0, 500.0, 225.0, 20.0));
    const auto topo = feeder19();
    const auto env = testutil::env_bounds(30.0, 225.0, 0.02, 0.2);
    const auto c = compute_constants(fleet, topo, env, 1.0, 500.0);

    CHECK(c.alpha_max == 0.5 * 20.0 * 20.0 + 0.5 * 30.0 * 30.0); // 650
    CHECK(c.alpha_max == 650.0);
    CHECK(c.beta_max == 25312.5);   // half of max{225^2, 60^2}
    CHECK(c.delta_max == 490725.0); // 18*3*650 + 18*25312.5
    CHECK(c.v_max == doctest::Approx((500.0 - 225.0 - 60.0 - 19.0) / 0.2).epsilon(1e-12));
    CHECK(c.v_max == doctest::Approx(980.0).epsilon(1e-12));
    CHECK(c.t_max == 500.0 * 0.2 + 19.0 * 1.0); // 119
    CHECK(c.lambda_max == 1.0);
    CHECK(c.v == 500.0);
}

TEST_CASE("constants reject an out-of-range tradeoff weight") {
    const auto fleet = testutil::fleet_of(18, testutil::station());
    const auto topo = feeder19();
    const auto env = testutil::env_bounds();
    CHECK_THROWS_AS(compute_constants(fleet, topo, env, 1.0, 0.0), config_error);
    CHECK_THROWS_AS(compute_constants(fleet, topo, env, 1.0, -5.0), config_error);
    CHECK_THROWS_AS(compute_constants(fleet, topo, env, 1.0, 981.0), config_error);
    CHECK_NOTHROW(compute_constants(fleet, topo, env, 1.0, 980.0));
}

TEST_CASE("constants signal batteries too small for the multiplier ceiling") {
    // reserve = eta+*u_max + eta-*J*r + L*lambda_max = 225 + 60 + 19 = 304
    auto small = testutil::station();
    small.battery_capacity = 300.0;
    const auto fleet = testutil::fleet_of(18, small);
    const auto topo = feeder19();
    const auto env = testutil::env_bounds();
    CHECK_THROWS_AS(compute_constants(fleet, topo, env, 1.0, 1.0), config_error);
    // shrinking the ceiling restores a positive admissible range
    CHECK_NOTHROW(compute_constants(fleet, topo, env, 0.1, 1.0));
}

TEST_CASE("doubling the rate and energy bounds quadruples the drift constants") {
    const auto fleet1 = testutil::fleet_of(4, testutil::station(3, 20.0, 500.0, 225.0, 20.0));
    const auto fleet2 = testutil::fleet_of(4, testutil::station(3, 40.0, 2000.0, 450.0, 40.0));
    const auto topo = feeder19(4);
    const auto env1 = testutil::env_bounds(30.0, 225.0, 0.02, 0.2);
    const auto env2 = testutil::env_bounds(60.0, 450.0, 0.02, 0.2);
    const auto a = compute_constants(fleet1, topo, env1, 0.1, 1.0);
    const auto b = compute_constants(fleet2, topo, env2, 0.1, 1.0);
    CHECK(b.alpha_max == 4.0 * a.alpha_max);
    CHECK(b.beta_max == 4.0 * a.beta_max);
    CHECK(b.delta_max == 4.0 * a.delta_max);
}

TEST_CASE("node headroom at the published working point") {
    FeederTopology topo;
    topo.capacity = {800.0};
    topo.load_mean = {200.0};
    topo.load_std = {100.0};
    topo.feeders = {{0}};
    const double h = node_headroom(topo, 0.05, 0);
    CHECK(h == doctest::Approx(283.7722).epsilon(1e-6));
    CHECK(h == 800.0 - 200.0 - 100.0 / std::sqrt(2.0 * 0.05));
}

TEST_CASE("node headroom degenerate cases") {
    FeederTopology topo;
    topo.capacity = {800.0};
    topo.load_mean = {200.0};
    topo.load_std = {0.0};
    topo.feeders = {{0}};
    CHECK(node_headroom(topo, 0.05, 0) == 600.0); // deterministic load

    topo.load_std = {100.0};
    CHECK(node_headroom(topo, 0.5, 0) == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("node headroom can be negative and epsilon is validated") {
    FeederTopology topo;
    topo.capacity = {300.0};
    topo.load_mean = {200.0};
    topo.load_std = {100.0};
    topo.feeders = {{0}};
    CHECK(node_headroom(topo, 0.05, 0) < 0.0);
    CHECK_THROWS_AS(node_headroom(topo, 0.0, 0), config_error);
    CHECK_THROWS_AS(node_headroom(topo, 1.0, 0), config_error);
}

TEST_CASE("headroom is monotone in epsilon and in the load spread") {
    Rng rng(3);
    for (int n = 0; n < 500; ++n) {
        FeederTopology topo;
        topo.capacity = {rng.uniform(100.0, 2000.0)};
        topo.load_mean = {rng.uniform(0.0, 500.0)};
        topo.load_std = {rng.uniform(0.0, 300.0)};
        topo.feeders = {{0}};
        const double e1 = rng.uniform(0.01, 0.99);
        const double e2 = rng.uniform(0.01, 0.99);
        const double lo = std::min(e1, e2), hi = std::max(e1, e2);
        CHECK(node_headroom(topo, lo, 0) <= node_headroom(topo, hi, 0));

        FeederTopology wider = topo;
        wider.load_std[0] = topo.load_std[0] + rng.uniform(0.0, 100.0);
        CHECK(node_headroom(wider, lo, 0) <= node_headroom(topo, lo, 0));
    }
}
