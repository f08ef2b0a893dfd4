#include <doctest.h>

#include <algorithm>
#include <vector>

#include "evgrid/model.hpp"
#include "evgrid/rng.hpp"
#include "helpers.hpp"

using namespace evgrid;

TEST_CASE("step_queue clips at zero when the rate overshoots the backlog") {
    CHECK(step_queue(10.0, 20.0, 0.0) == 0.0);
}

TEST_CASE("step_queue admits an arrival into an empty outlet") {
    CHECK(step_queue(0.0, 20.0, 30.0) == 10.0);
}

TEST_CASE("step_queue identity on an idle empty outlet") {
    CHECK(step_queue(0.0, 0.0, 0.0) == 0.0);
}

TEST_CASE("step_queue rejects admission into a busy outlet") {
    CHECK_THROWS_AS(step_queue(5.0, 0.0, 10.0), policy_violation);
}

TEST_CASE("step_battery discharge with unit efficiency") {
    auto cfg = testutil::station(1, 20.0, 500.0);
    CHECK(step_battery(100.0, 50.0, 30.0, 10.0, 0.0, cfg) == 90.0);
}

TEST_CASE("step_battery discharge losses scale the battery share") {
    auto cfg = testutil::station(1, 20.0, 500.0);
    cfg.eta_discharge = 1.2;
    CHECK(step_battery(100.0, 50.0, 30.0, 10.0, 0.0, cfg) == 88.0);
}

TEST_CASE("step_battery pure charging applies the charge efficiency") {
    auto cfg = testutil::station(1, 20.0, 500.0);
    cfg.eta_charge = 0.9;
    CHECK(step_battery(100.0, 0.0, 40.0, 0.0, 40.0, cfg) == 136.0);
}

TEST_CASE("step_battery signals discharge beyond the stored level") {
    auto cfg = testutil::station(1, 20.0, 500.0);
    CHECK_THROWS_AS(step_battery(5.0, 50.0, 30.0, 0.0, 0.0, cfg), policy_violation);
}

TEST_CASE("step_battery signals grid draw beyond the demand gap") {
    auto cfg = testutil::station(1, 20.0, 500.0);
    CHECK_THROWS_AS(step_battery(100.0, 50.0, 30.0, 25.0, 0.0, cfg), policy_violation);
}

TEST_CASE("step_battery signals charging beyond capacity") {
    auto cfg = testutil::station(1, 20.0, 100.0);
    CHECK_THROWS_AS(step_battery(90.0, 0.0, 40.0, 0.0, 40.0, cfg), policy_violation);
}

TEST_CASE("shifted_level substitution") {
    auto cfg = testutil::station(3, 20.0, 500.0);
    CHECK(shifted_level(500.0, cfg, 400.0) == 40.0);
    CHECK(shifted_level(0.0, cfg, 400.0) == -460.0);
    CHECK(shifted_level(400.0 + 1.0 * 3 * 20.0, cfg, 400.0) == 0.0);
}

TEST_CASE("shifted_level shifts the battery level by a constant offset") {
    auto cfg = testutil::station(3, 20.0, 500.0);
    cfg.eta_discharge = 1.25;
    Rng rng(7);
    for (int n = 0; n < 1000; ++n) {
        const double b1 = rng.uniform(0.0, 500.0);
        const double b2 = rng.uniform(0.0, 500.0);
        const double t_max = rng.uniform(0.0, 300.0);
        // affine up to rounding of the two subtractions
        CHECK(shifted_level(b2, cfg, t_max) - shifted_level(b1, cfg, t_max) ==
              doctest::Approx(b2 - b1).epsilon(1e-12).scale(1000.0));
        CHECK(shifted_level(b1, cfg, t_max) ==
              b1 - t_max - cfg.eta_discharge * 3 * 20.0);
    }
}

TEST_CASE("delivered_energy caps the rate by remaining demand") {
    CHECK(delivered_energy(10.0, 0.0, 20.0) == 10.0);
    CHECK(delivered_energy(0.0, 30.0, 20.0) == 20.0);
    CHECK(delivered_energy(0.0, 0.0, 20.0) == 0.0);
    CHECK(delivered_energy(25.0, 0.0, 20.0) == 20.0);
}

TEST_CASE("queue trajectories stay below e_max under gated admission") {
    // admission only into empty queues and arrivals bounded by e_max keep
    // every backlog below e_max at every slot
    const double e_max = 30.0;
    const double r_max = 20.0;
    Rng rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        double q = 0.0;
        for (int t = 0; t < 2000; ++t) {
            const double arrival =
                q == 0.0 && rng.bernoulli(0.7) ? rng.uniform(0.0, e_max) : 0.0;
            const double rate = rng.bernoulli(0.5) ? r_max : 0.0;
            q = step_queue(q, rate, arrival);
            CHECK(q >= 0.0);
            CHECK(q <= e_max);
        }
    }
}

TEST_CASE("battery stays in its box under feasible random decisions") {
    auto cfg = testutil::station(2, 20.0, 200.0, 100.0, 50.0);
    cfg.eta_charge = 0.9;
    cfg.eta_discharge = 1.1;
    Rng rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        double b = 100.0;
        for (int t = 0; t < 5000; ++t) {
            const double outlet_sum = rng.uniform(0.0, 40.0);
            const double renewable = rng.uniform(0.0, 60.0);
            const double gap = std::max(0.0, outlet_sum - renewable);
            // feasible draw: cover at least the part the battery cannot
            const double need = std::max(0.0, gap - b / cfg.eta_discharge);
            const double draw = need + rng.uniform(0.0, 1.0) * (gap - need);
            const double surplus = std::max(0.0, renewable - outlet_sum);
            const double room = (cfg.battery_capacity - b) / cfg.eta_charge;
            const double charge =
                std::min({cfg.battery_charge_max, surplus, room}) * rng.uniform();
            b = step_battery(b, outlet_sum, renewable, draw, charge, cfg);
            CHECK(b >= 0.0);
            CHECK(b <= cfg.battery_capacity);
        }
    }
}
