#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "occulp/dp.hpp"
#include "oracles.hpp"

using namespace occulp;

namespace {

DiscretizedSystem drift_well() {
    SystemModel model = make_system("drift");
    model.cost = make_cost("well").fn;
    return build(model, {{0.0}, {10.0}, {10}});
}

}   // namespace

TEST_CASE("value iteration solves the drift example in closed form") {
    DiscretizedSystem dsys = drift_well();
    ValueFunction vf = value_iteration(dsys, 0.9, 1e-10);
    CHECK(vf.kind == ValueFunction::Kind::Discounted);
    CHECK(vf.sweeps > 0);
    CHECK(vf.residual <= 1e-10);
    REQUIRE(vf.values.size() == 12);

    // optimal: walk to the well at y=2, then stay forever at cost 0
    CHECK(vf.values[2] == 0.0);
    CHECK(vf.values[1] == doctest::Approx(0.1 * 0.5).epsilon(1e-8));
    CHECK(vf.values[0] == doctest::Approx(0.1 * 0.8 + 0.9 * 0.05).epsilon(1e-8));
    // right of the well the drift cannot return, so staying put is optimal
    for (int s = 3; s <= 10; ++s) {
        double stay = dsys.pairs[dsys.find_pair(s, 0)].cost;
        CHECK(vf.values[s] == doctest::Approx(stay).epsilon(1e-7));
    }
}

TEST_CASE("value iteration agrees with exhaustive policy enumeration") {
    for (unsigned seed : {1u, 2u, 3u}) {
        DiscretizedSystem dsys = oracle::random_system(seed, 5, 2);
        for (double alpha : {0.5, 0.9}) {
            ValueFunction vf = value_iteration(dsys, alpha, 1e-10);
            for (int y0 = 0; y0 < 5; ++y0) {
                CHECK(vf.values[y0] ==
                      doctest::Approx(oracle::best_policy_value(dsys, y0, alpha))
                          .epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("value iteration reports nonconvergence inside the sweep cap") {
    DiscretizedSystem dsys = drift_well();
    CHECK_THROWS_AS(value_iteration(dsys, 0.999999, 1e-8), std::runtime_error);
    CHECK_THROWS_AS(value_iteration(dsys, 1.2, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(value_iteration(dsys, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("greedy policy recovers the walk-to-the-well strategy") {
    DiscretizedSystem dsys = drift_well();
    ValueFunction vf = value_iteration(dsys, 0.9, 1e-10);
    DiscretePolicy policy = greedy_policy(dsys, vf);
    REQUIRE(policy.size() == 12);
    CHECK(policy[0] == 1);
    CHECK(policy[1] == 1);
    CHECK(policy[2] == 0);
    for (int s = 3; s <= 10; ++s) CHECK(policy[s] == 0);
}

TEST_CASE("finite horizon averages the optimal S-step cost") {
    DiscretizedSystem dsys = drift_well();
    FiniteHorizonValue fh = finite_horizon(dsys, 5);
    CHECK(fh.vf.kind == ValueFunction::Kind::FiniteHorizon);
    CHECK(fh.vf.horizon == 5);
    // from y=0: costs 0.8 + 0.5 + 0 + 0 + 0 over five steps, averaged
    CHECK(fh.vf.values[0] == doctest::Approx(0.26).epsilon(1e-15));
    CHECK(fh.vf.values[2] == 0.0);

    std::vector<int> seq = fh.optimal_sequence(dsys, 0);
    CHECK(seq == std::vector<int>{1, 1, 0, 0, 0});

    // realized averaged cost equals the recursion value
    OccupationalMeasure mu = averaging_measure_openloop(dsys, 0, seq, 5);
    CHECK(integrate_cost(mu, dsys) == doctest::Approx(fh.vf.values[0]).epsilon(1e-12));

    CHECK_THROWS_AS(finite_horizon(dsys, 0), std::invalid_argument);
}

TEST_CASE("finite horizon consistency holds on random systems") {
    for (unsigned seed : {11u, 12u}) {
        DiscretizedSystem dsys = oracle::random_system(seed, 6, 3);
        FiniteHorizonValue fh = finite_horizon(dsys, 9);
        for (int y0 = 0; y0 < 6; ++y0) {
            std::vector<int> seq = fh.optimal_sequence(dsys, y0);
            REQUIRE(seq.size() == 9);
            OccupationalMeasure mu = averaging_measure_openloop(dsys, y0, seq, 9);
            CHECK(integrate_cost(mu, dsys) ==
                  doctest::Approx(fh.vf.values[y0]).epsilon(1e-12));
        }
    }
}

TEST_CASE("min_over_states finds the well and counts ties") {
    DiscretizedSystem dsys = drift_well();
    ValueFunction vf = value_iteration(dsys, 0.9, 1e-10);
    MinResult mr = min_over_states(dsys, vf);
    CHECK(mr.state == 2);
    CHECK(mr.value == 0.0);
    CHECK(mr.tie_count == 1);
}

TEST_CASE("min_over_states can include or exclude the infinity node") {
    SystemModel model = make_system("drift");
    model.cost = make_cost("constant").fn;   // 1 everywhere on the grid
    DiscretizedSystem dsys =
        build(model, {{0.0}, {4.0}, {4}}, CostAtInfRule::explicit_value(0.0));
    ValueFunction vf = value_iteration(dsys, 0.5, 1e-10);

    MinResult grid_only = min_over_states(dsys, vf, true);
    CHECK(grid_only.state == 4);   // escape in one step: 0.5*1 + 0.5*0
    CHECK(grid_only.value == doctest::Approx(0.5).epsilon(1e-9));

    MinResult with_inf = min_over_states(dsys, vf, false);
    CHECK(with_inf.state == dsys.inf_index());
    CHECK(with_inf.value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("ties resolve to the lowest state index") {
    SystemModel fp = make_system("fixed-point");
    fp.cost = make_cost("constant").fn;
    DiscretizedSystem dsys = build(fp, {{0.0}, {3.0}, {3}});
    ValueFunction vf = value_iteration(dsys, 0.5, 1e-10);
    MinResult mr = min_over_states(dsys, vf);
    CHECK(mr.state == 0);
    CHECK(mr.tie_count == 4);   // every grid state costs exactly 1
}

TEST_CASE("check_A1 certifies the bounded drift optimum") {
    DiscretizedSystem dsys = drift_well();
    A1Report report = check_A1(dsys, {0.5, 0.9}, {10, 100}, 1e-9);
    REQUIRE(report.entries.size() == 4);
    CHECK(report.consistent);
    CHECK(report.bounding_radius == 2.0);   // optimal runs settle at the well
    for (const A1Entry& e : report.entries) {
        CHECK_FALSE(e.touches_inf);
        CHECK(e.max_radius == 2.0);
        CHECK(e.init_state == 2);
    }
}

TEST_CASE("check_A1 flags optimal escape to infinity") {
    SystemModel model = make_system("drift");
    model.cost = make_cost("decay").fn;   // cheapest far away
    DiscretizedSystem dsys =
        build(model, {{0.0}, {10.0}, {10}}, CostAtInfRule::explicit_value(0.0));
    A1Report report = check_A1(dsys, {0.9}, {50}, 1e-9);
    CHECK_FALSE(report.consistent);
    bool some_escape = false;
    for (const A1Entry& e : report.entries) some_escape = some_escape || e.touches_inf;
    CHECK(some_escape);
}
