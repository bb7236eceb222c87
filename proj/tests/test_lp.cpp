#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "occulp/dp.hpp"
#include "occulp/lp.hpp"
#include "oracles.hpp"

using namespace occulp;

namespace {

DiscretizedSystem drift_well() {
    SystemModel model = make_system("drift");
    model.cost = make_cost("well").fn;
    return build(model, {{0.0}, {10.0}, {10}});
}

bool has_name(const std::vector<std::string>& names, const std::string& wanted) {
    return std::find(names.begin(), names.end(), wanted) != names.end();
}

}   // namespace

TEST_CASE("indicator basis carries one function per grid state") {
    DiscretizedSystem dsys = drift_well();
    TestFunctionBasis basis = indicator_basis(dsys);
    REQUIRE(basis.functions.size() == 11);
    for (size_t i = 0; i < basis.functions.size(); ++i) {
        const TestFunction& f = basis.functions[i];
        CHECK(f.at_inf == 0.0);
        for (size_t s = 0; s < dsys.states.size(); ++s) {
            CHECK(f.values[s] == (s == i ? 1.0 : 0.0));
        }
    }
    CHECK(basis.functions[3].value_at(dsys, dsys.inf_index()) == 0.0);
}

TEST_CASE("smooth basis assembles constants, coordinates and bumps") {
    DiscretizedSystem dsys = drift_well();
    TestFunctionBasis basis = smooth_basis(dsys, 5, 1.0);
    REQUIRE(basis.functions.size() == 7);   // 1 + state_dim + bumps
    CHECK(basis.functions[0].name == "const1");
    CHECK(basis.functions[0].at_inf == 1.0);
    CHECK(basis.functions[1].at_inf == 1.0);
    CHECK(basis.functions[1].values[4] == doctest::Approx(4.0 / 5.0));   // y/(1+|y|)
    for (int j = 0; j < 5; ++j) {
        CHECK(basis.functions[2 + j].name == "bump_" + std::to_string(j));
        CHECK(basis.functions[2 + j].at_inf == 0.0);
    }
    CHECK_THROWS_AS(smooth_basis(dsys, -1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(smooth_basis(dsys, 3, 0.0), std::invalid_argument);

    BasisSpec spec;
    spec.kind = BasisSpec::Kind::Smooth;
    spec.bump_count = 2;
    CHECK(spec.instantiate(dsys).functions.size() == 4);
    CHECK(BasisSpec{}.instantiate(dsys).functions.size() == 11);
}

TEST_CASE("discounted LP reproduces the optimal occupational measure") {
    DiscretizedSystem dsys = drift_well();
    LinearProgram lp = build_discounted_lp(dsys, indicator_basis(dsys), 0.5, 0);
    CHECK(lp.rows.size() == 12);   // 11 indicator rows + normalization
    CHECK(has_name(lp.var_names, "(0,1)"));
    CHECK(has_name(lp.var_names, "(11,0)"));   // infinity pairs are variables here

    LPSolution sol = solve(lp, 1e-9);
    REQUIRE(sol.status == LPSolution::Status::Optimal);
    // walk 0 -> 1 -> 2, then park at the well: value 0.5*0.8 + 0.25*0.5
    CHECK(sol.objective == doctest::Approx(0.525).epsilon(1e-9));
    CHECK(sol.max_residual <= 1e-9);
    CHECK(sol.certificate <= 1e-9);
    CHECK(sol.inf_mass == doctest::Approx(0.0).epsilon(1e-12));

    auto weights = solution_weights(lp, sol, dsys);
    CHECK(weights.at({0, 1}) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(weights.at({1, 1}) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(weights.at({2, 0}) == doctest::Approx(0.25).epsilon(1e-9));

    CHECK_THROWS_AS(build_discounted_lp(dsys, indicator_basis(dsys), 1.5, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_discounted_lp(dsys, indicator_basis(dsys), 0.5, 99),
                    std::invalid_argument);
}

TEST_CASE("discounted LP equals value iteration on random systems") {
    for (unsigned seed : {21u, 22u, 23u}) {
        DiscretizedSystem dsys = oracle::random_system(seed, 6, 2);
        TestFunctionBasis basis = indicator_basis(dsys);
        for (double alpha : {0.5, 0.9}) {
            ValueFunction vf = value_iteration(dsys, alpha, 1e-11);
            LinearProgram lp = build_discounted_lp(dsys, basis, alpha, 0);
            LPSolution sol = solve(lp, 1e-10);
            REQUIRE(sol.status == LPSolution::Status::Optimal);
            CHECK(sol.objective == doctest::Approx(vf.values[0]).epsilon(1e-8));
        }
    }
}

TEST_CASE("smooth basis relaxes the discounted LP") {
    DiscretizedSystem dsys = drift_well();
    ValueFunction vf = value_iteration(dsys, 0.5, 1e-11);
    LinearProgram lp = build_discounted_lp(dsys, smooth_basis(dsys, 5, 1.0), 0.5, 0);
    LPSolution sol = solve(lp, 1e-9);
    REQUIRE(sol.status == LPSolution::Status::Optimal);
    CHECK(sol.objective <= vf.values[0] + 1e-9);
}

TEST_CASE("average LP over G finds the stationary well measure") {
    DiscretizedSystem dsys = drift_well();
    LinearProgram lp = build_average_lp(dsys, indicator_basis(dsys), false);
    // only grid-to-grid pairs are variables in the restricted problem
    CHECK(lp.var_names.size() == 21);
    CHECK_FALSE(has_name(lp.var_names, "(10,1)"));

    LPSolution sol = solve(lp, 1e-9);
    REQUIRE(sol.status == LPSolution::Status::Optimal);
    CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-12));
    auto weights = solution_weights(lp, sol, dsys);
    CHECK(weights.at({2, 0}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("compactified average LP parks mass at infinity when escape is cheap") {
    SystemModel model = make_system("drift");
    model.cost = make_cost("decay").fn;
    DiscretizedSystem dsys =
        build(model, {{0.0}, {10.0}, {10}}, CostAtInfRule::explicit_value(0.0));

    LinearProgram lp = build_average_lp(dsys, indicator_basis(dsys), true);
    CHECK(has_name(lp.var_names, "(10,1)"));   // escaping pair is a variable now
    LPSolution sol = solve(lp, 1e-9);
    REQUIRE(sol.status == LPSolution::Status::Optimal);
    CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sol.inf_mass == doctest::Approx(1.0).epsilon(1e-9));

    // stationarity forces zero mass on pairs that jump to infinity
    auto weights = solution_weights(lp, sol, dsys);
    auto it = weights.find({10, 1});
    CHECK((it == weights.end() || it->second <= 1e-12));

    TailMassReport tail = infinity_mass_profile(sol, lp, dsys, {5.0, 10.0});
    CHECK(tail.inf_mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(tail.escaping_mass <= 1e-12);
    CHECK_FALSE(tail.supported_on_G);
    CHECK(tail.tail_mass[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(tail.tail_mass[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("average LP over G is infeasible when nothing can cycle") {
    SystemModel model = make_system("linear", {{"a", 2.0}, {"b", 1.0}});
    model.cost = make_cost("constant").fn;
    DiscretizedSystem dsys = build(model, {{1.0}, {10.0}, {9}});

    LinearProgram restricted = build_average_lp(dsys, indicator_basis(dsys), false);
    LPSolution sol = solve(restricted, 1e-9);
    CHECK(sol.status == LPSolution::Status::Infeasible);

    // the compactified counterpart is feasible: everything drains to infinity
    LinearProgram compactified = build_average_lp(dsys, indicator_basis(dsys), true);
    LPSolution csol = solve(compactified, 1e-9);
    REQUIRE(csol.status == LPSolution::Status::Optimal);
    CHECK(csol.inf_mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(csol.objective == doctest::Approx(1.0).epsilon(1e-9));   // constant cost
}

TEST_CASE("average LP requires admissible pairs") {
    DiscretizedSystem dsys;
    dsys.states = {{0.0}};
    dsys.controls = {{0.0}};
    dsys.has_inf = true;
    dsys.pairs = {{0, 0, 1, 1.0}, {1, 0, 1, 0.0}};   // everything escapes
    dsys.index_pairs();
    CHECK_THROWS_AS(build_average_lp(dsys, indicator_basis(dsys), false), std::runtime_error);
}

TEST_CASE("simplex handles hand-written programs") {
    LinearProgram lp;
    lp.objective = {1.0, 2.0};
    lp.rows = {{1.0, 1.0}};
    lp.rhs = {1.0};
    lp.row_names = {"budget"};
    lp.var_names = {"x0", "x1"};
    lp.var_pair = {-1, -1};
    lp.var_at_inf = {0, 0};
    LPSolution sol = solve(lp, 1e-9);
    REQUIRE(sol.status == LPSolution::Status::Optimal);
    CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.weights[1] == doctest::Approx(0.0).epsilon(1e-12));

    // duplicated constraints are detected as redundant, not infeasible
    lp.rows.push_back(lp.rows[0]);
    lp.rhs.push_back(lp.rhs[0]);
    lp.row_names.push_back("copy");
    LPSolution dup = solve(lp, 1e-9);
    CHECK(dup.status == LPSolution::Status::Optimal);
    CHECK(dup.objective == doctest::Approx(1.0).epsilon(1e-12));

    // contradictory right-hand sides are infeasible
    lp.rhs[1] = 2.0;
    CHECK(solve(lp, 1e-9).status == LPSolution::Status::Infeasible);

    // a free descent direction is unbounded
    LinearProgram open;
    open.objective = {-1.0};
    open.var_names = {"x0"};
    open.var_pair = {-1};
    open.var_at_inf = {0};
    CHECK(solve(open, 1e-9).status == LPSolution::Status::Unbounded);

    CHECK_THROWS_AS(solve(lp, 0.0), std::invalid_argument);
    LinearProgram ragged = lp;
    ragged.rows[0].pop_back();
    CHECK_THROWS_AS(solve(ragged, 1e-9), std::invalid_argument);
}

TEST_CASE("to_text prints a standard-form program") {
    DiscretizedSystem dsys = drift_well();
    LinearProgram lp = build_average_lp(dsys, indicator_basis(dsys), false);
    std::string text = to_text(lp);
    CHECK(text.find("minimize") != std::string::npos);
    CHECK(text.find("(2,0)") != std::string::npos);
    CHECK(text.find(">= 0") != std::string::npos);
}

TEST_CASE("verify_eq_res1 certifies LP/DP agreement") {
    DiscretizedSystem dsys = drift_well();
    TestFunctionBasis basis = indicator_basis(dsys);
    for (double alpha : {0.5, 0.9}) {
        EqRes1Report rep = verify_eq_res1(dsys, basis, alpha, 0, 1e-6);
        CHECK(rep.pass);
        CHECK(rep.lp_status == LPSolution::Status::Optimal);
        CHECK(rep.diff <= 1e-6);
        CHECK(rep.lp_value == doctest::Approx(rep.vi_value).epsilon(1e-6));
    }
}

TEST_CASE("infinity_mass_profile localizes grid-supported solutions") {
    DiscretizedSystem dsys = drift_well();
    LinearProgram lp = build_average_lp(dsys, indicator_basis(dsys), false);
    LPSolution sol = solve(lp, 1e-9);
    TailMassReport tail = infinity_mass_profile(sol, lp, dsys, {1.0, 3.0});
    CHECK(tail.supported_on_G);
    CHECK(tail.inf_mass <= 1e-12);
    CHECK(tail.tail_mass[0] == doctest::Approx(1.0).epsilon(1e-9));   // the well sits at 2 > 1
    CHECK(tail.tail_mass[1] == doctest::Approx(0.0).epsilon(1e-12));
}
