#pragma once

#include <map>
#include <string>
#include <vector>

#include "occulp/discretize.hpp"
#include "occulp/measures.hpp"

namespace occulp {

/// Test function on the compactified state set: values on grid states plus a
/// declared finite value at the infinity node.
struct TestFunction {
    std::string name;
    std::vector<double> values;   // per grid state
    double at_inf = 0.0;

    double value_at(const DiscretizedSystem& dsys, int node) const {
        return dsys.is_inf(node) ? at_inf : values.at(node);
    }
};

struct TestFunctionBasis {
    std::string name;
    std::vector<TestFunction> functions;
};

/// One indicator per grid state (0 at the infinity node). With this basis the
/// measure LPs below reduce to the classical flow-balance LPs.
TestFunctionBasis indicator_basis(const DiscretizedSystem& dsys);

/// Constant 1, the norm-compressed coordinates y_j/(1+|y|), and `bump_count`
/// Gaussian bumps of the given width spread across the grid box; declared
/// infinity values are 1, 1, and 0 respectively.
TestFunctionBasis smooth_basis(const DiscretizedSystem& dsys, int bump_count, double width);

/// Recipe for instantiating a basis on any discretized system.
struct BasisSpec {
    enum class Kind { Indicator, Smooth };
    Kind kind = Kind::Indicator;
    int bump_count = 5;
    double width = 1.0;

    bool operator==(const BasisSpec&) const = default;
    TestFunctionBasis instantiate(const DiscretizedSystem& dsys) const;
};

/// Equality-form LP over measure weights: minimize objective . x subject to
/// rows . x = rhs, x >= 0. One row per basis function plus one normalization
/// row; variables are admissible pairs (including infinity pairs when built
/// from a compactified system).
struct LinearProgram {
    std::vector<double> objective;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<std::string> row_names;
    std::vector<std::string> var_names;   // "(state_idx,ctrl_idx)"
    std::vector<int> var_pair;            // variable -> pair id in the source system
    std::vector<char> var_at_inf;         // variable sits on the infinity node
};

struct LPSolution {
    enum class Status { Optimal, Infeasible, Unbounded, Stalled };
    Status status = Status::Optimal;
    std::vector<double> weights;
    double objective = 0.0;
    double max_residual = 0.0;   // max |rows . x - rhs|
    double certificate = 0.0;    // worst reduced-cost violation at termination
    double inf_mass = 0.0;       // total weight on infinity-node pairs
    long long iterations = 0;
};

const char* to_string(LPSolution::Status status);

/**
 * LP over W_alpha(y0): for every basis function phi a row
 *   sum_p x_p * [alpha*(phi(next_p) - phi(state_p)) + (1-alpha)*(phi(y0) - phi(state_p))] = 0,
 * plus normalization. With the indicator basis this is exactly discounted
 * flow balance: mass(z) = (1-alpha)*1{z=y0} + alpha*inflow(z).
 */
LinearProgram build_discounted_lp(const DiscretizedSystem& dsys, const TestFunctionBasis& basis,
                                  double alpha, int y0);

/**
 * LP over the stationarity constraints sum_p x_p*(phi(next_p) - phi(state_p)) = 0.
 * compactified=true keeps every pair of the system as a variable (the
 * compact counterpart over the extended pair set); compactified=false keeps
 * only pairs with both endpoints on the grid, the finite analogue of W.
 */
LinearProgram build_average_lp(const DiscretizedSystem& dsys, const TestFunctionBasis& basis,
                               bool compactified);

/// Two-phase primal simplex with Bland's anti-cycling rule; deterministic for
/// identical inputs. Redundant equality rows are detected and dropped.
LPSolution solve(const LinearProgram& lp, double tol);

/// Plain-text standard form for debugging against external solvers.
std::string to_text(const LinearProgram& lp);

/// Solution weights keyed by (state node, control index).
std::map<PairKey, double> solution_weights(const LinearProgram& lp, const LPSolution& sol,
                                           const DiscretizedSystem& dsys);

struct EqRes1Report {
    double lp_value = 0.0;
    double vi_value = 0.0;
    double diff = 0.0;
    bool pass = false;
    LPSolution::Status lp_status = LPSolution::Status::Optimal;
};

/// Checks the discounted-LP optimum against value iteration at y0.
EqRes1Report verify_eq_res1(const DiscretizedSystem& dsys, const TestFunctionBasis& basis,
                            double alpha, int y0, double tol);

struct TailMassReport {
    std::vector<double> radii;
    std::vector<double> tail_mass;   // weight beyond each radius (infinity included)
    double inf_mass = 0.0;
    double escaping_mass = 0.0;      // weight on grid pairs whose successor is infinity
    bool supported_on_G = false;
};

/// Escaping-mass diagnostic for an LP solution.
TailMassReport infinity_mass_profile(const LPSolution& sol, const LinearProgram& lp,
                                     const DiscretizedSystem& dsys,
                                     const std::vector<double>& radii);

}   // namespace occulp
