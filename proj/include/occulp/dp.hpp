#pragma once

#include <vector>

#include "occulp/discretize.hpp"
#include "occulp/measures.hpp"

namespace occulp {

struct ValueFunction {
    enum class Kind { Discounted, FiniteHorizon };
    Kind kind = Kind::Discounted;
    double alpha = 0.0;
    long long horizon = 0;
    std::vector<double> values;         // per node; infinity node last when present
    double residual = 0.0;              // sup-norm Bellman residual (discounted only)
    long long sweeps = 0;
    std::vector<double> update_norms;   // sup-norm update per sweep (discounted only)
};

/**
 * Normalized discounted value: fixed point of
 *   V(y) = min_u [(1-alpha)*g(y,u) + alpha*V(f(y,u))],
 * iterated until the sup-norm update falls below tol*(1-alpha)/alpha, which
 * bounds the distance to the fixed point by tol. Throws if the iteration cap
 * (1e6 sweeps) is hit or some node has no admissible control.
 */
ValueFunction value_iteration(const DiscretizedSystem& dsys, double alpha, double tol);

/**
 * Horizon-averaged value V(S,y) = J_S(y)/S from the backward recursion
 * J_0 = 0, J_{k+1}(y) = min_u [g(y,u) + J_k(f(y,u))]. Keeps the per-stage
 * argmin tables so the realized optimal control sequence from any initial
 * node can be read off.
 */
struct FiniteHorizonValue {
    ValueFunction vf;
    std::vector<std::vector<int>> argmin;   // argmin[k][node]: best control, k+1 steps to go

    std::vector<int> optimal_sequence(const DiscretizedSystem& dsys, int y0) const;
};

FiniteHorizonValue finite_horizon(const DiscretizedSystem& dsys, long long S);

/// Bellman-greedy stationary policy for a converged discounted value
/// function; ties go to the lowest control index.
DiscretePolicy greedy_policy(const DiscretizedSystem& dsys, const ValueFunction& vf);

struct MinResult {
    int state = -1;
    double value = 0.0;
    int tie_count = 0;   // nodes within 1e-12 of the minimum
};

/// Minimum of the value function over grid states (and the infinity node too
/// when exclude_inf is false); ties resolve to the lowest index.
MinResult min_over_states(const DiscretizedSystem& dsys, const ValueFunction& vf,
                          bool exclude_inf = true);

/// One row of the bounded-process diagnostic: the optimal trajectory launched
/// from the argmin initial node, tracked for its largest state norm and
/// whether it falls into the infinity node.
struct A1Entry {
    bool is_alpha = true;         // discounted point (alpha) vs averaged point (S)
    double schedule_value = 0.0;
    int init_state = -1;
    double max_radius = 0.0;
    bool touches_inf = false;
};

struct A1Report {
    std::vector<A1Entry> entries;
    double bounding_radius = 0.0;
    bool consistent = true;   // no optimal trajectory touches the infinity node
};

A1Entry a1_discounted_entry(const DiscretizedSystem& dsys, const ValueFunction& vf);
A1Entry a1_cesaro_entry(const DiscretizedSystem& dsys, const FiniteHorizonValue& fh);

/// Runs the diagnostic across whole schedules of discount factors and
/// horizons.
A1Report check_A1(const DiscretizedSystem& dsys, const std::vector<double>& alphas,
                  const std::vector<long long>& horizons, double vi_tol);

}   // namespace occulp
