#pragma once

// Reference computations for the tests: brute-force truncated summations,
// direct visit counting, and exhaustive stationary-policy enumeration.
// These deliberately avoid the library's closed-form and fixed-point paths
// so that agreement is meaningful.

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "occulp/discretize.hpp"
#include "occulp/measures.hpp"

namespace oracle {

using occulp::DiscretizedSystem;
using occulp::Pair;
using occulp::PairKey;

inline const Pair& step_pair(const DiscretizedSystem& dsys, const std::vector<int>& policy,
                             int node) {
    return dsys.pairs.at(dsys.find_pair(node, policy.at(node)));
}

/// Discounted weights by summing (1-alpha)*alpha^t until alpha^T < 1e-18.
inline std::map<PairKey, double> discounted_weights(const DiscretizedSystem& dsys, int y0,
                                                    const std::vector<int>& policy,
                                                    double alpha) {
    const long long T =
        static_cast<long long>(std::ceil(std::log(1e-18) / std::log(alpha))) + 1;
    std::map<PairKey, double> weights;
    int node = y0;
    double pw = 1.0;
    for (long long t = 0; t < T; ++t) {
        const Pair& pr = step_pair(dsys, policy, node);
        weights[{pr.state, pr.control}] += (1.0 - alpha) * pw;
        pw *= alpha;
        node = pr.next;
    }
    return weights;
}

/// Visit counts over t = 0..S-1 under a stationary policy.
inline std::map<PairKey, long long> visit_counts(const DiscretizedSystem& dsys, int y0,
                                                 const std::vector<int>& policy, long long S) {
    std::map<PairKey, long long> counts;
    int node = y0;
    for (long long t = 0; t < S; ++t) {
        const Pair& pr = step_pair(dsys, policy, node);
        ++counts[{pr.state, pr.control}];
        node = pr.next;
    }
    return counts;
}

/// Normalized discounted cost of one stationary policy, exact: the node
/// trajectory is eventually periodic, so split into pre-period and cycle and
/// sum both geometric series in closed form.
inline double policy_value(const DiscretizedSystem& dsys, const std::vector<int>& policy,
                           int y0, double alpha) {
    std::vector<int> first(dsys.num_nodes(), -1);
    std::vector<double> costs;
    int node = y0;
    while (first[node] < 0) {
        first[node] = static_cast<int>(costs.size());
        const Pair& pr = step_pair(dsys, policy, node);
        costs.push_back(pr.cost);
        node = pr.next;
    }
    const int pre = first[node];
    const int cycle = static_cast<int>(costs.size()) - pre;
    double head = 0.0;
    double pw = 1.0;
    for (int t = 0; t < pre; ++t) {
        head += pw * costs[t];
        pw *= alpha;
    }
    double tail = 0.0;
    double qw = 1.0;
    for (int j = 0; j < cycle; ++j) {
        tail += qw * costs[pre + j];
        qw *= alpha;
    }
    return (1.0 - alpha) * (head + pw * tail / (1.0 - std::pow(alpha, cycle)));
}

/// Minimum discounted cost over every stationary policy (odometer walk over
/// the product of per-node admissible control lists).
inline double best_policy_value(const DiscretizedSystem& dsys, int y0, double alpha) {
    const int n = dsys.num_nodes();
    std::vector<std::vector<int>> options(n);
    for (int s = 0; s < n; ++s) {
        for (int id : dsys.pairs_by_state.at(s)) options[s].push_back(dsys.pairs[id].control);
    }
    std::vector<int> choice(n, 0);
    std::vector<int> policy(n);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        for (int s = 0; s < n; ++s) policy[s] = options[s][choice[s]];
        best = std::min(best, policy_value(dsys, policy, y0, alpha));
        int s = 0;
        while (s < n && ++choice[s] == static_cast<int>(options[s].size())) {
            choice[s] = 0;
            ++s;
        }
        if (s == n) break;
    }
    return best;
}

/// Small random finite control system assembled directly: every (state,
/// control) pair exists, successors and unit-interval costs are seeded.
inline DiscretizedSystem random_system(unsigned seed, int n_states, int n_actions) {
    std::mt19937 rng(seed);
    DiscretizedSystem dsys;
    dsys.has_inf = false;
    for (int s = 0; s < n_states; ++s) {
        dsys.states.push_back({static_cast<double>(s)});
    }
    for (int u = 0; u < n_actions; ++u) {
        dsys.controls.push_back({static_cast<double>(u)});
    }
    std::uniform_int_distribution<int> successor(0, n_states - 1);
    std::uniform_real_distribution<double> cost(0.0, 1.0);
    for (int s = 0; s < n_states; ++s) {
        for (int u = 0; u < n_actions; ++u) {
            dsys.pairs.push_back({s, u, successor(rng), cost(rng)});
        }
    }
    dsys.index_pairs();
    return dsys;
}

inline std::vector<int> random_policy(const DiscretizedSystem& dsys, std::mt19937& rng) {
    std::vector<int> policy(dsys.num_nodes());
    for (int s = 0; s < dsys.num_nodes(); ++s) {
        const auto& ids = dsys.pairs_by_state.at(s);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(ids.size()) - 1);
        policy[s] = dsys.pairs[ids[pick(rng)]].control;
    }
    return policy;
}

/// Indicator-basis discounted-balance row at grid state z, evaluated directly
/// from a weight map.
inline double indicator_row_residual(const std::map<PairKey, double>& weights,
                                     const DiscretizedSystem& dsys, int z, double alpha,
                                     int y0) {
    double acc = 0.0;
    for (const auto& [key, w] : weights) {
        const Pair& pr = dsys.pairs.at(dsys.find_pair(key.first, key.second));
        const double phi_next = pr.next == z ? 1.0 : 0.0;
        const double phi_state = key.first == z ? 1.0 : 0.0;
        const double phi_origin = y0 == z ? 1.0 : 0.0;
        acc += w * (alpha * (phi_next - phi_state) + (1.0 - alpha) * (phi_origin - phi_state));
    }
    return acc;
}

/// 2-state 1-control cycle a -> b -> a, costs per state.
inline DiscretizedSystem two_cycle(double cost_a = 0.0, double cost_b = 0.0) {
    DiscretizedSystem dsys;
    dsys.has_inf = false;
    dsys.states = {{0.0}, {1.0}};
    dsys.controls = {{0.0}};
    dsys.pairs = {{0, 0, 1, cost_a}, {1, 0, 0, cost_b}};
    dsys.index_pairs();
    return dsys;
}

}   // namespace oracle
