#include "occulp/dp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace occulp {

namespace {

constexpr long long kSweepCap = 1000000;

void check_viable_nodes(const DiscretizedSystem& dsys) {
    for (int s = 0; s < dsys.num_nodes(); ++s) {
        if (dsys.pairs_by_state.at(s).empty()) {
            throw std::invalid_argument("node " + std::to_string(s) +
                                        " has no admissible control");
        }
    }
}

// Bellman minimization at one node; ties go to the lowest control index.
template <typename Value>
std::pair<double, int> node_min(const DiscretizedSystem& dsys, int s, Value&& pair_value) {
    double best = 0.0;
    int best_control = -1;
    for (int id : dsys.pairs_by_state[s]) {
        const Pair& pr = dsys.pairs[id];
        double cand = pair_value(pr);
        if (best_control < 0 || cand < best ||
            (cand == best && pr.control < best_control)) {
            best = cand;
            best_control = pr.control;
        }
    }
    return {best, best_control};
}

}   // namespace

ValueFunction value_iteration(const DiscretizedSystem& dsys, double alpha, double tol) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    check_viable_nodes(dsys);

    const int n = dsys.num_nodes();
    ValueFunction vf;
    vf.kind = ValueFunction::Kind::Discounted;
    vf.alpha = alpha;
    vf.values.assign(n, 0.0);

    // Update threshold chosen so the contraction bound gives
    // ||V - V*|| <= alpha/(1-alpha) * update <= tol.
    const double threshold = tol * (1.0 - alpha) / alpha;
    std::vector<double> next(n);
    auto bellman = [&](const std::vector<double>& v, int s) {
        return node_min(dsys, s, [&](const Pair& pr) {
                   return (1.0 - alpha) * pr.cost + alpha * v[pr.next];
               }).first;
    };

    for (;;) {
        double delta = 0.0;
        for (int s = 0; s < n; ++s) {
            next[s] = bellman(vf.values, s);
            delta = std::max(delta, std::abs(next[s] - vf.values[s]));
        }
        vf.values.swap(next);
        vf.update_norms.push_back(delta);
        ++vf.sweeps;
        if (delta <= threshold) break;
        if (vf.sweeps >= kSweepCap) {
            throw std::runtime_error("value iteration did not converge within " +
                                     std::to_string(kSweepCap) +
                                     " sweeps (tolerance too tight for this alpha)");
        }
    }

    double residual = 0.0;
    for (int s = 0; s < n; ++s) {
        residual = std::max(residual, std::abs(bellman(vf.values, s) - vf.values[s]));
    }
    vf.residual = residual;
    return vf;
}

FiniteHorizonValue finite_horizon(const DiscretizedSystem& dsys, long long S) {
    if (S <= 0) throw std::invalid_argument("horizon must be positive");
    check_viable_nodes(dsys);

    const int n = dsys.num_nodes();
    FiniteHorizonValue fh;
    fh.argmin.assign(S, std::vector<int>(n, -1));

    std::vector<double> J(n, 0.0), next(n);
    for (long long k = 0; k < S; ++k) {
        for (int s = 0; s < n; ++s) {
            auto [value, control] =
                node_min(dsys, s, [&](const Pair& pr) { return pr.cost + J[pr.next]; });
            next[s] = value;
            fh.argmin[k][s] = control;
        }
        J.swap(next);
    }

    fh.vf.kind = ValueFunction::Kind::FiniteHorizon;
    fh.vf.horizon = S;
    fh.vf.values.resize(n);
    for (int s = 0; s < n; ++s) fh.vf.values[s] = J[s] / static_cast<double>(S);
    return fh;
}

std::vector<int> FiniteHorizonValue::optimal_sequence(const DiscretizedSystem& dsys,
                                                      int y0) const {
    const long long S = vf.horizon;
    std::vector<int> seq;
    seq.reserve(S);
    int node = y0;
    for (long long t = 0; t < S; ++t) {
        int u = argmin[S - 1 - t][node];
        seq.push_back(u);
        node = dsys.pairs[dsys.find_pair(node, u)].next;
    }
    return seq;
}

DiscretePolicy greedy_policy(const DiscretizedSystem& dsys, const ValueFunction& vf) {
    if (vf.kind != ValueFunction::Kind::Discounted) {
        throw std::invalid_argument("greedy_policy requires a discounted value function");
    }
    const double alpha = vf.alpha;
    DiscretePolicy policy(dsys.num_nodes());
    for (int s = 0; s < dsys.num_nodes(); ++s) {
        policy[s] = node_min(dsys, s, [&](const Pair& pr) {
                        return (1.0 - alpha) * pr.cost + alpha * vf.values[pr.next];
                    }).second;
    }
    return policy;
}

MinResult min_over_states(const DiscretizedSystem& dsys, const ValueFunction& vf,
                          bool exclude_inf) {
    const int limit = (dsys.has_inf && exclude_inf) ? static_cast<int>(dsys.states.size())
                                                    : dsys.num_nodes();
    if (limit == 0) throw std::invalid_argument("no states to minimize over");
    MinResult res;
    for (int s = 0; s < limit; ++s) {
        if (res.state < 0 || vf.values[s] < res.value) {
            res.state = s;
            res.value = vf.values[s];
        }
    }
    for (int s = 0; s < limit; ++s) {
        if (vf.values[s] <= res.value + 1e-12) ++res.tie_count;
    }
    return res;
}

namespace {

// Walks a trajectory over node indices, recording the largest state norm and
// whether the infinity node is reached.
template <typename NextNode>
A1Entry walk(const DiscretizedSystem& dsys, int init, long long steps, NextNode&& advance) {
    A1Entry entry;
    entry.init_state = init;
    int node = init;
    for (long long t = 0; t <= steps; ++t) {
        if (dsys.is_inf(node)) {
            entry.touches_inf = true;
            break;
        }
        entry.max_radius = std::max(entry.max_radius, dsys.state_norm(node));
        if (t == steps) break;
        node = advance(node, t);
    }
    return entry;
}

}   // namespace

A1Entry a1_discounted_entry(const DiscretizedSystem& dsys, const ValueFunction& vf) {
    MinResult mr = min_over_states(dsys, vf, true);
    DiscretePolicy policy = greedy_policy(dsys, vf);
    // A stationary policy on a finite node set settles into its cycle within
    // num_nodes steps.
    A1Entry entry = walk(dsys, mr.state, dsys.num_nodes(), [&](int node, long long) {
        return dsys.pairs[dsys.find_pair(node, policy[node])].next;
    });
    entry.is_alpha = true;
    entry.schedule_value = vf.alpha;
    return entry;
}

A1Entry a1_cesaro_entry(const DiscretizedSystem& dsys, const FiniteHorizonValue& fh) {
    MinResult mr = min_over_states(dsys, fh.vf, true);
    std::vector<int> seq = fh.optimal_sequence(dsys, mr.state);
    A1Entry entry = walk(dsys, mr.state, fh.vf.horizon, [&](int node, long long t) {
        return dsys.pairs[dsys.find_pair(node, seq[t])].next;
    });
    entry.is_alpha = false;
    entry.schedule_value = static_cast<double>(fh.vf.horizon);
    return entry;
}

A1Report check_A1(const DiscretizedSystem& dsys, const std::vector<double>& alphas,
                  const std::vector<long long>& horizons, double vi_tol) {
    A1Report report;
    for (double alpha : alphas) {
        report.entries.push_back(a1_discounted_entry(dsys, value_iteration(dsys, alpha, vi_tol)));
    }
    for (long long S : horizons) {
        report.entries.push_back(a1_cesaro_entry(dsys, finite_horizon(dsys, S)));
    }
    for (const A1Entry& e : report.entries) {
        report.consistent = report.consistent && !e.touches_inf;
        report.bounding_radius = std::max(report.bounding_radius, e.max_radius);
    }
    return report;
}

}   // namespace occulp
