#include "occulp/measures.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace occulp {

double OccupationalMeasure::total_weight() const {
    double t = 0.0;
    for (const auto& [key, w] : weights) t += w;
    return t;
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0,1)");
    }
}

void check_origin(const DiscretizedSystem& dsys, int y0) {
    if (y0 < 0 || y0 >= dsys.num_nodes()) {
        throw std::invalid_argument("origin node index out of range");
    }
}

int policy_pair(const DiscretizedSystem& dsys, const DiscretePolicy& policy, int node) {
    if (node >= static_cast<int>(policy.size())) {
        throw std::invalid_argument("policy does not cover node " + std::to_string(node));
    }
    int id = dsys.find_pair(node, policy[node]);
    if (id < 0) {
        throw std::invalid_argument("policy selects inadmissible control " +
                                    std::to_string(policy[node]) + " at node " +
                                    std::to_string(node));
    }
    return id;
}

}   // namespace

OccupationalMeasure discounted_measure(const DiscretizedSystem& dsys, int y0,
                                       const DiscretePolicy& policy, double alpha) {
    check_alpha(alpha);
    check_origin(dsys, y0);

    // Walk until a node repeats: pre-period of length p, then a cycle of
    // length c, both within num_nodes steps.
    std::vector<int> first_visit(dsys.num_nodes(), -1);
    std::vector<int> visited_pairs;
    int node = y0;
    while (first_visit[node] < 0) {
        first_visit[node] = static_cast<int>(visited_pairs.size());
        int id = policy_pair(dsys, policy, node);
        visited_pairs.push_back(id);
        node = dsys.pairs[id].next;
    }
    const int p = first_visit[node];
    const int c = static_cast<int>(visited_pairs.size()) - p;

    OccupationalMeasure mu;
    mu.kind = OccupationalMeasure::Kind::Discounted;
    mu.alpha = alpha;
    mu.origin = y0;
    mu.exact = true;

    double pw = 1.0;
    for (int t = 0; t < p; ++t) {
        const Pair& pr = dsys.pairs[visited_pairs[t]];
        mu.weights[{pr.state, pr.control}] += (1.0 - alpha) * pw;
        pw *= alpha;
    }
    // Cycle slot at absolute time p+j collects alpha^{p+j+kc} over all k >= 0.
    const double cycle_factor = (1.0 - alpha) / (1.0 - std::pow(alpha, c));
    for (int j = 0; j < c; ++j) {
        const Pair& pr = dsys.pairs[visited_pairs[p + j]];
        mu.weights[{pr.state, pr.control}] += cycle_factor * pw;
        pw *= alpha;
    }
    return mu;
}

OccupationalMeasure discounted_measure_truncated(const DiscretizedSystem& dsys, int y0,
                                                 const DiscretePolicy& policy, double alpha,
                                                 double tail_eps) {
    check_alpha(alpha);
    check_origin(dsys, y0);
    if (!(tail_eps > 0.0 && tail_eps < 1.0)) {
        throw std::invalid_argument("tail_eps must lie in (0,1)");
    }
    const long long T = static_cast<long long>(std::ceil(std::log(tail_eps) / std::log(alpha)));

    OccupationalMeasure mu;
    mu.kind = OccupationalMeasure::Kind::Discounted;
    mu.alpha = alpha;
    mu.origin = y0;
    mu.exact = false;

    int node = y0;
    double pw = 1.0;
    for (long long t = 0; t < T; ++t) {
        const Pair& pr = dsys.pairs[policy_pair(dsys, policy, node)];
        mu.weights[{pr.state, pr.control}] += (1.0 - alpha) * pw;
        pw *= alpha;
        node = pr.next;
    }
    const double total = mu.total_weight();
    for (auto& [key, w] : mu.weights) w /= total;
    return mu;
}

namespace {

OccupationalMeasure averaging_from_counts(const DiscretizedSystem& dsys, int y0, long long S,
                                          std::map<PairKey, long long>&& counts) {
    OccupationalMeasure mu;
    mu.kind = OccupationalMeasure::Kind::Averaging;
    mu.horizon = S;
    mu.origin = y0;
    mu.exact = true;
    mu.counts = std::move(counts);
    for (const auto& [key, n] : mu.counts) {
        mu.weights[key] = static_cast<double>(n) / static_cast<double>(S);
    }
    (void)dsys;
    return mu;
}

}   // namespace

OccupationalMeasure averaging_measure(const DiscretizedSystem& dsys, int y0,
                                      const DiscretePolicy& policy, long long S) {
    check_origin(dsys, y0);
    if (S <= 0) throw std::invalid_argument("horizon must be positive");
    std::map<PairKey, long long> counts;
    int node = y0;
    for (long long t = 0; t < S; ++t) {
        const Pair& pr = dsys.pairs[policy_pair(dsys, policy, node)];
        ++counts[{pr.state, pr.control}];
        node = pr.next;
    }
    return averaging_from_counts(dsys, y0, S, std::move(counts));
}

OccupationalMeasure averaging_measure_openloop(const DiscretizedSystem& dsys, int y0,
                                               const std::vector<int>& controls, long long S) {
    check_origin(dsys, y0);
    if (S <= 0) throw std::invalid_argument("horizon must be positive");
    if (static_cast<long long>(controls.size()) < S) {
        throw std::invalid_argument("control sequence shorter than horizon");
    }
    std::map<PairKey, long long> counts;
    int node = y0;
    for (long long t = 0; t < S; ++t) {
        int id = dsys.find_pair(node, controls[t]);
        if (id < 0) {
            throw std::invalid_argument("control " + std::to_string(controls[t]) +
                                        " inadmissible at node " + std::to_string(node) +
                                        " (step " + std::to_string(t) + ")");
        }
        ++counts[{node, controls[t]}];
        node = dsys.pairs[id].next;
    }
    return averaging_from_counts(dsys, y0, S, std::move(counts));
}

double integrate(const OccupationalMeasure& mu, const std::function<double(int, int)>& q) {
    double acc = 0.0;
    for (const auto& [key, w] : mu.weights) acc += w * q(key.first, key.second);
    return acc;
}

double integrate_cost(const OccupationalMeasure& mu, const DiscretizedSystem& dsys) {
    return integrate(mu, [&](int s, int u) {
        int id = dsys.find_pair(s, u);
        if (id < 0) throw std::invalid_argument("measure supported outside the pair set");
        return dsys.pairs[id].cost;
    });
}

double constraint_residual(const OccupationalMeasure& mu, const DiscretizedSystem& dsys,
                           const std::function<double(int)>& phi, const ResidualMode& mode) {
    if (mode.kind == ResidualMode::Kind::Discounted) check_alpha(mode.alpha);
    double acc = 0.0;
    for (const auto& [key, w] : mu.weights) {
        int id = dsys.find_pair(key.first, key.second);
        if (id < 0) throw std::invalid_argument("measure supported outside the pair set");
        const Pair& pr = dsys.pairs[id];
        if (mode.kind == ResidualMode::Kind::Discounted) {
            acc += w * (mode.alpha * (phi(pr.next) - phi(pr.state)) +
                        (1.0 - mode.alpha) * (phi(mode.y0) - phi(pr.state)));
        } else {
            acc += w * (phi(pr.next) - phi(pr.state));
        }
    }
    return acc;
}

}   // namespace occulp
