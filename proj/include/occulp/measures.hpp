#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "occulp/discretize.hpp"

namespace occulp {

/// Stationary policy on the finite system: node index -> control index.
using DiscretePolicy = std::vector<int>;

using PairKey = std::pair<int, int>;   // (state node, control index)

/**
 * Finitely supported probability distribution over state-control pairs,
 * recording discounted (weights (1-alpha)*alpha^t) or time-averaged
 * (weights 1/S) visitation of a trajectory. Exact measures come from cycle
 * detection and closed-form geometric sums; truncated ones from a finite
 * partial sum renormalized to mass one.
 */
struct OccupationalMeasure {
    enum class Kind { Discounted, Averaging };
    Kind kind = Kind::Discounted;
    double alpha = 0.0;      // discounted only
    long long horizon = 0;   // averaging only (S)
    int origin = 0;          // initial node y0
    bool exact = true;
    std::map<PairKey, double> weights;
    std::map<PairKey, long long> counts;   // averaging only: raw visit counts

    double total_weight() const;
};

/// Discounted occupational measure of the trajectory driven by `policy` from
/// y0. The trajectory on the finite node set is eventually periodic; the
/// pre-period and cycle are detected and every weight is a closed-form
/// geometric sum, so the result is exact.
OccupationalMeasure discounted_measure(const DiscretizedSystem& dsys, int y0,
                                       const DiscretePolicy& policy, double alpha);

/// Same measure via plain truncated summation over T = ceil(log eps / log
/// alpha) steps, renormalized; kept as a cross-check for the exact path.
OccupationalMeasure discounted_measure_truncated(const DiscretizedSystem& dsys, int y0,
                                                 const DiscretePolicy& policy, double alpha,
                                                 double tail_eps);

/// Averaging occupational measure: visit counts over t = 0..S-1 divided by S.
OccupationalMeasure averaging_measure(const DiscretizedSystem& dsys, int y0,
                                      const DiscretePolicy& policy, long long S);

/// Open-loop variant: controls[t] is applied at step t (controls.size() >= S).
OccupationalMeasure averaging_measure_openloop(const DiscretizedSystem& dsys, int y0,
                                               const std::vector<int>& controls, long long S);

/// Integral of q against the measure: sum of weight(s,u) * q(s,u).
double integrate(const OccupationalMeasure& mu, const std::function<double(int, int)>& q);

/// Integral of the system's running cost against the measure.
double integrate_cost(const OccupationalMeasure& mu, const DiscretizedSystem& dsys);

/// Which constraint family a residual is evaluated against.
struct ResidualMode {
    enum class Kind { Discounted, Stationary };
    Kind kind = Kind::Stationary;
    double alpha = 0.0;
    int y0 = 0;

    static ResidualMode discounted(double alpha, int y0) {
        return {Kind::Discounted, alpha, y0};
    }
    static ResidualMode stationary() { return {Kind::Stationary, 0.0, 0}; }
};

/**
 * Value of one test-function constraint row at the measure: the discounted
 * mode integrates alpha*(phi(f(y,u)) - phi(y)) + (1-alpha)*(phi(y0) - phi(y)),
 * the stationary mode integrates phi(f(y,u)) - phi(y). phi maps node index
 * (infinity node included) to a real. Exact measures make these vanish.
 */
double constraint_residual(const OccupationalMeasure& mu, const DiscretizedSystem& dsys,
                           const std::function<double(int)>& phi, const ResidualMode& mode);

}   // namespace occulp
