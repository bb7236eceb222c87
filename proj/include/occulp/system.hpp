#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace occulp {

using State = std::vector<double>;
using Control = std::vector<double>;

/// Euclidean norm of a state vector.
double norm(const State& y);

/// Axis-aligned box, used both as a declared state bound and as the grid extent.
struct Box {
    State lower;
    State upper;
    bool contains(const State& y) const;
};

/**
 * A discrete-time controlled dynamical system y(t+1) = f(y(t), u(t)) with a
 * closed state set, a finite global control list, per-state admissible
 * controls, and a running cost bounded below.
 *
 * Controls are identified by their index into `controls`; `admissible(y)`
 * returns the indices usable at y. Dynamics and cost take the control value.
 */
struct SystemModel {
    int state_dim = 1;
    std::vector<Control> controls;
    std::function<State(const State&, const Control&)> dynamics;
    std::function<std::vector<int>(const State&)> admissible;
    std::function<bool(const State&)> in_state_set;
    std::optional<Box> bounded;   // declared bounding box; nullopt = unbounded state set
    std::function<double(const State&, const Control&)> cost;
    double cost_lower_bound = 0.0;

    bool is_unbounded() const { return !bounded.has_value(); }
};

/// Applies one step of the dynamics. Throws std::invalid_argument if y
/// violates the state constraint or the control is not admissible at y.
State step(const SystemModel& model, const State& y, int control_index);

struct TrajectoryStep {
    State y;
    int control;   // index into model.controls
};

using StatePolicy = std::function<int(const State&)>;

/// Rolls the system forward `horizon` steps under a stationary policy.
/// Every visited state must satisfy the state constraint; a violation at
/// step t raises std::runtime_error naming t and the offending state.
std::vector<TrajectoryStep> simulate(const SystemModel& model, const State& y0,
                                     const StatePolicy& policy, int horizon);

/**
 * Empirical check that |f(y,u)| grows without bound as |y| grows, uniformly
 * in u. States are sampled near each radius (axis directions first, then
 * seeded pseudo-random directions), filtered by the state constraint, and the
 * minimum image norm over samples and controls is recorded. The verdict is
 * "consistent" only if the per-radius minima are strictly increasing; a
 * constant or shrinking map reads as "violated" with a witness sample.
 */
struct CoercivityReport {
    std::vector<double> radii;
    std::vector<double> min_image_norm;
    bool consistent = false;
    std::string witness;   // empty when consistent
};

CoercivityReport check_infinity_coercivity(const SystemModel& model,
                                           const std::vector<double>& radii,
                                           int samples_per_radius);

using Params = std::map<std::string, double>;

/// Catalog of named system builders. Entries: "drift" (y+u on [0,inf),
/// U={0,1}), "linear" (a*y + b*u on the real line, params a, b),
/// "fixed-point" (f(y,u)=y, degenerate test case).
SystemModel make_system(const std::string& name, const Params& params = {});
std::vector<std::string> system_catalog_names();

using CostFn = std::function<double(const State&, const Control&)>;

struct CostSpec {
    CostFn fn;
    double lower_bound = 0.0;
};

/// Catalog of named running costs (all functions of the state only):
/// "well" (1 - 1/(1+|y-c|^2), param center), "quadratic" (|y-c|^2, param
/// center), "decay" (1/(1+|y|)), "constant" (param value).
CostSpec make_cost(const std::string& name, const Params& params = {});
std::vector<std::string> cost_catalog_names();

/// Replaces the model cost with min(cost, cap). Used to reduce costs
/// unbounded above to the bounded setting.
void truncate_cost(SystemModel& model, double cap);

}   // namespace occulp
