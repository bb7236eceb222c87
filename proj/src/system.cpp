#include "occulp/system.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace occulp {

double norm(const State& y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return std::sqrt(s);
}

bool Box::contains(const State& y) const {
    for (size_t d = 0; d < y.size(); ++d) {
        if (y[d] < lower[d] || y[d] > upper[d]) return false;
    }
    return true;
}

namespace {

std::string format_state(const State& y) {
    std::ostringstream os;
    os << "[";
    for (size_t d = 0; d < y.size(); ++d) {
        if (d) os << ", ";
        os << y[d];
    }
    os << "]";
    return os.str();
}

double get_param(const Params& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown_params(const Params& params, const std::string& owner,
                           std::initializer_list<const char*> known) {
    for (const auto& [key, value] : params) {
        (void)value;
        if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) ==
            known.end()) {
            throw std::invalid_argument("unknown parameter '" + key + "' for " + owner);
        }
    }
}

std::vector<int> all_control_indices(size_t n) {
    std::vector<int> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
    return idx;
}

}   // namespace

State step(const SystemModel& model, const State& y, int control_index) {
    if (!model.in_state_set(y)) {
        throw std::invalid_argument("state " + format_state(y) + " violates the state constraint");
    }
    const auto admissible = model.admissible(y);
    if (std::find(admissible.begin(), admissible.end(), control_index) == admissible.end()) {
        throw std::invalid_argument("control index " + std::to_string(control_index) +
                                    " not admissible at state " + format_state(y));
    }
    return model.dynamics(y, model.controls.at(control_index));
}

std::vector<TrajectoryStep> simulate(const SystemModel& model, const State& y0,
                                     const StatePolicy& policy, int horizon) {
    if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
    std::vector<TrajectoryStep> trajectory;
    trajectory.reserve(horizon);
    State y = y0;
    for (int t = 0; t < horizon; ++t) {
        if (!model.in_state_set(y)) {
            throw std::runtime_error("state constraint violated at step " + std::to_string(t) +
                                     ": state " + format_state(y));
        }
        int u = policy(y);
        State next = step(model, y, u);   // validates admissibility of u at y
        trajectory.push_back({y, u});
        y = std::move(next);
    }
    return trajectory;
}

CoercivityReport check_infinity_coercivity(const SystemModel& model,
                                           const std::vector<double>& radii,
                                           int samples_per_radius) {
    if (!model.is_unbounded()) {
        throw std::invalid_argument("coercivity check requires an unbounded state set");
    }
    if (radii.empty() || !std::is_sorted(radii.begin(), radii.end()) ||
        std::adjacent_find(radii.begin(), radii.end()) != radii.end()) {
        throw std::invalid_argument("radii must be a nonempty strictly increasing list");
    }
    if (samples_per_radius <= 0) {
        throw std::invalid_argument("samples_per_radius must be positive");
    }

    CoercivityReport report;
    report.radii = radii;
    std::mt19937 rng(0x5eedu);
    std::normal_distribution<double> gauss(0.0, 1.0);

    struct Sample {
        State y;
        double image_norm;
    };
    std::vector<Sample> per_radius_best;

    for (double r : radii) {
        // Axis directions first, then seeded random directions, keeping the
        // constraint-satisfying ones.
        std::vector<State> candidates;
        for (int d = 0; d < model.state_dim; ++d) {
            for (double sign : {1.0, -1.0}) {
                State y(model.state_dim, 0.0);
                y[d] = sign * r;
                candidates.push_back(std::move(y));
            }
        }
        while (static_cast<int>(candidates.size()) < samples_per_radius) {
            State dir(model.state_dim);
            double len = 0.0;
            for (auto& v : dir) {
                v = gauss(rng);
                len += v * v;
            }
            len = std::sqrt(len);
            if (len < 1e-12) continue;
            for (auto& v : dir) v *= r / len;
            candidates.push_back(std::move(dir));
        }

        bool found = false;
        Sample best{{}, 0.0};
        for (const auto& y : candidates) {
            if (!model.in_state_set(y)) continue;
            for (int u : model.admissible(y)) {
                double img = norm(model.dynamics(y, model.controls.at(u)));
                if (!found || img < best.image_norm) {
                    best = {y, img};
                    found = true;
                }
            }
        }
        if (!found) {
            throw std::runtime_error("no constraint-satisfying sample found at radius " +
                                     std::to_string(r));
        }
        report.min_image_norm.push_back(best.image_norm);
        per_radius_best.push_back(best);
    }

    report.consistent = true;
    for (size_t i = 1; i < report.min_image_norm.size(); ++i) {
        if (!(report.min_image_norm[i] > report.min_image_norm[i - 1])) {
            report.consistent = false;
            std::ostringstream os;
            os << "min |f| does not grow from radius " << radii[i - 1] << " (min "
               << report.min_image_norm[i - 1] << ") to radius " << radii[i] << " (min "
               << report.min_image_norm[i] << " at y=" << format_state(per_radius_best[i].y)
               << ")";
            report.witness = os.str();
            break;
        }
    }
    return report;
}

SystemModel make_system(const std::string& name, const Params& params) {
    SystemModel model;
    model.state_dim = 1;
    model.cost = [](const State&, const Control&) { return 0.0; };
    model.cost_lower_bound = 0.0;

    if (name == "drift") {
        // y(t+1) = y(t) + u(t) on Y = [0, inf), U = {0, 1}.
        reject_unknown_params(params, "system 'drift'", {});
        model.controls = {{0.0}, {1.0}};
        model.dynamics = [](const State& y, const Control& u) { return State{y[0] + u[0]}; };
        model.in_state_set = [](const State& y) { return y[0] >= 0.0; };
        model.admissible = [](const State&) { return std::vector<int>{0, 1}; };
        model.bounded = std::nullopt;
        return model;
    }
    if (name == "linear") {
        // y(t+1) = a*y(t) + b*u(t) on the whole line, U = {0, 1}.
        reject_unknown_params(params, "system 'linear'", {"a", "b"});
        const double a = get_param(params, "a", 1.0);
        const double b = get_param(params, "b", 1.0);
        model.controls = {{0.0}, {1.0}};
        model.dynamics = [a, b](const State& y, const Control& u) {
            return State{a * y[0] + b * u[0]};
        };
        model.in_state_set = [](const State&) { return true; };
        model.admissible = [](const State&) { return std::vector<int>{0, 1}; };
        model.bounded = std::nullopt;
        return model;
    }
    if (name == "fixed-point") {
        // f(y, u) = y for every u; degenerate case for exercising the tooling.
        reject_unknown_params(params, "system 'fixed-point'", {});
        model.controls = {{0.0}, {1.0}};
        model.dynamics = [](const State& y, const Control&) { return y; };
        model.in_state_set = [](const State&) { return true; };
        auto indices = all_control_indices(2);
        model.admissible = [indices](const State&) { return indices; };
        model.bounded = std::nullopt;
        return model;
    }
    throw std::invalid_argument("unknown system '" + name + "'");
}

std::vector<std::string> system_catalog_names() { return {"drift", "linear", "fixed-point"}; }

CostSpec make_cost(const std::string& name, const Params& params) {
    if (name == "well") {
        // 1 - 1/(1 + |y - c|^2): nonnegative, zero exactly at the well center.
        reject_unknown_params(params, "cost 'well'", {"center"});
        const double c = get_param(params, "center", 2.0);
        return {[c](const State& y, const Control&) {
                    double d2 = 0.0;
                    for (double v : y) d2 += (v - c) * (v - c);
                    return 1.0 - 1.0 / (1.0 + d2);
                },
                0.0};
    }
    if (name == "quadratic") {
        reject_unknown_params(params, "cost 'quadratic'", {"center"});
        const double c = get_param(params, "center", 2.0);
        return {[c](const State& y, const Control&) {
                    double d2 = 0.0;
                    for (double v : y) d2 += (v - c) * (v - c);
                    return d2;
                },
                0.0};
    }
    if (name == "decay") {
        reject_unknown_params(params, "cost 'decay'", {});
        return {[](const State& y, const Control&) { return 1.0 / (1.0 + norm(y)); }, 0.0};
    }
    if (name == "constant") {
        reject_unknown_params(params, "cost 'constant'", {"value"});
        const double v = get_param(params, "value", 1.0);
        return {[v](const State&, const Control&) { return v; }, v};
    }
    throw std::invalid_argument("unknown cost '" + name + "'");
}

std::vector<std::string> cost_catalog_names() { return {"well", "quadratic", "decay", "constant"}; }

void truncate_cost(SystemModel& model, double cap) {
    auto base = model.cost;
    model.cost = [base, cap](const State& y, const Control& u) {
        return std::min(base(y, u), cap);
    };
    model.cost_lower_bound = std::min(model.cost_lower_bound, cap);
}

}   // namespace occulp
