#include "occulp/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace occulp {

int DiscretizedSystem::find_pair(int state, int control) const {
    for (int id : pairs_by_state.at(state)) {
        if (pairs[id].control == control) return id;
    }
    return -1;
}

std::vector<int> DiscretizedSystem::admissible_pairs() const {
    std::vector<int> ids;
    const int inf = inf_index();
    for (size_t i = 0; i < pairs.size(); ++i) {
        if (has_inf && (pairs[i].state == inf || pairs[i].next == inf)) continue;
        ids.push_back(static_cast<int>(i));
    }
    return ids;
}

double DiscretizedSystem::state_norm(int node) const {
    if (is_inf(node)) return std::numeric_limits<double>::infinity();
    return norm(states.at(node));
}

void DiscretizedSystem::index_pairs() {
    pairs_by_state.assign(num_nodes(), {});
    for (size_t i = 0; i < pairs.size(); ++i) {
        pairs_by_state.at(pairs[i].state).push_back(static_cast<int>(i));
    }
}

namespace {

void validate_grid(const SystemModel& model, const GridSpec& grid) {
    const size_t dim = static_cast<size_t>(model.state_dim);
    if (grid.lower.size() != dim || grid.upper.size() != dim ||
        grid.steps_per_dim.size() != dim) {
        throw std::invalid_argument("grid dimensions do not match state_dim");
    }
    for (size_t d = 0; d < dim; ++d) {
        if (!(grid.lower[d] < grid.upper[d])) {
            throw std::invalid_argument("grid lower bound must be below upper bound");
        }
        if (grid.steps_per_dim[d] < 1) {
            throw std::invalid_argument("steps_per_dim entries must be positive");
        }
    }
}

}   // namespace

DiscretizedSystem build(const SystemModel& model, const GridSpec& grid,
                        const CostAtInfRule& rule) {
    validate_grid(model, grid);
    const int dim = model.state_dim;

    std::vector<double> h(dim);
    long long total = 1;
    for (int d = 0; d < dim; ++d) {
        h[d] = (grid.upper[d] - grid.lower[d]) / grid.steps_per_dim[d];
        total *= grid.steps_per_dim[d] + 1;
    }

    DiscretizedSystem dsys;
    dsys.controls = model.controls;
    dsys.has_inf = true;

    // Enumerate grid points in lexicographic order of multi-indices; points
    // outside the state set are excluded but keep a slot in the flat lookup
    // used by snapping.
    std::vector<int> grid_to_state(static_cast<size_t>(total), -1);
    std::vector<int> multi(dim, 0);
    for (long long flat = 0; flat < total; ++flat) {
        State y(dim);
        for (int d = 0; d < dim; ++d) y[d] = grid.lower[d] + multi[d] * h[d];
        if (model.in_state_set(y)) {
            grid_to_state[flat] = static_cast<int>(dsys.states.size());
            dsys.states.push_back(std::move(y));
        }
        for (int d = dim - 1; d >= 0; --d) {
            if (++multi[d] <= grid.steps_per_dim[d]) break;
            multi[d] = 0;
        }
    }
    if (dsys.states.empty()) {
        throw std::invalid_argument("no grid point satisfies the state constraint");
    }

    Box box{grid.lower, grid.upper};
    const int inf = dsys.inf_index();
    auto snap = [&](const State& z) -> int {
        if (!model.in_state_set(z) || !box.contains(z)) return inf;
        long long flat = 0;
        for (int d = 0; d < dim; ++d) {
            double t = (z[d] - grid.lower[d]) / h[d];
            // midpoint ties round down, so the snapped point is the
            // lexicographically smallest among nearest
            int i = static_cast<int>(std::ceil(t - 0.5));
            i = std::clamp(i, 0, grid.steps_per_dim[d]);
            flat = flat * (grid.steps_per_dim[d] + 1) + i;
        }
        int s = grid_to_state[static_cast<size_t>(flat)];
        return s < 0 ? inf : s;
    };

    const bool capped = rule.kind == CostAtInfRule::Kind::Truncation;
    double sup_cost = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < static_cast<int>(dsys.states.size()); ++s) {
        const State& y = dsys.states[s];
        auto admissible = model.admissible(y);
        if (admissible.empty()) {
            throw std::invalid_argument("grid state without admissible controls (model not "
                                        "viable on grid)");
        }
        for (int u : admissible) {
            const Control& uv = model.controls.at(u);
            double c = model.cost(y, uv);
            if (capped) c = std::min(c, rule.value);
            sup_cost = std::max(sup_cost, c);
            dsys.pairs.push_back({s, u, snap(model.dynamics(y, uv)), c});
        }
    }

    switch (rule.kind) {
        case CostAtInfRule::Kind::Explicit: dsys.cost_at_inf = rule.value; break;
        case CostAtInfRule::Kind::SupOverGrid: dsys.cost_at_inf = sup_cost; break;
        case CostAtInfRule::Kind::Truncation: dsys.cost_at_inf = rule.value; break;
    }
    for (size_t u = 0; u < dsys.controls.size(); ++u) {
        dsys.pairs.push_back({inf, static_cast<int>(u), inf, dsys.cost_at_inf});
    }
    dsys.index_pairs();

    if (dsys.admissible_pairs().empty()) {
        throw std::runtime_error("grid yields no admissible pairs (no viable discrete dynamics)");
    }
    return dsys;
}

DiscretizedSystem restrict_to_G(const DiscretizedSystem& dsys) {
    DiscretizedSystem out;
    out.states = dsys.states;
    out.controls = dsys.controls;
    out.has_inf = false;
    out.cost_at_inf = dsys.cost_at_inf;
    for (int id : dsys.admissible_pairs()) out.pairs.push_back(dsys.pairs[id]);
    if (out.pairs.empty()) {
        throw std::runtime_error("restriction to G leaves no admissible pairs");
    }
    out.index_pairs();
    return out;
}

}   // namespace occulp
