#pragma once

#include <string>
#include <vector>

#include "occulp/system.hpp"

namespace occulp {

/// Uniform rectangular grid: per dimension d, steps_per_dim[d] intervals
/// between lower[d] and upper[d], i.e. steps_per_dim[d]+1 points per axis.
struct GridSpec {
    State lower;
    State upper;
    std::vector<int> steps_per_dim;

    bool operator==(const GridSpec&) const = default;
};

/// How to assign a running cost to the absorbing infinity node.
struct CostAtInfRule {
    enum class Kind { Explicit, SupOverGrid, Truncation };
    Kind kind = Kind::SupOverGrid;
    double value = 0.0;   // Explicit value or truncation level M

    static CostAtInfRule explicit_value(double v) { return {Kind::Explicit, v}; }
    static CostAtInfRule sup_over_grid() { return {Kind::SupOverGrid, 0.0}; }
    /// Caps every pair cost at M and sets cost_at_inf = M.
    static CostAtInfRule truncation(double m) { return {Kind::Truncation, m}; }
};

/// One admissible (state, control) pair of the finite system with its snapped
/// successor and running cost.
struct Pair {
    int state;
    int control;
    int next;
    double cost;
};

/**
 * Finite state-control system over a grid, compactified by one absorbing
 * infinity node. Grid states occupy indices 0..states.size()-1; the infinity
 * node, when present, is the extra node index states.size(). Dynamics images
 * that leave the grid box, violate the state constraint, or snap onto an
 * excluded point all map to the infinity node, which carries the full control
 * list and self-loops under every control.
 */
struct DiscretizedSystem {
    std::vector<State> states;
    std::vector<Control> controls;
    bool has_inf = true;
    double cost_at_inf = 0.0;
    std::vector<Pair> pairs;
    std::vector<std::vector<int>> pairs_by_state;   // node index -> pair ids

    int inf_index() const { return static_cast<int>(states.size()); }
    int num_nodes() const { return static_cast<int>(states.size()) + (has_inf ? 1 : 0); }
    bool is_inf(int node) const { return has_inf && node == inf_index(); }

    /// Pair id for (state, control), or -1 when the pair does not exist.
    int find_pair(int state, int control) const;

    /// G_h: ids of pairs whose state and successor are both grid states.
    std::vector<int> admissible_pairs() const;

    /// Euclidean norm of a node's state; +infinity for the infinity node.
    double state_norm(int node) const;

    /// Rebuilds pairs_by_state from pairs (for hand-assembled systems).
    void index_pairs();
};

/// Discretizes the model over the grid. Points violating the state constraint
/// are dropped; snapping is nearest-point with midpoint ties toward the
/// lexicographically smaller index. Throws std::invalid_argument on malformed
/// grids or non-viable grid states, std::runtime_error when no admissible
/// pair survives.
DiscretizedSystem build(const SystemModel& model, const GridSpec& grid,
                        const CostAtInfRule& rule = CostAtInfRule::sup_over_grid());

/// Drops the infinity node and every pair leading to it; the result is the
/// finite analogue of G. Throws std::runtime_error if nothing remains.
DiscretizedSystem restrict_to_G(const DiscretizedSystem& dsys);

}   // namespace occulp
