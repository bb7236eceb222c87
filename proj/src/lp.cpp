#include "occulp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "occulp/dp.hpp"
#include "occulp/io.hpp"

namespace occulp {

TestFunctionBasis indicator_basis(const DiscretizedSystem& dsys) {
    TestFunctionBasis basis;
    basis.name = "indicator";
    const int n = static_cast<int>(dsys.states.size());
    for (int s = 0; s < n; ++s) {
        TestFunction f;
        f.name = "ind_" + std::to_string(s);
        f.values.assign(n, 0.0);
        f.values[s] = 1.0;
        f.at_inf = 0.0;
        basis.functions.push_back(std::move(f));
    }
    return basis;
}

TestFunctionBasis smooth_basis(const DiscretizedSystem& dsys, int bump_count, double width) {
    if (bump_count < 0) throw std::invalid_argument("bump_count must be nonnegative");
    if (!(width > 0.0)) throw std::invalid_argument("width must be positive");

    const int n = static_cast<int>(dsys.states.size());
    const int dim = static_cast<int>(dsys.states.at(0).size());
    State lo = dsys.states[0], hi = dsys.states[0];
    for (const State& y : dsys.states) {
        for (int d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], y[d]);
            hi[d] = std::max(hi[d], y[d]);
        }
    }

    TestFunctionBasis basis;
    basis.name = "smooth";
    auto add = [&](const std::string& name, auto&& fn, double at_inf) {
        TestFunction f;
        f.name = name;
        f.values.resize(n);
        for (int s = 0; s < n; ++s) f.values[s] = fn(dsys.states[s]);
        f.at_inf = at_inf;
        basis.functions.push_back(std::move(f));
    };

    add("const1", [](const State&) { return 1.0; }, 1.0);
    for (int d = 0; d < dim; ++d) {
        add("coord_" + std::to_string(d),
            [d](const State& y) { return y[d] / (1.0 + norm(y)); }, 1.0);
    }
    for (int j = 0; j < bump_count; ++j) {
        State center(dim);
        for (int d = 0; d < dim; ++d) {
            center[d] = lo[d] + (j + 0.5) / bump_count * (hi[d] - lo[d]);
        }
        add("bump_" + std::to_string(j),
            [center, width](const State& y) {
                double d2 = 0.0;
                for (size_t d = 0; d < y.size(); ++d) {
                    d2 += (y[d] - center[d]) * (y[d] - center[d]);
                }
                return std::exp(-d2 / (2.0 * width * width));
            },
            0.0);
    }
    return basis;
}

TestFunctionBasis BasisSpec::instantiate(const DiscretizedSystem& dsys) const {
    return kind == Kind::Indicator ? indicator_basis(dsys)
                                   : smooth_basis(dsys, bump_count, width);
}

const char* to_string(LPSolution::Status status) {
    switch (status) {
        case LPSolution::Status::Optimal: return "optimal";
        case LPSolution::Status::Infeasible: return "infeasible";
        case LPSolution::Status::Unbounded: return "unbounded";
        case LPSolution::Status::Stalled: return "stalled";
    }
    return "unknown";
}

namespace {

LinearProgram lp_skeleton(const DiscretizedSystem& dsys, const std::vector<int>& pair_ids) {
    LinearProgram lp;
    for (int id : pair_ids) {
        const Pair& pr = dsys.pairs[id];
        lp.var_pair.push_back(id);
        lp.var_names.push_back("(" + std::to_string(pr.state) + "," +
                               std::to_string(pr.control) + ")");
        lp.var_at_inf.push_back(dsys.is_inf(pr.state) ? 1 : 0);
        lp.objective.push_back(pr.cost);
    }
    return lp;
}

void add_normalization_row(LinearProgram& lp) {
    lp.rows.emplace_back(lp.objective.size(), 1.0);
    lp.rhs.push_back(1.0);
    lp.row_names.push_back("normalization");
}

std::vector<int> all_pair_ids(const DiscretizedSystem& dsys) {
    std::vector<int> ids(dsys.pairs.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    return ids;
}

}   // namespace

LinearProgram build_discounted_lp(const DiscretizedSystem& dsys, const TestFunctionBasis& basis,
                                  double alpha, int y0) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (y0 < 0 || y0 >= static_cast<int>(dsys.states.size())) {
        throw std::invalid_argument("y0 must be a grid state");
    }

    LinearProgram lp = lp_skeleton(dsys, all_pair_ids(dsys));
    for (const TestFunction& phi : basis.functions) {
        std::vector<double> row(lp.var_pair.size());
        const double phi_y0 = phi.value_at(dsys, y0);
        for (size_t j = 0; j < lp.var_pair.size(); ++j) {
            const Pair& pr = dsys.pairs[lp.var_pair[j]];
            row[j] = alpha * (phi.value_at(dsys, pr.next) - phi.value_at(dsys, pr.state)) +
                     (1.0 - alpha) * (phi_y0 - phi.value_at(dsys, pr.state));
        }
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(0.0);
        lp.row_names.push_back(phi.name);
    }
    add_normalization_row(lp);
    return lp;
}

LinearProgram build_average_lp(const DiscretizedSystem& dsys, const TestFunctionBasis& basis,
                               bool compactified) {
    std::vector<int> ids = compactified ? all_pair_ids(dsys) : dsys.admissible_pairs();
    if (ids.empty()) throw std::runtime_error("no admissible pairs");

    LinearProgram lp = lp_skeleton(dsys, ids);
    for (const TestFunction& phi : basis.functions) {
        std::vector<double> row(lp.var_pair.size());
        for (size_t j = 0; j < lp.var_pair.size(); ++j) {
            const Pair& pr = dsys.pairs[lp.var_pair[j]];
            row[j] = phi.value_at(dsys, pr.next) - phi.value_at(dsys, pr.state);
        }
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(0.0);
        lp.row_names.push_back(phi.name);
    }
    add_normalization_row(lp);
    return lp;
}

namespace {

constexpr double kPivotEps = 1e-11;
constexpr long long kIterationCap = 200000;

// Full-tableau simplex state over structural columns; artificial variables
// exist only as basis markers (basis entry -1-r means the artificial of
// original row r), since their columns are never needed after they leave.
struct Tableau {
    int n = 0;
    std::vector<std::vector<double>> T;
    std::vector<double> rhs;
    std::vector<int> basis;
    std::vector<int> row_ids;
    std::vector<char> in_basis;   // structural columns currently basic
    long long iterations = 0;

    bool artificial(int i) const { return basis[i] < 0; }

    // Bland ordering key: structural columns first by index, artificials after.
    int bland_key(int i) const { return basis[i] >= 0 ? basis[i] : n + (-basis[i] - 1); }

    void pivot(int row, int col) {
        const double p = T[row][col];
        for (double& v : T[row]) v /= p;
        rhs[row] /= p;
        T[row][col] = 1.0;
        for (size_t i = 0; i < T.size(); ++i) {
            if (static_cast<int>(i) == row) continue;
            const double f = T[i][col];
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) T[i][j] -= f * T[row][j];
            T[i][col] = 0.0;
            rhs[i] -= f * rhs[row];
        }
        if (basis[row] >= 0) in_basis[basis[row]] = 0;
        basis[row] = col;
        in_basis[col] = 1;
        ++iterations;
    }

    // 0 = phase optimal, 1 = unbounded, 2 = iteration cap reached.
    int run_phase(const std::vector<double>& cost, bool phase1, double enter_eps) {
        const int m = static_cast<int>(T.size());
        for (;;) {
            if (iterations >= kIterationCap) return 2;
            int enter = -1;
            for (int j = 0; j < n && enter < 0; ++j) {
                if (in_basis[j]) continue;
                double r = cost[j];
                for (int i = 0; i < m; ++i) {
                    const double cb = artificial(i) ? (phase1 ? 1.0 : 0.0) : cost[basis[i]];
                    if (cb != 0.0) r -= cb * T[i][j];
                }
                if (r < -enter_eps) enter = j;   // Bland: smallest eligible index
            }
            if (enter < 0) return 0;

            int leave = -1;
            double best = 0.0;
            for (int i = 0; i < m; ++i) {
                if (T[i][enter] > kPivotEps) {
                    const double ratio = rhs[i] / T[i][enter];
                    if (leave < 0 || ratio < best ||
                        (ratio == best && bland_key(i) < bland_key(leave))) {
                        leave = i;
                        best = ratio;
                    }
                }
            }
            if (leave < 0) return 1;
            pivot(leave, enter);
        }
    }
};

}   // namespace

LPSolution solve(const LinearProgram& lp, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const int m = static_cast<int>(lp.rows.size());
    const int n = static_cast<int>(lp.objective.size());
    for (const auto& row : lp.rows) {
        if (static_cast<int>(row.size()) != n) {
            throw std::invalid_argument("LP row length does not match variable count");
        }
    }

    Tableau tb;
    tb.n = n;
    tb.T = lp.rows;
    tb.rhs = lp.rhs;
    tb.in_basis.assign(n, 0);
    for (int i = 0; i < m; ++i) {
        if (tb.rhs[i] < 0.0) {
            for (double& v : tb.T[i]) v = -v;
            tb.rhs[i] = -tb.rhs[i];
        }
        tb.basis.push_back(-1 - i);
        tb.row_ids.push_back(i);
    }

    LPSolution sol;
    auto finish = [&](LPSolution::Status status) {
        sol.status = status;
        sol.iterations = tb.iterations;
        sol.weights.assign(n, 0.0);
        for (size_t i = 0; i < tb.T.size(); ++i) {
            if (!tb.artificial(i)) sol.weights[tb.basis[i]] = std::max(0.0, tb.rhs[i]);
        }
        sol.objective = 0.0;
        for (int j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.weights[j];
        sol.max_residual = 0.0;
        for (int i = 0; i < m; ++i) {
            double ax = 0.0;
            for (int j = 0; j < n; ++j) ax += lp.rows[i][j] * sol.weights[j];
            sol.max_residual = std::max(sol.max_residual, std::abs(ax - lp.rhs[i]));
        }
        sol.inf_mass = 0.0;
        for (int j = 0; j < n; ++j) {
            if (lp.var_at_inf[j]) sol.inf_mass += sol.weights[j];
        }
        return sol;
    };

    // Phase 1: minimize the artificial mass.
    const std::vector<double> zero_cost(n, 0.0);
    int rc = tb.run_phase(zero_cost, true, kPivotEps);
    if (rc == 2) return finish(LPSolution::Status::Stalled);
    double artificial_mass = 0.0;
    for (size_t i = 0; i < tb.T.size(); ++i) {
        if (tb.artificial(i)) artificial_mass += tb.rhs[i];
    }
    if (artificial_mass > tol) return finish(LPSolution::Status::Infeasible);

    // Drive remaining zero-level artificials out; rows with no structural
    // pivot entry are redundant and dropped.
    for (int i = static_cast<int>(tb.T.size()) - 1; i >= 0; --i) {
        if (!tb.artificial(i)) continue;
        int col = -1;
        for (int j = 0; j < tb.n && col < 0; ++j) {
            if (!tb.in_basis[j] && std::abs(tb.T[i][j]) > kPivotEps) col = j;
        }
        if (col >= 0) {
            tb.pivot(i, col);
        } else {
            tb.T.erase(tb.T.begin() + i);
            tb.rhs.erase(tb.rhs.begin() + i);
            tb.basis.erase(tb.basis.begin() + i);
            tb.row_ids.erase(tb.row_ids.begin() + i);
        }
    }

    // Phase 2 on the original objective.
    const double enter_eps = std::max(tol / 10.0, 1e-12);
    rc = tb.run_phase(lp.objective, false, enter_eps);
    if (rc == 2) return finish(LPSolution::Status::Stalled);
    if (rc == 1) return finish(LPSolution::Status::Unbounded);

    finish(LPSolution::Status::Optimal);

    // Reduced-cost certificate at termination.
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        if (tb.in_basis[j]) continue;
        double r = lp.objective[j];
        for (size_t i = 0; i < tb.T.size(); ++i) {
            const double cb = tb.artificial(i) ? 0.0 : lp.objective[tb.basis[i]];
            if (cb != 0.0) r -= cb * tb.T[i][j];
        }
        worst = std::min(worst, r);
    }
    sol.certificate = -worst;
    if (sol.max_residual > tol || sol.certificate > tol) {
        sol.status = LPSolution::Status::Stalled;
    }
    return sol;
}

std::string to_text(const LinearProgram& lp) {
    auto terms = [&](const std::vector<double>& coef) {
        std::ostringstream os;
        bool first = true;
        for (size_t j = 0; j < coef.size(); ++j) {
            if (coef[j] == 0.0) continue;
            if (!first) os << " + ";
            os << format_double(coef[j]) << " " << lp.var_names[j];
            first = false;
        }
        if (first) os << "0";
        return os.str();
    };

    std::ostringstream os;
    os << "minimize\n  " << terms(lp.objective) << "\nsubject to\n";
    for (size_t i = 0; i < lp.rows.size(); ++i) {
        os << "  " << lp.row_names[i] << ": " << terms(lp.rows[i]) << " = "
           << format_double(lp.rhs[i]) << "\n";
    }
    os << "with all variables >= 0\n";
    return os.str();
}

std::map<PairKey, double> solution_weights(const LinearProgram& lp, const LPSolution& sol,
                                           const DiscretizedSystem& dsys) {
    std::map<PairKey, double> weights;
    for (size_t j = 0; j < sol.weights.size(); ++j) {
        if (sol.weights[j] != 0.0) {
            const Pair& pr = dsys.pairs[lp.var_pair[j]];
            weights[{pr.state, pr.control}] += sol.weights[j];
        }
    }
    return weights;
}

EqRes1Report verify_eq_res1(const DiscretizedSystem& dsys, const TestFunctionBasis& basis,
                            double alpha, int y0, double tol) {
    ValueFunction vf =
        value_iteration(dsys, alpha, std::clamp(tol / 100.0, 1e-14, 1e-8));
    LinearProgram lp = build_discounted_lp(dsys, basis, alpha, y0);
    LPSolution sol = solve(lp, std::min(tol, 1e-9));

    EqRes1Report report;
    report.lp_value = sol.objective;
    report.vi_value = vf.values.at(y0);
    report.diff = std::abs(report.lp_value - report.vi_value);
    report.lp_status = sol.status;
    report.pass = sol.status == LPSolution::Status::Optimal && report.diff <= tol;
    return report;
}

TailMassReport infinity_mass_profile(const LPSolution& sol, const LinearProgram& lp,
                                     const DiscretizedSystem& dsys,
                                     const std::vector<double>& radii) {
    TailMassReport report;
    report.radii = radii;
    report.tail_mass.assign(radii.size(), 0.0);
    for (size_t j = 0; j < sol.weights.size(); ++j) {
        const double w = sol.weights[j];
        if (w == 0.0) continue;
        const Pair& pr = dsys.pairs[lp.var_pair[j]];
        const double r = dsys.state_norm(pr.state);
        for (size_t k = 0; k < radii.size(); ++k) {
            if (r > radii[k]) report.tail_mass[k] += w;
        }
        if (dsys.is_inf(pr.state)) {
            report.inf_mass += w;
        } else if (dsys.is_inf(pr.next)) {
            report.escaping_mass += w;
        }
    }
    report.supported_on_G = report.inf_mass <= 1e-12 && report.escaping_mass <= 1e-12;
    return report;
}

}   // namespace occulp
