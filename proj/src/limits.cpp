#include "occulp/limits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace occulp {

namespace {

int worker_count(size_t points) {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("OCCULP_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    }
    return static_cast<int>(std::min<size_t>(hw, points));
}

// Runs fn(i) for i in [0, count) across workers; fn must only touch slot i.
void parallel_for(size_t count, const std::function<void(size_t)>& fn) {
    const int workers = count == 0 ? 0 : worker_count(count);
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

void solve_g_star(const DiscretizedSystem& dsys, const TestFunctionBasis& basis,
                  double lp_tol, SweepReport& report) {
    LinearProgram lp = build_average_lp(dsys, basis, false);
    LPSolution sol = solve(lp, lp_tol);
    report.g_star = sol.objective;
    report.g_star_status = sol.status;

    LinearProgram clp = build_average_lp(dsys, basis, true);
    LPSolution csol = solve(clp, lp_tol);
    report.g_star_compactified = csol.objective;
    report.compactified_inf_mass = csol.inf_mass;
    report.cost_at_inf = dsys.cost_at_inf;
}

void finalize_verdict(SweepReport& report) {
    std::vector<double> gaps;
    for (SweepPoint& pt : report.points) {
        if (!pt.ok) continue;
        if (report.g_star_status == LPSolution::Status::Optimal) {
            pt.gap = std::abs(pt.min_value - report.g_star);
            gaps.push_back(pt.gap);
        } else {
            pt.gap = std::numeric_limits<double>::quiet_NaN();
        }
    }
    bool converging = report.g_star_status == LPSolution::Status::Optimal && !gaps.empty() &&
                      gaps.size() == report.points.size();
    const size_t window = std::min<size_t>(3, gaps.size());
    for (size_t i = gaps.size() - window; converging && i + 1 < gaps.size(); ++i) {
        if (gaps[i + 1] > gaps[i] + 1e-15) converging = false;
    }
    report.verdict = converging ? "converging" : "non-converging";
}

}   // namespace

SweepReport abel_sweep(const DiscretizedSystem& dsys, const TestFunctionBasis& basis,
                       const std::vector<double>& alphas, double vi_tol, double lp_tol) {
    if (alphas.empty() || !std::is_sorted(alphas.begin(), alphas.end()) ||
        std::adjacent_find(alphas.begin(), alphas.end()) != alphas.end()) {
        throw std::invalid_argument("alphas must be a nonempty strictly increasing list");
    }
    for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    }

    SweepReport report;
    report.kind = SweepReport::Kind::Abel;
    report.vi_tol = vi_tol;
    report.lp_tol = lp_tol;
    solve_g_star(dsys, basis, lp_tol, report);

    report.points.resize(alphas.size());
    parallel_for(alphas.size(), [&](size_t i) {
        SweepPoint& pt = report.points[i];
        pt.schedule_value = alphas[i];
        try {
            ValueFunction vf = value_iteration(dsys, alphas[i], vi_tol);
            MinResult mr = min_over_states(dsys, vf, true);
            pt.min_value = mr.value;
            pt.argmin_state = mr.state;
            pt.tie_count = mr.tie_count;
            A1Entry a1 = a1_discounted_entry(dsys, vf);
            pt.a1_radius = a1.max_radius;
            pt.touches_inf = a1.touches_inf;
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
    });
    finalize_verdict(report);
    return report;
}

SweepReport cesaro_sweep(const DiscretizedSystem& dsys, const TestFunctionBasis& basis,
                         const std::vector<long long>& horizons, double vi_tol, double lp_tol) {
    if (horizons.empty() || !std::is_sorted(horizons.begin(), horizons.end()) ||
        std::adjacent_find(horizons.begin(), horizons.end()) != horizons.end()) {
        throw std::invalid_argument("horizons must be a nonempty strictly increasing list");
    }
    for (long long s : horizons) {
        if (s <= 0) throw std::invalid_argument("horizon must be positive");
    }

    SweepReport report;
    report.kind = SweepReport::Kind::Cesaro;
    report.vi_tol = vi_tol;
    report.lp_tol = lp_tol;
    solve_g_star(dsys, basis, lp_tol, report);

    report.points.resize(horizons.size());
    parallel_for(horizons.size(), [&](size_t i) {
        SweepPoint& pt = report.points[i];
        pt.schedule_value = static_cast<double>(horizons[i]);
        try {
            FiniteHorizonValue fh = finite_horizon(dsys, horizons[i]);
            MinResult mr = min_over_states(dsys, fh.vf, true);
            pt.min_value = mr.value;
            pt.argmin_state = mr.state;
            pt.tie_count = mr.tie_count;
            A1Entry a1 = a1_cesaro_entry(dsys, fh);
            pt.a1_radius = a1.max_radius;
            pt.touches_inf = a1.touches_inf;
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
    });
    finalize_verdict(report);
    return report;
}

TruncatedReport truncated_sweep(const SystemModel& model, const GridSpec& grid,
                                const BasisSpec& basis, const std::vector<double>& caps,
                                const std::vector<double>& alphas,
                                const std::vector<long long>& horizons, double vi_tol,
                                double lp_tol) {
    if (caps.empty() || !std::is_sorted(caps.begin(), caps.end()) ||
        std::adjacent_find(caps.begin(), caps.end()) != caps.end()) {
        throw std::invalid_argument("truncation caps must be a nonempty strictly increasing list");
    }

    TruncatedReport report;
    for (double m : caps) {
        DiscretizedSystem dsys = build(model, grid, CostAtInfRule::truncation(m));
        TestFunctionBasis fns = basis.instantiate(dsys);
        TruncatedEntry entry{m, abel_sweep(dsys, fns, alphas, vi_tol, lp_tol),
                             cesaro_sweep(dsys, fns, horizons, vi_tol, lp_tol),
                             check_A1(dsys, alphas, horizons, vi_tol)};
        report.entries.push_back(std::move(entry));
    }

    if (report.entries.size() >= 2) {
        const TruncatedEntry& a = report.entries[report.entries.size() - 2];
        const TruncatedEntry& b = report.entries.back();
        auto same = [](const SweepReport& x, const SweepReport& y) {
            if (x.points.size() != y.points.size()) return false;
            for (size_t i = 0; i < x.points.size(); ++i) {
                if (!x.points[i].ok || !y.points[i].ok) return false;
                if (std::abs(x.points[i].min_value - y.points[i].min_value) > 1e-9) return false;
            }
            return true;
        };
        report.stabilized = same(a.abel, b.abel) && same(a.cesaro, b.cesaro);
    }
    return report;
}

double probe_value(const Probe& probe, const DiscretizedSystem& dsys, int node, int control) {
    if (dsys.is_inf(node)) return probe.at_inf;
    return probe.fn(dsys.states.at(node), control);
}

std::vector<Probe> standard_probes(const DiscretizedSystem& dsys) {
    const int dim = static_cast<int>(dsys.states.at(0).size());
    State lo = dsys.states[0], hi = dsys.states[0];
    for (const State& y : dsys.states) {
        for (int d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], y[d]);
            hi[d] = std::max(hi[d], y[d]);
        }
    }
    double diag = 0.0;
    for (int d = 0; d < dim; ++d) diag += (hi[d] - lo[d]) * (hi[d] - lo[d]);
    diag = std::sqrt(diag);
    const double width = diag > 0.0 ? diag / 10.0 : 1.0;

    std::vector<Probe> probes;
    probes.push_back({"const1", [](const State&, int) { return 1.0; }, 1.0});
    probes.push_back(
        {"normmap", [](const State& y, int) { return norm(y) / (1.0 + norm(y)); }, 1.0});
    for (int d = 0; d < dim; ++d) {
        probes.push_back({"coord_" + std::to_string(d),
                          [d](const State& y, int) { return y[d] / (1.0 + norm(y)); }, 1.0});
    }
    for (int j = 0; j < 5; ++j) {
        State center(dim);
        for (int d = 0; d < dim; ++d) center[d] = lo[d] + (j + 0.5) / 5.0 * (hi[d] - lo[d]);
        probes.push_back({"bump_" + std::to_string(j),
                          [center, width](const State& y, int) {
                              double d2 = 0.0;
                              for (size_t d = 0; d < y.size(); ++d) {
                                  d2 += (y[d] - center[d]) * (y[d] - center[d]);
                              }
                              return std::exp(-d2 / (2.0 * width * width));
                          },
                          0.0});
    }
    for (int u = 0; u < static_cast<int>(dsys.controls.size()); ++u) {
        probes.push_back({"ctrl_" + std::to_string(u),
                          [u](const State&, int control) { return control == u ? 1.0 : 0.0; },
                          0.0});
    }
    return probes;
}

double moment_distance(const std::map<PairKey, double>& w1, const std::map<PairKey, double>& w2,
                       const DiscretizedSystem& dsys, const std::vector<Probe>& probes) {
    double dist = 0.0;
    for (const Probe& probe : probes) {
        double m1 = 0.0, m2 = 0.0;
        for (const auto& [key, w] : w1) m1 += w * probe_value(probe, dsys, key.first, key.second);
        for (const auto& [key, w] : w2) m2 += w * probe_value(probe, dsys, key.first, key.second);
        dist = std::max(dist, std::abs(m1 - m2));
    }
    return dist;
}

double moment_distance(const OccupationalMeasure& mu1, const OccupationalMeasure& mu2,
                       const DiscretizedSystem& dsys, const std::vector<Probe>& probes) {
    return moment_distance(mu1.weights, mu2.weights, dsys, probes);
}

}   // namespace occulp
