#include "occulp/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

namespace occulp::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return it.key() == k; });
        if (!known) {
            fail("unknown key '" + (path.empty() ? it.key() : path + "." + it.key()) + "'");
        }
    }
}

const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) fail("missing required key '" + path + "'");
    return j.at(key);
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail("'" + path + "' must be a string");
    return v.get<std::string>();
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail("'" + path + "' must be a number");
    return v.get<double>();
}

long long as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail("'" + path + "' must be an integer");
    return v.get<long long>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) fail("'" + path + "' must be a boolean");
    return v.get<bool>();
}

std::vector<double> as_number_array(const json& v, const std::string& path) {
    if (!v.is_array()) fail("'" + path + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_number(e, path));
    return out;
}

Params as_params(const json& v, const std::string& path) {
    if (!v.is_object()) fail("'" + path + "' must be an object of numbers");
    Params params;
    for (auto it = v.begin(); it != v.end(); ++it) {
        params[it.key()] = as_number(it.value(), path + "." + it.key());
    }
    return params;
}

void validate_config(const RunConfig& cfg) {
    static const std::set<std::string> experiments = {
        "simulate",   "value-iter", "finite-horizon",  "solve-lp",
        "sweep-abel", "sweep-cesaro", "sweep-truncated", "verify"};
    if (!experiments.count(cfg.experiment)) {
        fail("unknown experiment '" + cfg.experiment + "'");
    }
    if (cfg.experiment != "simulate" && !cfg.grid) {
        fail("grid is required for experiment '" + cfg.experiment + "'");
    }
    if (cfg.experiment == "simulate" && !cfg.simulate) {
        fail("simulate section is required for experiment 'simulate'");
    }
    if (cfg.experiment == "solve-lp" && !cfg.lp) {
        fail("lp section is required for experiment 'solve-lp'");
    }
    if ((cfg.experiment == "value-iter" || cfg.experiment == "sweep-abel") &&
        cfg.alphas.empty()) {
        fail("schedules.alphas must be nonempty for experiment '" + cfg.experiment + "'");
    }
    if ((cfg.experiment == "finite-horizon" || cfg.experiment == "sweep-cesaro") &&
        cfg.horizons.empty()) {
        fail("schedules.horizons must be nonempty for experiment '" + cfg.experiment + "'");
    }
    if (cfg.experiment == "sweep-truncated" &&
        (cfg.truncations.empty() || cfg.alphas.empty() || cfg.horizons.empty())) {
        fail("sweep-truncated requires schedules.truncations, schedules.alphas and "
             "schedules.horizons");
    }
}

}   // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("config must be a JSON object");
    check_keys(root, "", {"system", "grid", "cost", "basis", "experiment", "schedules",
                          "tolerances", "output_dir", "simulate", "lp"});

    RunConfig cfg;

    const json& sys = require(root, "system", "system");
    if (!sys.is_object()) fail("'system' must be an object");
    check_keys(sys, "system", {"name", "parameters"});
    cfg.system_name = as_string(require(sys, "name", "system.name"), "system.name");
    if (sys.contains("parameters")) {
        cfg.system_params = as_params(sys.at("parameters"), "system.parameters");
    }

    if (root.contains("grid")) {
        const json& grid = root.at("grid");
        if (!grid.is_object()) fail("'grid' must be an object");
        check_keys(grid, "grid", {"lower", "upper", "steps"});
        GridSpec gs;
        gs.lower = as_number_array(require(grid, "lower", "grid.lower"), "grid.lower");
        gs.upper = as_number_array(require(grid, "upper", "grid.upper"), "grid.upper");
        const json& steps = require(grid, "steps", "grid.steps");
        if (!steps.is_array()) fail("'grid.steps' must be an array of integers");
        for (const auto& e : steps) {
            long long s = as_integer(e, "grid.steps");
            if (s <= 0) fail("grid.steps entries must be positive");
            gs.steps_per_dim.push_back(static_cast<int>(s));
        }
        if (gs.lower.size() != gs.upper.size() ||
            gs.lower.size() != gs.steps_per_dim.size() || gs.lower.empty()) {
            fail("grid.lower, grid.upper and grid.steps must have equal nonzero lengths");
        }
        cfg.grid = std::move(gs);
    }

    const json& cost = require(root, "cost", "cost");
    if (!cost.is_object()) fail("'cost' must be an object");
    check_keys(cost, "cost", {"name", "parameters", "truncation", "at_inf"});
    cfg.cost_name = as_string(require(cost, "name", "cost.name"), "cost.name");
    if (cost.contains("parameters")) {
        cfg.cost_params = as_params(cost.at("parameters"), "cost.parameters");
    }
    if (cost.contains("truncation")) {
        cfg.cost_truncation = as_number(cost.at("truncation"), "cost.truncation");
    }
    if (cost.contains("at_inf")) {
        cfg.cost_at_inf = as_number(cost.at("at_inf"), "cost.at_inf");
    }
    if (cfg.cost_truncation && cfg.cost_at_inf) {
        fail("cost.truncation and cost.at_inf are mutually exclusive");
    }

    if (root.contains("basis")) {
        const json& basis = root.at("basis");
        if (!basis.is_object()) fail("'basis' must be an object");
        std::string kind = as_string(require(basis, "kind", "basis.kind"), "basis.kind");
        if (kind == "indicator") {
            check_keys(basis, "basis", {"kind"});
            cfg.basis.kind = BasisSpec::Kind::Indicator;
        } else if (kind == "smooth") {
            check_keys(basis, "basis", {"kind", "count", "width"});
            cfg.basis.kind = BasisSpec::Kind::Smooth;
            if (basis.contains("count")) {
                long long c = as_integer(basis.at("count"), "basis.count");
                if (c < 0) fail("basis.count must be nonnegative");
                cfg.basis.bump_count = static_cast<int>(c);
            }
            if (basis.contains("width")) {
                cfg.basis.width = as_number(basis.at("width"), "basis.width");
                if (!(cfg.basis.width > 0.0)) fail("basis.width must be positive");
            }
        } else {
            fail("basis.kind must be 'indicator' or 'smooth'");
        }
    }

    cfg.experiment =
        as_string(require(root, "experiment", "experiment"), "experiment");

    if (root.contains("schedules")) {
        const json& sched = root.at("schedules");
        if (!sched.is_object()) fail("'schedules' must be an object");
        check_keys(sched, "schedules", {"alphas", "horizons", "truncations"});
        if (sched.contains("alphas")) {
            cfg.alphas = as_number_array(sched.at("alphas"), "schedules.alphas");
            for (double a : cfg.alphas) {
                if (!(a > 0.0 && a < 1.0)) fail("alpha must lie in (0,1)");
            }
        }
        if (sched.contains("horizons")) {
            const json& hs = sched.at("horizons");
            if (!hs.is_array()) fail("'schedules.horizons' must be an array of integers");
            for (const auto& e : hs) {
                long long s = as_integer(e, "schedules.horizons");
                if (s <= 0) fail("horizon must be positive");
                cfg.horizons.push_back(s);
            }
        }
        if (sched.contains("truncations")) {
            cfg.truncations = as_number_array(sched.at("truncations"), "schedules.truncations");
        }
    }

    if (root.contains("tolerances")) {
        const json& tols = root.at("tolerances");
        if (!tols.is_object()) fail("'tolerances' must be an object");
        check_keys(tols, "tolerances", {"vi_tol", "lp_tol"});
        if (tols.contains("vi_tol")) cfg.vi_tol = as_number(tols.at("vi_tol"), "tolerances.vi_tol");
        if (tols.contains("lp_tol")) cfg.lp_tol = as_number(tols.at("lp_tol"), "tolerances.lp_tol");
        if (!(cfg.vi_tol > 0.0) || !(cfg.lp_tol > 0.0)) fail("tolerances must be positive");
    }

    if (root.contains("output_dir")) {
        cfg.output_dir = as_string(root.at("output_dir"), "output_dir");
    }

    if (root.contains("simulate")) {
        const json& sim = root.at("simulate");
        if (!sim.is_object()) fail("'simulate' must be an object");
        check_keys(sim, "simulate", {"y0", "control", "horizon"});
        SimulateSpec sp;
        sp.y0 = as_number_array(require(sim, "y0", "simulate.y0"), "simulate.y0");
        sp.control =
            static_cast<int>(as_integer(require(sim, "control", "simulate.control"),
                                        "simulate.control"));
        long long h =
            as_integer(require(sim, "horizon", "simulate.horizon"), "simulate.horizon");
        if (h <= 0) fail("horizon must be positive");
        sp.horizon = static_cast<int>(h);
        cfg.simulate = std::move(sp);
    }

    if (root.contains("lp")) {
        const json& lp = root.at("lp");
        if (!lp.is_object()) fail("'lp' must be an object");
        check_keys(lp, "lp", {"kind", "alpha", "y0", "compactified"});
        LpSpec spec;
        spec.kind = as_string(require(lp, "kind", "lp.kind"), "lp.kind");
        if (spec.kind != "average" && spec.kind != "discounted") {
            fail("lp.kind must be 'average' or 'discounted'");
        }
        if (lp.contains("alpha")) {
            spec.alpha = as_number(lp.at("alpha"), "lp.alpha");
            if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) fail("alpha must lie in (0,1)");
        }
        if (lp.contains("y0")) spec.y0 = as_number_array(lp.at("y0"), "lp.y0");
        if (lp.contains("compactified")) {
            spec.compactified = as_bool(lp.at("compactified"), "lp.compactified");
        }
        if (spec.kind == "discounted" && spec.y0.empty()) {
            fail("lp.y0 is required for discounted LPs");
        }
        cfg.lp = std::move(spec);
    }

    validate_config(cfg);
    return cfg;
}

std::string emit_config(const RunConfig& cfg) {
    ojson j;
    j["system"]["name"] = cfg.system_name;
    j["system"]["parameters"] = ojson::object();
    for (const auto& [k, v] : cfg.system_params) j["system"]["parameters"][k] = v;
    if (cfg.grid) {
        j["grid"]["lower"] = cfg.grid->lower;
        j["grid"]["upper"] = cfg.grid->upper;
        j["grid"]["steps"] = cfg.grid->steps_per_dim;
    }
    j["cost"]["name"] = cfg.cost_name;
    j["cost"]["parameters"] = ojson::object();
    for (const auto& [k, v] : cfg.cost_params) j["cost"]["parameters"][k] = v;
    if (cfg.cost_truncation) j["cost"]["truncation"] = *cfg.cost_truncation;
    if (cfg.cost_at_inf) j["cost"]["at_inf"] = *cfg.cost_at_inf;
    if (cfg.basis.kind == BasisSpec::Kind::Indicator) {
        j["basis"]["kind"] = "indicator";
    } else {
        j["basis"]["kind"] = "smooth";
        j["basis"]["count"] = cfg.basis.bump_count;
        j["basis"]["width"] = cfg.basis.width;
    }
    j["experiment"] = cfg.experiment;
    j["schedules"]["alphas"] = cfg.alphas;
    j["schedules"]["horizons"] = cfg.horizons;
    j["schedules"]["truncations"] = cfg.truncations;
    j["tolerances"]["vi_tol"] = cfg.vi_tol;
    j["tolerances"]["lp_tol"] = cfg.lp_tol;
    j["output_dir"] = cfg.output_dir;
    if (cfg.simulate) {
        j["simulate"]["y0"] = cfg.simulate->y0;
        j["simulate"]["control"] = cfg.simulate->control;
        j["simulate"]["horizon"] = cfg.simulate->horizon;
    }
    if (cfg.lp) {
        j["lp"]["kind"] = cfg.lp->kind;
        j["lp"]["alpha"] = cfg.lp->alpha;
        j["lp"]["y0"] = cfg.lp->y0;
        j["lp"]["compactified"] = cfg.lp->compactified;
    }
    return j.dump(2) + "\n";
}

namespace {

void write_diagnostic(const std::string& dir, const std::string& error,
                      ojson extra = ojson::object()) {
    try {
        fs::create_directories(dir);
        ojson j;
        j["error"] = error;
        for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
        write_text_file(dir + "/diagnostic.json", j.dump(2) + "\n");
    } catch (...) {
        // diagnostics are best effort
    }
}

int nearest_state(const DiscretizedSystem& dsys, const State& y) {
    if (y.size() != dsys.states.at(0).size()) {
        fail("lp.y0 dimension does not match the grid");
    }
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int s = 0; s < static_cast<int>(dsys.states.size()); ++s) {
        double d2 = 0.0;
        for (size_t d = 0; d < y.size(); ++d) {
            d2 += (y[d] - dsys.states[s][d]) * (y[d] - dsys.states[s][d]);
        }
        if (d2 < best_d2) {
            best = s;
            best_d2 = d2;
        }
    }
    return best;
}

ojson sweep_point_errors(const SweepReport& report) {
    ojson errors = ojson::array();
    for (const SweepPoint& pt : report.points) {
        if (!pt.ok) {
            ojson e;
            e["schedule_value"] = pt.schedule_value;
            e["error"] = pt.error;
            errors.push_back(std::move(e));
        }
    }
    return errors;
}

struct VerifyCheck {
    std::string name;
    double value;
    double threshold;
    bool pass;
};

}   // namespace

int run(const RunConfig& cfg, bool quiet) {
    const std::string out = cfg.output_dir;
    auto say = [&](const std::string& line) {
        if (!quiet) std::cout << line << "\n";
    };

    try {
        fs::create_directories(out);

        SystemModel model = make_system(cfg.system_name, cfg.system_params);
        CostSpec cost = make_cost(cfg.cost_name, cfg.cost_params);
        model.cost = cost.fn;
        model.cost_lower_bound = cost.lower_bound;

        CostAtInfRule rule = CostAtInfRule::sup_over_grid();
        if (cfg.cost_truncation) {
            rule = CostAtInfRule::truncation(*cfg.cost_truncation);
        } else if (cfg.cost_at_inf) {
            rule = CostAtInfRule::explicit_value(*cfg.cost_at_inf);
        }

        if (cfg.experiment == "simulate") {
            const SimulateSpec& sp = *cfg.simulate;
            auto trajectory = simulate(
                model, sp.y0, [&](const State&) { return sp.control; }, sp.horizon);
            write_trajectory_csv(out + "/trajectory.csv", trajectory);
            say("wrote " + out + "/trajectory.csv (" + std::to_string(trajectory.size()) +
                " steps)");
            return 0;
        }

        DiscretizedSystem dsys = build(model, *cfg.grid, rule);
        TestFunctionBasis basis = cfg.basis.instantiate(dsys);

        if (cfg.experiment == "value-iter") {
            ojson summary;
            summary["experiment"] = "value-iter";
            summary["entries"] = ojson::array();
            for (double alpha : cfg.alphas) {
                ValueFunction vf = value_iteration(dsys, alpha, cfg.vi_tol);
                MinResult mr = min_over_states(dsys, vf, true);
                const std::string path = out + "/values_alpha_" + format_double(alpha) + ".csv";
                write_values_csv(path, dsys, vf);
                ojson e;
                e["alpha"] = alpha;
                e["residual"] = vf.residual;
                e["sweeps"] = vf.sweeps;
                e["min_value"] = mr.value;
                e["argmin_state"] = mr.state;
                e["tie_count"] = mr.tie_count;
                summary["entries"].push_back(std::move(e));
                say("alpha " + format_double(alpha) + ": min value " + format_double(mr.value) +
                    " at state " + std::to_string(mr.state));
            }
            write_text_file(out + "/summary.json", summary.dump(2) + "\n");
            return 0;
        }

        if (cfg.experiment == "finite-horizon") {
            ojson summary;
            summary["experiment"] = "finite-horizon";
            summary["entries"] = ojson::array();
            for (long long S : cfg.horizons) {
                FiniteHorizonValue fh = finite_horizon(dsys, S);
                MinResult mr = min_over_states(dsys, fh.vf, true);
                const std::string path = out + "/values_S_" + std::to_string(S) + ".csv";
                write_values_csv(path, dsys, fh.vf);
                ojson e;
                e["S"] = S;
                e["min_value"] = mr.value;
                e["argmin_state"] = mr.state;
                e["tie_count"] = mr.tie_count;
                summary["entries"].push_back(std::move(e));
                say("S " + std::to_string(S) + ": min value " + format_double(mr.value) +
                    " at state " + std::to_string(mr.state));
            }
            write_text_file(out + "/summary.json", summary.dump(2) + "\n");
            return 0;
        }

        if (cfg.experiment == "solve-lp") {
            const LpSpec& spec = *cfg.lp;
            LinearProgram lp;
            if (spec.kind == "discounted") {
                lp = build_discounted_lp(dsys, basis, spec.alpha, nearest_state(dsys, spec.y0));
            } else {
                lp = build_average_lp(dsys, basis, spec.compactified);
            }
            write_text_file(out + "/lp.txt", to_text(lp));
            LPSolution sol = solve(lp, cfg.lp_tol);
            write_measure_csv(out + "/solution.csv", dsys, solution_weights(lp, sol, dsys));

            double rmax = 0.0;
            for (int s = 0; s < static_cast<int>(dsys.states.size()); ++s) {
                rmax = std::max(rmax, dsys.state_norm(s));
            }
            TailMassReport tail = infinity_mass_profile(
                sol, lp, dsys, {rmax / 4.0, rmax / 2.0, 3.0 * rmax / 4.0, rmax});

            ojson summary;
            summary["experiment"] = "solve-lp";
            summary["kind"] = spec.kind;
            summary["status"] = to_string(sol.status);
            summary["objective"] = sol.objective;
            summary["max_residual"] = sol.max_residual;
            summary["certificate"] = sol.certificate;
            summary["iterations"] = sol.iterations;
            summary["inf_mass"] = sol.inf_mass;
            summary["escaping_mass"] = tail.escaping_mass;
            summary["supported_on_G"] = tail.supported_on_G;
            summary["cost_at_inf"] = dsys.cost_at_inf;
            summary["tail_radii"] = tail.radii;
            summary["tail_mass"] = tail.tail_mass;
            write_text_file(out + "/summary.json", summary.dump(2) + "\n");
            say(std::string("LP ") + to_string(sol.status) + ", objective " +
                format_double(sol.objective) + ", infinity mass " + format_double(sol.inf_mass));

            if (sol.status == LPSolution::Status::Stalled) {
                write_diagnostic(out, "LP solver stalled before certifying optimality");
                return 1;
            }
            return 0;
        }

        if (cfg.experiment == "sweep-abel" || cfg.experiment == "sweep-cesaro") {
            const bool abel = cfg.experiment == "sweep-abel";
            SweepReport report = abel ? abel_sweep(dsys, basis, cfg.alphas, cfg.vi_tol, cfg.lp_tol)
                                      : cesaro_sweep(dsys, basis, cfg.horizons, cfg.vi_tol,
                                                     cfg.lp_tol);
            const std::string stem = abel ? "sweep_abel" : "sweep_cesaro";
            write_sweep_csv(out + "/" + stem + ".csv", dsys, report);
            write_text_file(out + "/" + stem + ".json", sweep_json(dsys, report));
            say("g_star " + format_double(report.g_star) + " (" + report.verdict + ")");

            ojson errors = sweep_point_errors(report);
            if (!errors.empty()) {
                write_diagnostic(out, "sweep points failed", {{"points", errors}});
                return 1;
            }
            return 0;
        }

        if (cfg.experiment == "sweep-truncated") {
            TruncatedReport report =
                truncated_sweep(model, *cfg.grid, cfg.basis, cfg.truncations, cfg.alphas,
                                cfg.horizons, cfg.vi_tol, cfg.lp_tol);
            ojson summary;
            summary["experiment"] = "sweep-truncated";
            summary["stabilized"] = report.stabilized;
            summary["entries"] = ojson::array();
            ojson errors = ojson::array();
            for (const TruncatedEntry& entry : report.entries) {
                DiscretizedSystem tdsys =
                    build(model, *cfg.grid, CostAtInfRule::truncation(entry.truncation));
                const std::string tag = "_M_" + format_double(entry.truncation);
                write_sweep_csv(out + "/sweep_abel" + tag + ".csv", tdsys, entry.abel);
                write_text_file(out + "/sweep_abel" + tag + ".json",
                                sweep_json(tdsys, entry.abel));
                write_sweep_csv(out + "/sweep_cesaro" + tag + ".csv", tdsys, entry.cesaro);
                write_text_file(out + "/sweep_cesaro" + tag + ".json",
                                sweep_json(tdsys, entry.cesaro));

                ojson e;
                e["M"] = entry.truncation;
                e["abel_g_star"] = entry.abel.g_star;
                e["abel_verdict"] = entry.abel.verdict;
                e["cesaro_verdict"] = entry.cesaro.verdict;
                e["a2_bounding_radius"] = entry.a2.bounding_radius;
                e["a2_consistent"] = entry.a2.consistent;
                summary["entries"].push_back(std::move(e));
                for (const auto& err : sweep_point_errors(entry.abel)) errors.push_back(err);
                for (const auto& err : sweep_point_errors(entry.cesaro)) errors.push_back(err);
            }
            write_text_file(out + "/truncated.json", summary.dump(2) + "\n");
            say(std::string("truncated sweep ") +
                (report.stabilized ? "stabilized" : "not stabilized"));
            if (!errors.empty()) {
                write_diagnostic(out, "sweep points failed", {{"points", errors}});
                return 1;
            }
            return 0;
        }

        // verify
        std::vector<double> alphas = cfg.alphas.empty() ? std::vector<double>{0.5, 0.9}
                                                        : cfg.alphas;
        std::vector<VerifyCheck> checks;
        const double eq_res1_tol = 100.0 * cfg.vi_tol;
        std::vector<int> probes_y0 = {0};
        if (dsys.states.size() > 1) probes_y0.push_back(static_cast<int>(dsys.states.size() / 2));

        for (double alpha : alphas) {
            for (int y0 : probes_y0) {
                EqRes1Report rep = verify_eq_res1(dsys, basis, alpha, y0, eq_res1_tol);
                checks.push_back({"eq_res1 alpha=" + format_double(alpha) +
                                      " y0=" + std::to_string(y0),
                                  rep.diff, eq_res1_tol, rep.pass});
            }
            ValueFunction vf = value_iteration(dsys, alpha, cfg.vi_tol);
            DiscretePolicy policy = greedy_policy(dsys, vf);
            OccupationalMeasure mu = discounted_measure(dsys, 0, policy, alpha);
            double worst = 0.0;
            for (const TestFunction& phi : basis.functions) {
                worst = std::max(worst, std::abs(constraint_residual(
                                            mu, dsys,
                                            [&](int node) { return phi.value_at(dsys, node); },
                                            ResidualMode::discounted(alpha, 0))));
            }
            checks.push_back({"W_alpha residual alpha=" + format_double(alpha), worst,
                              cfg.lp_tol, worst <= cfg.lp_tol});
            const double norm_gap = std::abs(mu.total_weight() - 1.0);
            checks.push_back({"normalization alpha=" + format_double(alpha), norm_gap, 1e-12,
                              norm_gap <= 1e-12});
        }
        {
            ValueFunction vf = value_iteration(dsys, alphas.front(), cfg.vi_tol);
            OccupationalMeasure avg =
                averaging_measure(dsys, 0, greedy_policy(dsys, vf), 50);
            const double norm_gap = std::abs(avg.total_weight() - 1.0);
            checks.push_back({"averaging normalization", norm_gap, 1e-12, norm_gap <= 1e-12});
        }

        bool all_pass = true;
        ojson jc = ojson::array();
        for (const VerifyCheck& c : checks) {
            all_pass = all_pass && c.pass;
            ojson e;
            e["name"] = c.name;
            e["value"] = c.value;
            e["threshold"] = c.threshold;
            e["pass"] = c.pass;
            jc.push_back(std::move(e));
            say((c.pass ? "[ok]   " : "[FAIL] ") + c.name + " (" + format_double(c.value) +
                " vs " + format_double(c.threshold) + ")");
        }
        ojson summary;
        summary["experiment"] = "verify";
        summary["pass"] = all_pass;
        summary["checks"] = std::move(jc);
        write_text_file(out + "/verify.json", summary.dump(2) + "\n");
        if (!all_pass) {
            write_diagnostic(out, "verification checks failed");
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        write_diagnostic(out, e.what());
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int main(int argc, char** argv) {
    CLI::App app{"occupational-measure LP toolkit for infinite-horizon optimal control"};
    std::string config_path, output_override, experiment_override;
    bool quiet = false;
    app.add_option("--config", config_path, "path to the JSON run config")->required();
    app.add_option("--output", output_override, "output directory (overrides the config)");
    app.add_option("--experiment", experiment_override, "experiment name (overrides the config)");
    app.add_flag("--quiet", quiet, "suppress progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string diagnostic_dir = output_override.empty() ? "." : output_override;
    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) fail("cannot read config file '" + config_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();

        RunConfig cfg = parse_config(buffer.str());
        if (!output_override.empty()) cfg.output_dir = output_override;
        if (!experiment_override.empty()) {
            cfg.experiment = experiment_override;
            validate_config(cfg);
        }
        return run(cfg, quiet);
    } catch (const std::exception& e) {
        write_diagnostic(diagnostic_dir, e.what());
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}

}   // namespace occulp::cli
