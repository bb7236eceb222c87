#include "occulp/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace occulp {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    std::string best;
    for (int precision = 1; precision <= 12; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v && (best.empty() || std::strlen(buf) <= best.size())) {
            best = buf;   // ties prefer the higher precision (fixed over exponent form)
        }
    }
    if (!best.empty()) return best;
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

namespace {

std::string node_coords(const DiscretizedSystem& dsys, int node) {
    const size_t dim = dsys.states.at(0).size();
    std::ostringstream os;
    for (size_t d = 0; d < dim; ++d) {
        if (d) os << ",";
        if (node < 0) {
            os << "nan";
        } else if (dsys.is_inf(node)) {
            os << "inf";
        } else {
            os << format_double(dsys.states[node][d]);
        }
    }
    return os.str();
}

std::string coord_header(size_t dim, const std::string& prefix) {
    std::ostringstream os;
    for (size_t d = 0; d < dim; ++d) {
        if (d) os << ",";
        os << prefix << d;
    }
    return os.str();
}

}   // namespace

void write_measure_csv(const std::string& path, const DiscretizedSystem& dsys,
                       const std::map<PairKey, double>& weights) {
    std::ostringstream os;
    os << coord_header(dsys.states.at(0).size(), "state_") << ",control,weight\n";
    for (const auto& [key, w] : weights) {
        os << node_coords(dsys, key.first) << "," << key.second << "," << format_double(w)
           << "\n";
    }
    write_text_file(path, os.str());
}

void write_values_csv(const std::string& path, const DiscretizedSystem& dsys,
                      const ValueFunction& vf) {
    std::ostringstream os;
    os << coord_header(dsys.states.at(0).size(), "state_") << ",value\n";
    for (int s = 0; s < dsys.num_nodes(); ++s) {
        os << node_coords(dsys, s) << "," << format_double(vf.values.at(s)) << "\n";
    }
    write_text_file(path, os.str());
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectoryStep>& trajectory) {
    std::ostringstream os;
    const size_t dim = trajectory.empty() ? 1 : trajectory.front().y.size();
    os << "t," << coord_header(dim, "state_") << ",control\n";
    for (size_t t = 0; t < trajectory.size(); ++t) {
        os << t;
        for (double v : trajectory[t].y) os << "," << format_double(v);
        os << "," << trajectory[t].control << "\n";
    }
    write_text_file(path, os.str());
}

void write_sweep_csv(const std::string& path, const DiscretizedSystem& dsys,
                     const SweepReport& report) {
    std::ostringstream os;
    os << "schedule_value,min_value," << coord_header(dsys.states.at(0).size(), "argmin_state_")
       << ",gap,a1_radius,touches_inf\n";
    for (const SweepPoint& pt : report.points) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        os << format_double(pt.schedule_value) << ","
           << format_double(pt.ok ? pt.min_value : nan) << ","
           << node_coords(dsys, pt.ok ? pt.argmin_state : -1) << ","
           << format_double(pt.ok ? pt.gap : nan) << ","
           << format_double(pt.ok ? pt.a1_radius : nan) << "," << (pt.touches_inf ? 1 : 0)
           << "\n";
    }
    write_text_file(path, os.str());
}

std::string sweep_json(const DiscretizedSystem& dsys, const SweepReport& report) {
    nlohmann::ordered_json j;
    j["kind"] = report.kind == SweepReport::Kind::Abel ? "abel" : "cesaro";
    j["g_star"] = report.g_star;
    j["g_star_status"] = to_string(report.g_star_status);
    j["g_star_compactified"] = report.g_star_compactified;
    j["compactified_inf_mass"] = report.compactified_inf_mass;
    j["cost_at_inf"] = report.cost_at_inf;
    j["verdict"] = report.verdict;
    j["vi_tol"] = report.vi_tol;
    j["lp_tol"] = report.lp_tol;
    j["points"] = nlohmann::ordered_json::array();
    for (const SweepPoint& pt : report.points) {
        nlohmann::ordered_json p;
        p["schedule_value"] = pt.schedule_value;
        p["ok"] = pt.ok;
        if (pt.ok) {
            p["min_value"] = pt.min_value;
            p["argmin_state"] = pt.argmin_state;
            p["argmin_coords"] = dsys.is_inf(pt.argmin_state)
                                     ? nlohmann::ordered_json("inf")
                                     : nlohmann::ordered_json(dsys.states.at(pt.argmin_state));
            p["tie_count"] = pt.tie_count;
            p["gap"] = pt.gap;
            p["a1_radius"] = pt.a1_radius;
            p["touches_inf"] = pt.touches_inf;
        } else {
            p["error"] = pt.error;
        }
        j["points"].push_back(std::move(p));
    }
    return j.dump(2) + "\n";
}

}   // namespace occulp
