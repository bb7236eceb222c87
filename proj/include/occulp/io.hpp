#pragma once

#include <map>
#include <string>
#include <vector>

#include "occulp/limits.hpp"

namespace occulp {

/// Shortest decimal string that round-trips to the same double, capped at 12
/// significant digits. Used for every float in CSV/JSON artifacts so repeated
/// runs are byte-identical.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

/// Columns: state_0..state_{d-1}, control, weight; rows ordered by
/// (state index, control index); the infinity node prints coordinates "inf".
void write_measure_csv(const std::string& path, const DiscretizedSystem& dsys,
                       const std::map<PairKey, double>& weights);

/// Columns: state_0..state_{d-1}, value; one row per node in index order.
void write_values_csv(const std::string& path, const DiscretizedSystem& dsys,
                      const ValueFunction& vf);

/// Columns: t, state_0..state_{d-1}, control.
void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryStep>& trajectory);

/// Columns: schedule_value, min_value, argmin coordinates, gap, a1_radius,
/// touches_inf; one row per schedule point.
void write_sweep_csv(const std::string& path, const DiscretizedSystem& dsys,
                     const SweepReport& report);

/// JSON summary of a sweep (g_star, compactified diagnostics, verdict,
/// tolerances, per-point table).
std::string sweep_json(const DiscretizedSystem& dsys, const SweepReport& report);

}   // namespace occulp
