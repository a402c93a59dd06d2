// Copyright 2026 The CLELC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLELC_ANALYSIS_H_
#define CLELC_ANALYSIS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clelc/learning.h"
#include "clelc/plant.h"
#include "clelc/robot.h"
#include "json.hpp"

namespace clelc {

// t_h <= |s0| / (alpha - B). Throws StabilityAssumptionError unless
// alpha > B >= 0.
double FiniteTimeBound(double s0, double alpha, double b_delta_dot);

struct MetricsConfig {
  double settling_band = 0.02;  // fraction of the initial error
  double final_window_s = 2.0;  // window for ub_decay_ratio
  double delta = 0.05;          // floor of the |s| convergence threshold
  double on_track_threshold_m = 0.2;
  // When set, the report checks alpha > B_udot_t + B_xddot_n post hoc.
  std::optional<double> alpha;
};

// Performance summary of one log. Time metrics are absent when the trace
// never satisfies the corresponding condition.
struct Metrics {
  std::optional<double> rise_time_s;      // 10% -> 90% of the initial error
  std::optional<double> settling_time_s;  // last exit from the band
  double overshoot_pct = 0.0;  // travel past the reference, % of e(0)
  double mean_abs_error = 0.0;
  std::optional<double> mean_euclid_err_m;  // robot logs, after on-track
  std::optional<double> on_track_time_s;    // robot logs
  std::optional<double> s_convergence_time_s;
  double s_threshold = 0.0;
  double ub_decay_ratio = 0.0;
  BoundEstimates empirical_bounds;
  // alpha > max|du_t/dt| + max|d2x_n/dt2|, when MetricsConfig::alpha is set.
  std::optional<bool> rate_bound_holds;
  int fallback_events = 0;

  nlohmann::json ToJson() const;
};

// Step-response style metrics on a scalar error trace sampled every dt
// seconds starting at t0.
struct ErrorTraceMetrics {
  std::optional<double> rise_time_s;
  std::optional<double> settling_time_s;
  double overshoot_pct = 0.0;
  double mean_abs_error = 0.0;
};
ErrorTraceMetrics AnalyzeErrorTrace(std::span<const double> error, double t0,
                                    double dt, double settling_band);

// Plant logs use e1 as the primary error and x_n for the state bound.
Metrics ComputeMetrics(const SimLog& log, const MetricsConfig& cfg);

// Robot logs use the Euclidean position error; channel quantities are
// combined by Euclidean norm (u_b) or max (|s|, bounds).
Metrics ComputeMetrics(const RobotLog& log, const MetricsConfig& cfg);

struct ComparisonEntry {
  std::string metric;
  std::optional<double> flc;
  std::optional<double> clelc;
  std::optional<double> ratio;  // clelc / flc
  std::string winner;           // "clelc", "flc", "tie" or "n/a"
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;

  const ComparisonEntry* Find(const std::string& metric) const;
  nlohmann::json ToJson() const;
  std::string ToTable() const;
};

// Lower is better for every compared metric.
ComparisonReport Compare(const Metrics& flc, const Metrics& clelc);

std::string MetricsTable(const Metrics& m);

}  // namespace clelc

#endif  // CLELC_ANALYSIS_H_
