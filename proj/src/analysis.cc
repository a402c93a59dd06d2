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

#include "clelc/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "clelc/errors.h"

namespace clelc {
namespace {

nlohmann::json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

// First time |trace| stays strictly below threshold until the end.
std::optional<double> StaysBelowFrom(std::span<const double> trace,
                                     double threshold, double t0, double dt) {
  if (trace.empty() || !(trace.back() < threshold)) return std::nullopt;
  size_t k = trace.size();
  while (k > 0 && trace[k - 1] < threshold) --k;
  return t0 + dt * static_cast<double>(k);
}

double MaxCentralDifference(std::span<const double> v, double dt) {
  double best = 0.0;
  for (size_t k = 1; k + 1 < v.size(); ++k) {
    best = std::max(best, std::abs(v[k + 1] - v[k - 1]) / (2.0 * dt));
  }
  return best;
}

double MaxSecondDifference(std::span<const double> v, double dt) {
  double best = 0.0;
  for (size_t k = 1; k + 1 < v.size(); ++k) {
    best = std::max(best,
                    std::abs(v[k + 1] - 2.0 * v[k] + v[k - 1]) / (dt * dt));
  }
  return best;
}

double DecayRatio(std::span<const double> ub_abs, double dt,
                  double window_s) {
  double peak = 0.0;
  for (double v : ub_abs) peak = std::max(peak, v);
  if (peak == 0.0 || ub_abs.empty()) return 0.0;
  size_t count = static_cast<size_t>(std::llround(window_s / dt));
  count = std::clamp<size_t>(count, 1, ub_abs.size());
  double sum = 0.0;
  for (size_t k = ub_abs.size() - count; k < ub_abs.size(); ++k) {
    sum += ub_abs[k];
  }
  return sum / static_cast<double>(count) / peak;
}

void FillSurfaceMetrics(std::span<const double> s_abs, double t0, double dt,
                        const MetricsConfig& cfg, Metrics& m) {
  double peak = 0.0;
  for (double v : s_abs) peak = std::max(peak, v);
  m.s_threshold = std::max(cfg.delta, 0.01 * peak);
  m.s_convergence_time_s = StaysBelowFrom(s_abs, m.s_threshold, t0, dt);
}

void CheckRateBound(const MetricsConfig& cfg, Metrics& m) {
  if (cfg.alpha) {
    m.rate_bound_holds = *cfg.alpha > m.empirical_bounds.b_udot_t +
                                           m.empirical_bounds.b_xddot_n;
  }
}

}  // namespace

double FiniteTimeBound(double s0, double alpha, double b_delta_dot) {
  if (!(b_delta_dot >= 0.0)) {
    throw StabilityAssumptionError("disturbance-rate bound must be >= 0");
  }
  if (!(alpha > b_delta_dot)) {
    throw StabilityAssumptionError(
        "learning rate must exceed the disturbance-rate bound");
  }
  return std::abs(s0) / (alpha - b_delta_dot);
}

ErrorTraceMetrics AnalyzeErrorTrace(std::span<const double> error, double t0,
                                    double dt, double settling_band) {
  ErrorTraceMetrics m;
  if (error.empty()) return m;
  double sum = 0.0;
  for (double e : error) sum += std::abs(e);
  m.mean_abs_error = sum / static_cast<double>(error.size());

  const double e0 = error.front();
  if (e0 == 0.0) {
    // Nothing to reject; the trace is judged by mean error alone.
    m.rise_time_s = 0.0;
    m.settling_time_s = 0.0;
    return m;
  }
  // Normalized remaining error: 1 at t0, 0 on the reference.
  auto g = [&](size_t k) { return error[k] / e0; };
  auto crossing_time = [&](size_t k, double level) {
    // Linear interpolation between samples k-1 and k.
    const double a = g(k - 1), b = g(k);
    const double frac = (a == b) ? 0.0 : (a - level) / (a - b);
    return t0 + dt * (static_cast<double>(k - 1) + frac);
  };

  std::optional<double> t10, t90;
  for (size_t k = 1; k < error.size(); ++k) {
    if (!t10 && g(k) <= 0.9) t10 = crossing_time(k, 0.9);
    if (!t90 && g(k) <= 0.1) {
      t90 = crossing_time(k, 0.1);
      break;
    }
  }
  if (t10 && t90) m.rise_time_s = *t90 - *t10;

  const double band = settling_band;
  if (std::abs(g(error.size() - 1)) <= band) {
    size_t k = error.size() - 1;
    while (k > 0 && std::abs(g(k - 1)) <= band) --k;
    if (k == 0) {
      m.settling_time_s = t0;
    } else {
      const double a = std::abs(g(k - 1)), b = std::abs(g(k));
      const double frac = (a == b) ? 0.0 : (a - band) / (a - b);
      m.settling_time_s = t0 + dt * (static_cast<double>(k - 1) + frac);
    }
  }

  double worst = 0.0;
  for (size_t k = 0; k < error.size(); ++k) worst = std::max(worst, -g(k));
  m.overshoot_pct = 100.0 * worst;
  return m;
}

Metrics ComputeMetrics(const SimLog& log, const MetricsConfig& cfg) {
  if (log.rows.empty()) throw ConfigError("cannot compute metrics of an empty log");
  const size_t n = log.rows.size();
  const double t0 = log.rows.front().t;
  std::vector<double> e1(n), ub(n), s(n), ut(n), xn(n), delta(n);
  for (size_t k = 0; k < n; ++k) {
    const auto& row = log.rows[k];
    e1[k] = row.e.front();
    ub[k] = std::abs(row.u_b);
    s[k] = std::abs(row.s);
    ut[k] = row.u_t;
    xn[k] = row.x.back();
    delta[k] = row.delta;
  }
  Metrics m;
  const ErrorTraceMetrics tr =
      AnalyzeErrorTrace(e1, t0, log.dt, cfg.settling_band);
  m.rise_time_s = tr.rise_time_s;
  m.settling_time_s = tr.settling_time_s;
  m.overshoot_pct = tr.overshoot_pct;
  m.mean_abs_error = tr.mean_abs_error;
  FillSurfaceMetrics(s, t0, log.dt, cfg, m);
  m.ub_decay_ratio = DecayRatio(ub, log.dt, cfg.final_window_s);
  m.empirical_bounds.b_udot_t = MaxCentralDifference(ut, log.dt);
  m.empirical_bounds.b_xddot_n = MaxSecondDifference(xn, log.dt);
  m.empirical_bounds.b_delta_dot = MaxCentralDifference(delta, log.dt);
  CheckRateBound(cfg, m);
  m.fallback_events = static_cast<int>(log.events.size());
  return m;
}

Metrics ComputeMetrics(const RobotLog& log, const MetricsConfig& cfg) {
  if (log.rows.empty()) throw ConfigError("cannot compute metrics of an empty log");
  const size_t n = log.rows.size();
  const double t0 = log.rows.front().t;
  std::vector<double> eu(n), ub(n), s(n);
  std::array<std::vector<double>, 2> ut, vel, delta;
  for (int c = 0; c < 2; ++c) {
    ut[c].resize(n);
    vel[c].resize(n);
    delta[c].resize(n);
  }
  for (size_t k = 0; k < n; ++k) {
    const auto& row = log.rows[k];
    eu[k] = row.euclid_err;
    ub[k] = std::hypot(row.u_b[0], row.u_b[1]);
    s[k] = std::max(std::abs(row.s[0]), std::abs(row.s[1]));
    for (int c = 0; c < 2; ++c) {
      ut[c][k] = row.u_t[c];
      vel[c][k] = row.x[2 + c];
      delta[c][k] = row.delta[c];
    }
  }
  Metrics m;
  const ErrorTraceMetrics tr =
      AnalyzeErrorTrace(eu, t0, log.dt, cfg.settling_band);
  m.rise_time_s = tr.rise_time_s;
  m.settling_time_s = tr.settling_time_s;
  m.overshoot_pct = tr.overshoot_pct;
  m.mean_abs_error = tr.mean_abs_error;

  for (size_t k = 0; k < n; ++k) {
    if (eu[k] < cfg.on_track_threshold_m) {
      m.on_track_time_s = log.rows[k].t;
      double sum = 0.0;
      for (size_t j = k; j < n; ++j) sum += eu[j];
      m.mean_euclid_err_m = sum / static_cast<double>(n - k);
      break;
    }
  }
  FillSurfaceMetrics(s, t0, log.dt, cfg, m);
  m.ub_decay_ratio = DecayRatio(ub, log.dt, cfg.final_window_s);
  for (int c = 0; c < 2; ++c) {
    auto& b = m.empirical_bounds;
    b.b_udot_t = std::max(b.b_udot_t, MaxCentralDifference(ut[c], log.dt));
    b.b_xddot_n = std::max(b.b_xddot_n, MaxSecondDifference(vel[c], log.dt));
    b.b_delta_dot =
        std::max(b.b_delta_dot, MaxCentralDifference(delta[c], log.dt));
  }
  CheckRateBound(cfg, m);
  m.fallback_events = static_cast<int>(log.events.size());
  return m;
}

nlohmann::json Metrics::ToJson() const {
  nlohmann::json j;
  j["rise_time_s"] = OptionalJson(rise_time_s);
  j["settling_time_s"] = OptionalJson(settling_time_s);
  j["overshoot_pct"] = overshoot_pct;
  j["mean_abs_error"] = mean_abs_error;
  j["mean_euclid_err_m"] = OptionalJson(mean_euclid_err_m);
  j["on_track_time_s"] = OptionalJson(on_track_time_s);
  j["s_convergence_time_s"] = OptionalJson(s_convergence_time_s);
  j["s_threshold"] = s_threshold;
  j["ub_decay_ratio"] = ub_decay_ratio;
  j["max_abs_udot_t"] = empirical_bounds.b_udot_t;
  j["max_abs_xddot_n"] = empirical_bounds.b_xddot_n;
  j["max_abs_delta_dot"] = empirical_bounds.b_delta_dot;
  j["rate_bound_holds"] = rate_bound_holds ? nlohmann::json(*rate_bound_holds)
                                           : nlohmann::json(nullptr);
  j["fallback_events"] = fallback_events;
  return j;
}

ComparisonReport Compare(const Metrics& flc, const Metrics& clelc) {
  ComparisonReport report;
  auto add = [&](const char* name, std::optional<double> a,
                 std::optional<double> b) {
    ComparisonEntry e;
    e.metric = name;
    e.flc = a;
    e.clelc = b;
    if (a && b) {
      if (*a != 0.0) e.ratio = *b / *a;
      if (*b < *a) {
        e.winner = "clelc";
      } else if (*a < *b) {
        e.winner = "flc";
      } else {
        e.winner = "tie";
      }
    } else if (b) {
      e.winner = "clelc";  // only CLELC satisfied the condition
    } else if (a) {
      e.winner = "flc";
    } else {
      e.winner = "n/a";
    }
    report.entries.push_back(std::move(e));
  };
  add("rise_time_s", flc.rise_time_s, clelc.rise_time_s);
  add("settling_time_s", flc.settling_time_s, clelc.settling_time_s);
  add("overshoot_pct", flc.overshoot_pct, clelc.overshoot_pct);
  add("mean_abs_error", flc.mean_abs_error, clelc.mean_abs_error);
  add("mean_euclid_err_m", flc.mean_euclid_err_m, clelc.mean_euclid_err_m);
  add("s_convergence_time_s", flc.s_convergence_time_s,
      clelc.s_convergence_time_s);
  add("ub_decay_ratio", flc.ub_decay_ratio, clelc.ub_decay_ratio);
  return report;
}

const ComparisonEntry* ComparisonReport::Find(const std::string& metric) const {
  for (const auto& e : entries) {
    if (e.metric == metric) return &e;
  }
  return nullptr;
}

nlohmann::json ComparisonReport::ToJson() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& e : entries) {
    j[e.metric] = {{"flc", OptionalJson(e.flc)},
                   {"clelc", OptionalJson(e.clelc)},
                   {"ratio", OptionalJson(e.ratio)},
                   {"winner", e.winner}};
  }
  return j;
}

namespace {

std::string Cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", *v);
  return buf;
}

}  // namespace

std::string ComparisonReport::ToTable() const {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-22s %14s %14s %10s  %s\n", "metric",
                "flc", "clelc", "ratio", "winner");
  out += line;
  for (const auto& e : entries) {
    std::snprintf(line, sizeof(line), "%-22s %14s %14s %10s  %s\n",
                  e.metric.c_str(), Cell(e.flc).c_str(),
                  Cell(e.clelc).c_str(), Cell(e.ratio).c_str(),
                  e.winner.c_str());
    out += line;
  }
  return out;
}

std::string MetricsTable(const Metrics& m) {
  std::string out;
  char line[128];
  auto row = [&](const char* name, const std::optional<double>& v) {
    std::snprintf(line, sizeof(line), "%-22s %14s\n", name, Cell(v).c_str());
    out += line;
  };
  row("rise_time_s", m.rise_time_s);
  row("settling_time_s", m.settling_time_s);
  row("overshoot_pct", m.overshoot_pct);
  row("mean_abs_error", m.mean_abs_error);
  row("mean_euclid_err_m", m.mean_euclid_err_m);
  row("on_track_time_s", m.on_track_time_s);
  row("s_convergence_time_s", m.s_convergence_time_s);
  row("ub_decay_ratio", m.ub_decay_ratio);
  row("max_abs_udot_t", m.empirical_bounds.b_udot_t);
  row("max_abs_xddot_n", m.empirical_bounds.b_xddot_n);
  row("max_abs_delta_dot", m.empirical_bounds.b_delta_dot);
  return out;
}

}  // namespace clelc
