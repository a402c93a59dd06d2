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

#include <cmath>
#include <random>
#include <vector>

#include "clelc/errors.h"
#include "gtest/gtest.h"

namespace clelc {
namespace {

// Plant log of a first-order system whose error follows `error(t)`.
SimLog SyntheticLog(double dt, int steps, double (*error)(double)) {
  SimLog log;
  log.order = 1;
  log.dt = dt;
  for (int k = 0; k < steps; ++k) {
    PlantLogRow row;
    row.t = k * dt;
    const double e = error(row.t);
    row.x = {-e};
    row.r = {0.0};
    row.e = {e};
    row.u_b = 2.0 * e;
    row.u_t = row.u_b;
    row.u = row.u_b;
    row.s = 3.0 * e;
    log.rows.push_back(row);
  }
  return log;
}

double Decay(double t) { return std::exp(-t); }

TEST(FiniteTimeBoundTest, Examples) {
  EXPECT_EQ(FiniteTimeBound(-90.0, 25.0, 5.0), 4.5);
  EXPECT_EQ(FiniteTimeBound(0.0, 25.0, 5.0), 0.0);
  EXPECT_EQ(FiniteTimeBound(10.0, 10.0, 0.0), 1.0);
}

TEST(FiniteTimeBoundTest, RejectsViolatedAssumption) {
  EXPECT_THROW(FiniteTimeBound(1.0, 5.0, 5.0), StabilityAssumptionError);
  EXPECT_THROW(FiniteTimeBound(1.0, 4.0, 5.0), StabilityAssumptionError);
  EXPECT_THROW(FiniteTimeBound(1.0, 4.0, -1.0), StabilityAssumptionError);
  EXPECT_THROW(FiniteTimeBound(1.0, 4.0, -1.0), ConfigError);
}

TEST(FiniteTimeBoundTest, Monotonicity) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double b = 10.0 * u(rng);
    const double alpha = b + 0.1 + 20.0 * u(rng);
    const double s0 = 200.0 * (u(rng) - 0.5);
    const double t = FiniteTimeBound(s0, alpha, b);
    EXPECT_GE(t, 0.0);
    EXPECT_LE(FiniteTimeBound(s0, alpha + 1.0, b), t);
    EXPECT_GE(FiniteTimeBound(std::abs(s0) + 1.0, alpha, b), t);
    EXPECT_GE(FiniteTimeBound(s0, alpha, b + 0.05), t);
  }
}

TEST(AnalyzeErrorTraceTest, ExponentialDecay) {
  const SimLog log = SyntheticLog(1e-3, 10000, Decay);
  std::vector<double> e;
  for (const auto& row : log.rows) e.push_back(row.e[0]);
  const ErrorTraceMetrics m = AnalyzeErrorTrace(e, 0.0, 1e-3, 0.02);
  ASSERT_TRUE(m.settling_time_s);
  EXPECT_NEAR(*m.settling_time_s, -std::log(0.02), 1e-6);
  EXPECT_NEAR(*m.settling_time_s, 3.912, 1e-3);
  ASSERT_TRUE(m.rise_time_s);
  EXPECT_NEAR(*m.rise_time_s, std::log(9.0), 1e-6);
  EXPECT_EQ(m.overshoot_pct, 0.0);
}

TEST(AnalyzeErrorTraceTest, OvershootAndUnsettledTrace) {
  const std::vector<double> e{1.0, 0.2, -0.25, -0.1, 0.5};
  const ErrorTraceMetrics m = AnalyzeErrorTrace(e, 0.0, 1.0, 0.02);
  EXPECT_DOUBLE_EQ(m.overshoot_pct, 25.0);
  EXPECT_FALSE(m.settling_time_s);
  EXPECT_DOUBLE_EQ(m.mean_abs_error, 2.05 / 5.0);
}

TEST(ComputeMetricsTest, PerfectTrackingHasZeroErrors) {
  const SimLog log = SyntheticLog(0.01, 500, [](double) { return 0.0; });
  const Metrics m = ComputeMetrics(log, MetricsConfig{});
  EXPECT_EQ(m.mean_abs_error, 0.0);
  EXPECT_EQ(m.overshoot_pct, 0.0);
  EXPECT_EQ(*m.settling_time_s, 0.0);
  EXPECT_EQ(*m.rise_time_s, 0.0);
  EXPECT_EQ(m.ub_decay_ratio, 0.0);
  EXPECT_EQ(*m.s_convergence_time_s, 0.0);
}

TEST(ComputeMetricsTest, EmptyLogIsAnError) {
  EXPECT_THROW(ComputeMetrics(SimLog{}, MetricsConfig{}), ConfigError);
  EXPECT_THROW(ComputeMetrics(RobotLog{}, MetricsConfig{}), ConfigError);
}

TEST(ComputeMetricsTest, SurfaceThresholdAndDecay) {
  const SimLog log = SyntheticLog(0.01, 1001, Decay);
  const Metrics m = ComputeMetrics(log, MetricsConfig{});
  // |s| peaks at 3, so the threshold is the delta floor.
  EXPECT_EQ(m.s_threshold, 0.05);
  ASSERT_TRUE(m.s_convergence_time_s);
  // 3 exp(-t) < 0.05 from t = ln 60 onwards, rounded up to the grid.
  EXPECT_NEAR(*m.s_convergence_time_s, std::log(60.0), 0.01);
  double tail = 0.0;
  for (int k = 801; k <= 1000; ++k) tail += 2.0 * std::exp(-0.01 * k);
  EXPECT_NEAR(m.ub_decay_ratio, tail / 200.0 / 2.0, 1e-12);
}

TEST(ComputeMetricsTest, EmpiricalBoundsAndAssumption) {
  const SimLog log = SyntheticLog(1e-3, 2000, Decay);
  MetricsConfig cfg;
  cfg.alpha = 25.0;
  const Metrics m = ComputeMetrics(log, cfg);
  // u_t = 2 exp(-t), x = -exp(-t): peak rates 2 and 1.
  EXPECT_NEAR(m.empirical_bounds.b_udot_t, 2.0, 1e-2);
  EXPECT_NEAR(m.empirical_bounds.b_xddot_n, 1.0, 1e-2);
  EXPECT_EQ(m.empirical_bounds.b_delta_dot, 0.0);
  ASSERT_TRUE(m.rate_bound_holds);
  EXPECT_TRUE(*m.rate_bound_holds);
  cfg.alpha = 2.5;
  EXPECT_FALSE(*ComputeMetrics(log, cfg).rate_bound_holds);
}

TEST(ComputeMetricsTest, ConvergedTailOnlyLowersWindowMeans) {
  const SimLog base = SyntheticLog(0.01, 1500, Decay);
  SimLog extended = base;
  for (int k = 1500; k < 2500; ++k) {
    PlantLogRow row = base.rows.back();
    row.t = k * 0.01;
    row.x = {0.0};
    row.e = {0.0};
    row.u_b = row.u_t = row.u = row.s = 0.0;
    extended.rows.push_back(row);
  }
  const Metrics a = ComputeMetrics(base, MetricsConfig{});
  const Metrics b = ComputeMetrics(extended, MetricsConfig{});
  EXPECT_EQ(a.rise_time_s, b.rise_time_s);
  EXPECT_EQ(a.settling_time_s, b.settling_time_s);
  EXPECT_EQ(a.overshoot_pct, b.overshoot_pct);
  EXPECT_EQ(a.s_convergence_time_s, b.s_convergence_time_s);
  EXPECT_EQ(a.s_threshold, b.s_threshold);
  EXPECT_LE(b.mean_abs_error, a.mean_abs_error);
  EXPECT_LE(b.ub_decay_ratio, a.ub_decay_ratio);
}

TEST(ComputeMetricsTest, RobotConstantOffset) {
  RobotLog log;
  log.dt = 0.2;
  for (int k = 0; k < 100; ++k) {
    RobotLogRow row;
    row.t = k * 0.2;
    row.r = {1.0 + 0.4 * row.t, 2.0, 0.4, 0.0};
    row.x = {0.9 + 0.4 * row.t, 2.0, 0.4, 0.0};
    for (int i = 0; i < 4; ++i) row.e[i] = row.r[i] - row.x[i];
    row.euclid_err = std::hypot(row.e[0], row.e[1]);
    log.rows.push_back(row);
  }
  const Metrics m = ComputeMetrics(log, MetricsConfig{});
  ASSERT_TRUE(m.mean_euclid_err_m);
  EXPECT_NEAR(*m.mean_euclid_err_m, 0.1, 1e-12);
  EXPECT_EQ(*m.on_track_time_s, 0.0);
}

TEST(ComputeMetricsTest, RobotNeverOnTrack) {
  RobotLog log;
  log.dt = 0.2;
  for (int k = 0; k < 10; ++k) {
    RobotLogRow row;
    row.t = k * 0.2;
    row.euclid_err = 1.0;
    log.rows.push_back(row);
  }
  const Metrics m = ComputeMetrics(log, MetricsConfig{});
  EXPECT_FALSE(m.mean_euclid_err_m);
  EXPECT_FALSE(m.on_track_time_s);
  EXPECT_TRUE(m.ToJson()["mean_euclid_err_m"].is_null());
}

TEST(CompareTest, LowerIsBetter) {
  Metrics flc, clelc;
  flc.mean_abs_error = 0.1;
  clelc.mean_abs_error = 0.02;
  flc.overshoot_pct = 5.0;
  clelc.overshoot_pct = 5.0;
  flc.settling_time_s = 2.0;
  clelc.rise_time_s = 1.0;
  flc.rise_time_s = 0.5;
  const ComparisonReport report = Compare(flc, clelc);
  const ComparisonEntry* mae = report.Find("mean_abs_error");
  ASSERT_NE(mae, nullptr);
  EXPECT_EQ(mae->winner, "clelc");
  EXPECT_DOUBLE_EQ(*mae->ratio, 0.2);
  EXPECT_EQ(report.Find("overshoot_pct")->winner, "tie");
  EXPECT_EQ(report.Find("rise_time_s")->winner, "flc");
  EXPECT_EQ(report.Find("settling_time_s")->winner, "flc");
  EXPECT_FALSE(report.Find("settling_time_s")->ratio);
  EXPECT_EQ(report.Find("mean_euclid_err_m")->winner, "n/a");
  EXPECT_EQ(report.Find("no_such_metric"), nullptr);

  const nlohmann::json j = report.ToJson();
  EXPECT_EQ(j["mean_abs_error"]["winner"], "clelc");
  EXPECT_TRUE(j["mean_euclid_err_m"]["ratio"].is_null());
  EXPECT_NE(report.ToTable().find("mean_abs_error"), std::string::npos);
}

}  // namespace
}  // namespace clelc
