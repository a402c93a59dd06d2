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

// Acceptance checks for the library and the sim binary. Prints one PASS or
// FAIL line per criterion and exits non-zero if any criterion fails.
//
// Usage: acceptance_test <path-to-sim>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "clelc/analysis.h"
#include "clelc/learning.h"
#include "clelc/neuro_fuzzy.h"
#include "clelc/ode.h"
#include "clelc/plant.h"
#include "clelc/scenario.h"
#include "clelc/sliding_surface.h"

namespace {

using namespace clelc;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

template <class F>
double SecondsFor(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

double MeanAbsX1(const SimLog& log, double from, double to) {
  double sum = 0.0;
  int n = 0;
  for (const auto& row : log.rows) {
    if (row.t >= from && row.t <= to) {
      sum += std::abs(row.x[0]);
      ++n;
    }
  }
  return n > 0 ? sum / n : 0.0;
}

Outcome GainSynthesis() {
  const GainVector bench = MakeGainVector({3, 3.0});
  const GainVector robot = MakeGainVector({2, 0.3});
  const bool pass = bench.gains == std::vector<double>{27.0, 27.0, 9.0} &&
                    robot.gains == std::vector<double>{0.09, 0.6};
  return {pass, Fmt("k(3,3) = [%g, %g, %g]", bench[0], bench[1], bench[2]) +
                    Fmt(", k(2,0.3) = [%.17g, %.17g]", robot[0], robot[1])};
}

Outcome FiniteTime() {
  const double t_h = FiniteTimeBound(-90.0, 25.0, 5.0);
  return {t_h == 4.5, Fmt("t_h = %.17g s", t_h)};
}

Outcome BenchmarkConvergence(const SimLog& log, double seconds) {
  const std::vector<double>& x0 = log.rows.front().x;
  std::vector<double> worst(x0.size(), 0.0);
  for (const auto& row : log.rows) {
    if (row.t < 4.5 || row.t > 10.0) continue;
    for (size_t i = 0; i < x0.size(); ++i) {
      worst[i] = std::max(worst[i], std::abs(row.x[i]) / std::abs(x0[i]));
    }
  }
  const bool converged = std::all_of(worst.begin(), worst.end(),
                                     [](double w) { return w < 0.02; });
  return {converged && seconds < 1.0,
          Fmt("max |x_i|/|x_i(0)| on [4.5, 10] s = %.3g, %.3g, %.3g; "
              "run %.3f s",
              worst[0], worst[1], worst[2], seconds)};
}

Outcome RobustnessSplit(const SimLog& clelc, const SimLog& flc) {
  const double c = MeanAbsX1(clelc, 15.0, 20.0);
  const double f = MeanAbsX1(flc, 15.0, 20.0);
  const bool pass = f > 0.0 && c <= 0.2 * f && f >= 10.0 * c;
  return {pass, Fmt("mean |x1| on [15, 20] s: CLELC %.4g, FLC %.4g "
                    "(ratio %.4g)",
                    c, f, c / f)};
}

Outcome FeedbackHandOff(const SimLog& log) {
  double peak = 0.0;
  for (const auto& row : log.rows) peak = std::max(peak, std::abs(row.u_b));
  const double t_end = log.rows.back().t;
  double sum = 0.0;
  int n = 0;
  for (const auto& row : log.rows) {
    if (row.t > t_end - 2.0) {
      sum += std::abs(row.u_b);
      ++n;
    }
  }
  const double ratio = sum / n / peak;
  return {ratio <= 0.01,
          Fmt("mean |u_b| over final 2 s / peak = %.4g (peak %.4g)", ratio,
              peak)};
}

// A benchmark-sized network with every input roughly midway between two
// centers, so neither the center guard nor the width clamp is active.
struct LearningState {
  NeuroFuzzyParams params;
  std::vector<double> e{5.2, -4.6, 4.9};
  std::vector<double> edot{-2.1, 4.3, -5.0};
  double s = 0.03;
};

LearningState MakeLearningState() {
  const std::vector<double> ranges{10.0, 10.0, 10.0};
  LearningState st{NeuroFuzzyParams::UniformGrid(ranges, 3)};
  auto conseq = st.params.mutable_consequents();
  for (size_t r = 0; r < conseq.size(); ++r) conseq[r] = std::sin(1.0 + r);
  return st;
}

double NetOut(const NeuroFuzzyParams& p, const std::vector<double>& e) {
  return NetworkOutput(FiringStrengths(e, p), p.consequents());
}

Outcome LearningIdentity() {
  const LearningState st = MakeLearningState();
  LearningConfig cfg;
  const double target = cfg.alpha * SmoothedSign(st.s, cfg.delta) * cfg.dt;
  const FiringState frozen = FiringStrengths(st.e, st.params);
  const NeuroFuzzyParams next =
      LearningStep(st.params, st.e, st.edot, st.s, cfg);
  const double du = NetworkOutput(frozen, next.consequents()) -
                    NetworkOutput(frozen, st.params.consequents());
  const double frozen_rel = std::abs(du - target) / std::abs(target);

  auto residual = [&](double dt) {
    LearningConfig c = cfg;
    c.dt = dt;
    const NeuroFuzzyParams p = LearningStep(st.params, st.e, st.edot, st.s, c);
    std::vector<double> e = st.e;
    for (size_t i = 0; i < e.size(); ++i) e[i] += st.edot[i] * dt;
    return std::abs(NetOut(p, e) - NetOut(st.params, st.e) -
                    c.alpha * SmoothedSign(st.s, c.delta) * dt);
  };
  const double ratio = residual(1e-3) / residual(5e-4);
  return {frozen_rel <= 1e-12 && ratio >= 3.5,
          Fmt("frozen-firing relative error %.3g; residual ratio "
              "dt 1e-3 -> 5e-4 = %.4g",
              frozen_rel, ratio)};
}

Outcome RobotTracking() {
  ScenarioConfig cfg = DefaultRobotConfig();
  cfg.controller = ControllerKind::kFlc;
  RobotLog flc, clelc;
  const double t_flc = SecondsFor([&] { flc = RunRobotScenario(cfg); });
  cfg.controller = ControllerKind::kClelc;
  const double t_clelc = SecondsFor([&] { clelc = RunRobotScenario(cfg); });

  const MetricsConfig mc = cfg.MetricsSettings();
  const Metrics mf = ComputeMetrics(flc, mc);
  const Metrics mn = ComputeMetrics(clelc, mc);
  if (!mf.on_track_time_s || !mn.on_track_time_s) {
    return {false, "a controller never reached the on-track state"};
  }
  const double start = std::max(*mf.on_track_time_s, *mn.on_track_time_s);
  auto mean_after = [start](const RobotLog& log) {
    double sum = 0.0;
    int n = 0;
    for (const auto& row : log.rows) {
      if (row.t >= start) {
        sum += row.euclid_err;
        ++n;
      }
    }
    return sum / n;
  };
  const double ef = mean_after(flc), en = mean_after(clelc);
  const double slowest = std::max(t_flc, t_clelc);
  return {en <= 0.5 * ef && slowest < 5.0,
          Fmt("mean Euclidean error after %.1f s: CLELC %.4g m, FLC %.4g m "
              "(ratio %.4g)",
              start, en, ef, en / ef) +
              Fmt("; 400 s run %.3f s", slowest)};
}

Outcome ProofIdentities(const SimLog& clelc_log) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> offset(0.3, 1.0);
  std::uniform_real_distribution<double> ratio(0.5, 1.5);
  const LearningConfig cfg;

  double worst_kr = 0.0, worst_mu = 0.0, worst_sum = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    NeuroFuzzyParams p(3, 3);
    std::vector<double> e(3), edot(3);
    for (int i = 0; i < 3; ++i) {
      e[i] = unit(rng);
      edot[i] = unit(rng);
      for (int k = 0; k < 3; ++k) {
        const double d = offset(rng);
        p.center(i, k) = e[i] + (unit(rng) < 0.0 ? -d : d);
        p.width(i, k) = d * ratio(rng);
      }
    }
    const double sgn = SmoothedSign(0.2 * unit(rng), cfg.delta);
    std::vector<double> mmdot(9);
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) {
        const double c = p.center(i, k), sigma = p.width(i, k);
        const double cdot = CenterRate(e[i], edot[i], c, cfg.alpha, sgn);
        const double sdot = WidthRate(e[i], c, sigma, cfg.alpha, sgn, cfg);
        const double m = (e[i] - c) / sigma;
        const double md =
            (edot[i] - cdot) / sigma - (e[i] - c) * sdot / (sigma * sigma);
        mmdot[i * 3 + k] = m * md;

        // Membership rate against a central difference along the same
        // parameter trajectory.
        const double h = 1e-6;
        auto mu = [&](double tau) {
          return Membership(e[i] + tau * edot[i], c + tau * cdot,
                            sigma + tau * sdot);
        };
        const double numeric = (mu(h) - mu(-h)) / (2.0 * h);
        const double analytic = -m * md * mu(0.0);
        worst_mu = std::max(worst_mu, std::abs(numeric - analytic) /
                                          std::max(1.0, std::abs(analytic)));
      }
    }
    for (int r = 0; r < p.rule_count(); ++r) {
      double k_r = 0.0;
      for (int i = 0; i < 3; ++i) k_r += mmdot[i * 3 + p.RuleMembership(r, i)];
      const double expected = 3.0 * cfg.alpha * sgn;
      worst_kr = std::max(worst_kr, std::abs(k_r - expected) /
                                        std::max(std::abs(expected), 1e-300));
    }
    const FiringState f = FiringStrengths(e, p);
    double sum = 0.0;
    for (double w : f.normalized) sum += w;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }

  // V = s^2 / 2 must not grow between consecutive samples while |s| > delta.
  int outside = 0, descending = 0;
  const auto& rows = clelc_log.rows;
  for (size_t k = 0; k + 1 < rows.size(); ++k) {
    if (std::abs(rows[k].s) <= cfg.delta) continue;
    ++outside;
    if (rows[k + 1].s * rows[k + 1].s <= rows[k].s * rows[k].s) ++descending;
  }
  const double fraction =
      outside > 0 ? static_cast<double>(descending) / outside : 1.0;

  const bool pass = worst_kr <= 1e-10 && worst_mu <= 1e-5 &&
                    worst_sum <= 1e-12 && fraction >= 0.99;
  return {pass, Fmt("K_r rel err %.3g, membership-rate err %.3g, "
                    "|sum w - 1| %.3g, ",
                    worst_kr, worst_mu, worst_sum) +
                    Fmt("V non-increasing on %.4g of %g samples with |s| > "
                        "delta",
                        fraction, outside)};
}

// Plant rate of the last state, measured by integrating the plant forward
// and backward from the logged state with u and Delta held.
double MeasuredLastRate(const PlantModel& plant, const PlantLogRow& row) {
  PlantModel held = plant;
  const double delta = row.delta;
  held.disturbance = [delta](std::span<const double>, double, double) {
    return delta;
  };
  const double h = 1e-5;
  auto rate = [&](const StateVector& x, double t) {
    return Dynamics(held, x, row.u, t);
  };
  const StateVector fwd = OdeStep(rate, row.x, row.t, h, Integrator::kRk4);
  const StateVector bwd = OdeStep(rate, row.x, row.t, -h, Integrator::kRk4);
  return (fwd.back() - bwd.back()) / (2.0 * h);
}

Outcome ClosedLoopResiduals(const SimLog& flc, const SimLog& clelc) {
  const PlantModel plant = BenchmarkPlant();
  double worst_flc = 0.0, worst_clelc = 0.0;
  for (const auto& row : flc.rows) {
    // r = 0, so edot_n = -dx_n/dt and u_f = 0.
    const double edot_n = -MeasuredLastRate(plant, row);
    worst_flc = std::max(worst_flc, std::abs(edot_n + row.u_b + row.delta));
  }
  for (const auto& row : clelc.rows) {
    const double edot_n = -MeasuredLastRate(plant, row);
    worst_clelc = std::max(
        worst_clelc, std::abs(edot_n + row.u_b + row.u_n + row.delta));
  }
  return {worst_flc < 1e-6 && worst_clelc < 1e-6,
          Fmt("max residual FLC %.3g, CLELC %.3g", worst_flc, worst_clelc)};
}

std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome Determinism(const std::string& sim) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("clelc_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path config = dir / "benchmark.json";
  std::ofstream(config) << DefaultBenchmarkConfig().ToJson().dump(2);

  std::vector<std::string> flc, clelc;
  for (const char* run : {"a", "b"}) {
    const std::string cmd = "\"" + sim + "\" compare --config \"" +
                            config.string() + "\" --out-dir \"" +
                            (dir / run).string() + "\" > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      fs::remove_all(dir);
      return {false, "sim compare exited with an error"};
    }
    flc.push_back(ReadAll(dir / run / "flc.csv"));
    clelc.push_back(ReadAll(dir / run / "clelc.csv"));
  }
  fs::remove_all(dir);
  const bool same = !flc[0].empty() && !clelc[0].empty() &&
                    flc[0] == flc[1] && clelc[0] == clelc[1];
  return {same, Fmt("flc.csv %g bytes, clelc.csv %g bytes, identical: ",
                    static_cast<double>(flc[0].size()),
                    static_cast<double>(clelc[0].size())) +
                    (same ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-sim>\n", argv[0]);
    return 2;
  }
  const std::string sim = argv[1];

  ScenarioConfig cfg = DefaultBenchmarkConfig();
  SimLog clelc_log, flc_log;
  const double clelc_seconds =
      SecondsFor([&] { clelc_log = RunPlantScenario(cfg); });
  cfg.controller = ControllerKind::kFlc;
  flc_log = RunPlantScenario(cfg);

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "gain synthesis", GainSynthesis},
      {2, "finite-time bound", FiniteTime},
      {3, "benchmark convergence",
       [&] { return BenchmarkConvergence(clelc_log, clelc_seconds); }},
      {4, "robustness split", [&] { return RobustnessSplit(clelc_log, flc_log); }},
      {5, "feedback hand-off", [&] { return FeedbackHandOff(clelc_log); }},
      {6, "learning identity", LearningIdentity},
      {7, "robot comparative tracking", RobotTracking},
      {8, "proof-identity properties", [&] { return ProofIdentities(clelc_log); }},
      {9, "closed-loop residuals",
       [&] { return ClosedLoopResiduals(flc_log, clelc_log); }},
      {10, "determinism", [&] { return Determinism(sim); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
