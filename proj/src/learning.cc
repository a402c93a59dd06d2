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

#include "clelc/learning.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "clelc/errors.h"
#include "clelc/sliding_surface.h"

namespace clelc {
namespace {

void RequireFinite(double value, const char* what, int a, int b) {
  if (!std::isfinite(value)) {
    std::string where = std::string(what) + "[" + std::to_string(a);
    if (b >= 0) where += "," + std::to_string(b);
    where += "]";
    throw LearningFault("learning step diverged at " + where);
  }
}

}  // namespace

void LearningConfig::Validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(alpha)) throw ConfigError("alpha must be positive");
  if (!positive(delta)) throw ConfigError("delta must be positive");
  if (!positive(sigma_min)) throw ConfigError("sigma_min must be positive");
  if (!positive(sigma_max) || sigma_max <= sigma_min) {
    throw ConfigError("sigma_max must exceed sigma_min");
  }
  if (!positive(center_guard_eps)) {
    throw ConfigError("center_guard_eps must be positive");
  }
  if (!positive(dt)) throw ConfigError("learning dt must be positive");
}

double CenterRate(double e, double edot, double center, double alpha,
                  double sgn_s) {
  return edot + (e - center) * alpha * sgn_s;
}

double WidthRate(double e, double center, double sigma, double alpha,
                 double sgn_s, const LearningConfig& cfg) {
  const double d = e - center;
  const double denom =
      std::max(d * d, cfg.center_guard_eps * cfg.center_guard_eps);
  return -(sigma + sigma * sigma * sigma / denom) * alpha * sgn_s;
}

std::vector<double> ConsequentRates(const FiringState& firing, double alpha,
                                    double sgn_s) {
  double norm2 = 0.0;
  for (double w : firing.normalized) norm2 += w * w;
  if (!(norm2 > 0.0)) {
    throw LearningFault("normalized firing strengths have zero norm");
  }
  std::vector<double> rates(firing.normalized.size());
  for (size_t r = 0; r < rates.size(); ++r) {
    rates[r] = firing.normalized[r] / norm2 * alpha * sgn_s;
  }
  return rates;
}

NeuroFuzzyParams LearningStep(const NeuroFuzzyParams& params,
                              std::span<const double> e,
                              std::span<const double> edot, double s,
                              const LearningConfig& cfg) {
  const int inputs = params.input_count();
  const int mfs = params.mf_per_input();
  if (static_cast<int>(e.size()) != inputs ||
      static_cast<int>(edot.size()) != inputs) {
    throw ConfigError("learning step expects " + std::to_string(inputs) +
                      " errors and error rates");
  }
  const double sgn_s = SmoothedSign(s, cfg.delta);
  const FiringState firing = FiringStrengths(e, params);
  const std::vector<double> f_rates =
      ConsequentRates(firing, cfg.alpha, sgn_s);

  NeuroFuzzyParams next = params;
  for (int i = 0; i < inputs; ++i) {
    const double ei = e[static_cast<size_t>(i)];
    const double edi = edot[static_cast<size_t>(i)];
    for (int k = 0; k < mfs; ++k) {
      const double c = params.center(i, k);
      const double sigma = params.width(i, k);
      const double c_rate = CenterRate(ei, edi, c, cfg.alpha, sgn_s);
      const double s_rate = WidthRate(ei, c, sigma, cfg.alpha, sgn_s, cfg);
      RequireFinite(c_rate, "center rate", i, k);
      RequireFinite(s_rate, "width rate", i, k);
      next.center(i, k) = c + c_rate * cfg.dt;
      next.width(i, k) =
          std::clamp(sigma + s_rate * cfg.dt, cfg.sigma_min, cfg.sigma_max);
      RequireFinite(next.center(i, k), "center", i, k);
    }
  }
  auto f = next.mutable_consequents();
  for (size_t r = 0; r < f.size(); ++r) {
    RequireFinite(f_rates[r], "consequent rate", static_cast<int>(r), -1);
    f[r] += f_rates[r] * cfg.dt;
    RequireFinite(f[r], "consequent", static_cast<int>(r), -1);
  }
  return next;
}

}  // namespace clelc
