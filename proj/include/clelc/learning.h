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

#ifndef CLELC_LEARNING_H_
#define CLELC_LEARNING_H_

#include <span>
#include <vector>

#include "clelc/neuro_fuzzy.h"

namespace clelc {

// Sliding-mode learning law for the neuro-fuzzy parameters, integrated with
// forward Euler at the controller period.
struct LearningConfig {
  double alpha = 25.0;  // learning rate, bounds |du_n/dt|
  double delta = 0.05;  // smoothed-sign boundary layer
  double sigma_min = kDefaultSigmaMin;
  // Upper clamp on widths. The width law grows sigma cubically while s < 0,
  // so without a ceiling the widths overflow within a few steps.
  double sigma_max = 1e6;
  // Floor on |e - c| in the width-law denominator.
  double center_guard_eps = 1e-6;
  double dt = 0.01;

  void Validate() const;
};

// Post-hoc bounds referenced by the stability conditions. Logged, never
// enforced.
struct BoundEstimates {
  double b_udot_t = 0.0;
  double b_xddot_n = 0.0;
  double b_delta_dot = 0.0;
};

// dc_ik/dt = edot_i + (e_i - c_ik) alpha sgn(s).
double CenterRate(double e, double edot, double center, double alpha,
                  double sgn_s);

// dsigma_ik/dt = -(sigma + sigma^3 / max((e - c)^2, eps^2)) alpha sgn(s).
double WidthRate(double e, double center, double sigma, double alpha,
                 double sgn_s, const LearningConfig& cfg);

// df_r/dt = w~_r / (sum_j w~_j^2) alpha sgn(s). The normalization by the full
// squared norm makes sum_r (df_r/dt) w~_r equal alpha sgn(s).
std::vector<double> ConsequentRates(const FiringState& firing, double alpha,
                                    double sgn_s);

// Advances every center, width and consequent by one Euler step of the
// learning law evaluated at (e, edot, s). Widths are clamped into
// [sigma_min, sigma_max]. Throws LearningFault naming the first parameter
// whose rate or updated value is not finite; the input is left untouched.
NeuroFuzzyParams LearningStep(const NeuroFuzzyParams& params,
                              std::span<const double> e,
                              std::span<const double> edot, double s,
                              const LearningConfig& cfg);

}  // namespace clelc

#endif  // CLELC_LEARNING_H_
