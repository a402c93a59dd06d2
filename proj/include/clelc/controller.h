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

#ifndef CLELC_CONTROLLER_H_
#define CLELC_CONTROLLER_H_

#include <span>
#include <vector>

#include "clelc/learning.h"
#include "clelc/neuro_fuzzy.h"
#include "clelc/sliding_surface.h"

namespace clelc {

inline constexpr double kDefaultBMin = 1e-9;

// e_i = r_i - x_i.
struct ErrorVector {
  std::vector<double> e;

  static ErrorVector FromReference(std::span<const double> r,
                                   std::span<const double> x);
  int size() const { return static_cast<int>(e.size()); }
};

// Reference chain r_1..r_n with r_{i+1} = dr_i/dt, plus the two next
// derivatives.
struct ReferenceSignal {
  std::vector<double> r;
  double r_np1 = 0.0;      // dr_n/dt, drives the feedforward term
  double r_dot_np1 = 0.0;  // d^2 r_n/dt^2
};

struct ControlDecomposition {
  double u_b = 0.0;  // feedback
  double u_f = 0.0;  // feedforward
  double u_n = 0.0;  // neuro-fuzzy
  double u_t = 0.0;  // u_b + u_f + u_n
  double u = 0.0;    // physical plant input
};

enum class ControllerKind { kFlc, kClelc };

// How the controller obtains edot_n for the sliding value.
enum class ErrorRateMode {
  // From the plant equation with the previously applied input.
  kAnalytic,
  // Backward difference of e_n over one controller period.
  kDifference,
};

// u_b = sum_i k_i e_i.
double FeedbackControl(const ErrorVector& e, const GainVector& k);

// u_f = dr_n/dt.
double FeedforwardControl(const ReferenceSignal& ref);

// u = (-a + u_b + u_f) / b. Throws SingularityError if |b| <= b_min.
ControlDecomposition FlcLaw(double a_x, double b_x, double u_b, double u_f,
                            double b_min = kDefaultBMin);

// u = (-a + u_b + u_f + u_n) / b.
ControlDecomposition ClelcLaw(double a_x, double b_x, double u_b, double u_f,
                              double u_n, double b_min = kDefaultBMin);

// One SISO learning channel: a neuro-fuzzy network fed with the error vector
// and adapted by the sliding-mode learning law on the channel's surface.
class LearningChannel {
 public:
  LearningChannel(NeuroFuzzyParams params, LearningConfig cfg);

  // Network output for the current errors. Records whether the firing
  // strengths underflowed.
  double Output(std::span<const double> errors);

  // One Euler step of the learning law.
  void Adapt(std::span<const double> errors,
             std::span<const double> error_rates, double s);

  const NeuroFuzzyParams& params() const { return params_; }
  const LearningConfig& config() const { return cfg_; }
  bool last_output_underflowed() const { return last_underflow_; }

 private:
  NeuroFuzzyParams params_;
  LearningConfig cfg_;
  bool last_underflow_ = false;
};

}  // namespace clelc

#endif  // CLELC_CONTROLLER_H_
