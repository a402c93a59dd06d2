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

#include "clelc/controller.h"

#include <cmath>
#include <string>
#include <utility>

#include "clelc/errors.h"

namespace clelc {

ErrorVector ErrorVector::FromReference(std::span<const double> r,
                                       std::span<const double> x) {
  if (r.size() != x.size()) {
    throw ConfigError("reference and state lengths differ");
  }
  ErrorVector out;
  out.e.resize(r.size());
  for (size_t i = 0; i < r.size(); ++i) out.e[i] = r[i] - x[i];
  return out;
}

double FeedbackControl(const ErrorVector& e, const GainVector& k) {
  if (e.size() != k.size()) {
    throw ConfigError("error vector length " + std::to_string(e.size()) +
                      " does not match gain vector length " +
                      std::to_string(k.size()));
  }
  double u = 0.0;
  for (size_t i = 0; i < e.e.size(); ++i) u += k.gains[i] * e.e[i];
  return u;
}

double FeedforwardControl(const ReferenceSignal& ref) { return ref.r_np1; }

ControlDecomposition FlcLaw(double a_x, double b_x, double u_b, double u_f,
                            double b_min) {
  return ClelcLaw(a_x, b_x, u_b, u_f, 0.0, b_min);
}

ControlDecomposition ClelcLaw(double a_x, double b_x, double u_b, double u_f,
                              double u_n, double b_min) {
  if (!(std::abs(b_x) > b_min)) {
    throw SingularityError("input gain b(x) = " + std::to_string(b_x) +
                           " is within the singularity floor " +
                           std::to_string(b_min));
  }
  ControlDecomposition d;
  d.u_b = u_b;
  d.u_f = u_f;
  d.u_n = u_n;
  d.u_t = u_b + u_f + u_n;
  d.u = (d.u_t - a_x) / b_x;
  return d;
}

LearningChannel::LearningChannel(NeuroFuzzyParams params, LearningConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {
  cfg_.Validate();
  params_.Validate(cfg_.sigma_min);
}

double LearningChannel::Output(std::span<const double> errors) {
  const FiringState firing = FiringStrengths(errors, params_);
  last_underflow_ = firing.underflow;
  return NetworkOutput(firing, params_.consequents());
}

void LearningChannel::Adapt(std::span<const double> errors,
                            std::span<const double> error_rates, double s) {
  params_ = LearningStep(params_, errors, error_rates, s, cfg_);
}

}  // namespace clelc
