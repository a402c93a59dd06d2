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

#include "clelc/sliding_surface.h"

#include <cmath>
#include <string>

#include "clelc/errors.h"

namespace clelc {

void SlidingSurfaceSpec::Validate() const {
  if (order < 1 || order > kMaxSurfaceOrder) {
    throw ConfigError("sliding surface order must be in [1, " +
                      std::to_string(kMaxSurfaceOrder) + "], got " +
                      std::to_string(order));
  }
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw ConfigError("sliding surface slope must be positive and finite");
  }
}

GainVector MakeGainVector(const SlidingSurfaceSpec& spec) {
  spec.Validate();
  const int n = spec.order;
  GainVector k;
  k.gains.resize(static_cast<size_t>(n));
  // Gain for e_{i+1} is C(n, n - i) * slope^(n - i).
  for (int i = 0; i < n; ++i) {
    const int power = n - i;
    double binom = 1.0;
    for (int j = 1; j <= power; ++j) {
      binom = binom * (n - power + j) / j;
    }
    k.gains[static_cast<size_t>(i)] = binom * std::pow(spec.slope, power);
  }
  return k;
}

double SlidingValue(std::span<const double> errors, double error_rate_n,
                    const GainVector& gains) {
  if (static_cast<int>(errors.size()) != gains.size()) {
    throw ConfigError("error vector length " + std::to_string(errors.size()) +
                      " does not match gain vector length " +
                      std::to_string(gains.size()));
  }
  double s = error_rate_n;
  for (size_t i = 0; i < errors.size(); ++i) s += gains.gains[i] * errors[i];
  return s;
}

double SmoothedSign(double s, double delta) {
  return s / (std::abs(s) + delta);
}

}  // namespace clelc
