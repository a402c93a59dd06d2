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

#ifndef CLELC_SLIDING_SURFACE_H_
#define CLELC_SLIDING_SURFACE_H_

#include <span>
#include <vector>

namespace clelc {

// Highest supported system order. Binomial coefficients up to C(8, 4) = 70
// are exact in double precision.
inline constexpr int kMaxSurfaceOrder = 8;

// Default boundary-layer width of the smoothed sign.
inline constexpr double kDefaultSignDelta = 0.05;

// Sliding surface s = (d/dt + slope)^order e1 of the closed-loop error
// dynamics.
struct SlidingSurfaceSpec {
  int order = 1;
  double slope = 1.0;  // 1/s

  // Throws ConfigError unless 1 <= order <= kMaxSurfaceOrder and slope > 0.
  void Validate() const;
};

// Feedback gains k1..kn. Element i multiplies error e_{i+1} (zero-based), so
// gains.front() is the position gain slope^n and gains.back() is n * slope.
struct GainVector {
  std::vector<double> gains;

  int size() const { return static_cast<int>(gains.size()); }
  double operator[](int i) const { return gains[static_cast<size_t>(i)]; }
};

// Coefficients of (x + slope)^n excluding the leading x^n term, ordered from
// the constant term upward.
GainVector MakeGainVector(const SlidingSurfaceSpec& spec);

// s = edot_n + sum_i k_i e_i. Throws ConfigError on a length mismatch.
double SlidingValue(std::span<const double> errors, double error_rate_n,
                    const GainVector& gains);

// s / (|s| + delta), the chattering-reduced replacement for sgn(s).
double SmoothedSign(double s, double delta);

}  // namespace clelc

#endif  // CLELC_SLIDING_SURFACE_H_
