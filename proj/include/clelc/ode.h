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

#ifndef CLELC_ODE_H_
#define CLELC_ODE_H_

#include <cmath>
#include <cstddef>

namespace clelc {

enum class Integrator { kEuler, kRk4 };

namespace internal {

template <class State>
State Axpy(const State& x, double h, const State& k) {
  State out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * k[i];
  return out;
}

}  // namespace internal

// One fixed step of dx/dt = rate(x, t) from t to t + h. The final stage is
// evaluated just below t + h, so forcing terms that switch on exactly at a
// step boundary do not leak into the step that ends there.
template <class State, class Rate>
State OdeStep(const Rate& rate, const State& x, double t, double h,
              Integrator method) {
  const double t_end = std::nextafter(t + h, t);
  if (method == Integrator::kEuler) {
    return internal::Axpy(x, h, rate(x, t));
  }
  const State k1 = rate(x, t);
  const State k2 = rate(internal::Axpy(x, 0.5 * h, k1), t + 0.5 * h);
  const State k3 = rate(internal::Axpy(x, 0.5 * h, k2), t + 0.5 * h);
  const State k4 = rate(internal::Axpy(x, h, k3), t_end);
  State out = x;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace clelc

#endif  // CLELC_ODE_H_
