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

#ifndef CLELC_PLANT_H_
#define CLELC_PLANT_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "clelc/ode.h"

namespace clelc {

using StateVector = std::vector<double>;

// Chain-of-integrators plant
//   dx_i/dt = x_{i+1},  dx_n/dt = a(x) + b(x) u + Delta(x, u, t).
struct PlantModel {
  using StateFn = std::function<double(std::span<const double>)>;
  using DisturbanceFn =
      std::function<double(std::span<const double>, double u, double t)>;

  int order = 1;
  StateFn a_fn;
  StateFn b_fn;
  DisturbanceFn disturbance;  // empty means no uncertainty

  double a(std::span<const double> x) const { return a_fn(x); }
  double b(std::span<const double> x) const { return b_fn(x); }
  double Disturbance(std::span<const double> x, double u, double t) const {
    return disturbance ? disturbance(x, u, t) : 0.0;
  }
};

// [x2, ..., xn, a + b u + Delta]. Throws SimulationFault on non-finite a, b
// or Delta.
StateVector Dynamics(const PlantModel& model, std::span<const double> x,
                     double u, double t);

// Third-order benchmark: a(x) = -2 x1 - x2 - sin(x3) + exp(x1), b = 1, and
// Delta = amplitude * sin(omega t) from onset_s onwards (inclusive).
PlantModel BenchmarkPlant(double onset_s = 10.0, double amplitude = 5.0,
                          double omega = 1.0);

// Advances x by dt with u held constant. Throws SimulationFault if the result
// is not finite.
StateVector IntegrateStep(const PlantModel& model, std::span<const double> x,
                          double u, double t, double dt,
                          Integrator method = Integrator::kRk4);

// One row per controller sample.
struct PlantLogRow {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> r;
  std::vector<double> e;
  double u_b = 0.0;
  double u_f = 0.0;
  double u_n = 0.0;
  double u_t = 0.0;
  double u = 0.0;
  double s = 0.0;
  double delta = 0.0;
};

struct SimEvent {
  int step = 0;
  std::string message;
};

struct SimLog {
  int order = 0;
  double dt = 0.0;
  std::vector<PlantLogRow> rows;
  std::vector<SimEvent> events;

  // Header `t,x1..xn,r1..rn,e1..en,u_b,u_f,u_n,u_t,u,s,delta` followed by one
  // line per row, floats in shortest round-trip form.
  std::string ToCsv() const;
};

}  // namespace clelc

#endif  // CLELC_PLANT_H_
