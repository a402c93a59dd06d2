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

#include "clelc/plant.h"

#include <cmath>
#include <string>

#include "clelc/csv.h"
#include "clelc/errors.h"

namespace clelc {

StateVector Dynamics(const PlantModel& model, std::span<const double> x,
                     double u, double t) {
  if (static_cast<int>(x.size()) != model.order) {
    throw ConfigError("state length " + std::to_string(x.size()) +
                      " does not match plant order " +
                      std::to_string(model.order));
  }
  const double a = model.a(x);
  const double b = model.b(x);
  const double d = model.Disturbance(x, u, t);
  if (!std::isfinite(a)) {
    throw SimulationFault("a(x) not finite at t=" + FormatDouble(t));
  }
  if (!std::isfinite(b)) {
    throw SimulationFault("b(x) not finite at t=" + FormatDouble(t));
  }
  if (!std::isfinite(d)) {
    throw SimulationFault("disturbance not finite at t=" + FormatDouble(t));
  }
  StateVector rate(x.size());
  for (size_t i = 0; i + 1 < x.size(); ++i) rate[i] = x[i + 1];
  rate.back() = a + b * u + d;
  return rate;
}

PlantModel BenchmarkPlant(double onset_s, double amplitude, double omega) {
  PlantModel m;
  m.order = 3;
  m.a_fn = [](std::span<const double> x) {
    return -2.0 * x[0] - x[1] - std::sin(x[2]) + std::exp(x[0]);
  };
  m.b_fn = [](std::span<const double>) { return 1.0; };
  m.disturbance = [onset_s, amplitude, omega](std::span<const double>, double,
                                              double t) {
    return t >= onset_s ? amplitude * std::sin(omega * t) : 0.0;
  };
  return m;
}

StateVector IntegrateStep(const PlantModel& model, std::span<const double> x,
                          double u, double t, double dt, Integrator method) {
  if (!(dt > 0.0)) throw ConfigError("integration step must be positive");
  auto rate = [&](const StateVector& s, double tt) {
    return Dynamics(model, s, u, tt);
  };
  StateVector next = OdeStep(rate, StateVector(x.begin(), x.end()), t, dt,
                             method);
  for (size_t i = 0; i < next.size(); ++i) {
    if (!std::isfinite(next[i])) {
      throw SimulationFault("state x" + std::to_string(i + 1) +
                            " not finite after step at t=" + FormatDouble(t));
    }
  }
  return next;
}

std::string SimLog::ToCsv() const {
  std::vector<std::string> names{"t"};
  for (const char* prefix : {"x", "r", "e"}) {
    for (int i = 1; i <= order; ++i) {
      names.push_back(prefix + std::to_string(i));
    }
  }
  for (const char* n : {"u_b", "u_f", "u_n", "u_t", "u", "s", "delta"}) {
    names.emplace_back(n);
  }
  std::string out;
  AppendCsvHeader(out, names);
  std::vector<double> fields;
  for (const PlantLogRow& row : rows) {
    fields.clear();
    fields.push_back(row.t);
    fields.insert(fields.end(), row.x.begin(), row.x.end());
    fields.insert(fields.end(), row.r.begin(), row.r.end());
    fields.insert(fields.end(), row.e.begin(), row.e.end());
    fields.insert(fields.end(),
                  {row.u_b, row.u_f, row.u_n, row.u_t, row.u, row.s,
                   row.delta});
    AppendCsvLine(out, fields);
  }
  return out;
}

}  // namespace clelc
