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

#ifndef CLELC_SCENARIO_H_
#define CLELC_SCENARIO_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clelc/analysis.h"
#include "clelc/controller.h"
#include "clelc/ode.h"
#include "clelc/plant.h"
#include "clelc/robot.h"
#include "json.hpp"

namespace clelc {

enum class ScenarioKind { kThirdOrder, kRobot, kCustom };
enum class ActuatorMode { kIdeal, kLag };

// Reference r1(t) for chain-of-integrator scenarios; higher entries of the
// chain are its analytic derivatives.
struct ReferenceSpec {
  enum class Kind { kZero, kConstant, kSine };
  Kind kind = Kind::kZero;
  double amplitude = 0.0;
  double omega = 1.0;  // rad/s, sine only

  // r_1..r_n, r_{n+1} and r_{n+2} at time t.
  ReferenceSignal Sample(int order, double t) const;
  friend bool operator==(const ReferenceSpec&, const ReferenceSpec&) = default;
};

// Matched uncertainty Delta(t) = amplitude sin(omega t) for t >= onset_s.
struct DisturbanceSpec {
  enum class Kind { kNone, kSine };
  Kind kind = Kind::kNone;
  double onset_s = 0.0;
  double amplitude = 0.0;
  double omega = 1.0;
  friend bool operator==(const DisturbanceSpec&,
                         const DisturbanceSpec&) = default;
};

// Custom plant: a(x) = a_constant + sum_i a_coefficients[i] x_{i+1}, b constant.
struct CustomPlantSpec {
  std::vector<double> a_coefficients;
  double a_constant = 0.0;
  double b = 1.0;
  friend bool operator==(const CustomPlantSpec&,
                         const CustomPlantSpec&) = default;
};

struct RobotSpec {
  TrajectorySpec trajectory;
  SlipProfile slip;
  std::array<double, 4> initial_pose{};  // px, py, theta, v
  ActuatorMode actuator = ActuatorMode::kIdeal;
  double lag_tau_s = 0.3;
  double omega_limit = kDefaultOmegaLimit;
  double v_min = kDefaultVMin;
  bool reverse = false;
  friend bool operator==(const RobotSpec&, const RobotSpec&) = default;
};

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::kThirdOrder;
  ControllerKind controller = ControllerKind::kClelc;
  double duration_s = 20.0;
  double controller_dt_s = 0.01;
  int plant_substeps = 10;
  Integrator integrator = Integrator::kRk4;
  double lambda = 3.0;
  double alpha = 25.0;
  double delta = kDefaultSignDelta;
  int mf_count = 3;
  std::vector<double> membership_ranges;
  double sigma_min = kDefaultSigmaMin;
  double sigma_max = 1e6;
  double center_guard_eps = 1e-6;
  double b_min = kDefaultBMin;
  ErrorRateMode edot_mode = ErrorRateMode::kAnalytic;
  std::vector<double> initial_state;  // chain scenarios
  ReferenceSpec reference;
  DisturbanceSpec disturbance;
  CustomPlantSpec plant;  // custom scenario only
  RobotSpec robot;        // robot scenario only
  double settling_band = 0.02;
  double final_window_s = 2.0;
  double on_track_threshold_m = 0.2;
  // 0 keeps the initial membership grid exactly uniform; any other value
  // jitters the initial centers by up to 1% of the input range.
  std::uint64_t seed = 0;
  std::string output;

  // Throws ConfigError describing the first invalid field.
  void Validate() const;

  // Number of chain states per learning channel.
  int Order() const;

  LearningConfig Learning() const;
  MetricsConfig MetricsSettings() const;

  nlohmann::json ToJson() const;
  // Fields absent from `j` keep the defaults of the named scenario. Unknown
  // keys are rejected.
  static ScenarioConfig FromJson(const nlohmann::json& j);
  static ScenarioConfig FromFile(const std::string& path);

  friend bool operator==(const ScenarioConfig&,
                         const ScenarioConfig&) = default;
};

// Third-order benchmark: x(0) = [1, -1, -10], r = 0, lambda = 3, alpha = 25,
// 20 s at 0.01 s, Delta = 5 sin(t) from 10 s.
ScenarioConfig DefaultBenchmarkConfig();

// Unicycle on a 10 m circle at 0.4 m/s with sinusoidal slip, lambda = 0.3,
// alpha = 5, 5 Hz control, 400 s.
ScenarioConfig DefaultRobotConfig();

// The plant model a chain scenario simulates.
PlantModel BuildPlant(const ScenarioConfig& cfg);

struct ScenarioResult {
  ScenarioKind kind = ScenarioKind::kThirdOrder;
  SimLog plant_log;
  RobotLog robot_log;
  Metrics metrics;

  std::string ToCsv() const;
};

// Runs the closed loop described by `cfg`. Deterministic: the same config
// always produces the same log bit for bit. Throws ConfigError for invalid
// configs and SimulationFault (with step index and control decomposition)
// when the loop fails.
ScenarioResult RunScenario(const ScenarioConfig& cfg);

SimLog RunPlantScenario(const ScenarioConfig& cfg);
RobotLog RunRobotScenario(const ScenarioConfig& cfg);

std::string ToString(ScenarioKind kind);
std::string ToString(ControllerKind kind);
ControllerKind ParseController(const std::string& name);

}  // namespace clelc

#endif  // CLELC_SCENARIO_H_
