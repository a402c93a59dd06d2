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

#ifndef CLELC_ROBOT_H_
#define CLELC_ROBOT_H_

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace clelc {

inline constexpr double kDefaultOmegaLimit = 0.1;  // rad/s
inline constexpr double kDefaultVMin = 0.05;       // m/s

// Wraps to (-pi, pi].
double WrapAngle(double angle);

struct RobotState {
  double px = 0.0;     // m
  double py = 0.0;     // m
  double theta = 0.0;  // rad
  double v = 0.0;      // m/s
};

struct RobotStateRate {
  double px_dot = 0.0;
  double py_dot = 0.0;
  double theta_dot = 0.0;
  double v_dot = 0.0;
};

// Position/velocity coordinates [px, py, px_dot, py_dot] in which the
// dynamically extended unicycle is two double integrators.
struct LinearizedState {
  std::array<double, 4> x{};

  static LinearizedState FromRobot(const RobotState& s);
};

struct TrajectoryPoint {
  double r1 = 0.0, r2 = 0.0;      // m
  double r3 = 0.0, r4 = 0.0;      // m/s
  double r1dd = 0.0, r2dd = 0.0;  // m/s^2
};

struct RobotCommand {
  double v_dot = 0.0;  // xi, m/s^2
  double omega = 0.0;  // rad/s
  bool saturated = false;
};

// (v cos(theta), v sin(theta), omega, xi).
RobotStateRate UnicycleDynamics(const RobotState& state,
                                const RobotCommand& cmd);

// Inverse decoupling map from the double-integrator inputs (u1, u2) to
// (xi, omega), with omega clipped to +-omega_limit. Throws SingularityError
// when |v| < v_min.
RobotCommand FeedbackLinearize(double u1, double u2, double theta, double v,
                               double v_min = kDefaultVMin,
                               double omega_limit = kDefaultOmegaLimit);

// Per-axis gains of a second-order surface: position then velocity.
struct AxisGains {
  double position = 0.0;
  double velocity = 0.0;
};

// u1 = r1dd + kp (r1 - x1) + kv (r3 - x3) + u_n1, likewise for u2.
std::pair<double, double> ClelcRobotLaw(const TrajectoryPoint& traj,
                                        const LinearizedState& lin,
                                        const AxisGains& k, double u_n1,
                                        double u_n2);

// atan2(r4, r3), plus pi when reversing, wrapped to (-pi, pi].
double HeadingReference(double r3, double r4, bool reverse);

struct FeedforwardVelocities {
  double v_d = 0.0;
  double omega_d = 0.0;
};

FeedforwardVelocities ComputeFeedforwardVelocities(double r3, double r4,
                                                   double r3_dot,
                                                   double r4_dot,
                                                   bool reverse);

// Closed-form reference paths.
struct TrajectorySpec {
  enum class Kind { kLine, kCircle, kStadium };
  Kind kind = Kind::kCircle;
  // line: start point, heading and speed
  double x0 = 0.0, y0 = 0.0;
  double heading = 0.0;  // rad
  double speed = 0.5;    // m/s (line and stadium)
  // circle: center, radius, angular rate, initial phase
  double cx = 0.0, cy = 0.0;
  double radius = 10.0;  // m (circle and stadium turn radius)
  double omega = 0.04;   // rad/s
  double phase = 0.0;    // rad
  // stadium: straight segment length; turns use `radius`
  double straight_length = 20.0;  // m

  void Validate() const;
  TrajectoryPoint Sample(double t) const;
  nlohmann::json ToJson() const;
  static TrajectorySpec FromJson(const nlohmann::json& j);
  friend bool operator==(const TrajectorySpec&,
                         const TrajectorySpec&) = default;
};

// Additive accelerations on (px_ddot, py_ddot) standing in for unmodelled
// terrain effects.
struct SlipProfile {
  enum class Kind { kNone, kConstant, kSinusoid, kPatch };
  Kind kind = Kind::kNone;
  double ax = 0.0, ay = 0.0;  // m/s^2: bias, sinusoid amplitude or patch accel
  double period_s = 20.0;     // sinusoid
  double phase = 0.0;         // sinusoid, rad
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;  // patch

  void Validate() const;
  nlohmann::json ToJson() const;
  static SlipProfile FromJson(const nlohmann::json& j);
  friend bool operator==(const SlipProfile&, const SlipProfile&) = default;
};

std::array<double, 2> SlipDisturbance(const RobotState& state, double t,
                                      const SlipProfile& profile);

struct RobotLogRow {
  double t = 0.0;
  std::array<double, 4> x{};
  std::array<double, 4> r{};
  std::array<double, 4> e{};
  std::array<double, 2> u_b{}, u_f{}, u_n{}, u_t{}, s{}, delta{};
  double px = 0.0, py = 0.0, theta = 0.0, v = 0.0;
  double xi = 0.0, omega = 0.0;
  double theta_r = 0.0, v_d = 0.0, omega_d = 0.0;
  double euclid_err = 0.0;
  bool omega_saturated = false;
  bool singular = false;
};

struct RobotLog {
  double dt = 0.0;
  std::vector<RobotLogRow> rows;
  std::vector<std::string> events;

  // Plant-log columns for the two linearized channels (x1..x4, r1..r4,
  // e1..e4, u_b1,u_b2, u_f1,u_f2, u_n1,u_n2, u_t1,u_t2, s1,s2,
  // delta1,delta2), then px,py,theta,v,xi,omega,theta_r,v_d,omega_d,
  // euclid_err,omega_sat,singular.
  std::string ToCsv() const;
};

}  // namespace clelc

#endif  // CLELC_ROBOT_H_
