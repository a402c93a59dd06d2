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

#include "clelc/robot.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "clelc/csv.h"
#include "clelc/errors.h"

namespace clelc {
namespace {

constexpr double kPi = std::numbers::pi;

void RejectUnknownKeys(const nlohmann::json& j,
                       std::initializer_list<const char*> allowed,
                       const char* where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) {
      throw ConfigError(std::string("unknown key '") + key + "' in " + where);
    }
  }
}

template <class T>
void ReadOptional(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

double WrapAngle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

LinearizedState LinearizedState::FromRobot(const RobotState& s) {
  return LinearizedState{
      {s.px, s.py, s.v * std::cos(s.theta), s.v * std::sin(s.theta)}};
}

RobotStateRate UnicycleDynamics(const RobotState& state,
                                const RobotCommand& cmd) {
  return RobotStateRate{state.v * std::cos(state.theta),
                        state.v * std::sin(state.theta), cmd.omega,
                        cmd.v_dot};
}

RobotCommand FeedbackLinearize(double u1, double u2, double theta, double v,
                               double v_min, double omega_limit) {
  if (!(std::abs(v) >= v_min)) {
    throw SingularityError("linear velocity " + FormatDouble(v) +
                           " below v_min " + FormatDouble(v_min));
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  RobotCommand cmd;
  cmd.v_dot = u1 * c + u2 * s;
  const double omega = (u2 * c - u1 * s) / v;
  cmd.omega = std::clamp(omega, -omega_limit, omega_limit);
  cmd.saturated = cmd.omega != omega;
  return cmd;
}

std::pair<double, double> ClelcRobotLaw(const TrajectoryPoint& traj,
                                        const LinearizedState& lin,
                                        const AxisGains& k, double u_n1,
                                        double u_n2) {
  const auto& x = lin.x;
  const double u1 = traj.r1dd + k.position * (traj.r1 - x[0]) +
                    k.velocity * (traj.r3 - x[2]) + u_n1;
  const double u2 = traj.r2dd + k.position * (traj.r2 - x[1]) +
                    k.velocity * (traj.r4 - x[3]) + u_n2;
  return {u1, u2};
}

double HeadingReference(double r3, double r4, bool reverse) {
  if (r3 == 0.0 && r4 == 0.0) {
    throw SingularityError("heading undefined for zero reference velocity");
  }
  return WrapAngle(std::atan2(r4, r3) + (reverse ? kPi : 0.0));
}

FeedforwardVelocities ComputeFeedforwardVelocities(double r3, double r4,
                                                   double r3_dot,
                                                   double r4_dot,
                                                   bool reverse) {
  const double speed2 = r3 * r3 + r4 * r4;
  if (!(speed2 > 0.0)) {
    throw SingularityError("feedforward undefined for zero reference velocity");
  }
  FeedforwardVelocities ff;
  ff.v_d = (reverse ? -1.0 : 1.0) * std::sqrt(speed2);
  ff.omega_d = (r4_dot * r3 - r3_dot * r4) / speed2;
  return ff;
}

void TrajectorySpec::Validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  switch (kind) {
    case Kind::kLine:
      if (!positive(speed)) throw ConfigError("line speed must be positive");
      break;
    case Kind::kCircle:
      if (!positive(radius)) throw ConfigError("circle radius must be positive");
      if (!(omega != 0.0) || !std::isfinite(omega)) {
        throw ConfigError("circle angular rate must be nonzero");
      }
      break;
    case Kind::kStadium:
      if (!positive(speed) || !positive(radius) ||
          !(straight_length >= 0.0)) {
        throw ConfigError("stadium needs positive speed and radius and a "
                          "nonnegative straight length");
      }
      break;
  }
}

TrajectoryPoint TrajectorySpec::Sample(double t) const {
  TrajectoryPoint p;
  switch (kind) {
    case Kind::kLine: {
      const double c = std::cos(heading), s = std::sin(heading);
      p.r1 = x0 + speed * t * c;
      p.r2 = y0 + speed * t * s;
      p.r3 = speed * c;
      p.r4 = speed * s;
      return p;
    }
    case Kind::kCircle: {
      const double ang = omega * t + phase;
      const double c = std::cos(ang), s = std::sin(ang);
      p.r1 = cx + radius * c;
      p.r2 = cy + radius * s;
      p.r3 = -radius * omega * s;
      p.r4 = radius * omega * c;
      p.r1dd = -radius * omega * omega * c;
      p.r2dd = -radius * omega * omega * s;
      return p;
    }
    case Kind::kStadium: {
      // Counter-clockwise: bottom straight (+x), right turn, top straight
      // (-x), left turn. Starts at the left end of the bottom straight.
      const double half = 0.5 * straight_length;
      const double arc = kPi * radius;
      const double perimeter = 2.0 * straight_length + 2.0 * arc;
      double d = std::fmod(speed * t, perimeter);
      if (d < 0.0) d += perimeter;
      const double accel = speed * speed / radius;
      if (d < straight_length) {
        p.r1 = cx - half + d;
        p.r2 = cy - radius;
        p.r3 = speed;
        return p;
      }
      d -= straight_length;
      if (d < arc) {
        const double phi = -0.5 * kPi + d / radius;
        p.r1 = cx + half + radius * std::cos(phi);
        p.r2 = cy + radius * std::sin(phi);
        p.r3 = -speed * std::sin(phi);
        p.r4 = speed * std::cos(phi);
        p.r1dd = -accel * std::cos(phi);
        p.r2dd = -accel * std::sin(phi);
        return p;
      }
      d -= arc;
      if (d < straight_length) {
        p.r1 = cx + half - d;
        p.r2 = cy + radius;
        p.r3 = -speed;
        return p;
      }
      d -= straight_length;
      const double phi = 0.5 * kPi + d / radius;
      p.r1 = cx - half + radius * std::cos(phi);
      p.r2 = cy + radius * std::sin(phi);
      p.r3 = -speed * std::sin(phi);
      p.r4 = speed * std::cos(phi);
      p.r1dd = -accel * std::cos(phi);
      p.r2dd = -accel * std::sin(phi);
      return p;
    }
  }
  return p;
}

nlohmann::json TrajectorySpec::ToJson() const {
  switch (kind) {
    case Kind::kLine:
      return {{"kind", "line"}, {"x0", x0},       {"y0", y0},
              {"heading", heading}, {"speed", speed}};
    case Kind::kCircle:
      return {{"kind", "circle"}, {"cx", cx},       {"cy", cy},
              {"radius", radius}, {"omega", omega}, {"phase", phase}};
    case Kind::kStadium:
      return {{"kind", "stadium"},
              {"cx", cx},
              {"cy", cy},
              {"radius", radius},
              {"speed", speed},
              {"straight_length", straight_length}};
  }
  return {};
}

TrajectorySpec TrajectorySpec::FromJson(const nlohmann::json& j) {
  TrajectorySpec t;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "line") {
    t.kind = Kind::kLine;
    RejectUnknownKeys(j, {"kind", "x0", "y0", "heading", "speed"},
                      "trajectory");
    ReadOptional(j, "x0", t.x0);
    ReadOptional(j, "y0", t.y0);
    ReadOptional(j, "heading", t.heading);
    ReadOptional(j, "speed", t.speed);
  } else if (kind == "circle") {
    t.kind = Kind::kCircle;
    RejectUnknownKeys(j, {"kind", "cx", "cy", "radius", "omega", "phase"},
                      "trajectory");
    ReadOptional(j, "cx", t.cx);
    ReadOptional(j, "cy", t.cy);
    ReadOptional(j, "radius", t.radius);
    ReadOptional(j, "omega", t.omega);
    ReadOptional(j, "phase", t.phase);
  } else if (kind == "stadium") {
    t.kind = Kind::kStadium;
    RejectUnknownKeys(
        j, {"kind", "cx", "cy", "radius", "speed", "straight_length"},
        "trajectory");
    ReadOptional(j, "cx", t.cx);
    ReadOptional(j, "cy", t.cy);
    ReadOptional(j, "radius", t.radius);
    ReadOptional(j, "speed", t.speed);
    ReadOptional(j, "straight_length", t.straight_length);
  } else {
    throw ConfigError("unknown trajectory kind '" + kind + "'");
  }
  t.Validate();
  return t;
}

void SlipProfile::Validate() const {
  if (!std::isfinite(ax) || !std::isfinite(ay)) {
    throw ConfigError("slip accelerations must be finite");
  }
  if (kind == Kind::kSinusoid && !(period_s > 0.0)) {
    throw ConfigError("slip period must be positive");
  }
  if (kind == Kind::kPatch && !(x_min <= x_max && y_min <= y_max)) {
    throw ConfigError("slip patch bounds are inverted");
  }
}

nlohmann::json SlipProfile::ToJson() const {
  switch (kind) {
    case Kind::kNone:
      return {{"kind", "none"}};
    case Kind::kConstant:
      return {{"kind", "constant"}, {"ax", ax}, {"ay", ay}};
    case Kind::kSinusoid:
      return {{"kind", "sinusoid"}, {"ax", ax},         {"ay", ay},
              {"period_s", period_s}, {"phase", phase}};
    case Kind::kPatch:
      return {{"kind", "patch"}, {"ax", ax},       {"ay", ay},
              {"x_min", x_min},  {"x_max", x_max}, {"y_min", y_min},
              {"y_max", y_max}};
  }
  return {};
}

SlipProfile SlipProfile::FromJson(const nlohmann::json& j) {
  SlipProfile p;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") {
    RejectUnknownKeys(j, {"kind"}, "slip profile");
  } else if (kind == "constant") {
    p.kind = Kind::kConstant;
    RejectUnknownKeys(j, {"kind", "ax", "ay"}, "slip profile");
  } else if (kind == "sinusoid") {
    p.kind = Kind::kSinusoid;
    RejectUnknownKeys(j, {"kind", "ax", "ay", "period_s", "phase"},
                      "slip profile");
    ReadOptional(j, "period_s", p.period_s);
    ReadOptional(j, "phase", p.phase);
  } else if (kind == "patch") {
    p.kind = Kind::kPatch;
    RejectUnknownKeys(
        j, {"kind", "ax", "ay", "x_min", "x_max", "y_min", "y_max"},
        "slip profile");
    ReadOptional(j, "x_min", p.x_min);
    ReadOptional(j, "x_max", p.x_max);
    ReadOptional(j, "y_min", p.y_min);
    ReadOptional(j, "y_max", p.y_max);
  } else {
    throw ConfigError("unknown slip profile kind '" + kind + "'");
  }
  ReadOptional(j, "ax", p.ax);
  ReadOptional(j, "ay", p.ay);
  p.Validate();
  return p;
}

std::array<double, 2> SlipDisturbance(const RobotState& state, double t,
                                      const SlipProfile& profile) {
  switch (profile.kind) {
    case SlipProfile::Kind::kNone:
      return {0.0, 0.0};
    case SlipProfile::Kind::kConstant:
      return {profile.ax, profile.ay};
    case SlipProfile::Kind::kSinusoid: {
      const double g =
          std::sin(2.0 * kPi * t / profile.period_s + profile.phase);
      return {profile.ax * g, profile.ay * g};
    }
    case SlipProfile::Kind::kPatch: {
      const bool inside = state.px >= profile.x_min &&
                          state.px <= profile.x_max &&
                          state.py >= profile.y_min &&
                          state.py <= profile.y_max;
      if (!inside) return {0.0, 0.0};
      return {profile.ax, profile.ay};
    }
  }
  return {0.0, 0.0};
}

std::string RobotLog::ToCsv() const {
  std::vector<std::string> names{"t"};
  for (const char* prefix : {"x", "r", "e"}) {
    for (int i = 1; i <= 4; ++i) names.push_back(prefix + std::to_string(i));
  }
  for (const char* n : {"u_b", "u_f", "u_n", "u_t", "s", "delta"}) {
    names.push_back(std::string(n) + "1");
    names.push_back(std::string(n) + "2");
  }
  for (const char* n :
       {"px", "py", "theta", "v", "xi", "omega", "theta_r", "v_d", "omega_d",
        "euclid_err", "omega_sat", "singular"}) {
    names.emplace_back(n);
  }
  std::string out;
  AppendCsvHeader(out, names);
  std::vector<double> f;
  for (const RobotLogRow& row : rows) {
    f.clear();
    f.push_back(row.t);
    for (const auto* arr : {&row.x, &row.r, &row.e}) {
      f.insert(f.end(), arr->begin(), arr->end());
    }
    for (const auto* arr :
         {&row.u_b, &row.u_f, &row.u_n, &row.u_t, &row.s, &row.delta}) {
      f.insert(f.end(), arr->begin(), arr->end());
    }
    f.insert(f.end(), {row.px, row.py, row.theta, row.v, row.xi, row.omega,
                       row.theta_r, row.v_d, row.omega_d, row.euclid_err,
                       row.omega_saturated ? 1.0 : 0.0,
                       row.singular ? 1.0 : 0.0});
    AppendCsvLine(out, f);
  }
  return out;
}

}  // namespace clelc
