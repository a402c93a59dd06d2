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

#include "clelc/scenario.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "clelc/csv.h"
#include "clelc/errors.h"
#include "clelc/learning.h"
#include "clelc/sliding_surface.h"

namespace clelc {
namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

bool Positive(double v) { return v > 0.0 && std::isfinite(v); }

template <class Enum>
struct EnumName {
  Enum value;
  const char* name;
};

constexpr EnumName<ScenarioKind> kScenarioNames[] = {
    {ScenarioKind::kThirdOrder, "third_order"},
    {ScenarioKind::kRobot, "robot"},
    {ScenarioKind::kCustom, "custom"}};
constexpr EnumName<ControllerKind> kControllerNames[] = {
    {ControllerKind::kFlc, "flc"}, {ControllerKind::kClelc, "clelc"}};
constexpr EnumName<Integrator> kIntegratorNames[] = {
    {Integrator::kEuler, "euler"}, {Integrator::kRk4, "rk4"}};
constexpr EnumName<ErrorRateMode> kEdotNames[] = {
    {ErrorRateMode::kAnalytic, "analytic"},
    {ErrorRateMode::kDifference, "difference"}};
constexpr EnumName<ActuatorMode> kActuatorNames[] = {
    {ActuatorMode::kIdeal, "ideal"}, {ActuatorMode::kLag, "lag"}};
constexpr EnumName<ReferenceSpec::Kind> kReferenceNames[] = {
    {ReferenceSpec::Kind::kZero, "zero"},
    {ReferenceSpec::Kind::kConstant, "constant"},
    {ReferenceSpec::Kind::kSine, "sine"}};
constexpr EnumName<DisturbanceSpec::Kind> kDisturbanceNames[] = {
    {DisturbanceSpec::Kind::kNone, "none"},
    {DisturbanceSpec::Kind::kSine, "sine"}};

template <class Enum, size_t N>
const char* NameOf(const EnumName<Enum> (&table)[N], Enum value) {
  for (const auto& e : table) {
    if (e.value == value) return e.name;
  }
  return "?";
}

template <class Enum, size_t N>
Enum ParseEnum(const EnumName<Enum> (&table)[N], const std::string& name,
               const char* field) {
  for (const auto& e : table) {
    if (name == e.name) return e.value;
  }
  throw ConfigError(std::string("invalid value '") + name + "' for " + field);
}

void RejectUnknownKeys(const json& j,
                       std::initializer_list<const char*> allowed,
                       const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void Read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <class Enum, size_t N>
void ReadEnum(const json& j, const char* key,
              const EnumName<Enum> (&table)[N], Enum& out) {
  if (j.contains(key)) out = ParseEnum(table, j.at(key).get<std::string>(), key);
}

// Fault message with the step and the control decomposition at failure.
[[noreturn]] void RethrowAtStep(const SimulationFault& fault, int step,
                                double t, const ControlDecomposition& d) {
  std::ostringstream msg;
  msg << "step " << step << " (t=" << FormatDouble(t) << "): " << fault.what()
      << " [u_b=" << FormatDouble(d.u_b) << " u_f=" << FormatDouble(d.u_f)
      << " u_n=" << FormatDouble(d.u_n) << " u_t=" << FormatDouble(d.u_t)
      << " u=" << FormatDouble(d.u) << "]";
  if (dynamic_cast<const LearningFault*>(&fault)) throw LearningFault(msg.str());
  if (dynamic_cast<const SingularityError*>(&fault)) {
    throw SingularityError(msg.str());
  }
  throw SimulationFault(msg.str());
}

NeuroFuzzyParams InitialNetwork(const ScenarioConfig& cfg,
                                std::span<const double> ranges,
                                std::uint64_t stream) {
  NeuroFuzzyParams p = NeuroFuzzyParams::UniformGrid(ranges, cfg.mf_count);
  if (cfg.seed != 0) {
    std::mt19937_64 rng(cfg.seed + stream);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < p.input_count(); ++i) {
      for (int k = 0; k < p.mf_per_input(); ++k) {
        p.center(i, k) += 0.01 * ranges[static_cast<size_t>(i)] * unit(rng);
      }
    }
  }
  return p;
}

int StepCount(const ScenarioConfig& cfg) {
  return static_cast<int>(std::llround(cfg.duration_s / cfg.controller_dt_s));
}

}  // namespace

std::string ToString(ScenarioKind kind) { return NameOf(kScenarioNames, kind); }
std::string ToString(ControllerKind kind) {
  return NameOf(kControllerNames, kind);
}
ControllerKind ParseController(const std::string& name) {
  return ParseEnum(kControllerNames, name, "controller");
}

ReferenceSignal ReferenceSpec::Sample(int order, double t) const {
  ReferenceSignal ref;
  ref.r.assign(static_cast<size_t>(order), 0.0);
  std::vector<double> chain(static_cast<size_t>(order) + 2, 0.0);
  switch (kind) {
    case Kind::kZero:
      break;
    case Kind::kConstant:
      chain[0] = amplitude;
      break;
    case Kind::kSine: {
      // d^i/dt^i A sin(wt) = A w^i sin(wt + i pi/2)
      double scale = amplitude;
      for (size_t i = 0; i < chain.size(); ++i) {
        chain[i] = scale * std::sin(omega * t + 0.5 * kPi * i);
        scale *= omega;
      }
      break;
    }
  }
  for (int i = 0; i < order; ++i) ref.r[static_cast<size_t>(i)] = chain[i];
  ref.r_np1 = chain[static_cast<size_t>(order)];
  ref.r_dot_np1 = chain[static_cast<size_t>(order) + 1];
  return ref;
}

int ScenarioConfig::Order() const {
  switch (scenario) {
    case ScenarioKind::kThirdOrder:
      return 3;
    case ScenarioKind::kRobot:
      return 2;
    case ScenarioKind::kCustom:
      return static_cast<int>(plant.a_coefficients.size());
  }
  return 0;
}

LearningConfig ScenarioConfig::Learning() const {
  LearningConfig l;
  l.alpha = alpha;
  l.delta = delta;
  l.sigma_min = sigma_min;
  l.sigma_max = sigma_max;
  l.center_guard_eps = center_guard_eps;
  l.dt = controller_dt_s;
  return l;
}

MetricsConfig ScenarioConfig::MetricsSettings() const {
  MetricsConfig m;
  m.settling_band = settling_band;
  m.final_window_s = final_window_s;
  m.delta = delta;
  m.on_track_threshold_m = on_track_threshold_m;
  if (controller == ControllerKind::kClelc) m.alpha = alpha;
  return m;
}

void ScenarioConfig::Validate() const {
  if (!Positive(duration_s)) throw ConfigError("duration_s must be positive");
  if (!Positive(controller_dt_s)) {
    throw ConfigError("controller_dt_s must be positive");
  }
  if (StepCount(*this) < 1) {
    throw ConfigError("duration_s shorter than one controller period; the "
                      "log would be empty");
  }
  if (plant_substeps < 1) throw ConfigError("plant_substeps must be >= 1");
  if (!Positive(lambda)) throw ConfigError("lambda must be positive");
  if (mf_count < 1) throw ConfigError("mf_count must be >= 1");
  if (!Positive(b_min)) throw ConfigError("b_min must be positive");
  if (!(settling_band > 0.0 && settling_band < 1.0)) {
    throw ConfigError("settling_band must be in (0, 1)");
  }
  if (!Positive(final_window_s)) {
    throw ConfigError("final_window_s must be positive");
  }
  if (!Positive(on_track_threshold_m)) {
    throw ConfigError("on_track_threshold_m must be positive");
  }
  Learning().Validate();
  const int n = Order();
  SlidingSurfaceSpec{n, lambda}.Validate();
  const size_t inputs = scenario == ScenarioKind::kRobot ? 2 : n;
  if (membership_ranges.size() != inputs) {
    throw ConfigError("membership_ranges needs " + std::to_string(inputs) +
                      " entries");
  }
  for (double r : membership_ranges) {
    if (!Positive(r)) throw ConfigError("membership ranges must be positive");
  }
  if (std::pow(static_cast<double>(mf_count), static_cast<double>(inputs)) >
      1e6) {
    throw ConfigError("rule grid too large");
  }
  if (scenario == ScenarioKind::kRobot) {
    robot.trajectory.Validate();
    robot.slip.Validate();
    if (!Positive(robot.omega_limit)) {
      throw ConfigError("omega_limit must be positive");
    }
    if (!Positive(robot.v_min)) throw ConfigError("v_min must be positive");
    if (robot.actuator == ActuatorMode::kLag && !Positive(robot.lag_tau_s)) {
      throw ConfigError("lag_tau_s must be positive");
    }
    for (double v : robot.initial_pose) {
      if (!std::isfinite(v)) throw ConfigError("initial_pose must be finite");
    }
    return;
  }
  if (static_cast<int>(initial_state.size()) != n) {
    throw ConfigError("initial_state needs " + std::to_string(n) +
                      " entries");
  }
  for (double v : initial_state) {
    if (!std::isfinite(v)) throw ConfigError("initial_state must be finite");
  }
  if (scenario == ScenarioKind::kCustom && !(std::abs(plant.b) > b_min)) {
    throw ConfigError("custom plant b must exceed b_min in magnitude");
  }
  if (disturbance.kind == DisturbanceSpec::Kind::kSine &&
      (!std::isfinite(disturbance.amplitude) ||
       !std::isfinite(disturbance.omega) ||
       !std::isfinite(disturbance.onset_s))) {
    throw ConfigError("disturbance parameters must be finite");
  }
}

json ScenarioConfig::ToJson() const {
  json j;
  j["scenario"] = NameOf(kScenarioNames, scenario);
  j["controller"] = NameOf(kControllerNames, controller);
  j["duration_s"] = duration_s;
  j["controller_dt_s"] = controller_dt_s;
  j["plant_substeps"] = plant_substeps;
  j["integrator"] = NameOf(kIntegratorNames, integrator);
  j["lambda"] = lambda;
  j["alpha"] = alpha;
  j["delta"] = delta;
  j["mf_count"] = mf_count;
  j["membership_ranges"] = membership_ranges;
  j["sigma_min"] = sigma_min;
  j["sigma_max"] = sigma_max;
  j["center_guard_eps"] = center_guard_eps;
  j["b_min"] = b_min;
  j["edot_mode"] = NameOf(kEdotNames, edot_mode);
  j["initial_state"] = initial_state;
  j["reference"] = {{"kind", NameOf(kReferenceNames, reference.kind)},
                    {"amplitude", reference.amplitude},
                    {"omega", reference.omega}};
  j["disturbance"] = {{"kind", NameOf(kDisturbanceNames, disturbance.kind)},
                      {"onset_s", disturbance.onset_s},
                      {"amplitude", disturbance.amplitude},
                      {"omega", disturbance.omega}};
  j["plant"] = {{"a_coefficients", plant.a_coefficients},
                {"a_constant", plant.a_constant},
                {"b", plant.b}};
  j["robot"] = {{"trajectory", robot.trajectory.ToJson()},
                {"slip", robot.slip.ToJson()},
                {"initial_pose", robot.initial_pose},
                {"actuator", NameOf(kActuatorNames, robot.actuator)},
                {"lag_tau_s", robot.lag_tau_s},
                {"omega_limit", robot.omega_limit},
                {"v_min", robot.v_min},
                {"reverse", robot.reverse}};
  j["metrics"] = {{"settling_band", settling_band},
                  {"final_window_s", final_window_s},
                  {"on_track_threshold_m", on_track_threshold_m}};
  j["seed"] = seed;
  j["output"] = output;
  return j;
}

ScenarioConfig ScenarioConfig::FromJson(const json& j) {
  try {
    RejectUnknownKeys(
        j,
        {"scenario", "controller", "duration_s", "controller_dt_s",
         "plant_substeps", "integrator", "lambda", "alpha", "delta",
         "mf_count", "membership_ranges", "sigma_min", "sigma_max",
         "center_guard_eps", "b_min", "edot_mode", "initial_state",
         "reference", "disturbance", "plant", "robot", "metrics", "seed",
         "output"},
        "scenario config");
    ScenarioKind kind = ScenarioKind::kThirdOrder;
    ReadEnum(j, "scenario", kScenarioNames, kind);
    ScenarioConfig c =
        kind == ScenarioKind::kRobot ? DefaultRobotConfig()
                                     : DefaultBenchmarkConfig();
    c.scenario = kind;
    if (kind == ScenarioKind::kCustom) {
      // A custom plant starts from an empty model; the benchmark disturbance
      // and initial state do not carry over.
      c.disturbance = DisturbanceSpec{};
      c.initial_state.clear();
      c.membership_ranges.clear();
    }
    ReadEnum(j, "controller", kControllerNames, c.controller);
    Read(j, "duration_s", c.duration_s);
    Read(j, "controller_dt_s", c.controller_dt_s);
    Read(j, "plant_substeps", c.plant_substeps);
    ReadEnum(j, "integrator", kIntegratorNames, c.integrator);
    Read(j, "lambda", c.lambda);
    Read(j, "alpha", c.alpha);
    Read(j, "delta", c.delta);
    Read(j, "mf_count", c.mf_count);
    Read(j, "membership_ranges", c.membership_ranges);
    Read(j, "sigma_min", c.sigma_min);
    Read(j, "sigma_max", c.sigma_max);
    Read(j, "center_guard_eps", c.center_guard_eps);
    Read(j, "b_min", c.b_min);
    ReadEnum(j, "edot_mode", kEdotNames, c.edot_mode);
    Read(j, "initial_state", c.initial_state);
    if (j.contains("reference")) {
      const json& r = j.at("reference");
      RejectUnknownKeys(r, {"kind", "amplitude", "omega"}, "reference");
      ReadEnum(r, "kind", kReferenceNames, c.reference.kind);
      Read(r, "amplitude", c.reference.amplitude);
      Read(r, "omega", c.reference.omega);
    }
    if (j.contains("disturbance")) {
      const json& d = j.at("disturbance");
      RejectUnknownKeys(d, {"kind", "onset_s", "amplitude", "omega"},
                        "disturbance");
      ReadEnum(d, "kind", kDisturbanceNames, c.disturbance.kind);
      Read(d, "onset_s", c.disturbance.onset_s);
      Read(d, "amplitude", c.disturbance.amplitude);
      Read(d, "omega", c.disturbance.omega);
    }
    if (j.contains("plant")) {
      const json& p = j.at("plant");
      RejectUnknownKeys(p, {"a_coefficients", "a_constant", "b"}, "plant");
      Read(p, "a_coefficients", c.plant.a_coefficients);
      Read(p, "a_constant", c.plant.a_constant);
      Read(p, "b", c.plant.b);
    }
    if (j.contains("robot")) {
      const json& r = j.at("robot");
      RejectUnknownKeys(r,
                        {"trajectory", "slip", "initial_pose", "actuator",
                         "lag_tau_s", "omega_limit", "v_min", "reverse"},
                        "robot");
      if (r.contains("trajectory")) {
        c.robot.trajectory = TrajectorySpec::FromJson(r.at("trajectory"));
      }
      if (r.contains("slip")) c.robot.slip = SlipProfile::FromJson(r.at("slip"));
      Read(r, "initial_pose", c.robot.initial_pose);
      ReadEnum(r, "actuator", kActuatorNames, c.robot.actuator);
      Read(r, "lag_tau_s", c.robot.lag_tau_s);
      Read(r, "omega_limit", c.robot.omega_limit);
      Read(r, "v_min", c.robot.v_min);
      Read(r, "reverse", c.robot.reverse);
    }
    if (j.contains("metrics")) {
      const json& m = j.at("metrics");
      RejectUnknownKeys(
          m, {"settling_band", "final_window_s", "on_track_threshold_m"},
          "metrics");
      Read(m, "settling_band", c.settling_band);
      Read(m, "final_window_s", c.final_window_s);
      Read(m, "on_track_threshold_m", c.on_track_threshold_m);
    }
    Read(j, "seed", c.seed);
    Read(j, "output", c.output);
    c.Validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario config: ") + e.what());
  }
}

ScenarioConfig ScenarioConfig::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  return FromJson(j);
}

ScenarioConfig DefaultBenchmarkConfig() {
  ScenarioConfig c;
  c.scenario = ScenarioKind::kThirdOrder;
  c.controller = ControllerKind::kClelc;
  c.duration_s = 20.0;
  c.controller_dt_s = 0.01;
  c.plant_substeps = 10;
  c.lambda = 3.0;
  c.alpha = 25.0;
  c.delta = 0.05;
  c.mf_count = 3;
  c.membership_ranges = {10.0, 10.0, 10.0};
  c.edot_mode = ErrorRateMode::kAnalytic;
  c.initial_state = {1.0, -1.0, -10.0};
  c.reference = ReferenceSpec{};
  c.disturbance = {DisturbanceSpec::Kind::kSine, 10.0, 5.0, 1.0};
  return c;
}

ScenarioConfig DefaultRobotConfig() {
  ScenarioConfig c;
  c.scenario = ScenarioKind::kRobot;
  c.controller = ControllerKind::kClelc;
  c.duration_s = 400.0;
  c.controller_dt_s = 0.2;  // 5 Hz
  c.plant_substeps = 10;    // 50 Hz plant
  c.lambda = 0.3;
  c.alpha = 5.0;
  // The boundary layer has to exceed the per-sample learning increment
  // alpha * dt = 1; with 0.05 the discrete learning loop diverges at 5 Hz.
  c.delta = 2.0;
  c.mf_count = 3;
  c.membership_ranges = {1.0, 1.0};
  c.edot_mode = ErrorRateMode::kDifference;
  c.disturbance = DisturbanceSpec{};
  c.robot.trajectory.kind = TrajectorySpec::Kind::kCircle;
  c.robot.trajectory.radius = 10.0;
  c.robot.trajectory.omega = 0.04;
  c.robot.slip.kind = SlipProfile::Kind::kSinusoid;
  c.robot.slip.ax = 0.02;
  c.robot.slip.ay = 0.0;
  c.robot.slip.period_s = 20.0;
  c.robot.initial_pose = {9.0, -1.0, 0.5 * kPi, 0.4};
  c.robot.actuator = ActuatorMode::kIdeal;
  c.robot.lag_tau_s = 0.3;
  c.robot.omega_limit = 0.1;
  c.robot.v_min = 0.05;
  return c;
}

PlantModel BuildPlant(const ScenarioConfig& cfg) {
  PlantModel m;
  if (cfg.scenario == ScenarioKind::kThirdOrder) {
    m = BenchmarkPlant(cfg.disturbance.onset_s, cfg.disturbance.amplitude,
                       cfg.disturbance.omega);
  } else if (cfg.scenario == ScenarioKind::kCustom) {
    m.order = cfg.Order();
    const CustomPlantSpec p = cfg.plant;
    m.a_fn = [p](std::span<const double> x) {
      double a = p.a_constant;
      for (size_t i = 0; i < x.size(); ++i) a += p.a_coefficients[i] * x[i];
      return a;
    };
    m.b_fn = [b = p.b](std::span<const double>) { return b; };
    const DisturbanceSpec d = cfg.disturbance;
    m.disturbance = [d](std::span<const double>, double, double t) {
      return t >= d.onset_s ? d.amplitude * std::sin(d.omega * t) : 0.0;
    };
  } else {
    throw ConfigError("robot scenario has no chain plant model");
  }
  if (cfg.disturbance.kind == DisturbanceSpec::Kind::kNone) {
    m.disturbance = nullptr;
  }
  return m;
}

SimLog RunPlantScenario(const ScenarioConfig& cfg) {
  cfg.Validate();
  if (cfg.scenario == ScenarioKind::kRobot) {
    throw ConfigError("RunPlantScenario called with a robot config");
  }
  const int n = cfg.Order();
  const PlantModel model = BuildPlant(cfg);
  const GainVector gains = MakeGainVector({n, cfg.lambda});
  const bool learn = cfg.controller == ControllerKind::kClelc;
  LearningChannel channel(InitialNetwork(cfg, cfg.membership_ranges, 0),
                          cfg.Learning());

  const double dt = cfg.controller_dt_s;
  const double h = dt / cfg.plant_substeps;
  const int steps = StepCount(cfg);

  SimLog log;
  log.order = n;
  log.dt = dt;
  log.rows.reserve(static_cast<size_t>(steps));

  StateVector x = cfg.initial_state;
  double u_prev = 0.0;
  double en_prev = 0.0;
  std::vector<double> rates(static_cast<size_t>(n));

  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    ControlDecomposition d;
    try {
      const ReferenceSignal ref = cfg.reference.Sample(n, t);
      const ErrorVector e = ErrorVector::FromReference(ref.r, x);
      const double u_b = FeedbackControl(e, gains);
      const double u_f = FeedforwardControl(ref);
      d.u_b = u_b;
      d.u_f = u_f;
      double u_n = 0.0;
      if (learn) {
        u_n = channel.Output(e.e);
        if (channel.last_output_underflowed()) {
          log.events.push_back({k, "firing strengths underflowed"});
        }
      }
      d.u_n = u_n;
      const double a = model.a(x);
      const double b = model.b(x);
      d = ClelcLaw(a, b, u_b, u_f, u_n, cfg.b_min);

      const double en = e.e.back();
      double edot_n = 0.0;
      if (cfg.edot_mode == ErrorRateMode::kAnalytic) {
        edot_n = ref.r_np1 - (a + b * u_prev + model.Disturbance(x, u_prev, t));
      } else if (k > 0) {
        edot_n = (en - en_prev) / dt;
      }
      const double s = SlidingValue(e.e, edot_n, gains);

      PlantLogRow row;
      row.t = t;
      row.x = x;
      row.r = ref.r;
      row.e = e.e;
      row.u_b = d.u_b;
      row.u_f = d.u_f;
      row.u_n = d.u_n;
      row.u_t = d.u_t;
      row.u = d.u;
      row.s = s;
      row.delta = model.Disturbance(x, d.u, t);
      log.rows.push_back(std::move(row));

      if (learn) {
        for (int i = 0; i + 1 < n; ++i) rates[i] = e.e[i + 1];
        rates.back() = edot_n;
        channel.Adapt(e.e, rates, s);
      }
      for (int j = 0; j < cfg.plant_substeps; ++j) {
        x = IntegrateStep(model, x, d.u, t + j * h, h, cfg.integrator);
      }
      u_prev = d.u;
      en_prev = en;
    } catch (const SimulationFault& fault) {
      RethrowAtStep(fault, k, t, d);
    }
  }
  return log;
}

namespace {

// px, py, theta, v, omega_actual
using RobotPlantState = std::array<double, 5>;

}  // namespace

RobotLog RunRobotScenario(const ScenarioConfig& cfg) {
  cfg.Validate();
  if (cfg.scenario != ScenarioKind::kRobot) {
    throw ConfigError("RunRobotScenario called with a chain-plant config");
  }
  const RobotSpec& spec = cfg.robot;
  const GainVector k2 = MakeGainVector({2, cfg.lambda});
  const AxisGains gains{k2[0], k2[1]};
  const bool learn = cfg.controller == ControllerKind::kClelc;
  std::array<LearningChannel, 2> channels{
      LearningChannel(InitialNetwork(cfg, cfg.membership_ranges, 0),
                      cfg.Learning()),
      LearningChannel(InitialNetwork(cfg, cfg.membership_ranges, 1),
                      cfg.Learning())};

  const double dt = cfg.controller_dt_s;
  const double h = dt / cfg.plant_substeps;
  const int steps = StepCount(cfg);

  RobotLog log;
  log.dt = dt;
  log.rows.reserve(static_cast<size_t>(steps));

  RobotPlantState xs{spec.initial_pose[0], spec.initial_pose[1],
                     WrapAngle(spec.initial_pose[2]), spec.initial_pose[3],
                     0.0};
  std::array<double, 2> vel_prev{};
  RobotCommand cmd_prev;

  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    ControlDecomposition fault_info;
    try {
      const RobotState state{xs[0], xs[1], xs[2], xs[3]};
      const TrajectoryPoint tp = spec.trajectory.Sample(t);
      const LinearizedState lin = LinearizedState::FromRobot(state);
      const std::array<double, 4> r{tp.r1, tp.r2, tp.r3, tp.r4};
      std::array<double, 4> e{};
      for (int i = 0; i < 4; ++i) e[i] = r[i] - lin.x[i];
      const std::array<double, 2> u_f{tp.r1dd, tp.r2dd};
      const std::array<double, 2> slip = SlipDisturbance(state, t, spec.slip);

      RobotLogRow row;
      row.t = t;
      row.x = lin.x;
      row.r = r;
      row.e = e;
      row.delta = slip;
      for (int c = 0; c < 2; ++c) {
        const std::array<double, 2> ec{e[c], e[2 + c]};
        row.u_b[c] = gains.position * ec[0] + gains.velocity * ec[1];
        row.u_f[c] = u_f[c];
        if (learn) {
          row.u_n[c] = channels[c].Output(ec);
          if (channels[c].last_output_underflowed()) {
            log.events.push_back("step " + std::to_string(k) + " channel " +
                                 std::to_string(c + 1) +
                                 ": firing strengths underflowed");
          }
        }
      }
      const auto [u1, u2] =
          ClelcRobotLaw(tp, lin, gains, row.u_n[0], row.u_n[1]);
      row.u_t = {u1, u2};
      fault_info = {row.u_b[0], row.u_f[0], row.u_n[0], u1, 0.0};

      RobotCommand cmd;
      try {
        cmd = FeedbackLinearize(u1, u2, state.theta, state.v, spec.v_min,
                                spec.omega_limit);
      } catch (const SingularityError&) {
        cmd.v_dot = u1 * std::cos(state.theta) + u2 * std::sin(state.theta);
        cmd.omega = 0.0;
        row.singular = true;
        log.events.push_back("step " + std::to_string(k) +
                             ": |v| below v_min, omega forced to 0");
      }

      // Acceleration of the linearized channels over the last period.
      std::array<double, 2> accel{};
      if (cfg.edot_mode == ErrorRateMode::kDifference) {
        if (k > 0) {
          for (int c = 0; c < 2; ++c) {
            accel[c] = (lin.x[2 + c] - vel_prev[c]) / dt;
          }
        }
      } else {
        const double cth = std::cos(state.theta), sth = std::sin(state.theta);
        accel[0] = cmd_prev.v_dot * cth - state.v * cmd_prev.omega * sth +
                   slip[0];
        accel[1] = cmd_prev.v_dot * sth + state.v * cmd_prev.omega * cth +
                   slip[1];
      }
      const GainVector axis{{gains.position, gains.velocity}};
      std::array<double, 2> edot_vel{};
      for (int c = 0; c < 2; ++c) {
        edot_vel[c] = u_f[c] - accel[c];
        const std::array<double, 2> ec{e[c], e[2 + c]};
        row.s[c] = SlidingValue(ec, edot_vel[c], axis);
      }

      row.px = state.px;
      row.py = state.py;
      row.theta = state.theta;
      row.v = state.v;
      row.xi = cmd.v_dot;
      row.omega = cmd.omega;
      row.omega_saturated = cmd.saturated;
      row.theta_r = HeadingReference(tp.r3, tp.r4, spec.reverse);
      const FeedforwardVelocities ff = ComputeFeedforwardVelocities(
          tp.r3, tp.r4, tp.r1dd, tp.r2dd, spec.reverse);
      row.v_d = ff.v_d;
      row.omega_d = ff.omega_d;
      row.euclid_err = std::hypot(e[0], e[1]);

      if (learn) {
        for (int c = 0; c < 2; ++c) {
          const std::array<double, 2> ec{e[c], e[2 + c]};
          const std::array<double, 2> rates{e[2 + c], edot_vel[c]};
          channels[c].Adapt(ec, rates, row.s[c]);
        }
      }
      log.rows.push_back(row);

      // Velocity reference handed to the low-level controller in lag mode.
      const double v_ref = state.v + cmd.v_dot * dt;
      auto rate = [&](const RobotPlantState& s, double tt) {
        const RobotState rs{s[0], s[1], s[2], s[3]};
        const std::array<double, 2> d = SlipDisturbance(rs, tt, spec.slip);
        const double c = std::cos(s[2]), sn = std::sin(s[2]);
        // Slip acts on the position accelerations; map it back through the
        // decoupling matrix onto (v_dot, theta_dot).
        const double slip_long = d[0] * c + d[1] * sn;
        const double slip_lat =
            std::abs(s[3]) > 1e-6 ? (d[1] * c - d[0] * sn) / s[3] : 0.0;
        RobotPlantState out{};
        out[0] = s[3] * c;
        out[1] = s[3] * sn;
        if (spec.actuator == ActuatorMode::kIdeal) {
          out[2] = cmd.omega + slip_lat;
          out[3] = cmd.v_dot + slip_long;
          out[4] = 0.0;
        } else {
          out[2] = s[4] + slip_lat;
          out[3] = (v_ref - s[3]) / spec.lag_tau_s + slip_long;
          out[4] = (cmd.omega - s[4]) / spec.lag_tau_s;
        }
        return out;
      };
      for (int j = 0; j < cfg.plant_substeps; ++j) {
        xs = OdeStep(rate, xs, t + j * h, h, cfg.integrator);
        xs[2] = WrapAngle(xs[2]);
      }
      for (double v : xs) {
        if (!std::isfinite(v)) throw SimulationFault("robot state not finite");
      }
      vel_prev = {lin.x[2], lin.x[3]};
      cmd_prev = cmd;
    } catch (const SimulationFault& fault) {
      RethrowAtStep(fault, k, t, fault_info);
    }
  }
  return log;
}

ScenarioResult RunScenario(const ScenarioConfig& cfg) {
  ScenarioResult result;
  result.kind = cfg.scenario;
  if (cfg.scenario == ScenarioKind::kRobot) {
    result.robot_log = RunRobotScenario(cfg);
    result.metrics = ComputeMetrics(result.robot_log, cfg.MetricsSettings());
  } else {
    result.plant_log = RunPlantScenario(cfg);
    result.metrics = ComputeMetrics(result.plant_log, cfg.MetricsSettings());
  }
  return result;
}

std::string ScenarioResult::ToCsv() const {
  return kind == ScenarioKind::kRobot ? robot_log.ToCsv() : plant_log.ToCsv();
}

}  // namespace clelc
