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

// Command-line front end: run, compare, bound, validate.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "clelc/analysis.h"
#include "clelc/csv.h"
#include "clelc/errors.h"
#include "clelc/scenario.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFault = 3;

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw clelc::ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw clelc::ConfigError("write failed for " + path.string());
}

// Fallback events can fire on consecutive steps; print a one-line summary.
void ReportEvents(const clelc::ScenarioResult& r, const char* label) {
  std::size_t count = r.plant_log.events.size() + r.robot_log.events.size();
  if (count == 0) return;
  std::string first = r.plant_log.events.empty()
                          ? r.robot_log.events.front()
                          : "step " +
                                std::to_string(r.plant_log.events[0].step) +
                                ": " + r.plant_log.events[0].message;
  std::cerr << "warning: " << label << ": " << count
            << " fallback event(s), first at " << first << "\n";
}

int CmdRun(const std::string& config_path,
           const std::optional<std::string>& controller,
           std::string out_path, const std::string& metrics_path) {
  clelc::ScenarioConfig cfg = clelc::ScenarioConfig::FromFile(config_path);
  if (controller) cfg.controller = clelc::ParseController(*controller);
  if (out_path.empty()) out_path = cfg.output;
  const clelc::ScenarioResult result = clelc::RunScenario(cfg);
  ReportEvents(result, clelc::ToString(cfg.controller).c_str());
  if (!out_path.empty()) WriteFile(out_path, result.ToCsv());
  if (!metrics_path.empty()) {
    WriteFile(metrics_path, result.metrics.ToJson().dump(2) + "\n");
  }
  std::cout << "scenario " << clelc::ToString(cfg.scenario) << ", controller "
            << clelc::ToString(cfg.controller) << "\n"
            << clelc::MetricsTable(result.metrics);
  return kExitOk;
}

int CmdCompare(const std::string& config_path, const std::string& out_dir) {
  const clelc::ScenarioConfig base =
      clelc::ScenarioConfig::FromFile(config_path);
  clelc::ScenarioConfig flc_cfg = base;
  flc_cfg.controller = clelc::ControllerKind::kFlc;
  clelc::ScenarioConfig clelc_cfg = base;
  clelc_cfg.controller = clelc::ControllerKind::kClelc;

  auto flc_run = std::async(std::launch::async, clelc::RunScenario, flc_cfg);
  const clelc::ScenarioResult clelc_result = clelc::RunScenario(clelc_cfg);
  const clelc::ScenarioResult flc_result = flc_run.get();
  ReportEvents(flc_result, "flc");
  ReportEvents(clelc_result, "clelc");

  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw clelc::ConfigError("cannot create " + out_dir);
  WriteFile(dir / "flc.csv", flc_result.ToCsv());
  WriteFile(dir / "clelc.csv", clelc_result.ToCsv());

  const clelc::ComparisonReport report =
      clelc::Compare(flc_result.metrics, clelc_result.metrics);
  nlohmann::json doc;
  doc["scenario"] = clelc::ToString(base.scenario);
  doc["flc"] = flc_result.metrics.ToJson();
  doc["clelc"] = clelc_result.metrics.ToJson();
  doc["comparison"] = report.ToJson();
  WriteFile(dir / "comparison.json", doc.dump(2) + "\n");
  std::cout << report.ToTable();
  return kExitOk;
}

int CmdBound(double s0, double alpha, double b) {
  const double t_h = clelc::FiniteTimeBound(s0, alpha, b);
  std::cout << clelc::FormatDouble(t_h) << "\n";
  return kExitOk;
}

int CmdValidate(const std::string& config_path) {
  const clelc::ScenarioConfig cfg =
      clelc::ScenarioConfig::FromFile(config_path);
  std::cout << "ok: " << clelc::ToString(cfg.scenario) << " scenario, "
            << clelc::ToString(cfg.controller) << " controller\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CLELC closed-loop simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> controller;
  std::string out_path;
  std::string metrics_path;
  auto* run = app.add_subcommand("run", "Simulate one controller");
  run->add_option("--config", config_path, "Scenario JSON")->required();
  run->add_option("--controller", controller, "flc or clelc")
      ->check(CLI::IsMember({"flc", "clelc"}));
  run->add_option("--out", out_path, "CSV log path");
  run->add_option("--metrics", metrics_path, "JSON metrics path");

  std::string out_dir;
  auto* compare = app.add_subcommand("compare", "Run FLC and CLELC");
  compare->add_option("--config", config_path, "Scenario JSON")->required();
  compare->add_option("--out-dir", out_dir, "Output directory")->required();

  double s0 = 0.0, alpha = 0.0, b = 0.0;
  auto* bound = app.add_subcommand("bound", "Reaching-time bound t_h");
  bound->add_option("--s0", s0, "Initial sliding value")->required();
  bound->add_option("--alpha", alpha, "Learning rate")->required();
  bound->add_option("--b", b, "Bound on the uncertainty rate")->required();

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--config", config_path, "Scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      return CmdRun(config_path, controller, out_path, metrics_path);
    }
    if (compare->parsed()) return CmdCompare(config_path, out_dir);
    if (bound->parsed()) return CmdBound(s0, alpha, b);
    if (validate->parsed()) return CmdValidate(config_path);
  } catch (const clelc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const clelc::SimulationFault& e) {
    std::cerr << "simulation fault: " << e.what() << "\n";
    return kExitFault;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
