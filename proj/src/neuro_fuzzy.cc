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

#include "clelc/neuro_fuzzy.h"

#include <cmath>
#include <string>

#include "clelc/errors.h"

namespace clelc {
namespace {

bool AllFinite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

NeuroFuzzyParams::NeuroFuzzyParams(int input_count, int mf_per_input)
    : input_count_(input_count), mf_per_input_(mf_per_input) {
  if (input_count < 1 || mf_per_input < 1) {
    throw ConfigError("neuro-fuzzy network needs at least one input and one "
                      "membership per input");
  }
  double rules = std::pow(static_cast<double>(mf_per_input), input_count);
  if (rules > 1e6) {
    throw ConfigError("rule grid too large: " + std::to_string(rules));
  }
  const size_t cells = static_cast<size_t>(input_count * mf_per_input);
  centers_.assign(cells, 0.0);
  widths_.assign(cells, 1.0);
  consequents_.assign(static_cast<size_t>(rules), 0.0);
}

NeuroFuzzyParams NeuroFuzzyParams::UniformGrid(std::span<const double> ranges,
                                               int mf_per_input) {
  NeuroFuzzyParams p(static_cast<int>(ranges.size()), mf_per_input);
  for (int i = 0; i < p.input_count_; ++i) {
    const double range = ranges[static_cast<size_t>(i)];
    if (!(range > 0.0) || !std::isfinite(range)) {
      throw ConfigError("membership range must be positive and finite");
    }
    if (mf_per_input == 1) {
      p.center(i, 0) = 0.0;
      p.width(i, 0) = range;
      continue;
    }
    const double spacing = 2.0 * range / (mf_per_input - 1);
    for (int k = 0; k < mf_per_input; ++k) {
      p.center(i, k) = -range + spacing * k;
      p.width(i, k) = spacing;
    }
  }
  return p;
}

int NeuroFuzzyParams::RuleMembership(int rule, int input) const {
  int stride = 1;
  for (int i = input_count_ - 1; i > input; --i) stride *= mf_per_input_;
  return (rule / stride) % mf_per_input_;
}

void NeuroFuzzyParams::Validate(double sigma_min) const {
  if (input_count_ < 1 || mf_per_input_ < 1) {
    throw ConfigError("neuro-fuzzy network is empty");
  }
  for (double w : widths_) {
    if (!(w >= sigma_min)) {
      throw ConfigError("membership width " + std::to_string(w) +
                        " below floor " + std::to_string(sigma_min));
    }
  }
  if (!AllFinite(centers_) || !AllFinite(widths_) ||
      !AllFinite(consequents_)) {
    throw ConfigError("neuro-fuzzy parameters must be finite");
  }
}

nlohmann::json NeuroFuzzyParams::ToJson() const {
  return nlohmann::json{{"I", input_count_},
                        {"K", mf_per_input_},
                        {"centers", centers_},
                        {"widths", widths_},
                        {"consequents", consequents_}};
}

NeuroFuzzyParams NeuroFuzzyParams::FromJson(const nlohmann::json& j) {
  try {
    for (const auto& [key, value] : j.items()) {
      if (key != "I" && key != "K" && key != "centers" && key != "widths" &&
          key != "consequents") {
        throw ConfigError("unknown key in parameter snapshot: " + key);
      }
    }
    NeuroFuzzyParams p(j.at("I").get<int>(), j.at("K").get<int>());
    auto centers = j.at("centers").get<std::vector<double>>();
    auto widths = j.at("widths").get<std::vector<double>>();
    auto consequents = j.at("consequents").get<std::vector<double>>();
    if (centers.size() != p.centers_.size() ||
        widths.size() != p.widths_.size() ||
        consequents.size() != p.consequents_.size()) {
      throw ConfigError("parameter snapshot sizes do not match I and K");
    }
    p.centers_ = std::move(centers);
    p.widths_ = std::move(widths);
    p.consequents_ = std::move(consequents);
    p.Validate(0.0);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed parameter snapshot: ") +
                      e.what());
  }
}

double Membership(double e, double c, double sigma, double sigma_min) {
  if (!(sigma >= sigma_min)) {
    throw LearningFault("membership width " + std::to_string(sigma) +
                        " below floor " + std::to_string(sigma_min));
  }
  const double m = (e - c) / sigma;
  return std::exp(-0.5 * m * m);
}

FiringState FiringStrengths(std::span<const double> inputs,
                            const NeuroFuzzyParams& params) {
  const int inputs_n = params.input_count();
  const int mfs = params.mf_per_input();
  if (static_cast<int>(inputs.size()) != inputs_n) {
    throw ConfigError("network expects " + std::to_string(inputs_n) +
                      " inputs, got " + std::to_string(inputs.size()));
  }
  FiringState state;
  state.memberships.resize(static_cast<size_t>(inputs_n * mfs));
  for (int i = 0; i < inputs_n; ++i) {
    for (int k = 0; k < mfs; ++k) {
      // Widths are kept above the floor by the learning law; evaluate with a
      // zero floor so snapshots loaded with smaller widths still work.
      state.memberships[static_cast<size_t>(i * mfs + k)] =
          Membership(inputs[static_cast<size_t>(i)], params.center(i, k),
                     params.width(i, k), 0.0);
    }
  }

  const int rules = params.rule_count();
  state.raw.resize(static_cast<size_t>(rules));
  state.normalized.resize(static_cast<size_t>(rules));
  double total = 0.0;
  for (int r = 0; r < rules; ++r) {
    // Row-major decode of r into (k_1, ..., k_I).
    double w = 1.0;
    int rest = r;
    for (int i = inputs_n - 1; i >= 0; --i) {
      const int k = rest % mfs;
      rest /= mfs;
      w *= state.memberships[static_cast<size_t>(i * mfs + k)];
    }
    state.raw[static_cast<size_t>(r)] = w;
    total += w;
  }

  if (total > 0.0 && std::isfinite(total)) {
    for (int r = 0; r < rules; ++r) {
      state.normalized[static_cast<size_t>(r)] =
          state.raw[static_cast<size_t>(r)] / total;
    }
  } else {
    state.underflow = true;
    const double uniform = 1.0 / rules;
    for (double& w : state.normalized) w = uniform;
  }
  return state;
}

double NetworkOutput(const FiringState& firing,
                     std::span<const double> consequents) {
  if (firing.normalized.size() != consequents.size()) {
    throw ConfigError("firing state has " +
                      std::to_string(firing.normalized.size()) +
                      " rules but " + std::to_string(consequents.size()) +
                      " consequents were given");
  }
  double u = 0.0;
  for (size_t r = 0; r < consequents.size(); ++r) {
    u += firing.normalized[r] * consequents[r];
  }
  return u;
}

}  // namespace clelc
