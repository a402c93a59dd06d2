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

#ifndef CLELC_NEURO_FUZZY_H_
#define CLELC_NEURO_FUZZY_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace clelc {

inline constexpr double kDefaultSigmaMin = 1e-3;

// Zeroth-order Takagi-Sugeno-Kang network with Gaussian memberships on a full
// rule grid. Rules are enumerated row-major over the membership indices
// (k_1, ..., k_I): rule r has k_I = r % K, k_{I-1} = (r / K) % K, and so on.
//
// Centers and widths are stored input-major: element (i, k) lives at
// i * K + k.
class NeuroFuzzyParams {
 public:
  NeuroFuzzyParams() = default;

  // Zero consequents, all centers 0 and widths 1.
  NeuroFuzzyParams(int input_count, int mf_per_input);

  // Centers spread uniformly over [-ranges[i], ranges[i]] for each input,
  // widths equal to the center spacing 2 * range / (K - 1) (or the range
  // itself when K == 1), consequents zero.
  static NeuroFuzzyParams UniformGrid(std::span<const double> ranges,
                                      int mf_per_input);

  int input_count() const { return input_count_; }
  int mf_per_input() const { return mf_per_input_; }
  int rule_count() const { return static_cast<int>(consequents_.size()); }

  double center(int i, int k) const { return centers_[Index(i, k)]; }
  double width(int i, int k) const { return widths_[Index(i, k)]; }
  double& center(int i, int k) { return centers_[Index(i, k)]; }
  double& width(int i, int k) { return widths_[Index(i, k)]; }

  std::span<const double> centers() const { return centers_; }
  std::span<const double> widths() const { return widths_; }
  std::span<const double> consequents() const { return consequents_; }
  std::span<double> mutable_centers() { return centers_; }
  std::span<double> mutable_widths() { return widths_; }
  std::span<double> mutable_consequents() { return consequents_; }

  // Membership index used by rule r for input i.
  int RuleMembership(int rule, int input) const;

  // Throws ConfigError if any width is below sigma_min or any value is not
  // finite.
  void Validate(double sigma_min = kDefaultSigmaMin) const;

  // Flat snapshot {"I", "K", "centers", "widths", "consequents"}.
  nlohmann::json ToJson() const;
  static NeuroFuzzyParams FromJson(const nlohmann::json& j);

  friend bool operator==(const NeuroFuzzyParams&,
                         const NeuroFuzzyParams&) = default;

 private:
  size_t Index(int i, int k) const {
    return static_cast<size_t>(i * mf_per_input_ + k);
  }

  int input_count_ = 0;
  int mf_per_input_ = 0;
  std::vector<double> centers_;
  std::vector<double> widths_;
  std::vector<double> consequents_;
};

struct FiringState {
  std::vector<double> memberships;  // I x K, input-major
  std::vector<double> raw;          // w_r
  std::vector<double> normalized;   // w~_r
  // Every raw strength underflowed and the normalized vector fell back to
  // uniform weights.
  bool underflow = false;
};

// exp(-0.5 ((e - c) / sigma)^2). Throws LearningFault if sigma < sigma_min.
double Membership(double e, double c, double sigma,
                  double sigma_min = kDefaultSigmaMin);

FiringState FiringStrengths(std::span<const double> inputs,
                            const NeuroFuzzyParams& params);

// sum_r w~_r f_r.
double NetworkOutput(const FiringState& firing,
                     std::span<const double> consequents);

}  // namespace clelc

#endif  // CLELC_NEURO_FUZZY_H_
