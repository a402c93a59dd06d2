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

#ifndef CLELC_ERRORS_H_
#define CLELC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace clelc {

// Invalid parameters, mismatched dimensions, malformed scenario files.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Runtime failure while stepping a simulation: non-finite state, singular
// input gain, diverged adaptation.
class SimulationFault : public std::runtime_error {
 public:
  explicit SimulationFault(const std::string& what)
      : std::runtime_error(what) {}
};

// |b(x)| or |v| fell below the configured floor, so the linearizing input
// transformation cannot be inverted.
class SingularityError : public SimulationFault {
 public:
  explicit SingularityError(const std::string& what) : SimulationFault(what) {}
};

// A learning-law guard was violated, e.g. a membership width below the floor
// or a non-finite adaptation rate.
class LearningFault : public SimulationFault {
 public:
  explicit LearningFault(const std::string& what) : SimulationFault(what) {}
};

// alpha does not dominate the disturbance-rate bound.
class StabilityAssumptionError : public ConfigError {
 public:
  explicit StabilityAssumptionError(const std::string& what)
      : ConfigError(what) {}
};

}  // namespace clelc

#endif  // CLELC_ERRORS_H_
