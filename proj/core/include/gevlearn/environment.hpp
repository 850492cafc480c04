// Copyright 2026 The gevlearn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEVLEARN_ENVIRONMENT_HPP_
#define GEVLEARN_ENVIRONMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "gevlearn/rng.hpp"
#include "gevlearn/surplus.hpp"

namespace gevlearn {

enum class EnvironmentKind {
  // u_it ~ U[-u_max, u_max] independently.
  kIidUniform,
  // u_it ~ N(mu_i, (u_max/2)^2) clipped to [-u_max, u_max]; the arm means
  // mu_i ~ U[-u_max/2, u_max/2] are drawn once per stream.
  kIidGaussianClipped,
  // One arm pays u_max, the rest U[0, u_max/2]; the leading arm is redrawn
  // at the start of each quarter of the horizon.
  kBestArmShift,
  // u_t = u_max e_{(t-1) mod N}.
  kAdversarialAlternating,
  // u_0 = 0, u_t = clip(u_{t-1} + U[-B, B]^N, -u_max, u_max), so
  // ||u_t - u_{t-1}||_inf <= B for every t >= 1.
  kSlowDrift,
};

std::string_view environment_kind_name(EnvironmentKind kind);
EnvironmentKind parse_environment_kind(std::string_view name);

struct EnvironmentConfig {
  EnvironmentKind kind = EnvironmentKind::kIidUniform;
  std::size_t alternatives = 2;
  double u_max = 1.0;
  std::size_t horizon = 1;
  std::uint64_t seed = 0;
  // Per-step drift bound B (slow_drift only).
  double drift = 0.0;
};

// Oblivious payoff stream. Deterministic given the config.
class Environment {
 public:
  explicit Environment(EnvironmentConfig config);

  // Payoff of the next period, or nullopt once the horizon is exhausted.
  std::optional<PayoffVector> next();
  // Periods emitted so far.
  std::size_t period() const { return period_; }
  const EnvironmentConfig& config() const { return config_; }

 private:
  EnvironmentConfig config_;
  Rng rng_;
  std::size_t period_ = 0;
  PayoffVector previous_;
  std::vector<double> means_;
  std::size_t leader_ = 0;
};

std::optional<PayoffVector> next_payoff(Environment& env);

// Materializes the whole stream.
std::vector<PayoffVector> generate_stream(const EnvironmentConfig& config);
// Writes "t,u_1,...,u_N" rows.
void write_stream_csv(std::ostream& out, const std::vector<PayoffVector>& stream);

}  // namespace gevlearn

#endif  // GEVLEARN_ENVIRONMENT_HPP_
