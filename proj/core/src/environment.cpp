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

#include "gevlearn/environment.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "gevlearn/csv.hpp"
#include "gevlearn/errors.hpp"

namespace gevlearn {

std::string_view environment_kind_name(EnvironmentKind kind) {
  switch (kind) {
    case EnvironmentKind::kIidUniform: return "iid_uniform";
    case EnvironmentKind::kIidGaussianClipped: return "iid_gaussian_clipped";
    case EnvironmentKind::kBestArmShift: return "best_arm_shift";
    case EnvironmentKind::kAdversarialAlternating: return "adversarial_alternating";
    case EnvironmentKind::kSlowDrift: return "slow_drift";
  }
  return "unknown";
}

EnvironmentKind parse_environment_kind(std::string_view name) {
  for (EnvironmentKind k :
       {EnvironmentKind::kIidUniform, EnvironmentKind::kIidGaussianClipped,
        EnvironmentKind::kBestArmShift, EnvironmentKind::kAdversarialAlternating,
        EnvironmentKind::kSlowDrift}) {
    if (environment_kind_name(k) == name) return k;
  }
  throw ValidationError("unknown environment kind '" + std::string(name) + "'");
}

Environment::Environment(EnvironmentConfig config) : config_(config), rng_(config.seed) {
  if (config_.alternatives == 0) throw ValidationError("environment needs alternatives >= 1");
  if (!(config_.u_max > 0.0)) throw ValidationError("environment needs u_max > 0");
  if (config_.kind == EnvironmentKind::kSlowDrift &&
      !(config_.drift >= 0.0 && std::isfinite(config_.drift))) {
    throw ValidationError("slow_drift needs a finite drift bound B >= 0");
  }
  previous_.assign(config_.alternatives, 0.0);
  if (config_.kind == EnvironmentKind::kIidGaussianClipped) {
    means_.resize(config_.alternatives);
    for (double& m : means_) m = rng_.uniform(-0.5 * config_.u_max, 0.5 * config_.u_max);
  }
}

std::optional<PayoffVector> Environment::next() {
  if (period_ >= config_.horizon) return std::nullopt;
  const std::size_t n = config_.alternatives;
  const double u_max = config_.u_max;
  PayoffVector u(n, 0.0);
  switch (config_.kind) {
    case EnvironmentKind::kIidUniform:
      for (double& v : u) v = rng_.uniform(-u_max, u_max);
      break;
    case EnvironmentKind::kIidGaussianClipped:
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = std::clamp(means_[i] + 0.5 * u_max * rng_.normal(), -u_max, u_max);
      }
      break;
    case EnvironmentKind::kBestArmShift: {
      const std::size_t segment = std::max<std::size_t>(1, (config_.horizon + 3) / 4);
      if (period_ % segment == 0) leader_ = static_cast<std::size_t>(rng_.below(n));
      for (double& v : u) v = rng_.uniform(0.0, 0.5 * u_max);
      u[leader_] = u_max;
      break;
    }
    case EnvironmentKind::kAdversarialAlternating:
      u[period_ % n] = u_max;
      break;
    case EnvironmentKind::kSlowDrift: {
      const double b = config_.drift;
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = std::clamp(previous_[i] + rng_.uniform(-b, b), -u_max, u_max);
      }
      break;
    }
  }
  previous_ = u;
  ++period_;
  return u;
}

std::optional<PayoffVector> next_payoff(Environment& env) { return env.next(); }

std::vector<PayoffVector> generate_stream(const EnvironmentConfig& config) {
  Environment env(config);
  std::vector<PayoffVector> out;
  out.reserve(config.horizon);
  while (auto u = env.next()) out.push_back(std::move(*u));
  return out;
}

void write_stream_csv(std::ostream& out, const std::vector<PayoffVector>& stream) {
  const std::size_t n = stream.empty() ? 0 : stream.front().size();
  std::vector<std::string> header{"t"};
  for (auto& c : indexed_columns("u", n)) header.push_back(std::move(c));
  write_csv_row(out, header);
  std::vector<std::string> row;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    row.assign({std::to_string(t + 1)});
    for (double v : stream[t]) row.push_back(format_number(v));
    write_csv_row(out, row);
  }
}

}  // namespace gevlearn
