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

#ifndef GEVLEARN_TOOLS_CLI_EXPERIMENT_HPP_
#define GEVLEARN_TOOLS_CLI_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace gevlearn::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitInvariantViolation = 2,
};

// Command-line overrides shared by every subcommand.
struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  // "optimal" or a positive number, as typed.
  std::optional<std::string> eta;
  // Directory that relative paths inside the config resolve against.
  std::filesystem::path config_dir = ".";
};

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> artifacts;
  // One line per failed invariant, with its witness.
  std::vector<std::string> violations;
  // Human-readable lines for stdout.
  std::vector<std::string> summary;
};

// Each runner validates the config (throwing ValidationError with a field
// path on bad input), runs the experiment, writes its artifacts into
// options.out_dir and reports invariant violations in the result.
RunResult run_learn(const nlohmann::json& config, const RunOptions& options);
RunResult run_game(const nlohmann::json& config, const RunOptions& options);
RunResult run_market(const nlohmann::json& config, const RunOptions& options);
RunResult run_bounds(const nlohmann::json& config, const RunOptions& options);

// Dispatches on kind ("learn", "game", "market", "bounds"). A "kind" field in
// the config must agree with it.
RunResult run_experiment(std::string_view kind, const nlohmann::json& config,
                         const RunOptions& options);

// Full command-line entry point; returns the process exit status.
int run_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace gevlearn::cli

#endif  // GEVLEARN_TOOLS_CLI_EXPERIMENT_HPP_
