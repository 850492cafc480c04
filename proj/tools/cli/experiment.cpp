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

#include "cli/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gevlearn/csv.hpp"
#include "gevlearn/environment.hpp"
#include "gevlearn/errors.hpp"
#include "gevlearn/games.hpp"
#include "gevlearn/json_io.hpp"
#include "gevlearn/learners.hpp"
#include "gevlearn/market.hpp"
#include "gevlearn/regret.hpp"
#include "gevlearn/surplus.hpp"

namespace gevlearn::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kSimplexTolerance = 1e-9;
constexpr double kBoundSlack = 1e-9;
constexpr double kPathTolerance = 1e-9;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError(path + ": " + msg);
}

// Typed, path-annotated access to the fields of a config object.
class Fields {
 public:
  Fields(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) fail(path_, "expected an object");
  }

  bool has(const char* name) const { return doc_.contains(name); }
  std::string at(const char* name) const { return path_ + "." + name; }
  const json& raw(const char* name) const {
    if (!has(name)) fail(path_, std::string("missing field '") + name + "'");
    return doc_.at(name);
  }

  double number(const char* name) const {
    const json& v = raw(name);
    if (!v.is_number()) fail(at(name), "expected a number");
    return v.get<double>();
  }
  double number(const char* name, double fallback) const {
    return has(name) ? number(name) : fallback;
  }
  double positive(const char* name, double fallback) const {
    const double v = number(name, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) fail(at(name), "must be positive and finite");
    return v;
  }

  std::uint64_t count(const char* name) const {
    const json& v = raw(name);
    // Accept 1e4-style literals when they are whole numbers.
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
    }
    fail(at(name), "expected a nonnegative integer");
  }
  std::uint64_t count(const char* name, std::uint64_t fallback) const {
    return has(name) ? count(name) : fallback;
  }

  std::string string(const char* name) const {
    const json& v = raw(name);
    if (!v.is_string()) fail(at(name), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const char* name, const std::string& fallback) const {
    return has(name) ? string(name) : fallback;
  }

  bool boolean(const char* name, bool fallback) const {
    if (!has(name)) return fallback;
    const json& v = raw(name);
    if (!v.is_boolean()) fail(at(name), "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const char* name) const {
    const json& v = raw(name);
    if (!v.is_array()) fail(at(name), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(at(name) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  const std::string& path() const { return path_; }

 private:
  const json& doc_;
  std::string path_;
};

std::uint64_t resolve_seed(const Fields& f, const RunOptions& options) {
  if (options.seed) return *options.seed;
  return f.count("seed", 0);
}

// Learning rate request: nullopt means "optimal".
std::optional<double> resolve_eta(const Fields& f, const RunOptions& options) {
  std::string text;
  std::string where;
  if (options.eta) {
    text = *options.eta;
    where = "--eta";
  } else if (f.has("eta")) {
    const json& v = f.raw("eta");
    where = f.at("eta");
    if (v.is_number()) {
      const double eta = v.get<double>();
      if (!(eta > 0.0) || !std::isfinite(eta)) fail(where, "must be positive and finite");
      return eta;
    }
    if (!v.is_string()) fail(where, "expected a number or \"optimal\"");
    text = v.get<std::string>();
  } else {
    return std::nullopt;
  }
  if (text == "optimal") return std::nullopt;
  char* end = nullptr;
  const double eta = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !(eta > 0.0) || !std::isfinite(eta)) {
    fail(where, "expected a positive number or \"optimal\", got '" + text + "'");
  }
  return eta;
}

Predictor read_predictor(const Fields& parent) {
  if (!parent.has("predictor")) return Predictor::none();
  const json& raw = parent.raw("predictor");
  if (raw.is_string()) {
    const std::string kind = raw.get<std::string>();
    if (kind == "none") return Predictor::none();
    if (kind == "one_step") return Predictor::one_step();
    fail(parent.at("predictor"), "'" + kind + "' needs parameters; use an object");
  }
  const Fields f(raw, parent.at("predictor"));
  const std::string kind = f.string("kind");
  try {
    if (kind == "none") return Predictor::none();
    if (kind == "one_step") return Predictor::one_step();
    if (kind == "s_step") return Predictor::s_step(f.count("window"));
    if (kind == "geometric") return Predictor::geometric(f.number("delta"));
  } catch (const DomainError& e) {
    fail(f.path(), e.what());
  }
  fail(f.at("kind"), "unknown predictor '" + kind +
                         "' (expected none, one_step, s_step or geometric)");
}

std::string predictor_label(const Predictor& p) {
  switch (p.kind()) {
    case PredictorKind::kNone: return "none";
    case PredictorKind::kOneStep: return "one_step";
    case PredictorKind::kSStep: return "s_step(" + std::to_string(p.window()) + ")";
    case PredictorKind::kGeometric: return "geometric(" + format_number(p.discount()) + ")";
  }
  return "none";
}

void check_kind(const json& config, std::string_view kind) {
  if (!config.is_object()) fail("config", "expected a JSON object");
  if (config.contains("kind")) {
    const json& v = config["kind"];
    if (!v.is_string()) fail("config.kind", "expected a string");
    if (v.get<std::string>() != kind) {
      fail("config.kind", "config is for '" + v.get<std::string>() + "' but the subcommand is '" +
                              std::string(kind) + "'");
    }
  }
}

std::ofstream open_artifact(const RunOptions& options, const std::string& name,
                            RunResult& result) {
  fs::create_directories(options.out_dir);
  const fs::path path = options.out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  result.artifacts.push_back(path);
  return out;
}

void write_json(const RunOptions& options, const std::string& name, const json& doc,
                RunResult& result) {
  std::ofstream out = open_artifact(options, name, result);
  out << doc.dump(2) << '\n';
}

json constants_json(const ModelConstants& c) {
  return {{"lipschitz", c.lipschitz},
          {"curvature", c.curvature},
          {"surplus_at_zero", c.surplus_at_zero},
          {"log_n", c.log_n_bound}};
}

// Empty when x is a probability vector, otherwise a description.
std::string simplex_problem(std::span<const double> x) {
  double total = 0.0;
  for (double v : x) {
    if (!(v >= 0.0)) return "negative or NaN entry " + format_number(v);
    total += v;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) return "entries sum to " + format_number(total);
  return {};
}

void finish(RunResult& result) {
  result.exit_code = result.violations.empty() ? kExitOk : kExitInvariantViolation;
}

}  // namespace

RunResult run_learn(const json& config, const RunOptions& options) {
  check_kind(config, "learn");
  const Fields f(config, "config");
  const GevSpec spec = spec_from_json(f.raw("spec"), "config.spec");
  const std::size_t horizon = f.count("horizon");
  if (horizon == 0) fail(f.at("horizon"), "must be at least 1");
  const Predictor predictor = read_predictor(f);

  const Fields env_fields(f.raw("environment"), "config.environment");
  EnvironmentConfig env;
  try {
    env.kind = parse_environment_kind(env_fields.string("kind"));
  } catch (const ValidationError& e) {
    fail(env_fields.at("kind"), e.what());
  }
  env.alternatives = spec.size();
  env.u_max = env_fields.positive("u_max", 1.0);
  env.horizon = horizon;
  env.drift = env_fields.number("drift", 0.0);
  env.seed = options.seed ? *options.seed : env_fields.count("seed", f.count("seed", 0));
  if (env.kind == EnvironmentKind::kSlowDrift && !(env.drift > 0.0)) {
    fail(env_fields.at("drift"), "slow_drift needs a positive drift bound");
  }

  const ModelConstants constants = model_constants(spec);
  // Worst-case per-step prediction error: B on slow-drift streams, otherwise
  // the trivial 2 u_max.
  const double drift_bound =
      env.kind == EnvironmentKind::kSlowDrift ? env.drift : 2.0 * env.u_max;
  const BoundReport worst_case =
      predictor.kind() == PredictorKind::kNone
          ? regret_bound(constants, horizon, env.u_max)
          : oftrl_bound(constants, horizon, drift_bound, predictor);
  const std::optional<double> eta_request = resolve_eta(f, options);
  const double eta = eta_request.value_or(worst_case.eta);
  const bool write_trajectory = f.boolean("trajectory", true);

  LearnerState state = LearnerState::make(spec, eta, env.u_max, predictor);
  Environment stream(env);
  RegretLedger ledger(env.u_max);
  RunResult result;

  std::ofstream curve = open_artifact(options, "regret.csv", result);
  curve << "t,regret,avg_regret,bound_at_t,eta\n";
  std::ofstream trajectory;
  if (write_trajectory) {
    trajectory = open_artifact(options, "trajectory.csv", result);
    std::vector<std::string> header{"t"};
    for (auto& c : indexed_columns("x", spec.size())) header.push_back(std::move(c));
    for (auto& c : indexed_columns("u", spec.size())) header.push_back(std::move(c));
    header.emplace_back("expected_payoff");
    write_csv_row(trajectory, header);
  }

  double error_sq = 0.0;
  double worst_gap = -std::numeric_limits<double>::infinity();
  std::size_t worst_t = 0;
  std::vector<std::string> row;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const SimplexVector x = ssa_choose(state);
    const PayoffVector beta = state.predictor.value(spec.size());
    const PayoffVector u = *stream.next();
    if (const std::string bad = simplex_problem(x); !bad.empty() && result.violations.size() < 10) {
      result.violations.push_back("simplex: x_" + std::to_string(t) + " " + bad);
    }
    ledger.append(x, u);
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - beta[i]));
    error_sq += err * err;
    state = ssa_update(std::move(state), u);

    // Data-dependent bound eta phi(0) + (L / 2 eta) sum_s ||u_s - beta_s||^2.
    const double bound = eta * constants.surplus_at_zero +
                         constants.lipschitz / (2.0 * eta) * error_sq;
    const double r = ledger.curve().back();
    if (r - bound > worst_gap) {
      worst_gap = r - bound;
      worst_t = t;
    }
    curve << t << ',' << format_number(r) << ',' << format_number(r / static_cast<double>(t))
          << ',' << format_number(bound) << ',' << format_number(eta) << '\n';
    if (write_trajectory) {
      row.assign({std::to_string(t)});
      double earned = 0.0;
      for (double v : x) row.push_back(format_probability(v));
      for (std::size_t i = 0; i < u.size(); ++i) {
        row.push_back(format_number(u[i]));
        earned += x[i] * u[i];
      }
      row.push_back(format_number(earned));
      write_csv_row(trajectory, row);
    }
  }
  if (worst_gap > kBoundSlack) {
    result.violations.push_back("regret bound: R_" + std::to_string(worst_t) + " exceeds bound by " +
                                format_number(worst_gap));
  }

  const double final_regret = regret(ledger);
  const double final_bound =
      eta * constants.surplus_at_zero + constants.lipschitz / (2.0 * eta) * error_sq;
  json summary = {
      {"kind", "learn"},
      {"spec", spec_to_json(spec)},
      {"environment",
       {{"kind", std::string(environment_kind_name(env.kind))},
        {"u_max", env.u_max},
        {"drift", env.drift},
        {"seed", env.seed},
        {"horizon", horizon}}},
      {"predictor", predictor_label(predictor)},
      {"eta", eta},
      {"eta_is_optimal", !eta_request.has_value()},
      {"constants", constants_json(constants)},
      {"regret", final_regret},
      {"average_regret", final_regret / static_cast<double>(horizon)},
      {"best_alternative", best_in_hindsight(ledger)},
      {"data_dependent_bound", final_bound},
      {"optimized_bound", worst_case.bound},
      {"measured_drift", measured_drift(ledger.payoffs())},
      {"violations", result.violations},
  };
  write_json(options, "summary.json", summary, result);
  result.summary.push_back("learn: " + std::string(variant_name(spec.variant())) + " N=" +
                           std::to_string(spec.size()) + " T=" + std::to_string(horizon) +
                           " eta=" + format_number(eta) + " regret=" +
                           format_number(final_regret) + " bound=" + format_number(final_bound));
  finish(result);
  return result;
}

RunResult run_game(const json& config, const RunOptions& options) {
  check_kind(config, "game");
  const Fields f(config, "config");
  const std::size_t horizon = f.count("horizon");
  if (horizon == 0) fail(f.at("horizon"), "must be at least 1");

  std::unique_ptr<NormalFormGame> game;
  {
    const Fields g(f.raw("game"), "config.game");
    if (g.has("random")) {
      const Fields r(g.raw("random"), g.at("random"));
      const std::uint64_t seed = options.seed ? *options.seed : r.count("seed", f.count("seed", 0));
      game = std::make_unique<NormalFormGame>(
          NormalFormGame::random(r.count("players"), r.count("strategies"), seed));
    } else {
      game = std::make_unique<NormalFormGame>(game_from_json(f.raw("game"), "config.game"));
    }
  }

  std::vector<GevSpec> specs;
  if (f.has("learners")) {
    const json& arr = f.raw("learners");
    if (!arr.is_array()) fail(f.at("learners"), "expected an array of specs");
    for (std::size_t j = 0; j < arr.size(); ++j) {
      specs.push_back(spec_from_json(arr[j], "config.learners[" + std::to_string(j) + "]"));
    }
  } else {
    const GevSpec shared = spec_from_json(f.raw("spec"), "config.spec");
    specs.assign(game->players(), shared);
  }
  if (specs.size() != game->players()) {
    fail(f.at("learners"), "need one spec per player (" + std::to_string(game->players()) + ")");
  }
  for (std::size_t j = 0; j < specs.size(); ++j) {
    if (specs[j].size() != game->strategies()) {
      fail("config.learners[" + std::to_string(j) + "]",
           "spec has " + std::to_string(specs[j].size()) + " alternatives, game has " +
               std::to_string(game->strategies()) + " strategies");
    }
  }

  std::vector<PlayerLearner> learners = optimal_learners(specs, horizon);
  if (const auto eta = resolve_eta(f, options)) {
    for (PlayerLearner& l : learners) l.eta = *eta;
  }

  std::optional<SmoothnessParams> smooth;
  if (f.has("smoothness")) {
    const Fields s(f.raw("smoothness"), "config.smoothness");
    std::vector<std::size_t> target;
    if (s.has("target")) {
      for (double v : s.numbers("target")) {
        if (v < 0.0 || v != std::floor(v)) fail(s.at("target"), "expected strategy indices");
        target.push_back(static_cast<std::size_t>(v));
      }
    } else {
      target = brute_force_opt(*game).profile;
    }
    const double mu = s.number("mu", 0.0);
    double lambda = 0.0;
    if (s.has("lambda")) {
      lambda = s.number("lambda");
    } else {
      lambda = max_smoothness_lambda(*game, target, mu);
      if (!(lambda > 0.0)) {
        fail(s.path(), "no positive lambda certifies smoothness with mu = " + format_number(mu));
      }
    }
    smooth = SmoothnessParams::verified(*game, lambda, mu, target);
  }

  const DynamicsResult dyn = run_dynamics(*game, learners, horizon);
  RunResult result;
  {
    std::ofstream csv = open_artifact(options, "dynamics.csv", result);
    write_dynamics_csv(csv, dyn);
  }
  for (std::size_t j = 0; j < dyn.strategies.size(); ++j) {
    for (std::size_t t = 0; t < dyn.rounds(); ++t) {
      if (const std::string bad = simplex_problem(dyn.strategies[j][t]); !bad.empty()) {
        result.violations.push_back("simplex: player " + std::to_string(j + 1) + " round " +
                                    std::to_string(t + 1) + " " + bad);
        break;
      }
    }
  }

  const double delta = cce_delta(dyn);
  const CceReport cce = cce_check(*game, dyn, delta);
  if (!cce.passed) {
    result.violations.push_back("cce: player " + std::to_string(cce.worst_player + 1) +
                                " deviating to " + std::to_string(cce.worst_deviation + 1) +
                                " gains beyond delta by " + format_number(-cce.worst_margin));
  }
  json regrets = json::array();
  json etas = json::array();
  for (std::size_t j = 0; j < dyn.ledgers.size(); ++j) {
    regrets.push_back(regret(dyn.ledgers[j]));
    etas.push_back(learners[j].eta);
  }
  json report = {
      {"kind", "game"},
      {"players", game->players()},
      {"strategies", game->strategies()},
      {"horizon", horizon},
      {"eta", etas},
      {"regret", regrets},
      {"cce",
       {{"delta", cce.delta},
        {"worst_margin", cce.worst_margin},
        {"worst_player", cce.worst_player + 1},
        {"worst_deviation", cce.worst_deviation + 1},
        {"deviation_gain", cce.deviation_gain},
        {"passed", cce.passed}}},
  };
  if (smooth) {
    const WelfareReport w = welfare_bound_check(*game, *smooth, dyn);
    report["welfare"] = {{"lambda", smooth->lambda},
                         {"mu", smooth->mu},
                         {"target", smooth->target},
                         {"average_welfare", w.average_welfare},
                         {"optimum", w.optimum},
                         {"average_regret_sum", w.average_regret_sum},
                         {"lower_bound", w.lower_bound},
                         {"price_of_anarchy", w.price_of_anarchy},
                         {"slack", w.slack},
                         {"holds", w.holds}};
    if (!w.holds) {
      result.violations.push_back("welfare: average welfare " + format_number(w.average_welfare) +
                                  " below bound " + format_number(w.lower_bound));
    }
  }
  report["violations"] = result.violations;
  write_json(options, "cce.json", report, result);
  result.summary.push_back("game: P=" + std::to_string(game->players()) + " N=" +
                           std::to_string(game->strategies()) + " T=" + std::to_string(horizon) +
                           " delta=" + format_number(delta) +
                           " cce=" + (cce.passed ? "pass" : "FAIL"));
  finish(result);
  return result;
}

RunResult run_market(const json& config, const RunOptions& options) {
  check_kind(config, "market");
  const Fields f(config, "config");
  const GevSpec spec = spec_from_json(f.raw("spec"), "config.spec");
  const double liquidity = f.positive("liquidity", 1.0);
  std::optional<std::vector<double>> initial;
  if (f.has("initial_shares")) {
    initial = f.numbers("initial_shares");
    if (initial->size() != spec.size()) fail(f.at("initial_shares"), "wrong length");
  }

  std::vector<std::vector<double>> bundles;
  if (f.has("trades") == f.has("trade_log")) {
    fail(f.path(), "give exactly one of 'trades' or 'trade_log'");
  }
  if (f.has("trades")) {
    const json& arr = f.raw("trades");
    if (!arr.is_array()) fail(f.at("trades"), "expected an array of bundles");
    for (std::size_t t = 0; t < arr.size(); ++t) {
      const std::string where = f.at("trades") + "[" + std::to_string(t) + "]";
      if (!arr[t].is_array() || arr[t].size() != spec.size()) {
        fail(where, "expected an array of " + std::to_string(spec.size()) + " numbers");
      }
      std::vector<double> bundle;
      for (const json& v : arr[t]) {
        if (!v.is_number()) fail(where, "non-numeric entry");
        bundle.push_back(v.get<double>());
      }
      bundles.push_back(std::move(bundle));
    }
  } else {
    fs::path log = f.string("trade_log");
    if (log.is_relative()) log = options.config_dir / log;
    std::ifstream in(log);
    if (!in) fail(f.at("trade_log"), "cannot open " + log.string());
    bundles = read_trade_log(in, spec.size());
  }

  const std::size_t samples = f.count("audit_samples", 1000);
  if (samples < 100) fail(f.at("audit_samples"), "must be at least 100");
  const std::uint64_t seed = resolve_seed(f, options);
  if (options.eta) fail("--eta", "the market subcommand takes its liquidity from the config");

  const MarketState opened = MarketState::open(spec, liquidity, initial);
  const std::vector<MarketStep> path = run_market(opened, bundles);
  RunResult result;
  {
    std::ofstream csv = open_artifact(options, "market.csv", result);
    write_market_csv(csv, path);
  }
  for (const MarketStep& step : path) {
    if (const std::string bad = simplex_problem(step.prices); !bad.empty()) {
      result.violations.push_back("prices at t=" + std::to_string(step.t) + ": " + bad);
      break;
    }
  }

  // Path independence: the sum of charges equals C(q_T) - C(q_0).
  double charged = 0.0;
  for (const MarketStep& step : path) charged += step.charge;
  MarketState final_state = opened;
  final_state.shares = path.back().shares;
  const double lump = cost(final_state) - cost(opened);
  const double path_error = std::abs(charged - lump);
  if (path_error > kPathTolerance * std::max(1.0, std::abs(lump))) {
    result.violations.push_back("path independence: charges differ from C(q_T) - C(q_0) by " +
                                format_number(path_error));
  }

  const AuditReport audit = validity_audit(spec, liquidity, samples, seed);
  json failures = json::array();
  for (const AuditFailure& fl : audit.failures) {
    failures.push_back({{"property", std::string(market_property_name(fl.property))},
                        {"witness", fl.witness},
                        {"detail", fl.detail}});
    result.violations.push_back("audit " + std::string(market_property_name(fl.property)) +
                                ": " + fl.detail);
  }
  json report = {
      {"kind", "market"},
      {"spec", spec_to_json(spec)},
      {"liquidity", liquidity},
      {"trades", bundles.size()},
      {"total_charge", charged},
      {"path_independence_error", path_error},
      {"final_prices", path.back().prices},
      {"audit",
       {{"samples", audit.samples},
        {"seed", seed},
        {"passed", audit.passed()},
        {"max_gradient_error", audit.max_gradient_error},
        {"max_translation_error", audit.max_translation_error},
        {"max_price_sum_error", audit.max_price_sum_error},
        {"failures", failures}}},
      {"violations", result.violations},
  };
  write_json(options, "audit.json", report, result);
  result.summary.push_back("market: " + std::string(variant_name(spec.variant())) + " N=" +
                           std::to_string(spec.size()) + " trades=" +
                           std::to_string(bundles.size()) + " charged=" +
                           format_number(charged) + " audit=" +
                           (audit.passed() ? "pass" : "FAIL"));
  finish(result);
  return result;
}

RunResult run_bounds(const json& config, const RunOptions& options) {
  check_kind(config, "bounds");
  const Fields f(config, "config");
  if (options.eta) fail("--eta", "the bounds table is always evaluated at the optimal eta");
  const std::size_t horizon = f.count("horizon");
  if (horizon == 0) fail(f.at("horizon"), "must be at least 1");
  const double u_max = f.positive("u_max", 1.0);

  std::vector<NamedSpec> models;
  if (f.has("models")) {
    const json& arr = f.raw("models");
    if (!arr.is_array()) fail(f.at("models"), "expected an array");
    for (std::size_t m = 0; m < arr.size(); ++m) {
      const Fields mf(arr[m], f.at("models") + "[" + std::to_string(m) + "]");
      models.push_back({mf.string("name"), spec_from_json(mf.raw("spec"), mf.at("spec"))});
    }
  } else {
    const std::size_t n = f.count("n");
    if (n < 2) fail(f.at("n"), "needs at least two alternatives");
    const double lambda = f.number("lambda", 0.5);
    if (!(lambda >= kMinLambda && lambda <= 1.0)) fail(f.at("lambda"), "must lie in [1e-3, 1]");
    models = table_models(n, lambda);
  }

  const std::vector<BoundsRow> rows = bounds_table(models, horizon, u_max);
  RunResult result;
  for (const BoundsRow& r : rows) {
    if (r.bound_exact > r.bound_table * (1.0 + 1e-12)) {
      result.violations.push_back("bounds: " + r.model + " has log G(1) above log N");
    }
  }
  {
    std::ofstream csv = open_artifact(options, "bounds.csv", result);
    write_bounds_csv(csv, rows);
  }
  {
    std::ofstream txt = open_artifact(options, "bounds.txt", result);
    write_bounds_text(txt, rows);
  }
  std::stringstream table;
  write_bounds_text(table, rows);
  std::string line;
  while (std::getline(table, line)) result.summary.push_back(line);
  finish(result);
  return result;
}

RunResult run_experiment(std::string_view kind, const json& config, const RunOptions& options) {
  if (kind == "learn") return run_learn(config, options);
  if (kind == "game") return run_game(config, options);
  if (kind == "market") return run_market(config, options);
  if (kind == "bounds") return run_bounds(config, options);
  throw ValidationError("unknown subcommand '" + std::string(kind) + "'");
}

int run_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"gevlearn: no-regret learning with GEV discrete-choice models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string eta;
  for (const char* name : {"learn", "game", "market", "bounds"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run a ") + name + " experiment");
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out-dir", out_dir,
                    "output directory (default: $GEVLEARN_OUT_DIR, else the working directory)");
    sub->add_option("--eta", eta, "learning rate: a positive number or 'optimal'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e_out;
    const int code = app.exit(e, o, e_out);
    out << o.str();
    err << e_out.str();
    return code == 0 ? kExitOk : kExitConfigError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  RunOptions options;
  if (!out_dir.empty()) {
    options.out_dir = out_dir;
  } else if (const char* env = std::getenv("GEVLEARN_OUT_DIR"); env != nullptr && *env != '\0') {
    options.out_dir = env;
  }
  if (chosen->count("--seed") > 0) options.seed = seed;
  if (chosen->count("--eta") > 0) options.eta = eta;
  options.config_dir = fs::path(config_path).parent_path();
  if (options.config_dir.empty()) options.config_dir = ".";

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ValidationError(config_path + ": cannot open config");
    std::ostringstream text;
    text << in.rdbuf();
    const json config = parse_json_text(text.str(), config_path);
    const RunResult result = run_experiment(chosen->get_name(), config, options);
    for (const std::string& line : result.summary) out << line << '\n';
    for (const fs::path& p : result.artifacts) out << "wrote " << p.string() << '\n';
    for (const std::string& v : result.violations) err << "invariant violated: " << v << '\n';
    return result.exit_code;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace gevlearn::cli
