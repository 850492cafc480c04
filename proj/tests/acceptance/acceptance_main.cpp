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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "gevlearn/environment.hpp"
#include "gevlearn/games.hpp"
#include "gevlearn/learners.hpp"
#include "gevlearn/market.hpp"
#include "gevlearn/regret.hpp"
#include "gevlearn/surplus.hpp"
#include "test_support.hpp"

namespace gevlearn {
namespace {

using testing::kAllVariants;
using testing::max_abs_diff;
using testing::random_spec;
using testing::random_vector;

struct Outcome {
  bool passed = true;
  std::string detail;
};

// Accumulates failure messages; keeps only the first few.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + messages_};
  }

 private:
  int failures_ = 0;
  std::string messages_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Criterion 1.
Outcome gradient_identity() {
  Rng rng(1001);
  Checker check;
  double worst = 0.0;
  for (Variant v : kAllVariants) {
    for (int rep = 0; rep < 1000; ++rep) {
      const GevSpec spec = random_spec(v, 2 + rng.below(9), rng, 0.1);
      const double eta = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
      const auto theta = random_vector(spec.size(), 10.0, rng);
      const double h = std::clamp(1e-5 * eta, 1e-7, 1e-4);
      const double err = max_abs_diff(choice_probabilities(spec, theta, eta),
                                      numeric_gradient(spec, theta, eta, h));
      worst = std::max(worst, err);
      check.expect(err <= 1e-6, std::string(variant_name(v)) + " error " + fmt(err));
    }
  }
  return check.outcome("7000 points, max |x - FD grad| = " + fmt(worst));
}

// Criterion 2.
Outcome ftrl_duality() {
  Rng rng(1002);
  Checker check;
  double worst = 0.0;
  std::size_t max_iter = 0;
  for (Variant v : {Variant::kMnl, Variant::kNl}) {
    for (int rep = 0; rep < 200; ++rep) {
      const GevSpec spec = random_spec(v, 2 + rng.below(9), rng, 0.05);
      const double eta = std::exp(rng.uniform(std::log(0.2), std::log(5.0)));
      const auto theta = random_vector(spec.size(), 10.0, rng);
      try {
        const FtrlSolution sol = ftrl_solve(spec, theta, eta);
        const double err = max_abs_diff(sol.x, choice_probabilities(spec, theta, eta));
        worst = std::max(worst, err);
        max_iter = std::max(max_iter, sol.iterations);
        check.expect(err <= 1e-8, std::string(variant_name(v)) + " error " + fmt(err));
      } catch (const std::exception& e) {
        check.expect(false, e.what());
      }
    }
  }
  return check.outcome("400 points, max error " + fmt(worst) + ", max iterations " +
                       std::to_string(max_iter));
}

// Criterion 3.
Outcome recursion_oracles() {
  Rng rng(1003);
  Checker check;
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const bool logit = rep % 2 == 0;
    const std::size_t n = 2 + rng.below(9);
    const GevSpec spec = logit ? GevSpec::mnl(n) : random_spec(Variant::kNl, n, rng, 0.1);
    const double eta = rng.uniform(0.3, 3.0);
    RecursiveState state = RecursiveState::initial(spec, eta);
    std::vector<double> theta(n, 0.0);
    for (int t = 0; t < 100; ++t) {
      const auto u = random_vector(n, 1.0, rng);
      state = logit ? ewa_step(state, u) : nl_recursive_step(state, u);
      for (std::size_t i = 0; i < n; ++i) theta[i] += u[i];
      const double err = max_abs_diff(state.x, choice_probabilities(spec, theta, eta));
      worst = std::max(worst, err);
      check.expect(err <= 1e-8, (logit ? "ewa" : "nl") + std::string(" step ") +
                                    std::to_string(t + 1) + " error " + fmt(err));
    }
  }
  return check.outcome("10 EWA + 10 NL trajectories x 100 steps, max error " + fmt(worst));
}

double run_regret(const GevSpec& spec, const EnvironmentConfig& env, double eta) {
  LearnerState state = LearnerState::make(spec, eta, env.u_max);
  RegretLedger ledger(env.u_max);
  Environment stream(env);
  while (auto u = stream.next()) {
    ledger.append(ssa_choose(state), *u);
    state = ssa_update(std::move(state), *u);
  }
  return regret(ledger);
}

// Criterion 4.
Outcome regret_within_bound() {
  Checker check;
  const std::vector<double> horizons{1e2, 1e3, 1e4, 1e5};
  const EnvironmentKind kinds[] = {EnvironmentKind::kAdversarialAlternating,
                                   EnvironmentKind::kIidUniform,
                                   EnvironmentKind::kIidGaussianClipped};
  double worst_ratio = 0.0;
  double worst_r2 = 1.0;
  std::string fits;
  for (const NamedSpec& model : table_models(10, 0.5)) {
    const ModelConstants c = model_constants(model.spec);
    for (EnvironmentKind kind : kinds) {
      std::vector<double> avg;
      for (double t : horizons) {
        const auto horizon = static_cast<std::size_t>(t);
        EnvironmentConfig env;
        env.kind = kind;
        env.alternatives = 10;
        env.u_max = 1.0;
        env.horizon = horizon;
        env.seed = 4000 + horizon;
        const BoundReport bound = regret_bound(c, horizon, 1.0);
        const double r = run_regret(model.spec, env, bound.eta);
        worst_ratio = std::max(worst_ratio, r / bound.bound);
        check.expect(r <= bound.bound, model.name + "/" +
                                           std::string(environment_kind_name(kind)) + " T=" +
                                           fmt(t) + " regret " + fmt(r) + " > " +
                                           fmt(bound.bound));
        avg.push_back(r / t);
      }
      const HannanFit fit = fit_inverse_sqrt(horizons, avg);
      worst_r2 = std::min(worst_r2, fit.r_squared);
      check.expect(fit.r_squared >= 0.95,
                   model.name + "/" + std::string(environment_kind_name(kind)) +
                       " R^2 " + fmt(fit.r_squared));
    }
  }
  return check.outcome("7 models x 3 streams x 4 horizons, max regret/bound " +
                       fmt(worst_ratio) + ", min R^2 " + fmt(worst_r2));
}

// Criterion 5.
Outcome bounds_table_reproduction() {
  Checker check;
  const auto models = table_models(10, 0.5);
  const auto rows = bounds_table(models, 10000, 1.0);
  const double log_n = std::log(10.0);
  for (std::size_t m = 0; m < rows.size(); ++m) {
    const BoundsRow& r = rows[m];
    const double min_lambda = models[m].spec.min_lambda();
    const double expected_l = r.variant == "mnl" ? 1.0 : 2.0 / min_lambda - 1.0;
    check.expect(std::abs(r.lipschitz - expected_l) < 1e-12, r.model + " L " + fmt(r.lipschitz));
    check.expect(std::abs(r.log_n - log_n) < 1e-12, r.model + " log N factor");
    const double bound = std::sqrt(2.0 * log_n * expected_l * 1e4);
    const double eta = std::sqrt(expected_l * 1e4 / (2.0 * log_n));
    check.expect(std::abs(r.bound_table - bound) < 1e-9, r.model + " bound " + fmt(r.bound_table));
    check.expect(std::abs(r.eta_table - eta) < 1e-9, r.model + " eta " + fmt(r.eta_table));
    check.expect(r.bound_exact <= r.bound_table + 1e-12, r.model + " exact above table");
    const bool logit_formula = r.formula == "u_max*sqrt(2*log(N)*T)";
    check.expect(logit_formula == (r.variant == "mnl"), r.model + " formula " + r.formula);
    if (r.model == "logit") {
      check.expect(std::abs(r.bound_table - 214.6) <= 0.1, "logit row " + fmt(r.bound_table));
    }
  }
  return check.outcome("7 rows; logit bound " + fmt(rows.back().bound_table) +
                       ", nested rows " + fmt(rows.front().bound_table));
}

// Criterion 6.
Outcome optimistic_bounds() {
  Checker check;
  const double drift = 0.1;
  const std::size_t horizon = 10000;
  const std::vector<Predictor> predictors{Predictor::one_step(), Predictor::s_step(4),
                                          Predictor::geometric(0.5)};
  double worst_ratio = 0.0;
  for (const NamedSpec& model : table_models(10, 0.5)) {
    const ModelConstants c = model_constants(model.spec);
    for (const Predictor& p : predictors) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        EnvironmentConfig env;
        env.kind = EnvironmentKind::kSlowDrift;
        env.alternatives = 10;
        env.horizon = horizon;
        env.drift = drift;
        env.seed = 6000 + seed;
        const BoundReport bound = oftrl_bound(c, horizon, drift, p);
        LearnerState state = LearnerState::make(model.spec, bound.eta, 1.0, p);
        RegretLedger ledger(1.0);
        Environment stream(env);
        while (auto u = stream.next()) {
          ledger.append(ssa_choose(state), *u);
          state = ssa_update(std::move(state), *u);
        }
        const double r = regret(ledger);
        worst_ratio = std::max(worst_ratio, r / bound.bound);
        check.expect(r <= bound.bound, model.name + "/" + bound.predictor + " regret " + fmt(r) +
                                           " > " + fmt(bound.bound));
      }
    }
  }
  return check.outcome("7 models x {one-step, 4-step, geometric(0.5)} x 3 seeds, T=1e4, "
                       "max regret/bound " + fmt(worst_ratio));
}

// Criterion 7.
Outcome games_cce_and_welfare() {
  Checker check;
  const std::size_t horizon = 10000;
  const std::vector<GevSpec> specs{GevSpec::mnl(5),
                                   GevSpec::nested(5, {{0, 1, 2}, {3, 4}}, {0.5, 0.7})};
  const auto learners = optimal_learners(specs, horizon);
  double worst_margin = 1.0;
  double max_delta = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const NormalFormGame game = NormalFormGame::random(2, 5, 7000 + seed);
    const DynamicsResult dyn = run_dynamics(game, learners, horizon);
    const double delta = cce_delta(dyn);
    const CceReport report = cce_check(game, dyn, delta);
    max_delta = std::max(max_delta, delta);
    worst_margin = std::min(worst_margin, report.worst_margin);
    check.expect(report.passed, "game " + std::to_string(seed) + " margin " +
                                    fmt(report.worst_margin));
  }

  // Prisoner's dilemma in [0, 1]: (1, 3)-smooth with respect to mutual cooperation.
  const NormalFormGame pd(2, 2, {{0.75, 0.0, 1.0, 0.25}, {0.75, 1.0, 0.0, 0.25}});
  double min_slack = 1.0;
  try {
    const SmoothnessParams params = SmoothnessParams::verified(pd, 1.0, 3.0, {0, 0});
    const WelfareReport w =
        welfare_bound_check(pd, params, run_dynamics(pd, optimal_learners({GevSpec::mnl(2),
                                                                           GevSpec::mnl(2)},
                                                                          horizon),
                                                     horizon));
    min_slack = std::min(min_slack, w.slack);
    check.expect(w.holds, "prisoner's dilemma welfare slack " + fmt(w.slack));

    // A random three-player game with its largest certified lambda at mu = 1.
    const NormalFormGame g3 = NormalFormGame::random(3, 3, 7100);
    const auto target = brute_force_opt(g3).profile;
    const double lambda = max_smoothness_lambda(g3, target, 1.0);
    check.expect(lambda > 0.0, "random game has no positive lambda");
    if (lambda > 0.0) {
      const SmoothnessParams p3 = SmoothnessParams::verified(g3, lambda, 1.0, target);
      const std::vector<GevSpec> s3(3, GevSpec::mnl(3));
      const WelfareReport w3 =
          welfare_bound_check(g3, p3, run_dynamics(g3, optimal_learners(s3, horizon), horizon));
      min_slack = std::min(min_slack, w3.slack);
      check.expect(w3.holds, "three-player welfare slack " + fmt(w3.slack));
    }
  } catch (const std::exception& e) {
    check.expect(false, e.what());
  }
  return check.outcome("20 games, max delta " + fmt(max_delta) + ", min CCE margin " +
                       fmt(worst_margin) + "; welfare min slack " + fmt(min_slack));
}

// Criterion 8.
Outcome market_validity() {
  Checker check;
  Rng rng(1008);
  std::vector<GevSpec> specs;
  for (const NamedSpec& m : table_models(10, 0.5)) specs.push_back(m.spec);
  for (Variant v : kAllVariants) {
    for (int rep = 0; rep < 3; ++rep) specs.push_back(random_spec(v, 2 + rng.below(7), rng));
  }
  double worst_path = 0.0;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const GevSpec& spec = specs[s];
    const std::string name = std::string(variant_name(spec.variant())) + "#" + std::to_string(s);
    for (double b : {0.5, 1.0, 4.0}) {
      const AuditReport audit = validity_audit(spec, b, 200, 8000 + s);
      check.expect(audit.passed(),
                   name + " b=" + fmt(b) + " " +
                       (audit.passed() ? "" : audit.failures.front().detail));
    }
    std::vector<std::vector<double>> bundles;
    std::vector<double> total(spec.size(), 0.0);
    for (int t = 0; t < 100; ++t) {
      bundles.push_back(random_vector(spec.size(), 3.0, rng));
      for (std::size_t i = 0; i < spec.size(); ++i) total[i] += bundles.back()[i];
    }
    const auto path = run_market(MarketState::open(spec, 1.0), bundles);
    double charged = 0.0;
    for (const MarketStep& step : path) charged += step.charge;
    const double lump = execute_trade(MarketState::open(spec, 1.0), total).second;
    worst_path = std::max(worst_path, std::abs(charged - lump));
    check.expect(std::abs(charged - lump) <= 1e-9, name + " path error " + fmt(charged - lump));
  }
  const MarketState lmsr = MarketState::open(GevSpec::mnl(2), 1.0);
  const SimplexVector p0 = prices(lmsr);
  check.expect(std::abs(p0[0] - 0.5) < 1e-15 && std::abs(p0[1] - 0.5) < 1e-15, "lmsr prices");
  const double charge = execute_trade(lmsr, std::vector<double>{1.0, 0.0}).second;
  const double expected = std::log(std::numbers::e + 1.0) - std::log(2.0);
  check.expect(std::abs(charge - expected) < 1e-14, "lmsr charge " + fmt(charge));
  return check.outcome(std::to_string(specs.size()) + " specs x 3 liquidities audited, "
                       "max path error " + fmt(worst_path) + ", lmsr charge " + fmt(charge));
}

// Criterion 9.
Outcome ftpl_monte_carlo() {
  Checker check;
  const GevSpec spec = GevSpec::mnl(5);
  const std::vector<double> theta{1.2, 0.4, 0.0, -0.3, -1.0};
  const double eta = 0.9;
  const SimplexVector x = choice_probabilities(spec, theta, eta);
  constexpr int kDraws = 100000;
  Rng rng(1009);
  std::vector<int> counts(5, 0);
  for (int d = 0; d < kDraws; ++d) ++counts[ftpl_sample_choice(spec, theta, eta, rng)];
  double worst_z = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const double freq = static_cast<double>(counts[i]) / kDraws;
    const double se = std::sqrt(x[i] * (1.0 - x[i]) / kDraws);
    const double z = std::abs(freq - x[i]) / se;
    worst_z = std::max(worst_z, z);
    check.expect(z <= 3.0, "alternative " + std::to_string(i + 1) + " z " + fmt(z));
  }
  return check.outcome("1e5 draws, max |z| " + fmt(worst_z));
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0: no runtime limit
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace gevlearn

int main() {
  using gevlearn::Criterion;
  const std::vector<Criterion> criteria{
      {1, "gradient identity", 30.0, gevlearn::gradient_identity},
      {2, "ftrl duality", 60.0, gevlearn::ftrl_duality},
      {3, "recursion oracles", 0.0, gevlearn::recursion_oracles},
      {4, "regret within bound", 300.0, gevlearn::regret_within_bound},
      {5, "bounds table", 0.0, gevlearn::bounds_table_reproduction},
      {6, "optimistic bounds", 0.0, gevlearn::optimistic_bounds},
      {7, "games", 180.0, gevlearn::games_cce_and_welfare},
      {8, "markets", 0.0, gevlearn::market_validity},
      {9, "ftpl monte carlo", 3.0, gevlearn::ftpl_monte_carlo},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    gevlearn::Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && secs > c.limit_seconds) {
      out.passed = false;
      out.detail += " (runtime " + gevlearn::fmt(secs) + " s over limit " +
                    gevlearn::fmt(c.limit_seconds) + " s)";
    }
    if (!out.passed) ++failed;
    std::printf("[%s] criterion %d %s: %s (%.2f s)\n", out.passed ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed;
}
