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

#ifndef GEVLEARN_REGRET_HPP_
#define GEVLEARN_REGRET_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gevlearn/gev_spec.hpp"
#include "gevlearn/learners.hpp"
#include "gevlearn/surplus.hpp"

namespace gevlearn {

// Full play history (x_t, u_t) of one decision maker.
class RegretLedger {
 public:
  explicit RegretLedger(double u_max);

  // Throws PayoffBoundError when ||u||_inf > u_max and ValidationError on a
  // dimension mismatch.
  void append(std::span<const double> x, std::span<const double> u);

  double u_max() const { return u_max_; }
  std::size_t size() const { return xs_.size(); }
  bool empty() const { return xs_.empty(); }
  const std::vector<SimplexVector>& choices() const { return xs_; }
  const std::vector<PayoffVector>& payoffs() const { return us_; }
  // theta_T = sum_t u_t.
  const CumulativePayoff& cumulative() const { return theta_; }
  // sum_t <u_t, x_t>.
  double earned() const { return earned_; }
  // Running regret R_1, ..., R_T.
  const std::vector<double>& curve() const { return curve_; }

 private:
  double u_max_;
  std::vector<SimplexVector> xs_;
  std::vector<PayoffVector> us_;
  CumulativePayoff theta_;
  double earned_ = 0.0;
  std::vector<double> curve_;
};

// max_i theta_{iT} - sum_t <u_t, x_t>. Throws ValidationError when empty.
double regret(const RegretLedger& ledger);
// argmax_i theta_{iT}, lowest index on ties.
std::size_t best_in_hindsight(const RegretLedger& ledger);

// sqrt(L T u_max^2 / (2 phi(0))) with phi(0) = constants.surplus_at_zero.
double optimal_eta(const ModelConstants& constants, std::size_t horizon, double u_max);

// eta phi(0) + (L / (2 eta)) T u_max^2.
double two_term_bound(const ModelConstants& constants, std::size_t horizon, double u_max,
                      double eta);

struct BoundReport {
  std::string model;
  double lipschitz = 1.0;
  double surplus_at_zero = 0.0;
  double log_n_bound = 0.0;
  // Learning rate the bound is evaluated at and the bound itself (exact
  // log G(1) as phi(0)).
  double eta = 0.0;
  double bound = 0.0;
  // Same quantities with phi(0) replaced by its log N upper bound.
  double eta_log_n = 0.0;
  double bound_log_n = 0.0;
  // Optimistic variants only.
  std::optional<double> drift;
  std::string predictor;
};

// With eta given: the two-term bound at that eta. Otherwise the optimized
// u_max sqrt(2 phi(0) L T) at optimal_eta.
BoundReport regret_bound(const ModelConstants& constants, std::size_t horizon, double u_max,
                         std::optional<double> eta = std::nullopt);

// Optimized optimistic-FTRL bound when ||u_t - u_{t-1}||_inf <= drift:
//   one-step   B sqrt(2 L T phi0)
//   S-step     S B sqrt(2 L T phi0)
//   geometric  B sqrt(2 L T phi0 / (1 - delta)^3)
// and the matching learning rate. PredictorKind::kNone gives the plain bound
// with u_max = drift.
BoundReport oftrl_bound(const ModelConstants& constants, std::size_t horizon, double drift,
                        const Predictor& predictor);

// Largest successive difference max_t ||u_t - u_{t-1}||_inf with u_0 = 0.
double measured_drift(std::span<const PayoffVector> payoffs);

struct NamedSpec {
  std::string name;
  GevSpec spec;
};

struct BoundsRow {
  std::string model;
  std::string variant;
  std::size_t n = 0;
  double lipschitz = 1.0;
  double curvature = 0.0;
  double surplus_at_zero = 0.0;
  double log_n = 0.0;
  double eta_table = 0.0;
  double bound_table = 0.0;
  double eta_exact = 0.0;
  double bound_exact = 0.0;
  std::string formula;
};

// One instance of each concrete model of the closed-form bound table over n
// alternatives, with smallest nest parameter lambda: gnl, pcl, cnl, ogev,
// pdgev, nl, logit. Requires n >= 2.
std::vector<NamedSpec> table_models(std::size_t n, double lambda = 0.5);

// One row per model: optimal eta and optimized bound, both with the log N
// factor of the closed-form table and with the exact log G(1).
std::vector<BoundsRow> bounds_table(std::span<const NamedSpec> specs, std::size_t horizon,
                                    double u_max);
void write_bounds_csv(std::ostream& out, std::span<const BoundsRow> rows);
void write_bounds_text(std::ostream& out, std::span<const BoundsRow> rows);

// phi(theta + u) - phi(theta) - <grad phi(theta), u>.
double bregman_gap(const GevSpec& spec, std::span<const double> theta,
                   std::span<const double> u, double eta);

// Least-squares fit of avg_regret ~ c / sqrt(T) (no intercept).
struct HannanFit {
  double coefficient = 0.0;
  // 1 - SS_res / SS_tot with SS_tot taken about the mean.
  double r_squared = 0.0;
  // avg_regret strictly decreasing along increasing T.
  bool decreasing = false;
};
HannanFit fit_inverse_sqrt(std::span<const double> horizons, std::span<const double> avg_regret);

}  // namespace gevlearn

#endif  // GEVLEARN_REGRET_HPP_
