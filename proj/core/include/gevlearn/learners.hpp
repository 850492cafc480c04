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

#ifndef GEVLEARN_LEARNERS_HPP_
#define GEVLEARN_LEARNERS_HPP_

#include <cstddef>
#include <deque>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "gevlearn/gev_spec.hpp"
#include "gevlearn/surplus.hpp"

namespace gevlearn {

enum class PredictorKind { kNone, kOneStep, kSStep, kGeometric };

// Predictable sequence beta_t built from the payoffs observed so far.
//
//   one-step:  beta_t = u_{t-1}
//   S-step:    mean of the last S payoffs (of all payoffs while fewer than
//              S have been observed)
//   geometric: sum_tau delta^{-tau} u_tau / sum_tau delta^{-tau}; kept as the
//              recurrence sum <- delta * sum + u so long horizons do not
//              overflow delta^{-tau}.
//
// Before any observation beta is the zero vector.
class Predictor {
 public:
  static Predictor none() { return Predictor(PredictorKind::kNone, 0, 0.0); }
  static Predictor one_step() { return Predictor(PredictorKind::kOneStep, 1, 0.0); }
  static Predictor s_step(std::size_t window);
  static Predictor geometric(double delta);

  PredictorKind kind() const { return kind_; }
  std::size_t window() const { return window_; }
  double discount() const { return delta_; }
  std::size_t observations() const { return observations_; }

  void observe(std::span<const double> u);
  // beta for the next period over n alternatives.
  PayoffVector value(std::size_t n) const;

 private:
  Predictor(PredictorKind kind, std::size_t window, double delta)
      : kind_(kind), window_(window), delta_(delta) {}

  PredictorKind kind_;
  std::size_t window_;
  double delta_;
  std::size_t observations_ = 0;
  std::deque<PayoffVector> buffer_;
  PayoffVector weighted_sum_;
  double weight_total_ = 0.0;
};

PayoffVector predictor_value(const Predictor& predictor, std::size_t n);

// State of a social-surplus learner: x_{t+1} = grad phi(theta_t [+ beta_{t+1}]).
struct LearnerState {
  std::shared_ptr<const GevSpec> spec;
  double eta = 1.0;
  CumulativePayoff theta;
  std::size_t t = 0;
  Predictor predictor = Predictor::none();
  double u_max = std::numeric_limits<double>::infinity();

  static LearnerState make(GevSpec spec, double eta,
                           double u_max = std::numeric_limits<double>::infinity(),
                           Predictor predictor = Predictor::none());
};

// Next-period choice probabilities; does not modify the state.
SimplexVector ssa_choose(const LearnerState& state);
// theta += u, t += 1, predictor observes u. Throws PayoffBoundError when
// ||u||_inf exceeds the state's u_max.
LearnerState ssa_update(LearnerState state, std::span<const double> u);

struct FtrlSolution {
  SimplexVector x;
  std::size_t iterations = 0;
  double residual = 0.0;
};

inline constexpr std::size_t kFtrlIterationCap = 100000;

// argmax_{x in simplex} <theta, x> - R(x) for MNL and NL, solved by entropic
// mirror ascent in log coordinates. R is eta-smooth relative to the negative
// entropy, so the step is 1/eta. Stops when the x-weighted spread of the
// gradient, sum_i x_i |g_i - <x, g>| / eta, drops below tol.
FtrlSolution ftrl_solve(const GevSpec& spec, std::span<const double> theta, double eta,
                        double tol = 1e-12, std::size_t max_iterations = kFtrlIterationCap);

// Current choice probabilities of a closed-form recursive learner.
struct RecursiveState {
  std::shared_ptr<const GevSpec> spec;
  double eta = 1.0;
  SimplexVector x;

  // x_1 = grad phi(0).
  static RecursiveState initial(GevSpec spec, double eta);
};

// Exponential weights: x' = x e^{u/eta} / sum_j x_j e^{u_j/eta}. MNL only.
RecursiveState ewa_step(RecursiveState state, std::span<const double> u);

// Nested-logit recursion x' = H(Phi(x) e^{u/eta}) / sum_j H_j(...). Accepts
// MNL and NL.
RecursiveState nl_recursive_step(RecursiveState state, std::span<const double> u);

// Phi_i(x) = x_i^{lambda_k} (sum_{j in N_k} x_j)^{1 - lambda_k}.
std::vector<double> phi_map(const GevSpec& spec, std::span<const double> x);
// H_i(y) = y_i^{1/lambda_k} (sum_{j in N_k} y_j^{1/lambda_k})^{lambda_k - 1}, the
// inverse of phi_map.
std::vector<double> h_map(const GevSpec& spec, std::span<const double> y);

// Per-alternative factors of the nested-logit recursion, reported for
// inspection: x'_i = phi_power[i] * within[i] * nest[k(i)] where
//   phi_power_i = Phi_i(x)^{1/lambda_k},
//   within_i    = e^{u_i/(eta lambda_k)} / sum_{j in N_k} Phi_j^{1/lambda_k} e^{u_j/(eta lambda_k)},
//   nest_k      = (sum_{j in N_k} Phi_j^{1/lambda_k} e^{u_j/(eta lambda_k)})^{lambda_k}
//                 / sum_l (same for nest l).
struct NlRecursionTerms {
  std::vector<double> phi_power;
  std::vector<double> within;
  std::vector<double> nest;
};
NlRecursionTerms nl_recursion_terms(const RecursiveState& state, std::span<const double> u);

}  // namespace gevlearn

#endif  // GEVLEARN_LEARNERS_HPP_
