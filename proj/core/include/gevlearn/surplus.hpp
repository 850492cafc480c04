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

#ifndef GEVLEARN_SURPLUS_HPP_
#define GEVLEARN_SURPLUS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gevlearn/gev_spec.hpp"
#include "gevlearn/rng.hpp"

namespace gevlearn {

// Probability vector over the alternatives.
using SimplexVector = std::vector<double>;
// Per-period utilities u_t.
using PayoffVector = std::vector<double>;
// Running sum theta_t of payoff vectors (also the share vector q of a market).
using CumulativePayoff = std::vector<double>;

struct ModelConstants {
  // Curvature constant M of the generator condition; lipschitz = 2M + 1.
  double curvature = 0.0;
  // Numerator L of the gradient Lipschitz constant L / eta.
  double lipschitz = 1.0;
  // Exact log G(1), the eta-free surplus at theta = 0.
  double surplus_at_zero = 0.0;
  // log N, the variant-independent upper bound on surplus_at_zero.
  double log_n_bound = 0.0;
};

// Two-stage (nest, then alternative) decomposition of the choice
// probabilities: x_i = sum_k nest_probs[k] * within_probs[k][i].
struct TwoStageBreakdown {
  std::vector<double> nest_probs;
  // K x N, zero outside nest k.
  std::vector<std::vector<double>> within_probs;
  // lambda_k * log sum_i (alpha_ik e^{theta_i/eta})^{1/lambda_k}.
  std::vector<double> inclusive_values;
};

// G(y) for strictly positive y. Homogeneous of degree one.
double generator_value(const GevSpec& spec, std::span<const double> y);

// phi(theta) = eta * log G(exp(theta / eta)), zero-mean shock convention.
// Evaluated in shifted coordinates so it does not overflow.
double social_surplus(const GevSpec& spec, std::span<const double> theta, double eta);

// grad phi(theta): the choice-probability vector. Strictly positive entries
// (barring underflow), sums to one, invariant under theta -> theta + c 1.
SimplexVector choice_probabilities(const GevSpec& spec, std::span<const double> theta,
                                   double eta);

// Surplus and gradient from one pass.
struct SurplusAndGradient {
  double surplus = 0.0;
  SimplexVector probs;
};
SurplusAndGradient surplus_and_gradient(const GevSpec& spec, std::span<const double> theta,
                                        double eta);

// Throws UnsupportedVariantError for MNL, which has no nest structure.
TwoStageBreakdown two_stage_breakdown(const GevSpec& spec, std::span<const double> theta,
                                      double eta);

ModelConstants model_constants(const GevSpec& spec);

// Closed-form convex conjugate of phi on the simplex. MNL: eta sum x log x.
// NL: the two-level (within / between nest) entropy. Other variants have no
// closed form and throw UnsupportedVariantError.
double regularizer(const GevSpec& spec, std::span<const double> x, double eta);

// Central finite-difference gradient of social_surplus. Test oracle only.
std::vector<double> numeric_gradient(const GevSpec& spec, std::span<const double> theta,
                                     double eta, double h);

// Follow-the-perturbed-leader draw: argmax_j theta_j + eta * eps_j with
// centered i.i.d. Gumbel shocks. MNL only. Exact ties go to the lowest index.
std::size_t ftpl_sample_choice(const GevSpec& spec, std::span<const double> theta, double eta,
                               Rng& rng);
std::size_t ftpl_sample_choice(const GevSpec& spec, std::span<const double> theta, double eta,
                               std::uint64_t seed);

}  // namespace gevlearn

#endif  // GEVLEARN_SURPLUS_HPP_
