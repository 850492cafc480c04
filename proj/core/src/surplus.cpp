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

#include "gevlearn/surplus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gevlearn/errors.hpp"

namespace gevlearn {
namespace {

void check_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("eta must be a positive finite number, got " + std::to_string(eta));
  }
}

void check_dimension(const GevSpec& spec, std::size_t size, const char* what) {
  if (size != spec.size()) {
    throw ValidationError(std::string(what) + " has " + std::to_string(size) +
                          " entries but the model has " + std::to_string(spec.size()) +
                          " alternatives");
  }
}

// Evaluation of log G at y = exp(s + shift) for s with max_i s_i = 0.
// Nest terms are stabilized a second time by their own maximum before the
// 1/lambda exponent is applied.
struct NestPass {
  double log_g = 0.0;                     // log G(exp(s)), without shift
  std::vector<double> scaled_inclusive;   // lambda_k * log inner_k
  std::vector<double> nest_probs;         // softmax of scaled_inclusive
  std::vector<std::vector<double>> within;  // per nest, aligned with members
};

NestPass nest_pass(const GevSpec& spec, std::span<const double> s, bool want_probs) {
  const auto& nests = spec.nests();
  NestPass pass;
  pass.scaled_inclusive.resize(nests.size());
  if (want_probs) pass.within.resize(nests.size());
  std::vector<double> a;
  for (std::size_t k = 0; k < nests.size(); ++k) {
    const Nest& nest = nests[k];
    const double inv_lambda = 1.0 / nest.lambda;
    a.resize(nest.members.size());
    double amax = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < nest.members.size(); ++m) {
      const double w = nest.alpha[m];
      a[m] = ((w == 1.0 ? 0.0 : std::log(w)) + s[nest.members[m]]) * inv_lambda;
      amax = std::max(amax, a[m]);
    }
    double sum = 0.0;
    for (double& v : a) {
      v = std::exp(v - amax);
      sum += v;
    }
    pass.scaled_inclusive[k] = nest.lambda * (amax + std::log(sum));
    if (want_probs) {
      for (double& v : a) v /= sum;
      pass.within[k] = a;
    }
  }
  const double vmax =
      *std::max_element(pass.scaled_inclusive.begin(), pass.scaled_inclusive.end());
  double total = 0.0;
  pass.nest_probs.resize(nests.size());
  for (std::size_t k = 0; k < nests.size(); ++k) {
    pass.nest_probs[k] = std::exp(pass.scaled_inclusive[k] - vmax);
    total += pass.nest_probs[k];
  }
  for (double& p : pass.nest_probs) p /= total;
  pass.log_g = vmax + std::log(total);
  return pass;
}

// s = theta / eta - max(theta / eta); returns the removed shift.
double shifted(std::span<const double> theta, double eta, std::vector<double>& s) {
  s.resize(theta.size());
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta[i])) throw DomainError("payoff vector has a non-finite entry");
    s[i] = theta[i] / eta;
    m = std::max(m, s[i]);
  }
  for (double& v : s) v -= m;
  return m;
}

SimplexVector recompose(const GevSpec& spec, const NestPass& pass) {
  SimplexVector x(spec.size(), 0.0);
  const auto& nests = spec.nests();
  for (std::size_t k = 0; k < nests.size(); ++k) {
    for (std::size_t m = 0; m < nests[k].members.size(); ++m) {
      x[nests[k].members[m]] += pass.nest_probs[k] * pass.within[k][m];
    }
  }
  return x;
}

}  // namespace

double generator_value(const GevSpec& spec, std::span<const double> y) {
  check_dimension(spec, y.size(), "generator input");
  std::vector<double> s(y.size());
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
      throw DomainError("generator input must be strictly positive and finite");
    }
    s[i] = std::log(y[i]);
    m = std::max(m, s[i]);
  }
  for (double& v : s) v -= m;
  return std::exp(nest_pass(spec, s, false).log_g + m);
}

double social_surplus(const GevSpec& spec, std::span<const double> theta, double eta) {
  check_eta(eta);
  check_dimension(spec, theta.size(), "theta");
  std::vector<double> s;
  const double shift = shifted(theta, eta, s);
  return eta * (nest_pass(spec, s, false).log_g + shift);
}

SurplusAndGradient surplus_and_gradient(const GevSpec& spec, std::span<const double> theta,
                                        double eta) {
  check_eta(eta);
  check_dimension(spec, theta.size(), "theta");
  std::vector<double> s;
  const double shift = shifted(theta, eta, s);
  const NestPass pass = nest_pass(spec, s, true);
  return {eta * (pass.log_g + shift), recompose(spec, pass)};
}

SimplexVector choice_probabilities(const GevSpec& spec, std::span<const double> theta,
                                   double eta) {
  return surplus_and_gradient(spec, theta, eta).probs;
}

TwoStageBreakdown two_stage_breakdown(const GevSpec& spec, std::span<const double> theta,
                                      double eta) {
  if (spec.variant() == Variant::kMnl) {
    throw UnsupportedVariantError("two-stage breakdown requires a nested variant, got mnl");
  }
  check_eta(eta);
  check_dimension(spec, theta.size(), "theta");
  std::vector<double> s;
  const double shift = shifted(theta, eta, s);
  const NestPass pass = nest_pass(spec, s, true);
  TwoStageBreakdown out;
  out.nest_probs = pass.nest_probs;
  out.inclusive_values.resize(spec.nest_count());
  out.within_probs.assign(spec.nest_count(), std::vector<double>(spec.size(), 0.0));
  for (std::size_t k = 0; k < spec.nest_count(); ++k) {
    out.inclusive_values[k] = pass.scaled_inclusive[k] + shift;
    const Nest& nest = spec.nests()[k];
    for (std::size_t m = 0; m < nest.members.size(); ++m) {
      out.within_probs[k][nest.members[m]] = pass.within[k][m];
    }
  }
  return out;
}

ModelConstants model_constants(const GevSpec& spec) {
  ModelConstants c;
  const double lipschitz = 2.0 / spec.min_lambda() - 1.0;
  c.lipschitz = lipschitz;
  c.curvature = (lipschitz - 1.0) / 2.0;
  const std::vector<double> zero(spec.size(), 0.0);
  c.surplus_at_zero = nest_pass(spec, zero, false).log_g;
  c.log_n_bound = std::log(static_cast<double>(spec.size()));
  return c;
}

double regularizer(const GevSpec& spec, std::span<const double> x, double eta) {
  check_eta(eta);
  check_dimension(spec, x.size(), "x");
  if (!spec.is_partition()) {
    throw UnsupportedVariantError("no closed-form regularizer for variant " +
                                  std::string(variant_name(spec.variant())));
  }
  auto xlogx = [](double v) {
    if (v < 0.0) throw DomainError("regularizer argument must be nonnegative");
    return v > 0.0 ? v * std::log(v) : 0.0;
  };
  double value = 0.0;
  for (const Nest& nest : spec.nests()) {
    double within = 0.0;
    double mass = 0.0;
    for (std::size_t i : nest.members) {
      within += xlogx(x[i]);
      mass += x[i];
    }
    value += nest.lambda * within + (1.0 - nest.lambda) * xlogx(mass);
  }
  return eta * value;
}

std::vector<double> numeric_gradient(const GevSpec& spec, std::span<const double> theta,
                                     double eta, double h) {
  if (!(h >= 1e-7 && h <= 1e-4)) {
    throw DomainError("finite-difference step must lie in [1e-7, 1e-4]");
  }
  std::vector<double> probe(theta.begin(), theta.end());
  std::vector<double> grad(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    const double up = social_surplus(spec, probe, eta);
    probe[i] = theta[i] - h;
    const double down = social_surplus(spec, probe, eta);
    probe[i] = theta[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

std::size_t ftpl_sample_choice(const GevSpec& spec, std::span<const double> theta, double eta,
                               Rng& rng) {
  if (spec.variant() != Variant::kMnl) {
    throw UnsupportedVariantError("perturbed-leader sampling is implemented for mnl only");
  }
  check_eta(eta);
  check_dimension(spec, theta.size(), "theta");
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double value = theta[j] + eta * (rng.gumbel() - std::numbers::egamma);
    if (value > best_value) {
      best_value = value;
      best = j;
    }
  }
  return best;
}

std::size_t ftpl_sample_choice(const GevSpec& spec, std::span<const double> theta, double eta,
                               std::uint64_t seed) {
  Rng rng(seed);
  return ftpl_sample_choice(spec, theta, eta, rng);
}

}  // namespace gevlearn
