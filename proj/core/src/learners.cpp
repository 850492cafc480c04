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

#include "gevlearn/learners.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gevlearn/errors.hpp"

namespace gevlearn {
namespace {

constexpr double kInteriorFloor = 1e-300;

double log_sum_exp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double e : v) sum += std::exp(e - m);
  return m + std::log(sum);
}

void require_partition(const GevSpec& spec, const char* op) {
  if (!spec.is_partition()) {
    throw UnsupportedVariantError(std::string(op) + " supports mnl and nl only, got " +
                                  std::string(variant_name(spec.variant())));
  }
}

void require_size(const GevSpec& spec, std::size_t size) {
  if (size != spec.size()) {
    throw ValidationError("vector has " + std::to_string(size) + " entries, model has " +
                          std::to_string(spec.size()));
  }
}

// Floors entries at kInteriorFloor and renormalizes; returns log x.
std::vector<double> interior_log(std::span<const double> x) {
  std::vector<double> out(x.size());
  double total = 0.0;
  for (double v : x) total += std::max(v, kInteriorFloor);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::log(std::max(x[i], kInteriorFloor) / total);
  }
  return out;
}

std::vector<double> normalized_exp(std::span<const double> log_w) {
  const double lse = log_sum_exp(log_w);
  std::vector<double> out(log_w.size());
  for (std::size_t i = 0; i < log_w.size(); ++i) out[i] = std::exp(log_w[i] - lse);
  return out;
}

// log Phi_i(x) from log x.
std::vector<double> log_phi(const GevSpec& spec, std::span<const double> log_x) {
  std::vector<double> out(log_x.size());
  std::vector<double> buf;
  for (const Nest& nest : spec.nests()) {
    buf.clear();
    for (std::size_t i : nest.members) buf.push_back(log_x[i]);
    const double log_mass = log_sum_exp(buf);
    for (std::size_t i : nest.members) {
      out[i] = nest.lambda * log_x[i] + (1.0 - nest.lambda) * log_mass;
    }
  }
  return out;
}

// log H_i(y) from log y.
std::vector<double> log_h(const GevSpec& spec, std::span<const double> log_y) {
  std::vector<double> out(log_y.size());
  std::vector<double> buf;
  for (const Nest& nest : spec.nests()) {
    buf.clear();
    for (std::size_t i : nest.members) buf.push_back(log_y[i] / nest.lambda);
    const double lse = log_sum_exp(buf);
    for (std::size_t m = 0; m < nest.members.size(); ++m) {
      out[nest.members[m]] = buf[m] + (nest.lambda - 1.0) * lse;
    }
  }
  return out;
}

}  // namespace

Predictor Predictor::s_step(std::size_t window) {
  if (window == 0) throw DomainError("S-step predictor needs S >= 1");
  return Predictor(PredictorKind::kSStep, window, 0.0);
}

Predictor Predictor::geometric(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("geometric predictor needs delta in (0, 1), got " + std::to_string(delta));
  }
  return Predictor(PredictorKind::kGeometric, 0, delta);
}

void Predictor::observe(std::span<const double> u) {
  ++observations_;
  switch (kind_) {
    case PredictorKind::kNone:
      return;
    case PredictorKind::kOneStep:
    case PredictorKind::kSStep:
      buffer_.emplace_back(u.begin(), u.end());
      while (buffer_.size() > window_) buffer_.pop_front();
      return;
    case PredictorKind::kGeometric:
      if (weighted_sum_.empty()) weighted_sum_.assign(u.size(), 0.0);
      for (std::size_t i = 0; i < u.size(); ++i) {
        weighted_sum_[i] = delta_ * weighted_sum_[i] + u[i];
      }
      weight_total_ = delta_ * weight_total_ + 1.0;
      return;
  }
}

PayoffVector Predictor::value(std::size_t n) const {
  PayoffVector beta(n, 0.0);
  switch (kind_) {
    case PredictorKind::kNone:
      break;
    case PredictorKind::kOneStep:
    case PredictorKind::kSStep:
      if (buffer_.empty()) break;
      for (const auto& u : buffer_) {
        for (std::size_t i = 0; i < n; ++i) beta[i] += u[i];
      }
      for (double& b : beta) b /= static_cast<double>(buffer_.size());
      break;
    case PredictorKind::kGeometric:
      if (weight_total_ == 0.0) break;
      for (std::size_t i = 0; i < n; ++i) beta[i] = weighted_sum_[i] / weight_total_;
      break;
  }
  return beta;
}

PayoffVector predictor_value(const Predictor& predictor, std::size_t n) {
  return predictor.value(n);
}

LearnerState LearnerState::make(GevSpec spec, double eta, double u_max, Predictor predictor) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("eta must be positive and finite");
  if (!(u_max > 0.0)) throw DomainError("u_max must be positive");
  LearnerState state;
  state.theta.assign(spec.size(), 0.0);
  state.spec = std::make_shared<const GevSpec>(std::move(spec));
  state.eta = eta;
  state.u_max = u_max;
  state.predictor = std::move(predictor);
  return state;
}

SimplexVector ssa_choose(const LearnerState& state) {
  if (state.predictor.kind() == PredictorKind::kNone) {
    return choice_probabilities(*state.spec, state.theta, state.eta);
  }
  PayoffVector target = state.predictor.value(state.theta.size());
  for (std::size_t i = 0; i < target.size(); ++i) target[i] += state.theta[i];
  return choice_probabilities(*state.spec, target, state.eta);
}

LearnerState ssa_update(LearnerState state, std::span<const double> u) {
  require_size(*state.spec, u.size());
  for (double v : u) {
    if (!std::isfinite(v) || std::abs(v) > state.u_max) {
      throw PayoffBoundError("payoff entry " + std::to_string(v) + " violates |u| <= u_max = " +
                             std::to_string(state.u_max));
    }
  }
  for (std::size_t i = 0; i < u.size(); ++i) state.theta[i] += u[i];
  ++state.t;
  state.predictor.observe(u);
  return state;
}

FtrlSolution ftrl_solve(const GevSpec& spec, std::span<const double> theta, double eta,
                        double tol, std::size_t max_iterations) {
  require_partition(spec, "ftrl_solve");
  require_size(spec, theta.size());
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  if (!(tol >= 1e-12)) throw DomainError("ftrl_solve tolerance must be >= 1e-12");

  const std::size_t n = spec.size();
  const double theta_max = *std::max_element(theta.begin(), theta.end());
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = (theta[i] - theta_max) / eta;

  std::vector<double> log_x(n, -std::log(static_cast<double>(n)));
  std::vector<double> x(n), grad(n);
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;

  for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
    // Scaled ascent direction (theta - grad R(x)) / eta, up to a constant.
    const std::vector<double> lphi = log_phi(spec, log_x);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::exp(log_x[i]);
      grad[i] = scaled[i] - lphi[i];
      mean += x[i] * grad[i];
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += x[i] * std::abs(grad[i] - mean);
    if (residual < best_residual) {
      best_residual = residual;
      best_x = x;
    }
    if (residual < tol) return {x, iter, residual};

    for (std::size_t i = 0; i < n; ++i) log_x[i] += grad[i];
    const double lse = log_sum_exp(log_x);
    for (double& v : log_x) v -= lse;
  }
  throw ConvergenceError("ftrl_solve did not converge within " + std::to_string(max_iterations) +
                             " iterations",
                         best_x, best_residual);
}

RecursiveState RecursiveState::initial(GevSpec spec, double eta) {
  RecursiveState state;
  const std::vector<double> zero(spec.size(), 0.0);
  state.x = choice_probabilities(spec, zero, eta);
  state.spec = std::make_shared<const GevSpec>(std::move(spec));
  state.eta = eta;
  return state;
}

RecursiveState ewa_step(RecursiveState state, std::span<const double> u) {
  if (state.spec->variant() != Variant::kMnl) {
    throw UnsupportedVariantError("exponential weights recursion requires mnl");
  }
  require_size(*state.spec, u.size());
  std::vector<double> log_w = interior_log(state.x);
  for (std::size_t i = 0; i < u.size(); ++i) log_w[i] += u[i] / state.eta;
  state.x = normalized_exp(log_w);
  return state;
}

RecursiveState nl_recursive_step(RecursiveState state, std::span<const double> u) {
  const GevSpec& spec = *state.spec;
  require_partition(spec, "nl_recursive_step");
  require_size(spec, u.size());
  std::vector<double> log_y = log_phi(spec, interior_log(state.x));
  for (std::size_t i = 0; i < u.size(); ++i) log_y[i] += u[i] / state.eta;
  state.x = normalized_exp(log_h(spec, log_y));
  return state;
}

std::vector<double> phi_map(const GevSpec& spec, std::span<const double> x) {
  require_partition(spec, "phi_map");
  require_size(spec, x.size());
  std::vector<double> log_x(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw DomainError("phi_map requires strictly positive input");
    log_x[i] = std::log(x[i]);
  }
  std::vector<double> out = log_phi(spec, log_x);
  for (double& v : out) v = std::exp(v);
  return out;
}

std::vector<double> h_map(const GevSpec& spec, std::span<const double> y) {
  require_partition(spec, "h_map");
  require_size(spec, y.size());
  std::vector<double> log_y(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw DomainError("h_map requires strictly positive input");
    log_y[i] = std::log(y[i]);
  }
  std::vector<double> out = log_h(spec, log_y);
  for (double& v : out) v = std::exp(v);
  return out;
}

NlRecursionTerms nl_recursion_terms(const RecursiveState& state, std::span<const double> u) {
  const GevSpec& spec = *state.spec;
  require_partition(spec, "nl_recursion_terms");
  require_size(spec, u.size());
  const std::vector<double> phi = phi_map(spec, state.x);
  const std::size_t n = spec.size();
  NlRecursionTerms terms;
  terms.phi_power.resize(n);
  terms.within.resize(n);
  terms.nest.resize(spec.nest_count());
  std::vector<double> nest_sum(spec.nest_count(), 0.0);
  for (std::size_t k = 0; k < spec.nest_count(); ++k) {
    const Nest& nest = spec.nests()[k];
    for (std::size_t i : nest.members) {
      terms.phi_power[i] = std::pow(phi[i], 1.0 / nest.lambda);
      nest_sum[k] += terms.phi_power[i] * std::exp(u[i] / (state.eta * nest.lambda));
    }
    for (std::size_t i : nest.members) {
      terms.within[i] = std::exp(u[i] / (state.eta * nest.lambda)) / nest_sum[k];
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < spec.nest_count(); ++k) {
    terms.nest[k] = std::pow(nest_sum[k], spec.nests()[k].lambda);
    total += terms.nest[k];
  }
  for (double& v : terms.nest) v /= total;
  return terms;
}

}  // namespace gevlearn
