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

#include "gevlearn/regret.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "gevlearn/csv.hpp"
#include "gevlearn/errors.hpp"

namespace gevlearn {

RegretLedger::RegretLedger(double u_max) : u_max_(u_max) {
  if (!(u_max > 0.0)) throw DomainError("u_max must be positive");
}

void RegretLedger::append(std::span<const double> x, std::span<const double> u) {
  if (x.size() != u.size() || (!theta_.empty() && u.size() != theta_.size())) {
    throw ValidationError("ledger entry dimensions do not match");
  }
  for (double v : u) {
    if (!std::isfinite(v) || std::abs(v) > u_max_) {
      throw PayoffBoundError("payoff entry " + std::to_string(v) + " exceeds u_max = " +
                             std::to_string(u_max_));
    }
  }
  if (theta_.empty()) theta_.assign(u.size(), 0.0);
  double gain = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    theta_[i] += u[i];
    gain += u[i] * x[i];
  }
  earned_ += gain;
  xs_.emplace_back(x.begin(), x.end());
  us_.emplace_back(u.begin(), u.end());
  curve_.push_back(*std::max_element(theta_.begin(), theta_.end()) - earned_);
}

double regret(const RegretLedger& ledger) {
  if (ledger.empty()) throw ValidationError("regret of an empty ledger");
  const auto& theta = ledger.cumulative();
  return *std::max_element(theta.begin(), theta.end()) - ledger.earned();
}

std::size_t best_in_hindsight(const RegretLedger& ledger) {
  if (ledger.empty()) throw ValidationError("best response of an empty ledger");
  const auto& theta = ledger.cumulative();
  return static_cast<std::size_t>(std::max_element(theta.begin(), theta.end()) - theta.begin());
}

double optimal_eta(const ModelConstants& constants, std::size_t horizon, double u_max) {
  if (horizon == 0) throw DomainError("horizon must be at least 1");
  if (!(u_max > 0.0)) throw DomainError("u_max must be positive");
  if (!(constants.surplus_at_zero > 0.0)) {
    throw DomainError("degenerate model: surplus at zero is 0 (a single alternative)");
  }
  return std::sqrt(constants.lipschitz * static_cast<double>(horizon) * u_max * u_max /
                   (2.0 * constants.surplus_at_zero));
}

double two_term_bound(const ModelConstants& constants, std::size_t horizon, double u_max,
                      double eta) {
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  return eta * constants.surplus_at_zero +
         constants.lipschitz / (2.0 * eta) * static_cast<double>(horizon) * u_max * u_max;
}

BoundReport regret_bound(const ModelConstants& constants, std::size_t horizon, double u_max,
                         std::optional<double> eta) {
  BoundReport report;
  report.lipschitz = constants.lipschitz;
  report.surplus_at_zero = constants.surplus_at_zero;
  report.log_n_bound = constants.log_n_bound;
  const double t = static_cast<double>(horizon);
  if (eta) {
    report.eta = *eta;
    report.bound = two_term_bound(constants, horizon, u_max, *eta);
  } else {
    report.eta = optimal_eta(constants, horizon, u_max);
    report.bound = u_max * std::sqrt(2.0 * constants.surplus_at_zero * constants.lipschitz * t);
  }
  if (constants.log_n_bound > 0.0) {
    report.eta_log_n =
        std::sqrt(constants.lipschitz * t * u_max * u_max / (2.0 * constants.log_n_bound));
    report.bound_log_n = u_max * std::sqrt(2.0 * constants.log_n_bound * constants.lipschitz * t);
  }
  return report;
}

BoundReport oftrl_bound(const ModelConstants& constants, std::size_t horizon, double drift,
                        const Predictor& predictor) {
  if (!(drift > 0.0)) throw DomainError("drift bound B must be positive");
  double scale = 1.0;  // effective per-step prediction error in units of B
  std::string name;
  switch (predictor.kind()) {
    case PredictorKind::kNone:
      name = "none";
      break;
    case PredictorKind::kOneStep:
      name = "one_step";
      break;
    case PredictorKind::kSStep:
      name = "s_step";
      scale = static_cast<double>(predictor.window());
      break;
    case PredictorKind::kGeometric: {
      const double delta = predictor.discount();
      if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
      name = "geometric";
      scale = 1.0 / std::pow(1.0 - delta, 1.5);
      break;
    }
  }
  BoundReport report = regret_bound(constants, horizon, drift * scale);
  report.drift = drift;
  report.predictor = name;
  return report;
}

double measured_drift(std::span<const PayoffVector> payoffs) {
  double drift = 0.0;
  for (std::size_t t = 0; t < payoffs.size(); ++t) {
    for (std::size_t i = 0; i < payoffs[t].size(); ++i) {
      const double prev = t == 0 ? 0.0 : payoffs[t - 1][i];
      drift = std::max(drift, std::abs(payoffs[t][i] - prev));
    }
  }
  return drift;
}

namespace {

std::string table_formula(Variant variant) {
  switch (variant) {
    case Variant::kMnl: return "u_max*sqrt(2*log(N)*T)";
    case Variant::kCnl: return "u_max*sqrt(2*log(N)*(2/lambda-1)*T)";
    case Variant::kPdgev: return "u_max*sqrt(2*log(N)*(2/min_d(lambda_d)-1)*T)";
    default: return "u_max*sqrt(2*log(N)*(2/min_k(lambda_k)-1)*T)";
  }
}

}  // namespace

std::vector<NamedSpec> table_models(std::size_t n, double lambda) {
  if (n < 2) throw ValidationError("table models need at least two alternatives");
  const double mid = 0.5 * (1.0 + lambda);
  const std::size_t half = n / 2;
  std::vector<std::size_t> low, high, even, odd;
  for (std::size_t i = 0; i < n; ++i) {
    (i < half ? low : high).push_back(i);
    (i % 2 == 0 ? even : odd).push_back(i);
  }

  // Each alternative split evenly between two of three nests.
  const std::size_t k = std::min<std::size_t>(3, n);
  std::vector<std::vector<double>> gnl_alpha(n, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    gnl_alpha[i][i % k] += 0.5;
    gnl_alpha[i][(i + 1) % k] += 0.5;
  }
  std::vector<double> gnl_lambdas{lambda, mid, 1.0};
  gnl_lambdas.resize(k);

  // Membership fades linearly from the first nest to the second.
  std::vector<std::vector<double>> cnl_alpha(n, std::vector<double>(2, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    cnl_alpha[i][1] = static_cast<double>(i) / static_cast<double>(n - 1);
    cnl_alpha[i][0] = 1.0 - cnl_alpha[i][1];
  }

  std::vector<NamedSpec> out;
  out.push_back({"gnl", GevSpec::generalized(gnl_alpha, gnl_lambdas)});
  out.push_back({"pcl", GevSpec::paired_combinatorial(n, lambda)});
  out.push_back({"cnl", GevSpec::cross_nested(cnl_alpha, lambda)});
  out.push_back({"ogev", GevSpec::ordered(n, 1, lambda)});
  out.push_back({"pdgev", GevSpec::differentiated(n, {{0.5, lambda, {low, high}},
                                                      {0.5, mid, {even, odd}}})});
  out.push_back({"nl", GevSpec::nested(n, {low, high}, {lambda, lambda})});
  out.push_back({"logit", GevSpec::mnl(n)});
  return out;
}

std::vector<BoundsRow> bounds_table(std::span<const NamedSpec> specs, std::size_t horizon,
                                    double u_max) {
  std::vector<BoundsRow> rows;
  for (const NamedSpec& named : specs) {
    const ModelConstants c = model_constants(named.spec);
    const BoundReport report = regret_bound(c, horizon, u_max);
    BoundsRow row;
    row.model = named.name;
    row.variant = std::string(variant_name(named.spec.variant()));
    row.n = named.spec.size();
    row.lipschitz = c.lipschitz;
    row.curvature = c.curvature;
    row.surplus_at_zero = c.surplus_at_zero;
    row.log_n = c.log_n_bound;
    row.eta_table = report.eta_log_n;
    row.bound_table = report.bound_log_n;
    row.eta_exact = report.eta;
    row.bound_exact = report.bound;
    row.formula = table_formula(named.spec.variant());
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_bounds_csv(std::ostream& out, std::span<const BoundsRow> rows) {
  out << "model,variant,n,L,M,log_G1,log_N,eta_table,bound_table,eta_exact,bound_exact,"
         "formula\n";
  for (const BoundsRow& r : rows) {
    out << r.model << ',' << r.variant << ',' << r.n << ',' << format_number(r.lipschitz) << ','
        << format_number(r.curvature) << ',' << format_number(r.surplus_at_zero) << ','
        << format_number(r.log_n) << ',' << format_number(r.eta_table) << ','
        << format_number(r.bound_table) << ',' << format_number(r.eta_exact) << ','
        << format_number(r.bound_exact) << ",\"" << r.formula << "\"\n";
  }
}

void write_bounds_text(std::ostream& out, std::span<const BoundsRow> rows) {
  std::size_t width = 5;
  for (const BoundsRow& r : rows) width = std::max(width, r.model.size());
  const auto flags = out.flags();
  out << std::left << std::setw(static_cast<int>(width) + 2) << "model" << std::right
      << std::setw(10) << "L" << std::setw(12) << "log G(1)" << std::setw(12) << "log N"
      << std::setw(14) << "eta" << std::setw(14) << "bound" << std::setw(14) << "bound(exact)"
      << "  formula\n";
  for (const BoundsRow& r : rows) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << r.model << std::right
        << std::fixed << std::setprecision(4) << std::setw(10) << r.lipschitz << std::setw(12)
        << r.surplus_at_zero << std::setw(12) << r.log_n << std::setw(14) << r.eta_table
        << std::setw(14) << r.bound_table << std::setw(14) << r.bound_exact << "  "
        << r.formula << '\n';
  }
  out.flags(flags);
}

double bregman_gap(const GevSpec& spec, std::span<const double> theta,
                   std::span<const double> u, double eta) {
  if (u.size() != theta.size()) throw ValidationError("bregman_gap: dimension mismatch");
  const SurplusAndGradient base = surplus_and_gradient(spec, theta, eta);
  std::vector<double> moved(theta.begin(), theta.end());
  double linear = 0.0;
  for (std::size_t i = 0; i < moved.size(); ++i) {
    moved[i] += u[i];
    linear += base.probs[i] * u[i];
  }
  return social_surplus(spec, moved, eta) - base.surplus - linear;
}

HannanFit fit_inverse_sqrt(std::span<const double> horizons, std::span<const double> avg_regret) {
  if (horizons.size() != avg_regret.size() || horizons.size() < 2) {
    throw ValidationError("fit_inverse_sqrt needs at least two (T, R_T/T) pairs");
  }
  double sxy = 0.0, sxx = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const double x = 1.0 / std::sqrt(horizons[i]);
    sxy += x * avg_regret[i];
    sxx += x * x;
    mean += avg_regret[i];
  }
  mean /= static_cast<double>(avg_regret.size());
  HannanFit fit;
  fit.coefficient = sxy / sxx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const double pred = fit.coefficient / std::sqrt(horizons[i]);
    ss_res += (avg_regret[i] - pred) * (avg_regret[i] - pred);
    ss_tot += (avg_regret[i] - mean) * (avg_regret[i] - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  fit.decreasing = true;
  for (std::size_t i = 1; i < horizons.size(); ++i) {
    if (!(horizons[i] > horizons[i - 1] && avg_regret[i] < avg_regret[i - 1])) {
      fit.decreasing = false;
    }
  }
  return fit;
}

}  // namespace gevlearn
