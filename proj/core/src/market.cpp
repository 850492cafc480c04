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

#include "gevlearn/market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <ostream>

#include "gevlearn/csv.hpp"
#include "gevlearn/errors.hpp"
#include "gevlearn/rng.hpp"

namespace gevlearn {

MarketState MarketState::open(GevSpec spec, double liquidity,
                               std::optional<std::vector<double>> initial_shares) {
  if (!(liquidity > 0.0) || !std::isfinite(liquidity)) {
    throw DomainError("liquidity must be positive and finite");
  }
  MarketState state;
  state.shares = initial_shares.value_or(std::vector<double>(spec.size(), 0.0));
  if (state.shares.size() != spec.size()) {
    throw ValidationError("initial share vector has the wrong length");
  }
  state.spec = std::make_shared<const GevSpec>(std::move(spec));
  state.liquidity = liquidity;
  return state;
}

double cost(const MarketState& state) {
  return social_surplus(*state.spec, state.shares, state.liquidity);
}

SimplexVector prices(const MarketState& state) {
  return choice_probabilities(*state.spec, state.shares, state.liquidity);
}

std::pair<MarketState, double> execute_trade(MarketState state, std::span<const double> bundle) {
  if (bundle.size() != state.shares.size()) {
    throw ValidationError("trade bundle has the wrong length");
  }
  for (double r : bundle) {
    if (!std::isfinite(r)) throw ValidationError("trade bundle has a non-finite entry");
  }
  const double before = cost(state);
  for (std::size_t i = 0; i < bundle.size(); ++i) state.shares[i] += bundle[i];
  const double charge = cost(state) - before;
  state.trades.push_back({std::vector<double>(bundle.begin(), bundle.end()), charge});
  return {std::move(state), charge};
}

std::string_view market_property_name(MarketProperty property) {
  switch (property) {
    case MarketProperty::kDifferentiability: return "differentiability";
    case MarketProperty::kIncreasingMonotonicity: return "increasing_monotonicity";
    case MarketProperty::kTranslationInvariance: return "translation_invariance";
    case MarketProperty::kPriceNonnegativity: return "price_nonnegativity";
    case MarketProperty::kPriceNormalization: return "price_normalization";
  }
  return "unknown";
}

bool AuditReport::failed(MarketProperty property) const {
  return std::any_of(failures.begin(), failures.end(),
                     [property](const AuditFailure& f) { return f.property == property; });
}

AuditReport validity_audit(const CostFunction& cost_fn, const PriceFunction& price_fn,
                           std::size_t alternatives, std::size_t samples, std::uint64_t seed) {
  if (samples < 100) throw DomainError("validity audit needs at least 100 samples");
  if (alternatives == 0) throw DomainError("validity audit needs at least one alternative");
  constexpr double kStep = 1e-5;
  constexpr double kGradientTol = 1e-6;
  constexpr double kTranslationTol = 1e-10;
  constexpr double kPriceSumTol = 1e-10;

  Rng rng(seed);
  AuditReport report;
  report.samples = samples;
  auto record = [&report](MarketProperty p, const std::vector<double>& q, std::string detail) {
    if (!report.failed(p)) report.failures.push_back({p, q, std::move(detail)});
  };

  std::vector<double> q(alternatives), probe(alternatives);
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& v : q) v = rng.uniform(-10.0, 10.0);
    const double base = cost_fn(q);
    const std::vector<double> p = price_fn(q);

    double price_sum = 0.0;
    for (std::size_t i = 0; i < alternatives; ++i) {
      price_sum += p[i];
      if (!(p[i] >= 0.0)) record(MarketProperty::kPriceNonnegativity, q, "negative price");
    }
    const double sum_err = std::abs(price_sum - 1.0);
    report.max_price_sum_error = std::max(report.max_price_sum_error, sum_err);
    if (sum_err > kPriceSumTol) {
      record(MarketProperty::kPriceNormalization, q,
             "prices sum to " + format_number(price_sum));
    }

    // Central differences of the cost must reproduce the quoted prices.
    probe = q;
    for (std::size_t i = 0; i < alternatives; ++i) {
      probe[i] = q[i] + kStep;
      const double up = cost_fn(probe);
      probe[i] = q[i] - kStep;
      const double down = cost_fn(probe);
      probe[i] = q[i];
      const double err = std::abs((up - down) / (2.0 * kStep) - p[i]);
      report.max_gradient_error = std::max(report.max_gradient_error, err);
      if (!(err <= kGradientTol)) {
        record(MarketProperty::kDifferentiability, q,
               "finite-difference slope differs from price " + std::to_string(i) + " by " +
                   format_number(err));
      }
    }

    // q' >= q componentwise.
    for (std::size_t i = 0; i < alternatives; ++i) probe[i] = q[i] + rng.uniform(0.0, 5.0);
    const double raised = cost_fn(probe);
    if (raised < base - 1e-12) {
      record(MarketProperty::kIncreasingMonotonicity, q,
             "C(q') = " + format_number(raised) + " < C(q) = " + format_number(base));
    }

    const double k = rng.uniform(-10.0, 10.0);
    for (std::size_t i = 0; i < alternatives; ++i) probe[i] = q[i] + k;
    const double err = std::abs(cost_fn(probe) - base - k);
    report.max_translation_error = std::max(report.max_translation_error, err);
    if (!(err <= kTranslationTol)) {
      record(MarketProperty::kTranslationInvariance, q,
             "C(q + k1) - C(q) - k = " + format_number(err) + " at k = " + format_number(k));
    }
  }
  return report;
}

AuditReport validity_audit(const GevSpec& spec, double liquidity, std::size_t samples,
                           std::uint64_t seed) {
  if (!(liquidity > 0.0)) throw DomainError("liquidity must be positive");
  const auto cost_fn = [&](std::span<const double> q) {
    return social_surplus(spec, q, liquidity);
  };
  const auto price_fn = [&](std::span<const double> q) {
    return choice_probabilities(spec, q, liquidity);
  };
  return validity_audit(cost_fn, price_fn, spec.size(), samples, seed);
}

std::vector<MarketStep> run_market(MarketState state,
                                   const std::vector<std::vector<double>>& bundles) {
  std::vector<MarketStep> out;
  out.reserve(bundles.size() + 1);
  out.push_back({0, state.shares, prices(state), 0.0});
  for (std::size_t t = 0; t < bundles.size(); ++t) {
    auto [next, charge] = execute_trade(std::move(state), bundles[t]);
    state = std::move(next);
    out.push_back({t + 1, state.shares, prices(state), charge});
  }
  return out;
}

void write_market_csv(std::ostream& out, const std::vector<MarketStep>& trajectory) {
  const std::size_t n = trajectory.empty() ? 0 : trajectory.front().shares.size();
  std::vector<std::string> row{"t"};
  for (auto& c : indexed_columns("q", n)) row.push_back(std::move(c));
  for (auto& c : indexed_columns("p", n)) row.push_back(std::move(c));
  row.emplace_back("charge");
  write_csv_row(out, row);
  for (const MarketStep& step : trajectory) {
    row.assign({std::to_string(step.t)});
    for (double v : step.shares) row.push_back(format_number(v));
    for (double v : step.prices) row.push_back(format_probability(v));
    row.push_back(format_number(step.charge));
    write_csv_row(out, row);
  }
}

std::vector<std::vector<double>> read_trade_log(std::istream& in, std::size_t alternatives) {
  std::vector<std::vector<double>> bundles;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    const std::string where = "trade log line " + std::to_string(line_no);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (doc.is_object()) {
      if (!doc.contains("r")) throw ValidationError(where + ": object lacks field 'r'");
      doc = doc["r"];
    }
    if (!doc.is_array()) throw ValidationError(where + ": expected an array of numbers");
    std::vector<double> bundle;
    for (const auto& v : doc) {
      if (!v.is_number()) throw ValidationError(where + ": non-numeric entry");
      bundle.push_back(v.get<double>());
    }
    if (bundle.size() != alternatives) {
      throw ValidationError(where + ": bundle has " + std::to_string(bundle.size()) +
                            " entries, market has " + std::to_string(alternatives));
    }
    bundles.push_back(std::move(bundle));
  }
  return bundles;
}

}  // namespace gevlearn
