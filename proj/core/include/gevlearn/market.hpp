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

#ifndef GEVLEARN_MARKET_HPP_
#define GEVLEARN_MARKET_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gevlearn/gev_spec.hpp"
#include "gevlearn/surplus.hpp"

namespace gevlearn {

struct Trade {
  std::vector<double> bundle;
  double charge = 0.0;
};

// Cost-function market maker. The cost of outstanding shares q is the social
// surplus C(q) = b log G(e^{q/b}) of the chosen GEV model, with liquidity b in
// the role of eta; prices are grad C(q). The MNL model gives the logarithmic
// market scoring rule.
struct MarketState {
  std::shared_ptr<const GevSpec> spec;
  double liquidity = 1.0;
  std::vector<double> shares;
  std::vector<Trade> trades;

  // q_0 defaults to the zero vector.
  static MarketState open(GevSpec spec, double liquidity,
                          std::optional<std::vector<double>> initial_shares = std::nullopt);
};

double cost(const MarketState& state);
SimplexVector prices(const MarketState& state);

// q <- q + r, charging C(q + r) - C(q). Negative entries are sales.
std::pair<MarketState, double> execute_trade(MarketState state, std::span<const double> bundle);

enum class MarketProperty {
  kDifferentiability,
  kIncreasingMonotonicity,
  kTranslationInvariance,
  kPriceNonnegativity,
  kPriceNormalization,
};

std::string_view market_property_name(MarketProperty property);

struct AuditFailure {
  MarketProperty property;
  std::vector<double> witness;
  std::string detail;
};

struct AuditReport {
  std::size_t samples = 0;
  std::vector<AuditFailure> failures;
  // Largest observed deviation per check.
  double max_gradient_error = 0.0;
  double max_translation_error = 0.0;
  double max_price_sum_error = 0.0;

  bool passed() const { return failures.empty(); }
  bool failed(MarketProperty property) const;
};

using CostFunction = std::function<double(std::span<const double>)>;
using PriceFunction = std::function<std::vector<double>(std::span<const double>)>;

// Numeric audit of the three validity conditions for a cost function
// (differentiability with gradient equal to the quoted prices, increasing
// monotonicity, translation invariance C(q + k1) = C(q) + k) plus the price
// conditions p >= 0 and sum p = 1, on seeded random share vectors.
AuditReport validity_audit(const CostFunction& cost_fn, const PriceFunction& price_fn,
                           std::size_t alternatives, std::size_t samples, std::uint64_t seed);
AuditReport validity_audit(const GevSpec& spec, double liquidity, std::size_t samples,
                           std::uint64_t seed);

struct MarketStep {
  std::size_t t = 0;
  std::vector<double> shares;
  SimplexVector prices;
  double charge = 0.0;
};

// Quotes prices grad C(q_{t-1}), receives bundle r_t, updates q_t. Row 0 is
// the opening state (charge 0); row t is the state after trade t.
std::vector<MarketStep> run_market(MarketState state,
                                   const std::vector<std::vector<double>>& bundles);

// "t,q_1..q_N,p_1..p_N,charge" rows.
void write_market_csv(std::ostream& out, const std::vector<MarketStep>& trajectory);

// One bundle per non-empty line: a JSON array of numbers, or an object
// {"r": [...]}. Throws ValidationError with the line number on bad input.
std::vector<std::vector<double>> read_trade_log(std::istream& in, std::size_t alternatives);

}  // namespace gevlearn

#endif  // GEVLEARN_MARKET_HPP_
