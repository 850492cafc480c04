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

#include "gevlearn/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "gevlearn/csv.hpp"
#include "gevlearn/errors.hpp"
#include "gevlearn/learners.hpp"
#include "gevlearn/rng.hpp"

namespace gevlearn {
namespace {

std::size_t checked_power(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t e = 0; e < exponent; ++e) {
    if (out > std::numeric_limits<std::size_t>::max() / base) {
      throw DomainError("game has too many pure profiles");
    }
    out *= base;
  }
  return out;
}

}  // namespace

NormalFormGame::NormalFormGame(std::size_t players, std::size_t strategies,
                               std::vector<std::vector<double>> utilities)
    : players_(players), strategies_(strategies), utilities_(std::move(utilities)) {
  if (players_ == 0 || strategies_ == 0) {
    throw ValidationError("game needs at least one player and one strategy");
  }
  profile_count_ = checked_power(strategies_, players_);
  if (utilities_.size() != players_) {
    throw ValidationError("game needs one utility array per player");
  }
  for (std::size_t j = 0; j < players_; ++j) {
    if (utilities_[j].size() != profile_count_) {
      throw ValidationError("utility array of player " + std::to_string(j) + " has " +
                            std::to_string(utilities_[j].size()) + " entries, expected " +
                            std::to_string(profile_count_));
    }
    for (double u : utilities_[j]) {
      if (!(u >= 0.0 && u <= 1.0)) {
        throw ValidationError("utilities must lie in [0, 1], player " + std::to_string(j) +
                              " has " + std::to_string(u));
      }
    }
  }
}

NormalFormGame NormalFormGame::random(std::size_t players, std::size_t strategies,
                                      std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t count = checked_power(strategies, players);
  std::vector<std::vector<double>> utilities(players, std::vector<double>(count));
  for (auto& row : utilities) {
    for (double& u : row) u = rng.uniform();
  }
  return NormalFormGame(players, strategies, std::move(utilities));
}

std::size_t NormalFormGame::index(const std::vector<std::size_t>& profile) const {
  if (profile.size() != players_) throw ValidationError("profile has the wrong length");
  std::size_t idx = 0;
  for (std::size_t s : profile) {
    if (s >= strategies_) throw ValidationError("strategy index out of range");
    idx = idx * strategies_ + s;
  }
  return idx;
}

std::vector<std::size_t> NormalFormGame::profile(std::size_t index) const {
  std::vector<std::size_t> out(players_);
  for (std::size_t j = players_; j-- > 0;) {
    out[j] = index % strategies_;
    index /= strategies_;
  }
  return out;
}

double NormalFormGame::welfare(std::size_t index) const {
  double w = 0.0;
  for (std::size_t j = 0; j < players_; ++j) w += utilities_[j][index];
  return w;
}

PayoffVector expected_utility_vector(const NormalFormGame& game, std::size_t player,
                                     const std::vector<SimplexVector>& mixed) {
  const std::size_t p = game.players();
  const std::size_t n = game.strategies();
  if (player >= p) throw ValidationError("player index out of range");
  if (mixed.size() != p) throw ValidationError("mixed profile has the wrong number of players");
  for (std::size_t j = 0; j < p; ++j) {
    if (j != player && mixed[j].size() != n) {
      throw ValidationError("mixed strategy of player " + std::to_string(j) +
                            " has the wrong length");
    }
  }
  PayoffVector out(n, 0.0);
  for (std::size_t idx = 0; idx < game.profile_count(); ++idx) {
    // Decode once; the player's own digit selects the output slot.
    std::size_t rest = idx;
    double weight = 1.0;
    std::size_t own = 0;
    for (std::size_t j = p; j-- > 0;) {
      const std::size_t s = rest % n;
      rest /= n;
      if (j == player) {
        own = s;
      } else {
        weight *= mixed[j][s];
      }
    }
    out[own] += weight * game.utility(player, idx);
  }
  return out;
}

std::vector<PlayerLearner> optimal_learners(const std::vector<GevSpec>& specs,
                                            std::size_t horizon) {
  std::vector<PlayerLearner> out;
  for (const GevSpec& spec : specs) {
    out.push_back({spec, optimal_eta(model_constants(spec), horizon, 1.0)});
  }
  return out;
}

DynamicsResult run_dynamics(const NormalFormGame& game,
                            const std::vector<PlayerLearner>& learners, std::size_t horizon) {
  const std::size_t p = game.players();
  if (learners.size() != p) throw ValidationError("need one learner per player");
  if (horizon == 0) throw DomainError("horizon must be at least 1");
  std::vector<LearnerState> states;
  for (const PlayerLearner& l : learners) {
    if (l.spec.size() != game.strategies()) {
      throw ValidationError("learner spec size does not match the strategy count");
    }
    states.push_back(LearnerState::make(l.spec, l.eta, 1.0));
  }
  DynamicsResult result;
  result.strategies.assign(p, {});
  result.ledgers.assign(p, RegretLedger(1.0));
  result.welfare.reserve(horizon);
  for (auto& s : result.strategies) s.reserve(horizon);

  std::vector<SimplexVector> profile(p);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t j = 0; j < p; ++j) profile[j] = ssa_choose(states[j]);
    double welfare = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      PayoffVector u = expected_utility_vector(game, j, profile);
      // Rounding can push an expectation of [0,1] values a hair past 1.
      for (double& v : u) v = std::clamp(v, 0.0, 1.0);
      result.ledgers[j].append(profile[j], u);
      for (std::size_t k = 0; k < u.size(); ++k) welfare += profile[j][k] * u[k];
      states[j] = ssa_update(std::move(states[j]), u);
      result.strategies[j].push_back(profile[j]);
    }
    result.welfare.push_back(welfare);
  }
  return result;
}

double cce_delta(const DynamicsResult& dynamics) {
  double worst = 0.0;
  for (const RegretLedger& ledger : dynamics.ledgers) {
    worst = std::max(worst, regret(ledger));
  }
  return worst / static_cast<double>(dynamics.rounds());
}

CceReport cce_check(const NormalFormGame& game, const DynamicsResult& dynamics, double delta) {
  const std::size_t p = game.players();
  const std::size_t n = game.strategies();
  const std::size_t rounds = dynamics.rounds();
  if (dynamics.strategies.size() != p || rounds == 0) {
    throw ValidationError("dynamics do not match the game");
  }
  // Time-averaged probability of every pure profile, and of every
  // opponent sub-profile for each player.
  std::vector<double> sigma(game.profile_count(), 0.0);
  std::vector<std::size_t> digits(p);
  for (std::size_t t = 0; t < rounds; ++t) {
    for (std::size_t idx = 0; idx < game.profile_count(); ++idx) {
      std::size_t rest = idx;
      double prob = 1.0;
      for (std::size_t j = p; j-- > 0;) {
        prob *= dynamics.strategies[j][t][rest % n];
        rest /= n;
      }
      sigma[idx] += prob;
    }
  }
  for (double& s : sigma) s /= static_cast<double>(rounds);

  CceReport report;
  report.delta = delta;
  report.deviation_gain.assign(p, std::vector<double>(n, 0.0));
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p; ++j) {
    double on_path = 0.0;
    std::vector<double> deviation(n, 0.0);
    for (std::size_t idx = 0; idx < game.profile_count(); ++idx) {
      on_path += sigma[idx] * game.utility(j, idx);
      std::vector<std::size_t> prof = game.profile(idx);
      for (std::size_t s = 0; s < n; ++s) {
        prof[j] = s;
        deviation[s] += sigma[idx] * game.utility(j, game.index(prof));
      }
    }
    for (std::size_t s = 0; s < n; ++s) {
      report.deviation_gain[j][s] = deviation[s] - on_path;
      const double margin = delta - report.deviation_gain[j][s];
      if (margin < report.worst_margin) {
        report.worst_margin = margin;
        report.worst_player = j;
        report.worst_deviation = s;
      }
    }
  }
  report.passed = report.worst_margin >= -kCceTolerance;
  return report;
}

OptimumResult brute_force_opt(const NormalFormGame& game) {
  if (game.profile_count() > kMaxEnumeratedProfiles) {
    throw DomainError("game has " + std::to_string(game.profile_count()) +
                      " pure profiles, above the enumeration cap");
  }
  OptimumResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t idx = 0; idx < game.profile_count(); ++idx) {
    const double w = game.welfare(idx);
    if (w > best.value) {
      best.value = w;
      arg = idx;
    }
  }
  best.profile = game.profile(arg);
  return best;
}

namespace {

// sum_j u_j(target_j, s_-j) for pure profile idx.
double target_deviation_welfare(const NormalFormGame& game,
                                const std::vector<std::size_t>& target, std::size_t idx) {
  std::vector<std::size_t> prof = game.profile(idx);
  double total = 0.0;
  for (std::size_t j = 0; j < game.players(); ++j) {
    const std::size_t own = prof[j];
    prof[j] = target[j];
    total += game.utility(j, game.index(prof));
    prof[j] = own;
  }
  return total;
}

}  // namespace

SmoothnessParams SmoothnessParams::verified(const NormalFormGame& game, double lambda, double mu,
                                            std::vector<std::size_t> target) {
  if (!(lambda > 0.0) || !(mu >= 0.0)) {
    throw ValidationError("smoothness needs lambda > 0 and mu >= 0");
  }
  game.index(target);  // validates the profile
  const double opt = brute_force_opt(game).value;
  for (std::size_t idx = 0; idx < game.profile_count(); ++idx) {
    const double lhs = target_deviation_welfare(game, target, idx);
    const double rhs = lambda * opt - mu * game.welfare(idx);
    if (lhs < rhs - 1e-12) {
      std::string witness;
      for (std::size_t s : game.profile(idx)) witness += std::to_string(s) + " ";
      throw ValidationError("game is not (" + std::to_string(lambda) + ", " +
                            std::to_string(mu) + ")-smooth; violated at profile [ " + witness +
                            "]");
    }
  }
  return SmoothnessParams{lambda, mu, std::move(target)};
}

double max_smoothness_lambda(const NormalFormGame& game, const std::vector<std::size_t>& target,
                             double mu) {
  const double opt = brute_force_opt(game).value;
  if (!(opt > 0.0)) throw DomainError("smoothness is undefined when OPT <= 0");
  double lambda = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < game.profile_count(); ++idx) {
    lambda = std::min(lambda, (target_deviation_welfare(game, target, idx) +
                               mu * game.welfare(idx)) / opt);
  }
  return lambda;
}

WelfareReport welfare_bound_check(const NormalFormGame& game, const SmoothnessParams& params,
                                  const DynamicsResult& dynamics) {
  const double rounds = static_cast<double>(dynamics.rounds());
  if (rounds == 0.0) throw ValidationError("dynamics are empty");
  WelfareReport report;
  for (double w : dynamics.welfare) report.average_welfare += w;
  report.average_welfare /= rounds;
  report.optimum = brute_force_opt(game).value;
  for (const RegretLedger& ledger : dynamics.ledgers) report.average_regret_sum += regret(ledger);
  report.average_regret_sum /= rounds;
  const double scale = 1.0 + params.mu;
  report.lower_bound =
      params.lambda / scale * report.optimum - report.average_regret_sum / scale;
  report.price_of_anarchy = params.price_of_anarchy();
  report.slack = report.average_welfare - report.lower_bound;
  report.holds = report.slack >= -1e-9;
  return report;
}

void write_dynamics_csv(std::ostream& out, const DynamicsResult& dynamics) {
  const std::size_t p = dynamics.ledgers.size();
  std::vector<std::string> row{"t"};
  for (auto& c : indexed_columns("regret", p)) row.push_back(std::move(c));
  row.emplace_back("welfare");
  write_csv_row(out, row);
  for (std::size_t t = 0; t < dynamics.rounds(); ++t) {
    row.assign({std::to_string(t + 1)});
    for (const RegretLedger& ledger : dynamics.ledgers) {
      row.push_back(format_number(ledger.curve()[t]));
    }
    row.push_back(format_number(dynamics.welfare[t]));
    write_csv_row(out, row);
  }
}

}  // namespace gevlearn
