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

#ifndef GEVLEARN_GAMES_HPP_
#define GEVLEARN_GAMES_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gevlearn/gev_spec.hpp"
#include "gevlearn/regret.hpp"
#include "gevlearn/surplus.hpp"

namespace gevlearn {

// Finite normal-form game: P players with N strategies each and utilities in
// [0, 1]. Pure profiles are indexed in mixed radix N with player 0 as the
// most significant digit.
class NormalFormGame {
 public:
  // utilities[j] holds N^P entries for player j.
  NormalFormGame(std::size_t players, std::size_t strategies,
                 std::vector<std::vector<double>> utilities);

  // Utilities i.i.d. U[0, 1].
  static NormalFormGame random(std::size_t players, std::size_t strategies,
                               std::uint64_t seed);

  std::size_t players() const { return players_; }
  std::size_t strategies() const { return strategies_; }
  std::size_t profile_count() const { return profile_count_; }
  const std::vector<std::vector<double>>& utilities() const { return utilities_; }

  std::size_t index(const std::vector<std::size_t>& profile) const;
  std::vector<std::size_t> profile(std::size_t index) const;
  double utility(std::size_t player, std::size_t index) const {
    return utilities_[player][index];
  }
  double welfare(std::size_t index) const;

 private:
  std::size_t players_;
  std::size_t strategies_;
  std::size_t profile_count_;
  std::vector<std::vector<double>> utilities_;
};

// Exact E_{s_-j ~ x_-j}[u_j(k, s_-j)] for every strategy k of player j.
// mixed[j] itself is ignored.
PayoffVector expected_utility_vector(const NormalFormGame& game, std::size_t player,
                                     const std::vector<SimplexVector>& mixed);

struct PlayerLearner {
  GevSpec spec;
  double eta = 1.0;
};

// eta_j = sqrt(L_j T / (2 phi_j(0))) for each spec (u_max = 1).
std::vector<PlayerLearner> optimal_learners(const std::vector<GevSpec>& specs,
                                            std::size_t horizon);

struct DynamicsResult {
  // strategies[j][t] = x_j^{t+1}.
  std::vector<std::vector<SimplexVector>> strategies;
  std::vector<RegretLedger> ledgers;
  // Expected welfare sum_j U_j(x^t) of each round.
  std::vector<double> welfare;

  std::size_t rounds() const { return welfare.size(); }
};

// Simultaneous repeated play: every player runs the social-surplus learner on
// its expected-utility vector u_j^t computed from the same round's profile.
DynamicsResult run_dynamics(const NormalFormGame& game,
                            const std::vector<PlayerLearner>& learners, std::size_t horizon);

struct CceReport {
  double delta = 0.0;
  // min over (j, s') of E_sigma[u_j(s)] - E_sigma[u_j(s', s_-j)] + delta.
  double worst_margin = 0.0;
  std::size_t worst_player = 0;
  std::size_t worst_deviation = 0;
  // gain[j][s'] = E_sigma[u_j(s', s_-j)] - E_sigma[u_j(s)].
  std::vector<std::vector<double>> deviation_gain;
  bool passed = false;
};

// Margin tolerance for floating-point accumulation over T rounds.
inline constexpr double kCceTolerance = 1e-9;

// Evaluates the coarse-correlated-equilibrium inequalities for the
// time-averaged product distribution sigma of the dynamics, exactly, by
// enumerating pure profiles.
CceReport cce_check(const NormalFormGame& game, const DynamicsResult& dynamics, double delta);
// max_j R_j / T.
double cce_delta(const DynamicsResult& dynamics);

struct OptimumResult {
  double value = 0.0;
  std::vector<std::size_t> profile;
};

inline constexpr std::size_t kMaxEnumeratedProfiles = 1000000;

// max_s W(s) by enumeration. Throws DomainError above kMaxEnumeratedProfiles.
OptimumResult brute_force_opt(const NormalFormGame& game);

// (lambda, mu)-smoothness: sum_j u_j(s*_j, s_-j) >= lambda OPT - mu W(s) for
// every pure profile s.
struct SmoothnessParams {
  double lambda = 1.0;
  double mu = 0.0;
  std::vector<std::size_t> target;

  // Checks the inequality on every pure profile; throws ValidationError
  // naming the first violating profile.
  static SmoothnessParams verified(const NormalFormGame& game, double lambda, double mu,
                                   std::vector<std::size_t> target);
  double price_of_anarchy() const { return (1.0 + mu) / lambda; }
};

// Largest lambda for which (lambda, mu, target) is a smoothness certificate.
double max_smoothness_lambda(const NormalFormGame& game, const std::vector<std::size_t>& target,
                             double mu);

struct WelfareReport {
  double average_welfare = 0.0;
  double optimum = 0.0;
  double average_regret_sum = 0.0;  // (1/T) sum_j R_j
  double lower_bound = 0.0;         // lambda/(1+mu) OPT - (1/(1+mu)) (1/T) sum_j R_j
  double price_of_anarchy = 0.0;
  double slack = 0.0;               // average_welfare - lower_bound
  bool holds = false;
};

WelfareReport welfare_bound_check(const NormalFormGame& game, const SmoothnessParams& params,
                                  const DynamicsResult& dynamics);

// "t,regret_1..regret_P,welfare" rows.
void write_dynamics_csv(std::ostream& out, const DynamicsResult& dynamics);

}  // namespace gevlearn

#endif  // GEVLEARN_GAMES_HPP_
