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

#ifndef GEVLEARN_ERRORS_HPP_
#define GEVLEARN_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace gevlearn {

// Malformed model description or configuration.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (eta <= 0,
// non-positive generator input, delta outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operation has no implementation for the given GEV variant.
class UnsupportedVariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A payoff vector violated the ||u||_inf <= u_max contract.
class PayoffBoundError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// An iterative solver hit its iteration cap. Carries the best iterate seen.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_iterate,
                   double residual)
      : std::runtime_error(what),
        best_iterate_(std::move(best_iterate)),
        residual_(residual) {}

  const std::vector<double>& best_iterate() const { return best_iterate_; }
  double residual() const { return residual_; }

 private:
  std::vector<double> best_iterate_;
  double residual_;
};

}  // namespace gevlearn

#endif  // GEVLEARN_ERRORS_HPP_
