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

#ifndef GEVLEARN_RNG_HPP_
#define GEVLEARN_RNG_HPP_

#include <cstdint>
#include <random>

namespace gevlearn {

// Portable random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; every derived variate is computed
// here rather than through <random> distributions (whose algorithms are
// implementation-defined) so streams reproduce bit-for-bit from a seed on
// any conforming toolchain and in ports to other languages.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1): never returns exactly zero.
  double uniform_open();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);
  // Standard normal by the Box-Muller transform (one draw per call).
  double normal();
  // Standard Gumbel (location 0, scale 1), mean = Euler-Mascheroni gamma.
  double gumbel();

 private:
  std::mt19937_64 engine_;
};

}  // namespace gevlearn

#endif  // GEVLEARN_RNG_HPP_
