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

#include "gevlearn/gev_spec.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gevlearn/errors.hpp"

namespace gevlearn {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

void check_lambda(double lambda, const std::string& where) {
  if (!std::isfinite(lambda) || lambda <= 0.0 || lambda > 1.0) {
    fail(where + ": lambda must lie in (0, 1], got " + std::to_string(lambda));
  }
  if (lambda < kMinLambda) {
    fail(where + ": lambda " + std::to_string(lambda) + " is below the supported minimum " +
         std::to_string(kMinLambda));
  }
}

std::vector<Nest> nests_from_alpha(const std::vector<std::vector<double>>& alpha,
                                   const std::vector<double>& lambdas) {
  if (alpha.empty()) fail("allocation matrix has no rows");
  const std::size_t k_count = alpha.front().size();
  if (k_count == 0) fail("allocation matrix has no columns");
  if (lambdas.size() != k_count) {
    fail("expected " + std::to_string(k_count) + " nest parameters, got " +
         std::to_string(lambdas.size()));
  }
  std::vector<Nest> nests(k_count);
  for (std::size_t k = 0; k < k_count; ++k) nests[k].lambda = lambdas[k];
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i].size() != k_count) {
      fail("allocation row " + std::to_string(i) + " has " + std::to_string(alpha[i].size()) +
           " entries, expected " + std::to_string(k_count));
    }
    for (std::size_t k = 0; k < k_count; ++k) {
      const double a = alpha[i][k];
      if (!std::isfinite(a) || a < 0.0) {
        fail("alpha[" + std::to_string(i) + "][" + std::to_string(k) + "] must be >= 0");
      }
      if (a > 0.0) {
        nests[k].members.push_back(i);
        nests[k].alpha.push_back(a);
      }
    }
  }
  return nests;
}

}  // namespace

std::string_view variant_name(Variant variant) {
  switch (variant) {
    case Variant::kMnl: return "mnl";
    case Variant::kNl: return "nl";
    case Variant::kGnl: return "gnl";
    case Variant::kCnl: return "cnl";
    case Variant::kPcl: return "pcl";
    case Variant::kOgev: return "ogev";
    case Variant::kPdgev: return "pdgev";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::kMnl, Variant::kNl, Variant::kGnl, Variant::kCnl, Variant::kPcl,
                    Variant::kOgev, Variant::kPdgev}) {
    if (variant_name(v) == name) return v;
  }
  fail("unknown GEV variant '" + std::string(name) + "'");
}

GevSpec GevSpec::mnl(std::size_t n) {
  GevSpec spec;
  spec.variant_ = Variant::kMnl;
  spec.n_ = n;
  Nest all;
  for (std::size_t i = 0; i < n; ++i) {
    all.members.push_back(i);
    all.alpha.push_back(1.0);
  }
  all.lambda = 1.0;
  spec.nests_.push_back(std::move(all));
  spec.validate();
  spec.index_partition();
  return spec;
}

GevSpec GevSpec::nested(std::size_t n, std::vector<std::vector<std::size_t>> groups,
                        std::vector<double> lambdas) {
  if (groups.size() != lambdas.size()) {
    fail("nested logit: " + std::to_string(groups.size()) + " nests but " +
         std::to_string(lambdas.size()) + " lambdas");
  }
  GevSpec spec;
  spec.variant_ = Variant::kNl;
  spec.n_ = n;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    Nest nest;
    nest.members = std::move(groups[k]);
    nest.alpha.assign(nest.members.size(), 1.0);
    nest.lambda = lambdas[k];
    spec.nests_.push_back(std::move(nest));
  }
  spec.validate();
  spec.index_partition();
  return spec;
}

GevSpec GevSpec::generalized(const std::vector<std::vector<double>>& alpha,
                             std::vector<double> lambdas) {
  GevSpec spec;
  spec.variant_ = Variant::kGnl;
  spec.n_ = alpha.size();
  spec.nests_ = nests_from_alpha(alpha, lambdas);
  spec.validate();
  return spec;
}

GevSpec GevSpec::cross_nested(const std::vector<std::vector<double>>& alpha, double lambda) {
  const std::size_t k_count = alpha.empty() ? 0 : alpha.front().size();
  GevSpec spec;
  spec.variant_ = Variant::kCnl;
  spec.n_ = alpha.size();
  spec.nests_ = nests_from_alpha(alpha, std::vector<double>(k_count, lambda));
  spec.validate();
  return spec;
}

GevSpec GevSpec::paired_combinatorial(std::size_t n, double lambda) {
  const std::size_t pairs = n >= 2 ? n * (n - 1) / 2 : 0;
  return paired_combinatorial(n, std::vector<double>(pairs, lambda));
}

GevSpec GevSpec::paired_combinatorial(std::size_t n, std::vector<double> pair_lambdas) {
  if (n < 2) fail("paired combinatorial logit needs at least two alternatives");
  if (pair_lambdas.size() != n * (n - 1) / 2) {
    fail("paired combinatorial logit: expected " + std::to_string(n * (n - 1) / 2) +
         " pair lambdas, got " + std::to_string(pair_lambdas.size()));
  }
  GevSpec spec;
  spec.variant_ = Variant::kPcl;
  spec.n_ = n;
  const double a = 1.0 / static_cast<double>(n - 1);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      spec.nests_.push_back(Nest{{i, j}, {a, a}, pair_lambdas[k++]});
    }
  }
  spec.validate();
  return spec;
}

GevSpec GevSpec::ordered(std::size_t n, std::size_t overlap, double lambda) {
  return ordered(n, overlap, std::vector<double>(n + overlap, lambda));
}

GevSpec GevSpec::ordered(std::size_t n, std::size_t overlap, std::vector<double> lambdas,
                         const std::vector<std::vector<double>>& alpha) {
  if (n == 0) fail("ordered GEV needs at least one alternative");
  const std::size_t k_count = n + overlap;
  if (lambdas.size() != k_count) {
    fail("ordered GEV: expected " + std::to_string(k_count) + " lambdas, got " +
         std::to_string(lambdas.size()));
  }
  std::vector<std::vector<double>> weights = alpha;
  if (weights.empty()) {
    weights.assign(n, std::vector<double>(k_count, 0.0));
    const double a = 1.0 / static_cast<double>(overlap + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = i; l <= i + overlap; ++l) weights[i][l] = a;
    }
  }
  if (weights.size() != n) fail("ordered GEV: allocation matrix must have n rows");
  GevSpec spec;
  spec.variant_ = Variant::kOgev;
  spec.n_ = n;
  spec.overlap_ = overlap;
  spec.nests_ = nests_from_alpha(weights, lambdas);
  spec.validate();
  return spec;
}

GevSpec GevSpec::differentiated(std::size_t n, std::vector<Attribute> attributes) {
  GevSpec spec;
  spec.variant_ = Variant::kPdgev;
  spec.n_ = n;
  for (const Attribute& attr : attributes) {
    for (const auto& group : attr.groups) {
      spec.nests_.push_back(
          Nest{group, std::vector<double>(group.size(), attr.weight), attr.lambda});
    }
  }
  spec.attributes_ = std::move(attributes);
  spec.validate();
  return spec;
}

GevSpec GevSpec::from_parts(Variant variant, std::size_t n, std::vector<Nest> nests,
                            std::size_t overlap, std::vector<Attribute> attributes) {
  GevSpec spec;
  spec.variant_ = variant;
  spec.n_ = n;
  spec.nests_ = std::move(nests);
  spec.overlap_ = overlap;
  spec.attributes_ = std::move(attributes);
  spec.validate();
  if (spec.is_partition()) spec.index_partition();
  return spec;
}

void GevSpec::validate() const {
  const std::string name(variant_name(variant_));
  if (n_ == 0) fail(name + ": at least one alternative is required");
  if (nests_.empty()) fail(name + ": at least one nest is required");

  std::vector<double> row_sum(n_, 0.0);
  for (std::size_t k = 0; k < nests_.size(); ++k) {
    const Nest& nest = nests_[k];
    const std::string where = name + " nest " + std::to_string(k);
    check_lambda(nest.lambda, where);
    if (nest.members.empty()) fail(where + ": nest has no members");
    if (nest.alpha.size() != nest.members.size()) {
      fail(where + ": members and alpha differ in length");
    }
    std::vector<std::size_t> sorted = nest.members;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      fail(where + ": duplicate member");
    }
    for (std::size_t m = 0; m < nest.members.size(); ++m) {
      const std::size_t i = nest.members[m];
      const double a = nest.alpha[m];
      if (i >= n_) fail(where + ": member " + std::to_string(i) + " out of range");
      if (!std::isfinite(a) || a <= 0.0 || a > 1.0 + kAllocationTolerance) {
        fail(where + ": allocation weight of member " + std::to_string(i) +
             " must lie in (0, 1]");
      }
      row_sum[i] += a;
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (std::abs(row_sum[i] - 1.0) > kAllocationTolerance) {
      std::ostringstream os;
      os << name << ": allocation weights of alternative " << i << " sum to " << row_sum[i]
         << ", expected 1";
      fail(os.str());
    }
  }

  switch (variant_) {
    case Variant::kMnl:
      if (nests_.size() != 1 || nests_[0].members.size() != n_ || nests_[0].lambda != 1.0) {
        fail("mnl: expected a single nest with every alternative and lambda = 1");
      }
      break;
    case Variant::kNl:
      for (const Nest& nest : nests_) {
        for (double a : nest.alpha) {
          if (a != 1.0) fail("nl: nests must be mutually exclusive (alpha in {0, 1})");
        }
      }
      break;
    case Variant::kGnl:
      break;
    case Variant::kCnl:
      for (const Nest& nest : nests_) {
        if (nest.lambda != nests_[0].lambda) fail("cnl: all nests must share one lambda");
      }
      break;
    case Variant::kPcl: {
      if (n_ < 2) fail("pcl: at least two alternatives are required");
      if (nests_.size() != n_ * (n_ - 1) / 2) fail("pcl: expected one nest per pair");
      const double a = 1.0 / static_cast<double>(n_ - 1);
      std::size_t k = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j, ++k) {
          const Nest& nest = nests_[k];
          if (nest.members != std::vector<std::size_t>{i, j}) {
            fail("pcl: nest " + std::to_string(k) + " must hold the pair (" +
                 std::to_string(i) + ", " + std::to_string(j) + ")");
          }
          for (double w : nest.alpha) {
            if (std::abs(w - a) > kAllocationTolerance) {
              fail("pcl: pair allocation weights must equal 1/(n-1)");
            }
          }
        }
      }
      break;
    }
    case Variant::kOgev: {
      if (nests_.size() != n_ + overlap_) fail("ogev: expected n + overlap nests");
      for (std::size_t l = 0; l < nests_.size(); ++l) {
        std::vector<std::size_t> expected;
        for (std::size_t i = (l >= overlap_ ? l - overlap_ : 0); i <= l && i < n_; ++i) {
          expected.push_back(i);
        }
        if (nests_[l].members != expected) {
          fail("ogev: nest " + std::to_string(l) + " must hold alternatives within the window");
        }
      }
      break;
    }
    case Variant::kPdgev: {
      if (attributes_.empty()) fail("pdgev: at least one attribute is required");
      double weight_sum = 0.0;
      std::size_t k = 0;
      for (std::size_t d = 0; d < attributes_.size(); ++d) {
        const Attribute& attr = attributes_[d];
        const std::string where = "pdgev attribute " + std::to_string(d);
        check_lambda(attr.lambda, where);
        if (!(attr.weight > 0.0)) fail(where + ": weight must be positive");
        weight_sum += attr.weight;
        std::vector<int> seen(n_, 0);
        for (const auto& group : attr.groups) {
          if (k >= nests_.size() || nests_[k].members != group ||
              nests_[k].lambda != attr.lambda) {
            fail(where + ": nests do not match the attribute groups");
          }
          ++k;
          for (std::size_t i : group) {
            if (i < n_) ++seen[i];
          }
        }
        for (std::size_t i = 0; i < n_; ++i) {
          if (seen[i] != 1) {
            fail(where + ": groups must partition the alternatives (alternative " +
                 std::to_string(i) + ")");
          }
        }
      }
      if (k != nests_.size()) fail("pdgev: nests do not match the attribute groups");
      if (std::abs(weight_sum - 1.0) > kAllocationTolerance) {
        fail("pdgev: attribute weights must sum to 1");
      }
      break;
    }
  }
}

void GevSpec::index_partition() {
  nest_of_.assign(n_, 0);
  for (std::size_t k = 0; k < nests_.size(); ++k) {
    for (std::size_t i : nests_[k].members) nest_of_[i] = k;
  }
}

double GevSpec::alpha(std::size_t i, std::size_t k) const {
  const Nest& nest = nests_.at(k);
  for (std::size_t m = 0; m < nest.members.size(); ++m) {
    if (nest.members[m] == i) return nest.alpha[m];
  }
  return 0.0;
}

std::vector<std::vector<double>> GevSpec::alpha_matrix() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(nests_.size(), 0.0));
  for (std::size_t k = 0; k < nests_.size(); ++k) {
    for (std::size_t m = 0; m < nests_[k].members.size(); ++m) {
      out[nests_[k].members[m]][k] = nests_[k].alpha[m];
    }
  }
  return out;
}

double GevSpec::min_lambda() const {
  double lo = 1.0;
  for (const Nest& nest : nests_) lo = std::min(lo, nest.lambda);
  return lo;
}

std::size_t GevSpec::nest_of(std::size_t i) const {
  if (!is_partition()) {
    throw UnsupportedVariantError(std::string(variant_name(variant_)) +
                                  ": alternatives may belong to several nests");
  }
  return nest_of_.at(i);
}

std::string GevSpec::describe() const {
  std::ostringstream os;
  os << variant_name(variant_) << "(n=" << n_ << ", nests=" << nests_.size()
     << ", min_lambda=" << min_lambda() << ")";
  return os.str();
}

bool operator==(const Nest& a, const Nest& b) {
  return a.members == b.members && a.alpha == b.alpha && a.lambda == b.lambda;
}

bool operator==(const Attribute& a, const Attribute& b) {
  return a.weight == b.weight && a.lambda == b.lambda && a.groups == b.groups;
}

bool operator==(const GevSpec& a, const GevSpec& b) {
  return a.variant() == b.variant() && a.size() == b.size() && a.nests() == b.nests() &&
         a.overlap() == b.overlap() && a.attributes() == b.attributes();
}

}  // namespace gevlearn
