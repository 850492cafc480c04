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

#include "gevlearn/json_io.hpp"

#include <optional>
#include <vector>

#include "gevlearn/errors.hpp"

namespace gevlearn {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError(path + ": " + msg);
}

const json& field(const json& doc, const std::string& path, const char* name) {
  if (!doc.contains(name)) fail(path, std::string("missing field '") + name + "'");
  return doc.at(name);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::size_t as_index(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(path, "expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> as_numbers(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::size_t> as_indices(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of indices");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_index(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<double>> as_matrix(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_numbers(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// Nest parameters from "lambdas", per-nest "lambda", or a scalar "lambda".
std::optional<std::vector<double>> read_lambdas(const json& doc, const std::string& path,
                                                std::size_t count) {
  if (doc.contains("lambdas")) return as_numbers(doc["lambdas"], path + ".lambdas");
  if (doc.contains("nests")) {
    const json& nests = doc["nests"];
    if (!nests.is_array()) fail(path + ".nests", "expected an array");
    std::vector<double> out;
    for (std::size_t k = 0; k < nests.size(); ++k) {
      const std::string np = path + ".nests[" + std::to_string(k) + "]";
      out.push_back(as_number(field(nests[k], np, "lambda"), np + ".lambda"));
    }
    return out;
  }
  if (doc.contains("lambda")) {
    return std::vector<double>(count, as_number(doc["lambda"], path + ".lambda"));
  }
  return std::nullopt;
}

std::vector<double> require_lambdas(const json& doc, const std::string& path,
                                    std::size_t count) {
  auto lambdas = read_lambdas(doc, path, count);
  if (!lambdas) fail(path, "missing nest parameters ('lambda', 'lambdas' or 'nests')");
  return *lambdas;
}

template <typename Fn>
GevSpec with_path(const std::string& path, Fn&& build) {
  try {
    return build();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    fail(path, what);
  }
}

}  // namespace

json spec_to_json(const GevSpec& spec) {
  json doc;
  doc["variant"] = std::string(variant_name(spec.variant()));
  doc["n"] = spec.size();
  json nests = json::array();
  for (const Nest& nest : spec.nests()) {
    nests.push_back({{"members", nest.members}, {"lambda", nest.lambda}});
  }
  doc["nests"] = std::move(nests);
  if (!spec.is_partition()) doc["alpha"] = spec.alpha_matrix();
  if (spec.variant() == Variant::kOgev) doc["overlap"] = spec.overlap();
  if (spec.variant() == Variant::kPdgev) {
    json attrs = json::array();
    for (const Attribute& a : spec.attributes()) {
      attrs.push_back({{"weight", a.weight}, {"lambda", a.lambda}, {"groups", a.groups}});
    }
    doc["attributes"] = std::move(attrs);
  }
  return doc;
}

GevSpec spec_from_json(const json& doc, const std::string& path) {
  if (!doc.is_object()) fail(path, "expected an object");
  const json& variant_field = field(doc, path, "variant");
  if (!variant_field.is_string()) fail(path + ".variant", "expected a string");
  Variant variant;
  try {
    variant = parse_variant(variant_field.get<std::string>());
  } catch (const ValidationError& e) {
    fail(path + ".variant", e.what());
  }

  std::optional<std::size_t> n;
  if (doc.contains("n")) n = as_index(doc["n"], path + ".n");
  auto require_n = [&]() {
    if (!n) fail(path, "missing field 'n'");
    return *n;
  };

  return with_path(path, [&]() -> GevSpec {
    switch (variant) {
      case Variant::kMnl:
        return GevSpec::mnl(require_n());
      case Variant::kNl: {
        const json& nests = field(doc, path, "nests");
        if (!nests.is_array()) fail(path + ".nests", "expected an array");
        std::vector<std::vector<std::size_t>> groups;
        for (std::size_t k = 0; k < nests.size(); ++k) {
          const std::string np = path + ".nests[" + std::to_string(k) + "]";
          groups.push_back(as_indices(field(nests[k], np, "members"), np + ".members"));
        }
        auto lambdas = require_lambdas(doc, path, groups.size());
        return GevSpec::nested(require_n(), std::move(groups), std::move(lambdas));
      }
      case Variant::kGnl:
      case Variant::kCnl: {
        const auto alpha = as_matrix(field(doc, path, "alpha"), path + ".alpha");
        if (n && *n != alpha.size()) fail(path + ".alpha", "row count differs from n");
        const std::size_t k_count = alpha.empty() ? 0 : alpha.front().size();
        const auto lambdas = require_lambdas(doc, path, k_count);
        if (variant == Variant::kGnl) return GevSpec::generalized(alpha, lambdas);
        for (double l : lambdas) {
          if (l != lambdas.front()) fail(path, "cnl: all nests must share one lambda");
        }
        if (lambdas.empty()) fail(path, "cnl: missing lambda");
        return GevSpec::cross_nested(alpha, lambdas.front());
      }
      case Variant::kPcl: {
        const std::size_t size = require_n();
        const std::size_t pairs = size >= 2 ? size * (size - 1) / 2 : 0;
        return GevSpec::paired_combinatorial(size, require_lambdas(doc, path, pairs));
      }
      case Variant::kOgev: {
        const std::size_t size = require_n();
        const std::size_t overlap = as_index(field(doc, path, "overlap"), path + ".overlap");
        std::vector<std::vector<double>> alpha;
        if (doc.contains("alpha")) alpha = as_matrix(doc["alpha"], path + ".alpha");
        return GevSpec::ordered(size, overlap, require_lambdas(doc, path, size + overlap),
                                alpha);
      }
      case Variant::kPdgev: {
        const json& attrs = field(doc, path, "attributes");
        if (!attrs.is_array()) fail(path + ".attributes", "expected an array");
        std::vector<Attribute> attributes;
        for (std::size_t d = 0; d < attrs.size(); ++d) {
          const std::string ap = path + ".attributes[" + std::to_string(d) + "]";
          Attribute a;
          a.weight = as_number(field(attrs[d], ap, "weight"), ap + ".weight");
          a.lambda = as_number(field(attrs[d], ap, "lambda"), ap + ".lambda");
          const json& groups = field(attrs[d], ap, "groups");
          if (!groups.is_array()) fail(ap + ".groups", "expected an array");
          for (std::size_t g = 0; g < groups.size(); ++g) {
            a.groups.push_back(
                as_indices(groups[g], ap + ".groups[" + std::to_string(g) + "]"));
          }
          attributes.push_back(std::move(a));
        }
        return GevSpec::differentiated(require_n(), std::move(attributes));
      }
    }
    fail(path, "unhandled variant");
  });
}

json game_to_json(const NormalFormGame& game) {
  return {{"players", game.players()},
          {"strategies", game.strategies()},
          {"utilities", game.utilities()}};
}

NormalFormGame game_from_json(const json& doc, const std::string& path) {
  if (!doc.is_object()) fail(path, "expected an object");
  const std::size_t players = as_index(field(doc, path, "players"), path + ".players");
  const std::size_t strategies = as_index(field(doc, path, "strategies"), path + ".strategies");
  auto utilities = as_matrix(field(doc, path, "utilities"), path + ".utilities");
  try {
    return NormalFormGame(players, strategies, std::move(utilities));
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                          ": JSON parse error: " + e.what());
  }
}

}  // namespace gevlearn
