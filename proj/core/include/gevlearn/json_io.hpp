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

#ifndef GEVLEARN_JSON_IO_HPP_
#define GEVLEARN_JSON_IO_HPP_

#include <nlohmann/json.hpp>
#include <string>

#include "gevlearn/games.hpp"
#include "gevlearn/gev_spec.hpp"

namespace gevlearn {

// GEV model documents. The canonical form written by spec_to_json is
//
//   {"variant": "nl", "n": 3,
//    "nests": [{"members": [0, 1], "lambda": 0.5}, {"members": [2], "lambda": 1}],
//    "alpha": [[...], ...],          // N x K, omitted for mnl / nl
//    "overlap": 1,                   // ogev only
//    "attributes": [{"weight": 0.5, "lambda": 0.4, "groups": [[0, 1], [2]]}]}  // pdgev
//
// spec_from_json also accepts shorthands: a scalar "lambda" or a "lambdas"
// array instead of per-nest parameters, and for pcl / ogev / pdgev the nests
// may be omitted and are generated from n, overlap or attributes. Members are
// zero-based. Errors are ValidationError messages prefixed by the field path.
nlohmann::json spec_to_json(const GevSpec& spec);
GevSpec spec_from_json(const nlohmann::json& doc, const std::string& path = "spec");

// {"players": P, "strategies": N, "utilities": [[N^P values], ...]}
nlohmann::json game_to_json(const NormalFormGame& game);
NormalFormGame game_from_json(const nlohmann::json& doc, const std::string& path = "game");

// Parses text, converting parse errors into ValidationError with the line
// and column of the failure.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

}  // namespace gevlearn

#endif  // GEVLEARN_JSON_IO_HPP_
