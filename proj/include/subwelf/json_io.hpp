// Copyright 2026 The Subwelf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUBWELF_JSON_IO_HPP_
#define SUBWELF_JSON_IO_HPP_

#include <string>

#include "json.hpp"
#include "subwelf/equilibria.hpp"
#include "subwelf/game.hpp"
#include "subwelf/submodular.hpp"
#include "subwelf/welfare.hpp"

namespace subwelf {

// Version tag embedded in every serialized game; mismatches are refused on
// load so older tools never misread newer files.
inline constexpr int kSchemaVersion = 1;

// Canonical text form: sorted object keys, two-space indent, one trailing
// newline. Equal documents always produce byte-identical strings.
std::string canonical_dump(const nlohmann::json& j);

// Welfare set functions serialize as {variant, ground, ...}. Strategic-lift
// functions are in-memory only and are refused.
nlohmann::json set_function_to_json(const SetFunction& f);
SetFunction set_function_from_json(const nlohmann::json& j);

// Full game schema: {schema_version, players, types, prior, actions, nulls,
// welfare, utilities}. Loading re-runs every make_game consistency check.
nlohmann::json game_to_json(const GameDefinition& g);
GameDefinition game_from_json(const nlohmann::json& j);

GameDefinition read_game_file(const std::string& path);
void write_game_file(const GameDefinition& g, const std::string& path);

// Report serializers used by the command-line output assembly.
nlohmann::json to_json(const McEstimate& e);
nlohmann::json to_json(const MonotoneSubmodularReport& r);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const ValidConditionsReport& r);
nlohmann::json to_json(const IndependenceReport& r);
nlohmann::json to_json(const OptimalProfileCertificate& c);
nlohmann::json to_json(const SrGapReport& r);
nlohmann::json to_json(const SrBoundAuditReport& r);
nlohmann::json to_json(const Violation& v);
nlohmann::json to_json(const TypeDependentDistribution& pi);
nlohmann::json to_json(const StrategyDistribution& sigma);
nlohmann::json to_json(const EquilibriumResult& r);
nlohmann::json to_json(const RatioReport& r);
nlohmann::json to_json(const LatticeReport& r);

}  // namespace subwelf

#endif  // SUBWELF_JSON_IO_HPP_
