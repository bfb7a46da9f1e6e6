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

#include "subwelf/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "subwelf/common.hpp"

namespace subwelf {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  require(it != j.end(), std::string("game JSON is missing field ") + name);
  return *it;
}

int int_field(const json& j, const char* name) {
  const json& v = field(j, name);
  require(v.is_number_integer(), std::string("game JSON field ") + name + " must be an integer");
  return v.get<int>();
}

double number_field(const json& j, const char* name) {
  const json& v = field(j, name);
  require(v.is_number(), std::string("game JSON field ") + name + " must be a number");
  return v.get<double>();
}

std::string string_field(const json& j, const char* name) {
  const json& v = field(j, name);
  require(v.is_string(), std::string("game JSON field ") + name + " must be a string");
  return v.get<std::string>();
}

const json& array_field(const json& j, const char* name) {
  const json& v = field(j, name);
  require(v.is_array(), std::string("game JSON field ") + name + " must be an array");
  return v;
}

std::vector<int> int_vector(const json& v, const char* name) {
  require(v.is_array(), std::string("game JSON field ") + name + " must be an array");
  std::vector<int> out;
  out.reserve(v.size());
  for (const json& e : v) {
    require(e.is_number_integer(), std::string("game JSON field ") + name +
                                       " must hold integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<double> double_vector(const json& v, const char* name) {
  require(v.is_array(), std::string("game JSON field ") + name + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    require(e.is_number(), std::string("game JSON field ") + name + " must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::string> string_vector(const json& v, const char* name) {
  require(v.is_array(), std::string("game JSON field ") + name + " must be an array");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const json& e : v) {
    require(e.is_string(), std::string("game JSON field ") + name + " must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

json coverage_to_json(const SetFunction& f) {
  const CoverageCore& core = f.coverage_core();
  json covers = json::array();
  for (const std::vector<int>& c : core.covers) covers.push_back(c);
  json out;
  out["ground"] = f.ground().elements();
  out["universe"] = core.universe;
  out["weights"] = core.weights;
  out["covers"] = std::move(covers);
  return out;
}

json prior_to_json(const Prior& prior) {
  json out;
  if (prior.product_form()) {
    out["form"] = "product";
    json marginals = json::array();
    for (int i = 0; i < prior.num_players(); ++i) {
      json row = json::array();
      for (int t = 0; t < prior.num_types(i); ++t) row.push_back(prior.marginal(i, t));
      marginals.push_back(std::move(row));
    }
    out["marginals"] = std::move(marginals);
  } else {
    out["form"] = "joint";
    std::vector<Prior::SupportEntry> support = prior.expanded_support();
    std::sort(support.begin(), support.end(),
              [](const Prior::SupportEntry& a, const Prior::SupportEntry& b) {
                return a.first < b.first;
              });
    json profiles = json::array();
    for (const auto& [types, p] : support) {
      json entry;
      entry["types"] = types;
      entry["p"] = p;
      profiles.push_back(std::move(entry));
    }
    out["profiles"] = std::move(profiles);
  }
  return out;
}

Prior prior_from_json(const json& j, std::vector<std::vector<std::string>> type_names) {
  const std::string form = string_field(j, "form");
  if (form == "product") {
    const json& rows = array_field(j, "marginals");
    std::vector<std::vector<double>> marginals;
    for (const json& row : rows) marginals.push_back(double_vector(row, "marginals"));
    return Prior::product(std::move(type_names), std::move(marginals));
  }
  require(form == "joint", "game JSON prior form must be joint or product");
  const json& profiles = array_field(j, "profiles");
  std::vector<Prior::SupportEntry> support;
  for (const json& entry : profiles) {
    support.emplace_back(int_vector(field(entry, "types"), "types"),
                         number_field(entry, "p"));
  }
  return Prior::joint(std::move(type_names), std::move(support));
}

json utilities_to_json(const UtilityModel& u) {
  json out;
  switch (u.kind) {
    case UtilityModel::Kind::kExplicitTable: {
      out["variant"] = "explicit_table";
      json rows = json::array();
      for (const auto& [profile, payoffs] : u.table) {
        json row;
        row["profile"] = profile;
        row["payoffs"] = payoffs;
        rows.push_back(std::move(row));
      }
      out["table"] = std::move(rows);
      break;
    }
    case UtilityModel::Kind::kBasicDerived:
      out["variant"] = "basic_derived";
      break;
    case UtilityModel::Kind::kEqualShareCoverage:
      out["variant"] = "equal_share_coverage";
      break;
    case UtilityModel::Kind::kPriorityShareCoverage:
      out["variant"] = "priority_share_coverage";
      out["priority_class"] = u.priority_class;
      break;
    case UtilityModel::Kind::kProportionalShareWeights: {
      out["variant"] = "proportional_share_weights";
      json payoffs = json::array();
      for (const UtilityModel::ConcavePayoff& p : u.resource_payoffs) {
        json row;
        row["resource"] = p.resource;
        json points = json::array();
        for (const auto& [x, y] : p.points) points.push_back(json::array({x, y}));
        row["points"] = std::move(points);
        payoffs.push_back(std::move(row));
      }
      out["resource_payoffs"] = std::move(payoffs);
      out["action_weight"] = u.action_weight;
      json resources = json::array();
      for (const std::vector<int>& r : u.action_resources) resources.push_back(r);
      out["action_resources"] = std::move(resources);
      break;
    }
  }
  return out;
}

UtilityModel utilities_from_json(const json& j) {
  UtilityModel out;
  const std::string variant = string_field(j, "variant");
  if (variant == "explicit_table") {
    out.kind = UtilityModel::Kind::kExplicitTable;
    for (const json& row : array_field(j, "table")) {
      out.table[int_vector(field(row, "profile"), "profile")] =
          double_vector(field(row, "payoffs"), "payoffs");
    }
  } else if (variant == "basic_derived") {
    out.kind = UtilityModel::Kind::kBasicDerived;
  } else if (variant == "equal_share_coverage") {
    out.kind = UtilityModel::Kind::kEqualShareCoverage;
  } else if (variant == "priority_share_coverage") {
    out.kind = UtilityModel::Kind::kPriorityShareCoverage;
    out.priority_class = int_vector(field(j, "priority_class"), "priority_class");
  } else if (variant == "proportional_share_weights") {
    out.kind = UtilityModel::Kind::kProportionalShareWeights;
    for (const json& row : array_field(j, "resource_payoffs")) {
      UtilityModel::ConcavePayoff p;
      p.resource = string_field(row, "resource");
      for (const json& point : array_field(row, "points")) {
        require(point.is_array() && point.size() == 2,
                "game JSON payoff points must be [load, value] pairs");
        p.points.emplace_back(point[0].get<double>(), point[1].get<double>());
      }
      out.resource_payoffs.push_back(std::move(p));
    }
    out.action_weight = double_vector(field(j, "action_weight"), "action_weight");
    for (const json& r : array_field(j, "action_resources")) {
      out.action_resources.push_back(int_vector(r, "action_resources"));
    }
  } else {
    throw InputError("unknown utilities variant: " + variant);
  }
  return out;
}

}  // namespace

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

json set_function_to_json(const SetFunction& f) {
  switch (f.kind()) {
    case SetFunction::Kind::kWeightedCoverage: {
      json out = coverage_to_json(f);
      out["variant"] = "weighted_coverage";
      return out;
    }
    case SetFunction::Kind::kPrioritySharingCoverage: {
      json out = coverage_to_json(f);
      out["variant"] = "priority_sharing_coverage";
      out["player_class"] = f.priority_classes();
      return out;
    }
    case SetFunction::Kind::kExplicitTable: {
      json out;
      out["variant"] = "explicit_table";
      out["ground"] = f.ground().elements();
      out["table"] = f.table();
      return out;
    }
    case SetFunction::Kind::kStrategicLift:
      break;
  }
  throw InputError("strategic-lift set functions are in-memory only and cannot be serialized");
}

SetFunction set_function_from_json(const json& j) {
  const std::string variant = string_field(j, "variant");
  GroundSet ground(string_vector(array_field(j, "ground"), "ground"));
  if (variant == "explicit_table") {
    return SetFunction::explicit_table(std::move(ground),
                                       double_vector(array_field(j, "table"), "table"));
  }
  CoverageCore core;
  core.universe = string_vector(array_field(j, "universe"), "universe");
  core.weights = double_vector(array_field(j, "weights"), "weights");
  for (const json& c : array_field(j, "covers")) core.covers.push_back(int_vector(c, "covers"));
  if (variant == "weighted_coverage") {
    return SetFunction::weighted_coverage(std::move(ground), std::move(core));
  }
  if (variant == "priority_sharing_coverage") {
    return SetFunction::priority_sharing_coverage(
        std::move(ground), std::move(core),
        int_vector(field(j, "player_class"), "player_class"));
  }
  throw InputError("unknown welfare variant: " + variant);
}

json game_to_json(const GameDefinition& g) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["players"] = g.num_players();
  json types = json::array();
  for (const std::vector<std::string>& names : g.prior.type_names()) types.push_back(names);
  out["types"] = std::move(types);
  out["prior"] = prior_to_json(g.prior);
  json actions = json::array();
  for (int i = 0; i < g.num_players(); ++i) {
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      json entry;
      entry["player"] = i;
      entry["type"] = t;
      entry["ids"] = g.action_set(i, t);
      actions.push_back(std::move(entry));
    }
  }
  out["actions"] = std::move(actions);
  out["nulls"] = g.actions.null_action;
  out["welfare"] = set_function_to_json(g.welfare);
  out["utilities"] = utilities_to_json(g.utilities);
  return out;
}

GameDefinition game_from_json(const json& j) {
  require(j.is_object(), "game JSON must be an object");
  const int version = int_field(j, "schema_version");
  require(version == kSchemaVersion,
          "unsupported schema_version " + std::to_string(version) + "; this build reads " +
              std::to_string(kSchemaVersion));
  const int players = int_field(j, "players");
  require(players >= 1, "game JSON needs at least one player");

  const json& types = array_field(j, "types");
  require(static_cast<int>(types.size()) == players,
          "game JSON types must list one name array per player");
  std::vector<std::vector<std::string>> type_names;
  for (const json& row : types) type_names.push_back(string_vector(row, "types"));

  Prior prior = prior_from_json(field(j, "prior"), type_names);

  ActionFamily family;
  family.actions.resize(players);
  for (int i = 0; i < players; ++i) {
    family.actions[i].resize(type_names[i].size());
  }
  std::vector<std::vector<bool>> seen(players);
  for (int i = 0; i < players; ++i) seen[i].resize(type_names[i].size(), false);
  for (const json& entry : array_field(j, "actions")) {
    const int player = int_field(entry, "player");
    const int type = int_field(entry, "type");
    require(player >= 0 && player < players, "game JSON action entry has a player out of range");
    require(type >= 0 && type < static_cast<int>(type_names[player].size()),
            "game JSON action entry has a type out of range");
    require(!seen[player][type], "game JSON lists the same player/type action set twice");
    seen[player][type] = true;
    family.actions[player][type] = int_vector(field(entry, "ids"), "ids");
  }
  for (int i = 0; i < players; ++i) {
    for (std::size_t t = 0; t < seen[i].size(); ++t) {
      require(seen[i][t], "game JSON is missing an action set for player " + std::to_string(i) +
                              " type " + std::to_string(t));
    }
  }
  family.null_action = int_vector(array_field(j, "nulls"), "nulls");

  SetFunction welfare = set_function_from_json(field(j, "welfare"));
  UtilityModel utilities = utilities_from_json(field(j, "utilities"));
  return make_game(std::move(prior), std::move(family), std::move(welfare),
                   std::move(utilities));
}

GameDefinition read_game_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open game file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("cannot parse game file " + path + ": " + e.what());
  }
  return game_from_json(j);
}

void write_game_file(const GameDefinition& g, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot open output file: " + path);
  out << canonical_dump(game_to_json(g));
  require(out.good(), "failed writing game file: " + path);
}

json to_json(const McEstimate& e) {
  json out;
  out["estimate"] = e.estimate;
  out["stderr_of_mean"] = e.stderr_of_mean;
  out["samples"] = e.samples;
  out["seed"] = e.seed;
  out["rng"] = e.rng;
  return out;
}

json to_json(const MonotoneSubmodularReport& r) {
  json out;
  out["exhaustive"] = r.exhaustive;
  out["checks"] = r.checks;
  out["seed"] = r.seed;
  out["monotone"] = r.monotone;
  out["submodular"] = r.submodular;
  if (r.monotone_witness) {
    json w;
    w["subset"] = r.monotone_witness->subset;
    w["element"] = r.monotone_witness->element;
    w["value_without"] = r.monotone_witness->value_without;
    w["value_with"] = r.monotone_witness->value_with;
    out["monotone_witness"] = std::move(w);
  }
  if (r.submodular_witness) {
    json w;
    w["smaller"] = r.submodular_witness->smaller;
    w["larger"] = r.submodular_witness->larger;
    w["element"] = r.submodular_witness->element;
    w["marginal_smaller"] = r.submodular_witness->marginal_smaller;
    w["marginal_larger"] = r.submodular_witness->marginal_larger;
    out["submodular_witness"] = std::move(w);
  }
  return out;
}

json to_json(const ValidationReport& r) {
  json out;
  out["ok"] = r.ok;
  out["null_actions_neutral"] = r.null_actions_neutral;
  out["welfare_evidence"] = to_json(r.welfare_evidence);
  out["notes"] = r.notes;
  return out;
}

namespace {

json witness_to_json(const ConditionWitness& w) {
  json out;
  out["profile"] = w.profile;
  out["player"] = w.player;
  out["lhs"] = w.lhs;
  out["rhs"] = w.rhs;
  return out;
}

}  // namespace

json to_json(const ValidConditionsReport& r) {
  json out;
  out["profiles_checked"] = r.profiles_checked;
  out["total_utility_ok"] = r.total_utility_ok;
  out["marginal_ok"] = r.marginal_ok;
  out["valid"] = r.valid();
  out["basic"] = r.basic;
  out["max_basic_gap"] = r.max_basic_gap;
  if (r.total_utility_witness) out["total_utility_witness"] = witness_to_json(*r.total_utility_witness);
  if (r.marginal_witness) out["marginal_witness"] = witness_to_json(*r.marginal_witness);
  return out;
}

json to_json(const IndependenceReport& r) {
  json out;
  out["independent"] = r.independent;
  out["max_deviation"] = r.max_deviation;
  return out;
}

json to_json(const OptimalProfileCertificate& c) {
  json out;
  out["opt"] = c.opt;
  json entries = json::array();
  for (std::size_t s = 0; s < c.support.size(); ++s) {
    json entry;
    entry["types"] = c.support[s].first;
    entry["p"] = c.support[s].second;
    entry["argmax"] = c.argmax[s];
    entry["best_welfare"] = c.best_welfare[s];
    entries.push_back(std::move(entry));
  }
  out["per_type_profile"] = std::move(entries);
  return out;
}

json to_json(const SrGapReport& r) {
  json out;
  out["opt"] = r.opt;
  out["str"] = r.str;
  out["str_exact"] = r.str_exact;
  out["vacuous"] = r.vacuous;
  if (r.gap) out["gap"] = *r.gap;
  return out;
}

json to_json(const SrBoundAuditReport& r) {
  json out;
  out["num_players"] = r.num_players;
  out["sqrt_n"] = r.sqrt_n;
  out["opt"] = r.opt;
  out["str"] = r.str;
  out["str_exact"] = r.str_exact;
  out["term_light_marginal"] = r.term_light_marginal;
  out["term_light_union"] = r.term_light_union;
  out["term_heavy_union"] = r.term_heavy_union;
  out["term_strategic_floor"] = r.term_strategic_floor;
  out["exact_terms"] = r.exact_terms;
  out["samples"] = r.samples;
  out["seed"] = r.seed;
  out["rng"] = r.rng;
  json rows = json::array();
  for (const AuditInequality& q : r.inequalities) {
    json row;
    row["name"] = q.name;
    row["lhs"] = q.lhs;
    row["rhs"] = q.rhs;
    row["band"] = q.band;
    row["holds"] = q.holds;
    rows.push_back(std::move(row));
  }
  out["inequalities"] = std::move(rows);
  out["all_hold"] = r.all_hold;
  return out;
}

json to_json(const Violation& v) {
  json out;
  out["player"] = v.player;
  out["type"] = v.type;
  out["misreport_type"] = v.misreport_type;
  out["deviation"] = v.deviation;
  out["gain"] = v.gain;
  return out;
}

json to_json(const TypeDependentDistribution& pi) {
  json slices = json::array();
  for (const TypeDependentDistribution::Slice& slice : pi.slices) {
    json mass = json::array();
    for (const auto& [profile, w] : slice.mass) {
      json entry;
      entry["actions"] = profile;
      entry["w"] = w;
      mass.push_back(std::move(entry));
    }
    json s;
    s["types"] = slice.types;
    s["mass"] = std::move(mass);
    slices.push_back(std::move(s));
  }
  json out;
  out["slices"] = std::move(slices);
  return out;
}

json to_json(const StrategyDistribution& sigma) {
  json mass = json::array();
  for (const auto& [profile, w] : sigma.mass) {
    json entry;
    json action = json::array();
    for (const std::vector<int>& row : profile.action) action.push_back(row);
    entry["action"] = std::move(action);
    entry["w"] = w;
    mass.push_back(std::move(entry));
  }
  json out;
  out["mass"] = std::move(mass);
  return out;
}

namespace {

const char* lp_status_name(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

}  // namespace

json to_json(const EquilibriumResult& r) {
  json out;
  out["concept"] = concept_name(r.concept_id);
  out["sense"] = r.sense == Sense::kMin ? "min" : "max";
  out["value"] = r.value;
  out["status"] = lp_status_name(r.status);
  out["none_found"] = r.none_found;
  out["max_violation"] = r.max_violation;
  if (r.pi) out["pi"] = to_json(*r.pi);
  if (r.sigma) out["sigma"] = to_json(*r.sigma);
  return out;
}

json to_json(const RatioReport& r) {
  json out;
  out["concept"] = concept_name(r.concept_id);
  out["sense"] = r.sense == Sense::kMin ? "min" : "max";
  out["opt"] = r.opt;
  out["welfare"] = r.welfare;
  out["vacuous"] = r.vacuous;
  out["none_found"] = r.none_found;
  if (r.ratio) out["ratio"] = *r.ratio;
  return out;
}

json to_json(const LatticeReport& r) {
  json arrows = json::array();
  for (const LatticeArrowReport& a : r.arrows) {
    json row;
    row["sub"] = concept_name(a.sub);
    row["super"] = concept_name(a.super);
    row["sub_min"] = a.sub_min;
    row["sub_max"] = a.sub_max;
    row["super_min"] = a.super_min;
    row["super_max"] = a.super_max;
    row["holds"] = a.holds;
    arrows.push_back(std::move(row));
  }
  json out;
  out["arrows"] = std::move(arrows);
  out["skipped"] = r.skipped;
  out["all_hold"] = r.all_hold;
  return out;
}

}  // namespace subwelf
