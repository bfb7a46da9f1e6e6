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

#ifndef SUBWELF_GAME_HPP_
#define SUBWELF_GAME_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subwelf/submodular.hpp"

namespace subwelf {

// Type profiles and action profiles are index vectors, one entry per player.
// Action profiles hold welfare-ground element ids.

// Finite common prior over type profiles. Stored either as a sparse joint
// support list (arbitrary correlation) or in product form (independent
// per-player marginals, used when the joint support would be astronomically
// large). Types with zero marginal probability are rejected at construction.
class Prior {
 public:
  using SupportEntry = std::pair<std::vector<int>, double>;

  static Prior joint(std::vector<std::vector<std::string>> type_names,
                     std::vector<SupportEntry> support);
  static Prior product(std::vector<std::vector<std::string>> type_names,
                       std::vector<std::vector<double>> marginals);

  int num_players() const { return static_cast<int>(type_names_.size()); }
  int num_types(int player) const { return static_cast<int>(type_names_[player].size()); }
  const std::vector<std::vector<std::string>>& type_names() const { return type_names_; }
  bool product_form() const { return product_form_; }

  // Sparse joint support. For product-form priors this materializes the full
  // type product and is budget-gated.
  std::vector<SupportEntry> expanded_support(const Budget& budget = {}) const;

  double marginal(int player, int type) const;
  // Joint probability of a full type profile (0 off support).
  double probability(const std::vector<int>& profile) const;

  // Conditional distribution given player `player` has type `type`, returned
  // as full profiles whose `player` coordinate equals `type`.
  std::vector<SupportEntry> conditional(int player, int type,
                                        const Budget& budget = {}) const;

  std::vector<int> sample(Rng& rng) const;

 private:
  Prior() = default;

  std::vector<std::vector<std::string>> type_names_;
  bool product_form_ = false;
  std::vector<SupportEntry> support_;               // joint form
  std::map<std::vector<int>, double> support_map_;  // joint form
  std::vector<std::vector<double>> marginals_;      // both forms
};

struct IndependenceReport {
  bool independent = true;
  double max_deviation = 0.0;  // |rho(theta) - prod_i rho_i(theta_i)| maximum
};

IndependenceReport is_independent(const Prior& prior);

// Per-player, per-type action sets. Action ids index the welfare ground.
// Sets are disjoint across players and across types of the same player; in
// addition every player has a null action that is neutral for the welfare
// function and is never recommended or deviated to.
struct ActionFamily {
  std::vector<std::vector<std::vector<int>>> actions;  // [player][type] -> ground ids
  std::vector<int> null_action;                        // [player] -> ground id
};

// How per-player payoffs are derived from an action profile.
//
//   ExplicitTable            payoffs listed per action profile
//   BasicDerived             v_i = SW(a) - SW(null_i, a_-i)
//   EqualShareCoverage       each covered universe element's weight is split
//                            equally among the players covering it
//   PriorityShareCoverage    weight goes to the covering players of the best
//                            (lowest) priority class, split equally there
//   ProportionalShareWeights resource model: each used resource e pays
//                            u_e(load) split in proportion to player weights
struct UtilityModel {
  enum class Kind {
    kExplicitTable,
    kBasicDerived,
    kEqualShareCoverage,
    kPriorityShareCoverage,
    kProportionalShareWeights,
  };

  struct ConcavePayoff {
    std::string resource;
    // Piecewise-linear through (0,0) and these breakpoints; extrapolates the
    // final segment. Validated concave, nondecreasing, nonnegative.
    std::vector<std::pair<double, double>> points;
    double at(double load) const;
  };

  Kind kind = Kind::kBasicDerived;

  // kPriorityShareCoverage: lower class value = higher priority.
  std::vector<int> priority_class;

  // kProportionalShareWeights, all aligned with the welfare ground.
  std::vector<ConcavePayoff> resource_payoffs;
  std::vector<double> action_weight;
  std::vector<std::vector<int>> action_resources;

  // kExplicitTable: key is the action profile (ground ids, one per player).
  std::map<std::vector<int>, std::vector<double>> table;
};

// Pure strategy profile: one action per (player, type).
struct StrategyProfile {
  std::vector<std::vector<int>> action;  // [player][type] -> ground id
};

struct GameDefinition {
  Prior prior;
  ActionFamily actions;
  SetFunction welfare;
  UtilityModel utilities;

  // Derived at construction.
  std::vector<int> owner_player;  // per ground element
  std::vector<int> owner_type;    // -1 for null actions
  std::vector<int> owner_slot;    // position within the owning action set, -1 for nulls
  bool is_null(int element) const { return owner_type[element] < 0; }

  int num_players() const { return prior.num_players(); }
  const std::vector<int>& action_set(int player, int type) const {
    return actions.actions[player][type];
  }
};

// Validates and assembles a game: action sets disjoint and covering the
// welfare ground together with the null actions, null actions f-neutral,
// utility data consistent with the chosen kind.
GameDefinition make_game(Prior prior, ActionFamily actions, SetFunction welfare,
                         UtilityModel utilities);

double social_welfare(const GameDefinition& g, std::span<const int> profile);

// Per-player payoffs at an action profile. Profiles may mix actions from any
// types (each action identifies its owner type); nulls are not allowed here.
std::vector<double> utility_vector(const GameDefinition& g, std::span<const int> profile);

struct ValidationReport {
  bool ok = true;
  bool null_actions_neutral = true;
  MonotoneSubmodularReport welfare_evidence;
  std::vector<std::string> notes;
};

// Structural and welfare-function sanity. Uses the exhaustive
// monotone-submodular check when it fits the budget, otherwise seeded
// sampling (noted in the report).
ValidationReport validate_game(const GameDefinition& g, const Budget& budget = {},
                               std::uint64_t sample_seed = 1);

struct ConditionWitness {
  std::vector<int> profile;
  int player = -1;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ValidConditionsReport {
  std::int64_t profiles_checked = 0;
  bool total_utility_ok = true;   // SW(a) >= sum_i v_i(a)
  bool marginal_ok = true;        // v_i(a) >= SW(a) - SW(null_i, a_-i)
  bool basic = true;              // marginal condition holds with equality
  double max_basic_gap = 0.0;
  std::optional<ConditionWitness> total_utility_witness;
  std::optional<ConditionWitness> marginal_witness;
  bool valid() const { return total_utility_ok && marginal_ok; }
};

// Exhaustively checks the two payoff conditions over every action profile
// (all cross-type combinations); refuses past the budget.
ValidConditionsReport check_valid_conditions(const GameDefinition& g,
                                             const Budget& budget = {});

void validate_strategy(const GameDefinition& g, const StrategyProfile& s);

// Actions chosen by strategy s at type profile theta.
std::vector<int> play(const GameDefinition& g, const StrategyProfile& s,
                      std::span<const int> theta);

// E_theta[SW(s(theta))], exact over the expanded support.
double expected_strategy_welfare(const GameDefinition& g, const StrategyProfile& s,
                                 const Budget& budget = {});

struct StrategicFormResult {
  GameDefinition game;
  // strategy_actions[i][k][t] = base-game action of player i's k-th strategy
  // at type t; new ground element k of player i represents that strategy.
  std::vector<std::vector<std::vector<int>>> strategy_actions;
};

// One-shot complete-information game induced over pure strategies: single
// type per player, strategies as actions, welfare lifted through the prior,
// payoffs in expectation. Preserves the valid/basic conditions.
StrategicFormResult strategic_form(const GameDefinition& g, const Budget& budget = {});

}  // namespace subwelf

#endif  // SUBWELF_GAME_HPP_
