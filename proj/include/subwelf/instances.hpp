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

#ifndef SUBWELF_INSTANCES_HPP_
#define SUBWELF_INSTANCES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subwelf/common.hpp"
#include "subwelf/equilibria.hpp"
#include "subwelf/game.hpp"
#include "subwelf/submodular.hpp"

namespace subwelf {

// Two-player basic coverage game with a mediation gap. Player 0 has two
// single-action types (weights 2 and 1 on separate items); player 1 has one
// type whose two actions trade a small epsilon item against the big one.
// First-best welfare is (5+epsilon)/2 while every pure strategy profile and
// every truthful mediator tops out at 2+epsilon.
GameDefinition make_figure2_game(double epsilon);

// Priority-sharing coverage game over n unit-weight elements. High-priority
// players (class 0) may claim any element; each low-priority player (class 1)
// holds a single uniformly drawn element as its only action and loses every
// shared element to the high class. The bundled mediator matches reported
// low elements to distinct high players, drawing the assignment uniformly;
// when the groups are unequal the leftover side is completed with the
// lowest-indexed elements not yet recommended.
struct PriorityGame {
  GameDefinition game;
  TypeDependentDistribution mediator;
  int num_high = 0;
  int num_low = 0;
};

// num_high < 0 selects the even split, which requires n to be even.
PriorityGame make_priority_game(int n, int num_high = -1, const Budget& budget = {});

// Correlated-prior coverage game on a k x n cell grid. Each player has n^k
// types (vectors in [0,n)^k) and k actions per type; action h of type l
// covers cell (h, l[h]). The prior draws an axis j, a base vector, and a
// permutation assigning distinct axis-j values to the players, so aligned
// play covers n distinct cells while type-measurable strategies cannot tell
// the axis apart. Refuses with a pointer to grid_strategy_welfare when the
// joint support exceeds the enumeration budget.
GameDefinition make_grid_game(int n, int k, const Budget& budget = {});

// Tabulated grid strategy: action[i][c] is an axis index in [0, k) for
// player i holding the type whose coordinates encode to c (coordinate 0 is
// the most significant digit, radix n, matching the type order of
// make_grid_game).
struct GridStrategy {
  std::vector<std::vector<int>> action;
};

GridStrategy random_grid_strategy(int n, int k, std::uint64_t seed);

// Monte Carlo expected welfare of a grid strategy with the prior represented
// implicitly as (axis, base vector, permutation) draws, usable far beyond
// the enumeration budget of make_grid_game. The estimate is never exact.
McEstimate grid_strategy_welfare(int n, int k, const GridStrategy& strategy,
                                 std::int64_t samples, std::uint64_t seed);

// Independent-prior coverage game over n unit elements. Each player's type
// space is the empirical distribution of `draws` seeded random action sets,
// each containing a given element with probability edge_probability
// (defaulting to 2 ln(n)/n, with empty draws redrawn). A desk-scale
// surrogate for the intractable full subset type space; results on it are
// trend-level only.
GameDefinition make_bipartite_game(int n, std::uint64_t seed, int draws = 32,
                                   double edge_probability = -1.0);

// Trend-level strategy-representability proxy for games whose actions each
// cover exactly one unit-weight universe item under an independent prior.
// The strategy side is exact block-coordinate ascent on the factorized
// coverage expectation; the first-best side samples type profiles and solves
// a maximum bipartite matching between players and items for each draw.
struct BipartiteSrReport {
  double str_local = 0.0;  // exact expected welfare of the best strategy found
  McEstimate opt;          // sampled per-type-profile matching optimum
  double proxy = 0.0;      // str_local / opt.estimate
  int restarts = 0;
};

BipartiteSrReport bipartite_sr_proxy(const GameDefinition& game,
                                     std::int64_t samples = 2000, int restarts = 8,
                                     std::uint64_t seed = 3);

// Seeded coverage game generator for property suites. Universe weights,
// cover sets, and the prior are drawn from the seed; sizes are taken
// literally, so keep them at test scale.
struct RandomGameSpec {
  int num_players = 2;
  int types_per_player = 2;
  int actions_per_type = 2;
  bool correlated_prior = false;       // product prior otherwise
  bool equal_share_utilities = false;  // marginal-contribution payoffs otherwise
  std::uint64_t seed = 1;
};

GameDefinition make_random_game(const RandomGameSpec& spec);

// Shared-resource game: each player picks a bundle of resources, each
// resource pays a concave function of the total selected weight, and the
// payout is split among its users in proportion to their weights. Types
// carry both the player's weight and the menu of bundles, so uncertain
// weights and uncertain action sets are both expressible.
struct ResourceChoice {
  std::string name;
  std::vector<int> resources;  // indices into ResourceAllocationSpec::resources
};

struct ResourceTypeSpec {
  std::string name;
  double weight = 1.0;
  std::vector<ResourceChoice> choices;
};

struct ResourcePlayerSpec {
  std::vector<ResourceTypeSpec> types;
  std::vector<double> marginal;  // empty selects uniform; normalized otherwise
};

struct ResourceAllocationSpec {
  std::vector<std::string> resources;
  // Per resource: piecewise-linear breakpoints (load, value) through (0, 0).
  std::vector<std::vector<std::pair<double, double>>> payoff_points;
  std::vector<ResourcePlayerSpec> players;
};

GameDefinition make_resource_allocation_game(const ResourceAllocationSpec& spec);

// Two players with uncertain weights {1, 2} picking one of two resources
// that each pay min(load, 2).
ResourceAllocationSpec reference_resource_spec();

// Two commuters on a four-node diamond network with uncertain
// origin-destination types and two paths per type.
ResourceAllocationSpec reference_routing_spec();

// Named, parameterized instance constructions, mirrored by the CLI
// `generate` subcommand. Expected analytic quantities are carried along for
// reporting; they are assertions of the reference suites, not inputs.
struct InstanceRecipe {
  std::string name;
  std::map<std::string, double> parameters;
  std::uint64_t seed = 1;
  std::map<std::string, double> expected;
};

GameDefinition make_from_recipe(const InstanceRecipe& recipe);

// The reference instances exercised by the reproduction suites.
std::vector<InstanceRecipe> reference_recipes();

}  // namespace subwelf

#endif  // SUBWELF_INSTANCES_HPP_
