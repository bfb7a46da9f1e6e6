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

#ifndef SUBWELF_WELFARE_HPP_
#define SUBWELF_WELFARE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subwelf/common.hpp"
#include "subwelf/game.hpp"
#include "subwelf/submodular.hpp"

namespace subwelf {

// First-best welfare: for every type profile in the support, the best action
// profile under lexicographic tie-breaking (first action list order wins).
struct OptimalProfileCertificate {
  double opt = 0.0;
  std::vector<Prior::SupportEntry> support;
  std::vector<std::vector<int>> argmax;    // per support entry, ground ids
  std::vector<double> best_welfare;        // per support entry
};

OptimalProfileCertificate compute_opt(const GameDefinition& game,
                                      const Budget& budget = {});

// Best expected welfare over pure type-measurable strategy profiles.
struct StrategySearchResult {
  double value = 0.0;
  StrategyProfile profile;
  bool exact = true;
  int restarts = 0;
  int sweeps = 0;
  std::uint64_t seed = 0;
};

StrategySearchResult compute_str_exact(const GameDefinition& game,
                                       const Budget& budget = {});

// Coordinate ascent over (player, type) cells with seeded restarts.  The
// result is a certified lower bound on the exact optimum, not the optimum.
StrategySearchResult compute_str_local(const GameDefinition& game,
                                       int restarts = 8,
                                       std::uint64_t seed = 2,
                                       const Budget& budget = {});

enum class StrMode { kExact, kLocal };

struct SrGapReport {
  double opt = 0.0;
  double str = 0.0;
  bool str_exact = true;
  bool vacuous = false;            // opt == 0, gap undefined
  std::optional<double> gap;       // str / opt when defined
};

SrGapReport sr_gap(const GameDefinition& game, StrMode mode = StrMode::kExact,
                   const Budget& budget = {}, int restarts = 8,
                   std::uint64_t seed = 2);

// Conditional in-optimum action frequencies: weight[i][t][k] is the
// probability that the certified optimal profile assigns action slot k to
// player i, given that player i has type t.  Rows sum to one.
struct MarginalProfile {
  std::vector<std::vector<std::vector<double>>> weight;
};

MarginalProfile marginal_profile(const GameDefinition& game,
                                 const OptimalProfileCertificate& certificate);

// Threshold split of the marginal profile at 1/sqrt(n): heavy actions keep
// their identity, light actions become a scaled density over the ground.
struct HeavyLightSplit {
  double threshold = 0.0;
  std::vector<std::vector<std::vector<int>>> heavy;  // [i][t] ground ids
  std::vector<std::vector<DensityVector>> light;     // [i][t] scaled weights
};

HeavyLightSplit heavy_light_split(const GameDefinition& game,
                                  const MarginalProfile& profile);

struct AuditInequality {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double band = 0.0;   // tolerance added on the favourable side
  bool holds = false;  // lhs <= rhs + band
};

struct SrBoundAuditReport {
  int num_players = 0;
  int sqrt_n = 0;
  double opt = 0.0;
  double str = 0.0;
  bool str_exact = true;
  double term_light_marginal = 0.0;  // sum_theta rho sum_i E[f(a_i | B_i + C_i)]
  double term_light_union = 0.0;     // E_theta E_B[f(union_i B_i)]
  double term_heavy_union = 0.0;     // E_theta[f(union_i C_i)]
  double term_strategic_floor = 0.0; // (1-1/e)/n sum_i E_theta[F(y_i)]
  bool exact_terms = true;           // every expectation enumerated exactly
  std::int64_t samples = 0;          // per sampled expectation, 0 if exact
  std::uint64_t seed = 0;
  std::string rng = Rng::kAlgorithm;
  std::vector<AuditInequality> inequalities;
  bool all_hold = false;
};

// Checks the full bound chain relating the first-best welfare to the best
// strategic welfare on games with a square number of players.  Expectations
// are enumerated exactly when the fractional supports fit the budget and
// estimated by sampling otherwise; bands are 1e-9 in exact mode and four
// standard errors per sampled expectation.
SrBoundAuditReport sr_bound_audit(const GameDefinition& game,
                                  std::int64_t samples = 20000,
                                  std::uint64_t seed = 1,
                                  const Budget& budget = {});

// Monte Carlo welfare of playing the conditional in-optimum frequencies
// independently: types from the prior, then each action from weight[i][t].
McEstimate str_sampling_lower_bound(const GameDefinition& game,
                                    const OptimalProfileCertificate& certificate,
                                    std::int64_t samples,
                                    std::uint64_t seed);

}  // namespace subwelf

#endif  // SUBWELF_WELFARE_HPP_
