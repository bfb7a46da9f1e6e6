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

#ifndef SUBWELF_EQUILIBRIA_HPP_
#define SUBWELF_EQUILIBRIA_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subwelf/common.hpp"
#include "subwelf/game.hpp"
#include "subwelf/lp.hpp"

namespace subwelf {

// Equilibrium families. The mediated concepts (ComEq, BS, ANFCBS, SFCBS)
// live on type-dependent action distributions; the rest live on strategy
// distributions. BNE_pure is handled by enumeration, everything else by LP.
enum class ConceptId {
  kBnePure,
  kSfce,
  kAnfce,
  kComEq,
  kBs,
  kAnfcce,
  kSfcce,
  kAnfcbs,
  kSfcbs,
};

inline constexpr ConceptId kAllConcepts[] = {
    ConceptId::kBnePure, ConceptId::kSfce,   ConceptId::kAnfce,
    ConceptId::kComEq,   ConceptId::kBs,     ConceptId::kAnfcce,
    ConceptId::kSfcce,   ConceptId::kAnfcbs, ConceptId::kSfcbs,
};

const char* concept_name(ConceptId concept_id);
std::optional<ConceptId> concept_from_name(std::string_view name);

// True for concepts whose domain is a distribution over strategy profiles.
bool uses_strategy_distribution(ConceptId concept_id);

enum class Sense { kMin, kMax };

// Mediator policy: one action-profile distribution per type profile. Slices
// beyond the prior support carry zero weight in the objective but matter for
// misreport incentives (ComEq).
struct TypeDependentDistribution {
  struct Slice {
    std::vector<int> types;
    std::vector<std::pair<std::vector<int>, double>> mass;
  };
  std::vector<Slice> slices;
};

struct StrategyDistribution {
  std::vector<std::pair<StrategyProfile, double>> mass;
};

struct Violation {
  int player = -1;
  int type = -1;            // realized type; -1 for whole-strategy rows
  int misreport_type = -1;  // ComEq misreports only
  std::string deviation;    // reconstructed maximizing deviation
  double gain = 0.0;        // conditional units for per-type rows
};

// Constraint-by-constraint re-evaluation; empty result means the
// distribution satisfies the concept within the tolerance.
std::vector<Violation> check_equilibrium(const GameDefinition& game, ConceptId concept_id,
                                         const TypeDependentDistribution& pi,
                                         double tolerance = tol::kVerify,
                                         const Budget& budget = {});
std::vector<Violation> check_equilibrium(const GameDefinition& game, ConceptId concept_id,
                                         const StrategyDistribution& sigma,
                                         double tolerance = tol::kVerify,
                                         const Budget& budget = {});

struct EquilibriumResult {
  ConceptId concept_id = ConceptId::kBs;
  Sense sense = Sense::kMin;
  double value = 0.0;
  LpStatus status = LpStatus::kOptimal;
  bool none_found = false;  // BNE_pure with no pure equilibrium
  std::optional<TypeDependentDistribution> pi;
  std::optional<StrategyDistribution> sigma;
  double max_violation = 0.0;  // witness re-verification residual
};

LinearProgramDescription build_lp(const GameDefinition& game, ConceptId concept_id,
                                  Sense sense, const Budget& budget = {},
                                  const LpBudget& lp_budget = {});

EquilibriumResult min_welfare(const GameDefinition& game, ConceptId concept_id,
                              const Budget& budget = {}, const LpBudget& lp_budget = {});
EquilibriumResult max_welfare(const GameDefinition& game, ConceptId concept_id,
                              const Budget& budget = {}, const LpBudget& lp_budget = {});

struct RatioReport {
  ConceptId concept_id = ConceptId::kBs;
  Sense sense = Sense::kMin;
  double opt = 0.0;
  double welfare = 0.0;
  bool vacuous = false;     // opt == 0
  bool none_found = false;  // BNE_pure only
  std::optional<double> ratio;
};

RatioReport poa(const GameDefinition& game, ConceptId concept_id,
                const Budget& budget = {}, const LpBudget& lp_budget = {});
RatioReport pos(const GameDefinition& game, ConceptId concept_id,
                const Budget& budget = {}, const LpBudget& lp_budget = {});

// Pushforward of sigma through s -> s(theta), one slice per support profile.
TypeDependentDistribution strategy_to_type_dependent(const GameDefinition& game,
                                                     const StrategyDistribution& sigma,
                                                     const Budget& budget = {});

// Prior-weighted expected welfare of a mediator policy. Slices off the prior
// support contribute nothing.
double expected_welfare(const GameDefinition& game, const TypeDependentDistribution& pi);

struct PureBneEntry {
  StrategyProfile profile;
  double welfare = 0.0;
};

// All pure strategy profiles where no player can gain more than 1e-9 by a
// unilateral strategy change. Mixed equilibria are out of scope.
std::vector<PureBneEntry> enumerate_pure_bne(const GameDefinition& game,
                                             const Budget& budget = {});

struct LatticeArrow {
  ConceptId sub;
  ConceptId super;
};

// Subset arrows: the tail concept is contained in the head concept.
inline constexpr LatticeArrow kLatticeArrows[] = {
    {ConceptId::kBnePure, ConceptId::kSfce},  {ConceptId::kSfce, ConceptId::kAnfce},
    {ConceptId::kSfce, ConceptId::kComEq},    {ConceptId::kAnfce, ConceptId::kBs},
    {ConceptId::kComEq, ConceptId::kBs},      {ConceptId::kAnfce, ConceptId::kAnfcce},
    {ConceptId::kAnfcce, ConceptId::kSfcce},  {ConceptId::kAnfcce, ConceptId::kAnfcbs},
    {ConceptId::kBs, ConceptId::kAnfcbs},     {ConceptId::kAnfcbs, ConceptId::kSfcbs},
    {ConceptId::kSfcce, ConceptId::kSfcbs},
};

struct LatticeArrowReport {
  ConceptId sub;
  ConceptId super;
  double sub_min = 0.0;
  double sub_max = 0.0;
  double super_min = 0.0;
  double super_max = 0.0;
  bool holds = false;
};

struct LatticeReport {
  std::vector<LatticeArrowReport> arrows;
  std::vector<std::string> skipped;  // unavailable concepts/arrows with reasons
  bool all_hold = true;
};

// Min/max welfare ordered along every containment arrow whose endpoints are
// computable within the budgets; unavailable concepts are listed, not errors.
LatticeReport lattice_check(const GameDefinition& game, const Budget& budget = {},
                            const LpBudget& lp_budget = {});

}  // namespace subwelf

#endif  // SUBWELF_EQUILIBRIA_HPP_
