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

#ifndef SUBWELF_SUBMODULAR_HPP_
#define SUBWELF_SUBMODULAR_HPP_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subwelf/common.hpp"

namespace subwelf {

// Ordered list of distinct element names; all subset arguments elsewhere are
// vectors of indices into this order.
class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(std::vector<std::string> elements);

  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& name(int i) const { return elements_.at(i); }
  int index_of(std::string_view name) const;
  bool contains(std::string_view name) const;

 private:
  std::vector<std::string> elements_;
  std::unordered_map<std::string, int> index_;
};

// Shared data of the two coverage variants: a weighted universe plus, for
// each ground element, the universe subset it covers.
struct CoverageCore {
  std::vector<std::string> universe;
  std::vector<double> weights;            // aligned with `universe`
  std::vector<std::vector<int>> covers;   // per ground element, sorted universe indices
};

// A monotone-submodular-candidate set function over a ground set.
//
// Variants:
//   WeightedCoverage          f(X) = total weight of universe covered by X
//   PrioritySharingCoverage   same f; carries per-player priority classes
//                             consumed by the priority-sharing utility rule
//   ExplicitTable             all 2^|E| values listed, |E| <= 20
//   StrategicLift             internal: f defined by a callback (used for
//                             induced one-shot games); not serializable
class SetFunction {
 public:
  enum class Kind {
    kWeightedCoverage,
    kPrioritySharingCoverage,
    kExplicitTable,
    kStrategicLift,
  };

  static SetFunction weighted_coverage(GroundSet ground, CoverageCore core);
  static SetFunction priority_sharing_coverage(GroundSet ground, CoverageCore core,
                                               std::vector<int> player_class);
  static SetFunction explicit_table(GroundSet ground, std::vector<double> table);
  static SetFunction strategic_lift(GroundSet ground,
                                    std::function<double(std::span<const int>)> eval);

  Kind kind() const { return kind_; }
  const GroundSet& ground() const { return ground_; }

  // Subsets are index lists; duplicates are tolerated (set semantics).
  double evaluate(std::span<const int> subset) const;
  double marginal(int element, std::span<const int> subset) const;

  bool is_coverage() const {
    return kind_ == Kind::kWeightedCoverage || kind_ == Kind::kPrioritySharingCoverage;
  }
  const CoverageCore& coverage_core() const;
  const std::vector<double>& table() const;
  const std::vector<int>& priority_classes() const;

 private:
  SetFunction() = default;

  Kind kind_ = Kind::kExplicitTable;
  GroundSet ground_;
  CoverageCore core_;                     // coverage variants
  std::vector<Bitset> cover_masks_;       // coverage variants, per ground element
  std::vector<int> priority_classes_;     // priority variant only
  std::vector<double> table_;             // explicit variant, indexed by bitmask
  std::function<double(std::span<const int>)> lift_;
};

// Finitely supported distribution over subsets of the ground set.
struct SubsetDistribution {
  std::vector<std::pair<std::vector<int>, double>> support;
};

// Checks support subsets are in range and probabilities are a distribution.
void validate_subset_distribution(const SubsetDistribution& d, int ground_size);

// Distribution that picks exactly one element per block, independently
// across blocks: blocks partition a subset of the ground set, probs[b][j]
// is the probability block b contributes its j-th listed element.
struct PartitionProductDistribution {
  std::vector<std::vector<int>> blocks;
  std::vector<std::vector<double>> probs;
};

void validate_partition_product(const PartitionProductDistribution& d, int ground_size);

// Marginal inclusion probabilities, one per ground element, each in [0,1].
using DensityVector = std::vector<double>;

struct MonotoneWitness {
  std::vector<int> subset;
  int element;
  double value_without;
  double value_with;
};

struct SubmodularWitness {
  std::vector<int> smaller;   // X
  std::vector<int> larger;    // Y = X + extra
  int element;                // u, outside Y
  double marginal_smaller;    // f(u | X)
  double marginal_larger;     // f(u | Y)
};

struct MonotoneSubmodularReport {
  bool exhaustive = false;
  std::int64_t checks = 0;
  std::uint64_t seed = 0;     // sampled mode only
  bool monotone = true;
  bool submodular = true;
  std::optional<MonotoneWitness> monotone_witness;
  std::optional<SubmodularWitness> submodular_witness;
};

// Ground truth by enumerating all subsets; refuses when 2^|E| exceeds the
// budget instead of silently truncating.
MonotoneSubmodularReport check_monotone_submodular(const SetFunction& f,
                                                   const Budget& budget = {});

// Randomized spot checks (X, u, v drawn uniformly); a clean report means no
// violation was found, not a proof.
MonotoneSubmodularReport check_monotone_submodular_sampled(const SetFunction& f,
                                                           std::int64_t checks,
                                                           std::uint64_t seed);

struct McEstimate {
  double estimate = 0.0;
  double stderr_of_mean = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::string rng = Rng::kAlgorithm;
};

// Exact multilinear extension F(x) = E[f(X)], X including each element u
// independently with probability x[u]. Enumerates only the fractional
// support (entries strictly between 0 and 1); refuses past the budget.
double multilinear_exact(const SetFunction& f, const DensityVector& x,
                         const Budget& budget = {});

McEstimate multilinear_sampled(const SetFunction& f, const DensityVector& x,
                               std::int64_t samples, std::uint64_t seed);

// Exact partial derivative d F / d x_u = E[f(X + u) - f(X - u)].
double multilinear_gradient(const SetFunction& f, const DensityVector& x, int element,
                            const Budget& budget = {});

// Per-element marginals of a subset distribution.
DensityVector independent_counterpart(int ground_size, const SubsetDistribution& d);

struct CorrelationGapReport {
  double e_correlated = 0.0;     // E_{X~d}[f(X)]
  double e_independent = 0.0;    // F(marginals of d)
  bool vacuous = false;          // e_correlated == 0
  std::optional<double> ratio;   // e_independent / e_correlated
  bool holds = true;             // ratio >= 1 - 1/e - tol, or vacuous
};

CorrelationGapReport correlation_gap_check(const SetFunction& f, const SubsetDistribution& d,
                                           const Budget& budget = {});

struct PartitionProductReport {
  double e_partition = 0.0;      // E over the partition-product draw
  double e_independent = 0.0;    // F at its per-element marginals
  bool holds = true;             // e_partition >= e_independent - tol
};

PartitionProductReport partition_product_check(const SetFunction& f,
                                               const PartitionProductDistribution& d,
                                               const Budget& budget = {});

}  // namespace subwelf

#endif  // SUBWELF_SUBMODULAR_HPP_
