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

#include "subwelf/submodular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace subwelf {
namespace {

constexpr double kGapFloor = 1.0 - 0.36787944117144233;  // 1 - 1/e

void validate_density(const DensityVector& x, int ground_size) {
  require(static_cast<int>(x.size()) == ground_size,
          "density vector length must equal the ground set size");
  for (double v : x) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
            "density entries must lie in [0, 1]");
  }
}

std::vector<int> mask_to_elements(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

// All 2^k values of f, indexed by bitmask over the ground order.
std::vector<double> tabulate(const SetFunction& f, const Budget& budget) {
  const int k = f.ground().size();
  require_budget(k <= 62 && (std::int64_t{1} << k) <= budget.max_evaluations,
                 "exhaustive subset enumeration exceeds the evaluation budget; "
                 "use the sampled checker");
  const std::uint64_t n = std::uint64_t{1} << k;
  std::vector<double> values(n);
  std::vector<int> elems;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    elems.clear();
    std::uint64_t m = mask;
    while (m) {
      elems.push_back(std::countr_zero(m));
      m &= m - 1;
    }
    values[mask] = f.evaluate(elems);
  }
  return values;
}

}  // namespace

GroundSet::GroundSet(std::vector<std::string> elements) : elements_(std::move(elements)) {
  for (int i = 0; i < static_cast<int>(elements_.size()); ++i) {
    require(!elements_[i].empty(), "ground element names must be nonempty");
    const bool inserted = index_.emplace(elements_[i], i).second;
    require(inserted, "duplicate ground element name: " + elements_[i]);
  }
}

int GroundSet::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  require(it != index_.end(), "unknown ground element: " + std::string(name));
  return it->second;
}

bool GroundSet::contains(std::string_view name) const {
  return index_.find(std::string(name)) != index_.end();
}

static void validate_coverage_core(const CoverageCore& core, int ground_size) {
  require(core.weights.size() == core.universe.size(),
          "coverage universe and weights must have equal length");
  for (double w : core.weights) {
    require(std::isfinite(w) && w >= 0.0, "coverage weights must be nonnegative");
  }
  require(static_cast<int>(core.covers.size()) == ground_size,
          "coverage must list one covered subset per ground element");
  const int u = static_cast<int>(core.universe.size());
  for (const auto& cov : core.covers) {
    for (int e : cov) {
      require(e >= 0 && e < u, "cover references an unknown universe element");
    }
  }
}

SetFunction SetFunction::weighted_coverage(GroundSet ground, CoverageCore core) {
  validate_coverage_core(core, ground.size());
  SetFunction f;
  f.kind_ = Kind::kWeightedCoverage;
  f.ground_ = std::move(ground);
  f.core_ = std::move(core);
  const int u = static_cast<int>(f.core_.universe.size());
  f.cover_masks_.reserve(f.core_.covers.size());
  for (const auto& cov : f.core_.covers) {
    Bitset b(u);
    for (int e : cov) b.set(e);
    f.cover_masks_.push_back(std::move(b));
  }
  return f;
}

SetFunction SetFunction::priority_sharing_coverage(GroundSet ground, CoverageCore core,
                                                   std::vector<int> player_class) {
  SetFunction f = weighted_coverage(std::move(ground), std::move(core));
  f.kind_ = Kind::kPrioritySharingCoverage;
  f.priority_classes_ = std::move(player_class);
  return f;
}

SetFunction SetFunction::explicit_table(GroundSet ground, std::vector<double> table) {
  const int k = ground.size();
  require(k <= 20, "explicit tables are limited to 20 ground elements");
  require(table.size() == (std::size_t{1} << k),
          "explicit table must list a value for every subset");
  for (double v : table) require(std::isfinite(v), "explicit table values must be finite");
  SetFunction f;
  f.kind_ = Kind::kExplicitTable;
  f.ground_ = std::move(ground);
  f.table_ = std::move(table);
  return f;
}

SetFunction SetFunction::strategic_lift(GroundSet ground,
                                        std::function<double(std::span<const int>)> eval) {
  require(static_cast<bool>(eval), "lift evaluator must be callable");
  SetFunction f;
  f.kind_ = Kind::kStrategicLift;
  f.ground_ = std::move(ground);
  f.lift_ = std::move(eval);
  return f;
}

double SetFunction::evaluate(std::span<const int> subset) const {
  for (int e : subset) {
    require(e >= 0 && e < ground_.size(), "subset element out of range");
  }
  switch (kind_) {
    case Kind::kWeightedCoverage:
    case Kind::kPrioritySharingCoverage: {
      Bitset covered(static_cast<int>(core_.universe.size()));
      for (int e : subset) covered.or_with(cover_masks_[e]);
      double total = 0.0;
      covered.for_each([&](int u) { total += core_.weights[u]; });
      return total;
    }
    case Kind::kExplicitTable: {
      std::uint64_t mask = 0;
      for (int e : subset) mask |= std::uint64_t{1} << e;
      return table_[mask];
    }
    case Kind::kStrategicLift:
      return lift_(subset);
  }
  throw InputError("corrupt set function kind");
}

double SetFunction::marginal(int element, std::span<const int> subset) const {
  require(element >= 0 && element < ground_.size(), "element out of range");
  std::vector<int> with(subset.begin(), subset.end());
  for (int e : with) {
    if (e == element) return 0.0;
  }
  const double base = evaluate(with);
  with.push_back(element);
  return evaluate(with) - base;
}

const CoverageCore& SetFunction::coverage_core() const {
  require(is_coverage(), "set function has no coverage data");
  return core_;
}

const std::vector<double>& SetFunction::table() const {
  require(kind_ == Kind::kExplicitTable, "set function has no explicit table");
  return table_;
}

const std::vector<int>& SetFunction::priority_classes() const {
  require(kind_ == Kind::kPrioritySharingCoverage,
          "set function carries no priority classes");
  return priority_classes_;
}

void validate_subset_distribution(const SubsetDistribution& d, int ground_size) {
  require(!d.support.empty(), "subset distribution must have nonempty support");
  double total = 0.0;
  for (const auto& [subset, p] : d.support) {
    require(std::isfinite(p) && p >= 0.0, "subset probabilities must be nonnegative");
    total += p;
    for (int e : subset) {
      require(e >= 0 && e < ground_size, "subset distribution references unknown element");
    }
  }
  require(std::abs(total - 1.0) <= tol::kProbSum,
          "subset distribution probabilities must sum to 1");
}

void validate_partition_product(const PartitionProductDistribution& d, int ground_size) {
  require(d.blocks.size() == d.probs.size(),
          "partition-product blocks and probabilities must align");
  std::vector<char> seen(ground_size, 0);
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    require(!d.blocks[b].empty(), "partition blocks must be nonempty");
    require(d.blocks[b].size() == d.probs[b].size(),
            "block probabilities must align with block elements");
    double total = 0.0;
    for (double p : d.probs[b]) {
      require(std::isfinite(p) && p >= 0.0, "block probabilities must be nonnegative");
      total += p;
    }
    require(std::abs(total - 1.0) <= tol::kProbSum, "block probabilities must sum to 1");
    for (int e : d.blocks[b]) {
      require(e >= 0 && e < ground_size, "partition block references unknown element");
      require(!seen[e], "partition blocks must be disjoint");
      seen[e] = 1;
    }
  }
}

MonotoneSubmodularReport check_monotone_submodular(const SetFunction& f,
                                                   const Budget& budget) {
  const int k = f.ground().size();
  const std::vector<double> values = tabulate(f, budget);
  MonotoneSubmodularReport report;
  report.exhaustive = true;

  const std::uint64_t n = std::uint64_t{1} << k;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    for (int u = 0; u < k; ++u) {
      if (mask & (std::uint64_t{1} << u)) continue;
      const std::uint64_t with_u = mask | (std::uint64_t{1} << u);
      ++report.checks;
      if (report.monotone && values[with_u] < values[mask] - tol::kExact) {
        report.monotone = false;
        report.monotone_witness = MonotoneWitness{
            mask_to_elements(mask), u, values[mask], values[with_u]};
      }
      if (!report.submodular) continue;
      for (int v = u + 1; v < k; ++v) {
        if (mask & (std::uint64_t{1} << v)) continue;
        const std::uint64_t with_v = mask | (std::uint64_t{1} << v);
        const std::uint64_t with_uv = with_u | (std::uint64_t{1} << v);
        ++report.checks;
        const double m_small = values[with_u] - values[mask];
        const double m_large = values[with_uv] - values[with_v];
        if (m_small < m_large - tol::kExact) {
          report.submodular = false;
          report.submodular_witness = SubmodularWitness{
              mask_to_elements(mask), mask_to_elements(with_v), u, m_small, m_large};
          break;
        }
        const double n_small = values[with_v] - values[mask];
        const double n_large = values[with_uv] - values[with_u];
        if (n_small < n_large - tol::kExact) {
          report.submodular = false;
          report.submodular_witness = SubmodularWitness{
              mask_to_elements(mask), mask_to_elements(with_u), v, n_small, n_large};
          break;
        }
      }
    }
  }
  return report;
}

MonotoneSubmodularReport check_monotone_submodular_sampled(const SetFunction& f,
                                                           std::int64_t checks,
                                                           std::uint64_t seed) {
  const int k = f.ground().size();
  require(k >= 2, "sampled checker needs at least two ground elements");
  require(checks > 0, "sampled checker needs a positive check count");
  MonotoneSubmodularReport report;
  report.exhaustive = false;
  report.seed = seed;
  Rng rng(seed);

  std::vector<int> base;
  std::vector<int> with_u, with_v, with_uv;
  for (std::int64_t c = 0; c < checks; ++c) {
    const int u = rng.index(k);
    int v = rng.index(k - 1);
    if (v >= u) ++v;
    base.clear();
    for (int e = 0; e < k; ++e) {
      if (e == u || e == v) continue;
      if (rng.next_unit() < 0.5) base.push_back(e);
    }
    with_u = base;
    with_u.push_back(u);
    with_v = base;
    with_v.push_back(v);
    with_uv = with_u;
    with_uv.push_back(v);
    const double f0 = f.evaluate(base);
    const double fu = f.evaluate(with_u);
    const double fv = f.evaluate(with_v);
    const double fuv = f.evaluate(with_uv);
    ++report.checks;
    if (report.monotone && fu < f0 - tol::kExact) {
      report.monotone = false;
      report.monotone_witness = MonotoneWitness{base, u, f0, fu};
    }
    if (report.submodular && (fu - f0) < (fuv - fv) - tol::kExact) {
      report.submodular = false;
      report.submodular_witness =
          SubmodularWitness{base, with_v, u, fu - f0, fuv - fv};
    }
    if (!report.monotone && !report.submodular) break;
  }
  return report;
}

double multilinear_exact(const SetFunction& f, const DensityVector& x,
                         const Budget& budget) {
  validate_density(x, f.ground().size());
  std::vector<int> always;
  std::vector<int> fractional;
  for (int e = 0; e < f.ground().size(); ++e) {
    if (x[e] >= 1.0) {
      always.push_back(e);
    } else if (x[e] > 0.0) {
      fractional.push_back(e);
    }
  }
  const int kf = static_cast<int>(fractional.size());
  require_budget(kf <= 62 && (std::int64_t{1} << kf) <= budget.max_evaluations,
                 "exact multilinear extension exceeds the evaluation budget; "
                 "use multilinear_sampled");
  double total = 0.0;
  std::vector<int> subset;
  const std::uint64_t n = std::uint64_t{1} << kf;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    subset = always;
    double p = 1.0;
    for (int j = 0; j < kf; ++j) {
      if (mask & (std::uint64_t{1} << j)) {
        p *= x[fractional[j]];
        subset.push_back(fractional[j]);
      } else {
        p *= 1.0 - x[fractional[j]];
      }
    }
    if (p > 0.0) total += p * f.evaluate(subset);
  }
  return total;
}

McEstimate multilinear_sampled(const SetFunction& f, const DensityVector& x,
                               std::int64_t samples, std::uint64_t seed) {
  validate_density(x, f.ground().size());
  require(samples >= 2, "sampled multilinear extension needs at least two samples");
  Rng rng(seed);
  double sum = 0.0;
  double sumsq = 0.0;
  std::vector<int> subset;
  for (std::int64_t s = 0; s < samples; ++s) {
    subset.clear();
    for (int e = 0; e < f.ground().size(); ++e) {
      if (x[e] > 0.0 && rng.next_unit() < x[e]) subset.push_back(e);
    }
    const double v = f.evaluate(subset);
    sum += v;
    sumsq += v * v;
  }
  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.estimate = sum / static_cast<double>(samples);
  const double var =
      std::max(0.0, (sumsq - sum * est.estimate) / static_cast<double>(samples - 1));
  est.stderr_of_mean = std::sqrt(var / static_cast<double>(samples));
  return est;
}

double multilinear_gradient(const SetFunction& f, const DensityVector& x, int element,
                            const Budget& budget) {
  validate_density(x, f.ground().size());
  require(element >= 0 && element < f.ground().size(), "element out of range");
  std::vector<int> always;
  std::vector<int> fractional;
  for (int e = 0; e < f.ground().size(); ++e) {
    if (e == element) continue;
    if (x[e] >= 1.0) {
      always.push_back(e);
    } else if (x[e] > 0.0) {
      fractional.push_back(e);
    }
  }
  const int kf = static_cast<int>(fractional.size());
  require_budget(kf <= 62 && (std::int64_t{1} << kf) <= budget.max_evaluations,
                 "exact multilinear gradient exceeds the evaluation budget");
  double total = 0.0;
  std::vector<int> subset;
  const std::uint64_t n = std::uint64_t{1} << kf;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    subset = always;
    double p = 1.0;
    for (int j = 0; j < kf; ++j) {
      if (mask & (std::uint64_t{1} << j)) {
        p *= x[fractional[j]];
        subset.push_back(fractional[j]);
      } else {
        p *= 1.0 - x[fractional[j]];
      }
    }
    if (p <= 0.0) continue;
    const double without = f.evaluate(subset);
    subset.push_back(element);
    total += p * (f.evaluate(subset) - without);
  }
  return total;
}

DensityVector independent_counterpart(int ground_size, const SubsetDistribution& d) {
  validate_subset_distribution(d, ground_size);
  DensityVector x(ground_size, 0.0);
  for (const auto& [subset, p] : d.support) {
    std::vector<char> in(ground_size, 0);
    for (int e : subset) {
      if (!in[e]) {
        in[e] = 1;
        x[e] += p;
      }
    }
  }
  for (double& v : x) v = std::min(v, 1.0);
  return x;
}

CorrelationGapReport correlation_gap_check(const SetFunction& f, const SubsetDistribution& d,
                                           const Budget& budget) {
  validate_subset_distribution(d, f.ground().size());
  CorrelationGapReport report;
  for (const auto& [subset, p] : d.support) {
    if (p > 0.0) report.e_correlated += p * f.evaluate(subset);
  }
  report.e_independent =
      multilinear_exact(f, independent_counterpart(f.ground().size(), d), budget);
  if (report.e_correlated <= 0.0) {
    report.vacuous = true;
    report.holds = true;
    return report;
  }
  report.ratio = report.e_independent / report.e_correlated;
  report.holds = *report.ratio >= kGapFloor - tol::kExact;
  return report;
}

PartitionProductReport partition_product_check(const SetFunction& f,
                                               const PartitionProductDistribution& d,
                                               const Budget& budget) {
  validate_partition_product(d, f.ground().size());
  PartitionProductReport report;

  std::vector<int> radix;
  radix.reserve(d.blocks.size());
  for (const auto& block : d.blocks) radix.push_back(static_cast<int>(block.size()));
  require_budget(capped_product(radix, budget.max_evaluations) <= budget.max_evaluations,
                 "partition-product enumeration exceeds the evaluation budget");

  std::vector<int> choice(d.blocks.size(), 0);
  std::vector<int> subset(d.blocks.size());
  if (!d.blocks.empty()) {
    do {
      double p = 1.0;
      for (std::size_t b = 0; b < d.blocks.size(); ++b) {
        p *= d.probs[b][choice[b]];
        subset[b] = d.blocks[b][choice[b]];
      }
      if (p > 0.0) report.e_partition += p * f.evaluate(subset);
    } while (next_tuple(choice, radix));
  } else {
    report.e_partition = f.evaluate(std::span<const int>{});
  }

  DensityVector x(f.ground().size(), 0.0);
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    for (std::size_t j = 0; j < d.blocks[b].size(); ++j) {
      x[d.blocks[b][j]] = d.probs[b][j];
    }
  }
  report.e_independent = multilinear_exact(f, x, budget);
  report.holds = report.e_partition >= report.e_independent - tol::kExact;
  return report;
}

}  // namespace subwelf
