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

#include "subwelf/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace subwelf {
namespace {

void validate_type_names(const std::vector<std::vector<std::string>>& type_names) {
  require(!type_names.empty(), "a game needs at least one player");
  for (const auto& names : type_names) {
    require(!names.empty(), "every player needs at least one type");
    for (std::size_t a = 0; a < names.size(); ++a) {
      require(!names[a].empty(), "type names must be nonempty");
      for (std::size_t b = a + 1; b < names.size(); ++b) {
        require(names[a] != names[b], "duplicate type name: " + names[a]);
      }
    }
  }
}

void validate_concave_payoff(const UtilityModel::ConcavePayoff& payoff) {
  require(!payoff.points.empty(), "resource payoff needs at least one breakpoint");
  double prev_x = 0.0;
  double prev_y = 0.0;
  double prev_slope = std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : payoff.points) {
    require(std::isfinite(x) && std::isfinite(y), "payoff breakpoints must be finite");
    require(x > prev_x, "payoff breakpoints must have strictly increasing loads");
    require(y >= 0.0, "payoff values must be nonnegative");
    const double slope = (y - prev_y) / (x - prev_x);
    require(slope >= -tol::kExact, "payoff tables must be nondecreasing");
    require(slope <= prev_slope + tol::kExact,
            "payoff table for resource " + payoff.resource + " is not concave");
    prev_slope = slope;
    prev_x = x;
    prev_y = y;
  }
}

}  // namespace

Prior Prior::joint(std::vector<std::vector<std::string>> type_names,
                   std::vector<SupportEntry> support) {
  validate_type_names(type_names);
  Prior prior;
  prior.type_names_ = std::move(type_names);
  prior.product_form_ = false;
  const int n = prior.num_players();
  prior.marginals_.resize(n);
  for (int i = 0; i < n; ++i) prior.marginals_[i].assign(prior.num_types(i), 0.0);

  double total = 0.0;
  for (auto& [profile, p] : support) {
    require(static_cast<int>(profile.size()) == n,
            "support profile length must equal the player count");
    for (int i = 0; i < n; ++i) {
      require(profile[i] >= 0 && profile[i] < prior.num_types(i),
              "support profile references an unknown type");
    }
    require(std::isfinite(p) && p > 0.0, "support probabilities must be positive");
    require(prior.support_map_.emplace(profile, p).second,
            "duplicate type profile in prior support");
    for (int i = 0; i < n; ++i) prior.marginals_[i][profile[i]] += p;
    total += p;
  }
  require(std::abs(total - 1.0) <= tol::kProbSum, "prior probabilities must sum to 1");
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < prior.num_types(i); ++t) {
      require(prior.marginals_[i][t] > 0.0,
              "type " + prior.type_names_[i][t] + " of player " + std::to_string(i) +
                  " has zero marginal probability");
    }
  }
  prior.support_ = std::move(support);
  return prior;
}

Prior Prior::product(std::vector<std::vector<std::string>> type_names,
                     std::vector<std::vector<double>> marginals) {
  validate_type_names(type_names);
  Prior prior;
  prior.type_names_ = std::move(type_names);
  prior.product_form_ = true;
  require(marginals.size() == prior.type_names_.size(),
          "product prior needs one marginal vector per player");
  for (int i = 0; i < prior.num_players(); ++i) {
    require(static_cast<int>(marginals[i].size()) == prior.num_types(i),
            "marginal vector length must match the type count");
    double total = 0.0;
    for (double p : marginals[i]) {
      require(std::isfinite(p) && p > 0.0,
              "product prior marginals must be positive (zero-marginal types are rejected)");
      total += p;
    }
    require(std::abs(total - 1.0) <= tol::kProbSum, "marginals must sum to 1");
  }
  prior.marginals_ = std::move(marginals);
  return prior;
}

std::vector<Prior::SupportEntry> Prior::expanded_support(const Budget& budget) const {
  if (!product_form_) return support_;
  std::vector<int> radix;
  for (int i = 0; i < num_players(); ++i) radix.push_back(num_types(i));
  const std::int64_t count = capped_product(radix, budget.max_evaluations);
  require_budget(count <= budget.max_evaluations,
                 "expanding the product prior exceeds the enumeration budget");
  std::vector<SupportEntry> support;
  support.reserve(count);
  std::vector<int> profile(num_players(), 0);
  do {
    double p = 1.0;
    for (int i = 0; i < num_players(); ++i) p *= marginals_[i][profile[i]];
    support.emplace_back(profile, p);
  } while (next_tuple(profile, radix));
  return support;
}

double Prior::marginal(int player, int type) const {
  require(player >= 0 && player < num_players(), "player out of range");
  require(type >= 0 && type < num_types(player), "type out of range");
  return marginals_[player][type];
}

double Prior::probability(const std::vector<int>& profile) const {
  require(static_cast<int>(profile.size()) == num_players(), "profile length mismatch");
  if (product_form_) {
    double p = 1.0;
    for (int i = 0; i < num_players(); ++i) {
      require(profile[i] >= 0 && profile[i] < num_types(i), "type out of range");
      p *= marginals_[i][profile[i]];
    }
    return p;
  }
  auto it = support_map_.find(profile);
  return it == support_map_.end() ? 0.0 : it->second;
}

std::vector<Prior::SupportEntry> Prior::conditional(int player, int type,
                                                    const Budget& budget) const {
  const double m = marginal(player, type);
  std::vector<SupportEntry> out;
  if (!product_form_) {
    for (const auto& [profile, p] : support_) {
      if (profile[player] == type) out.emplace_back(profile, p / m);
    }
    return out;
  }
  std::vector<int> radix;
  for (int i = 0; i < num_players(); ++i) radix.push_back(i == player ? 1 : num_types(i));
  require_budget(capped_product(radix, budget.max_evaluations) <= budget.max_evaluations,
                 "expanding the conditional prior exceeds the enumeration budget");
  std::vector<int> digits(num_players(), 0);
  do {
    std::vector<int> profile = digits;
    profile[player] = type;
    double p = 1.0;
    for (int i = 0; i < num_players(); ++i) {
      if (i != player) p *= marginals_[i][profile[i]];
    }
    out.emplace_back(std::move(profile), p);
  } while (next_tuple(digits, radix));
  return out;
}

std::vector<int> Prior::sample(Rng& rng) const {
  if (product_form_) {
    std::vector<int> profile(num_players());
    for (int i = 0; i < num_players(); ++i) {
      const double r = rng.next_unit();
      double acc = 0.0;
      int pick = num_types(i) - 1;
      for (int t = 0; t < num_types(i); ++t) {
        acc += marginals_[i][t];
        if (r < acc) {
          pick = t;
          break;
        }
      }
      profile[i] = pick;
    }
    return profile;
  }
  const double r = rng.next_unit();
  double acc = 0.0;
  for (const auto& [profile, p] : support_) {
    acc += p;
    if (r < acc) return profile;
  }
  return support_.back().first;
}

IndependenceReport is_independent(const Prior& prior) {
  IndependenceReport report;
  if (prior.product_form()) return report;
  double support_product_mass = 0.0;
  for (const auto& [profile, p] : prior.expanded_support()) {
    double prod = 1.0;
    for (int i = 0; i < prior.num_players(); ++i) prod *= prior.marginal(i, profile[i]);
    support_product_mass += prod;
    report.max_deviation = std::max(report.max_deviation, std::abs(p - prod));
  }
  // If every support entry factors and the factored masses already sum to 1,
  // all off-support product masses are 0 and the prior is independent.
  report.max_deviation =
      std::max(report.max_deviation, std::abs(support_product_mass - 1.0));
  report.independent = report.max_deviation <= tol::kProbSum;
  return report;
}

double UtilityModel::ConcavePayoff::at(double load) const {
  if (load <= 0.0) return 0.0;
  double prev_x = 0.0;
  double prev_y = 0.0;
  for (const auto& [x, y] : points) {
    if (load <= x) {
      return prev_y + (y - prev_y) * (load - prev_x) / (x - prev_x);
    }
    prev_x = x;
    prev_y = y;
  }
  // Extrapolate the final segment.
  const auto& [last_x, last_y] = points.back();
  double slope;
  if (points.size() >= 2) {
    const auto& [x0, y0] = points[points.size() - 2];
    slope = (last_y - y0) / (last_x - x0);
  } else {
    slope = last_y / last_x;
  }
  return last_y + slope * (load - last_x);
}

namespace {

// Null actions must not affect the welfare function. Exact for coverage and
// explicit tables; spot-checked for lifted functions.
bool nulls_are_neutral(const SetFunction& f, const std::vector<int>& null_actions,
                       std::string* note) {
  switch (f.kind()) {
    case SetFunction::Kind::kWeightedCoverage:
    case SetFunction::Kind::kPrioritySharingCoverage: {
      for (int e : null_actions) {
        if (!f.coverage_core().covers[e].empty()) return false;
      }
      return true;
    }
    case SetFunction::Kind::kExplicitTable: {
      const auto& table = f.table();
      for (int e : null_actions) {
        const std::uint64_t bit = std::uint64_t{1} << e;
        for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
          if (mask & bit) continue;
          if (std::abs(table[mask | bit] - table[mask]) > tol::kExact) return false;
        }
      }
      return true;
    }
    case SetFunction::Kind::kStrategicLift: {
      if (note) *note = "null neutrality of the lifted welfare was spot-checked";
      Rng rng(0x5eedULL);
      const int k = f.ground().size();
      std::vector<int> subset;
      for (int trial = 0; trial < 40; ++trial) {
        subset.clear();
        for (int e = 0; e < k; ++e) {
          if (std::find(null_actions.begin(), null_actions.end(), e) !=
              null_actions.end()) {
            continue;
          }
          if (rng.next_unit() < 0.5) subset.push_back(e);
        }
        const double base = f.evaluate(subset);
        for (int e : null_actions) {
          subset.push_back(e);
          if (std::abs(f.evaluate(subset) - base) > tol::kExact) return false;
          subset.pop_back();
        }
      }
      return true;
    }
  }
  return false;
}

// Concatenated action sets of one player across its types, used when
// enumerating all cross-type action profiles.
std::vector<std::vector<int>> flattened_actions(const GameDefinition& g) {
  std::vector<std::vector<int>> flat(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) {
    for (const auto& acts : g.actions.actions[i]) {
      flat[i].insert(flat[i].end(), acts.begin(), acts.end());
    }
  }
  return flat;
}

}  // namespace

GameDefinition make_game(Prior prior, ActionFamily actions, SetFunction welfare,
                         UtilityModel utilities) {
  GameDefinition g{std::move(prior), std::move(actions), std::move(welfare),
                   std::move(utilities), {}, {}, {}};
  const int n = g.num_players();
  const int ground = g.welfare.ground().size();

  require(static_cast<int>(g.actions.actions.size()) == n,
          "action family must list one entry per player");
  require(static_cast<int>(g.actions.null_action.size()) == n,
          "action family must list one null action per player");
  g.owner_player.assign(ground, -1);
  g.owner_type.assign(ground, -1);
  g.owner_slot.assign(ground, -1);

  for (int i = 0; i < n; ++i) {
    require(static_cast<int>(g.actions.actions[i].size()) == g.prior.num_types(i),
            "action family must list one action set per type");
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      const auto& set = g.actions.actions[i][t];
      require(!set.empty(), "every type needs at least one action");
      for (std::size_t k = 0; k < set.size(); ++k) {
        const int e = set[k];
        require(e >= 0 && e < ground, "action id outside the welfare ground");
        require(g.owner_player[e] < 0,
                "action sets must be disjoint across players and types (element " +
                    g.welfare.ground().name(e) + ")");
        g.owner_player[e] = i;
        g.owner_type[e] = t;
        g.owner_slot[e] = k;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    const int e = g.actions.null_action[i];
    require(e >= 0 && e < ground, "null action outside the welfare ground");
    require(g.owner_player[e] < 0, "null actions must be distinct from all actions");
    g.owner_player[e] = i;
  }
  for (int e = 0; e < ground; ++e) {
    require(g.owner_player[e] >= 0,
            "welfare ground element " + g.welfare.ground().name(e) +
                " is neither an action nor a null action");
  }
  require(nulls_are_neutral(g.welfare, g.actions.null_action, nullptr),
          "null actions must be neutral for the welfare function");

  switch (g.utilities.kind) {
    case UtilityModel::Kind::kBasicDerived:
      break;
    case UtilityModel::Kind::kEqualShareCoverage:
      require(g.welfare.is_coverage(),
              "equal-share utilities require a coverage welfare function");
      break;
    case UtilityModel::Kind::kPriorityShareCoverage: {
      require(g.welfare.is_coverage(),
              "priority-share utilities require a coverage welfare function");
      if (g.utilities.priority_class.empty() &&
          g.welfare.kind() == SetFunction::Kind::kPrioritySharingCoverage) {
        g.utilities.priority_class = g.welfare.priority_classes();
      }
      require(static_cast<int>(g.utilities.priority_class.size()) == n,
              "priority-share utilities need one class per player");
      if (g.welfare.kind() == SetFunction::Kind::kPrioritySharingCoverage) {
        require(g.welfare.priority_classes() == g.utilities.priority_class,
                "welfare and utility priority classes disagree");
      }
      break;
    }
    case UtilityModel::Kind::kProportionalShareWeights: {
      require(static_cast<int>(g.utilities.action_weight.size()) == ground,
              "proportional-share utilities need one weight per ground element");
      require(static_cast<int>(g.utilities.action_resources.size()) == ground,
              "proportional-share utilities need resource lists per ground element");
      for (const auto& payoff : g.utilities.resource_payoffs) validate_concave_payoff(payoff);
      for (int e = 0; e < ground; ++e) {
        const double w = g.utilities.action_weight[e];
        require(std::isfinite(w) && w >= 0.0, "action weights must be nonnegative");
        for (int r : g.utilities.action_resources[e]) {
          require(r >= 0 && r < static_cast<int>(g.utilities.resource_payoffs.size()),
                  "action references an unknown resource");
        }
        if (g.is_null(e)) {
          require(w == 0.0 && g.utilities.action_resources[e].empty(),
                  "null actions must carry no weight and use no resources");
        } else {
          require(w > 0.0, "actions must carry positive weight");
        }
      }
      break;
    }
    case UtilityModel::Kind::kExplicitTable: {
      const auto flat = flattened_actions(g);
      std::vector<int> radix;
      for (const auto& f : flat) radix.push_back(static_cast<int>(f.size()));
      const std::int64_t profiles = capped_product(radix, 1'000'000);
      require(profiles <= 1'000'000, "explicit utility tables are limited to 1e6 profiles");
      require(static_cast<std::int64_t>(g.utilities.table.size()) == profiles,
              "explicit utility table must cover every action profile exactly once");
      std::vector<int> digits(n, 0);
      std::vector<int> profile(n);
      do {
        for (int i = 0; i < n; ++i) profile[i] = flat[i][digits[i]];
        auto it = g.utilities.table.find(profile);
        require(it != g.utilities.table.end(),
                "explicit utility table is missing an action profile");
        require(static_cast<int>(it->second.size()) == n,
                "utility table entries need one payoff per player");
        for (double v : it->second) {
          require(std::isfinite(v) && v >= 0.0, "payoffs must be nonnegative");
        }
      } while (next_tuple(digits, radix));
      break;
    }
  }
  return g;
}

double social_welfare(const GameDefinition& g, std::span<const int> profile) {
  require(static_cast<int>(profile.size()) == g.num_players(),
          "action profile length must equal the player count");
  for (int i = 0; i < g.num_players(); ++i) {
    require(profile[i] >= 0 && profile[i] < g.welfare.ground().size() &&
                g.owner_player[profile[i]] == i,
            "action profile entry does not belong to the player");
  }
  return g.welfare.evaluate(profile);
}

std::vector<double> utility_vector(const GameDefinition& g, std::span<const int> profile) {
  const int n = g.num_players();
  require(static_cast<int>(profile.size()) == n,
          "action profile length must equal the player count");
  for (int i = 0; i < n; ++i) {
    require(profile[i] >= 0 && profile[i] < g.welfare.ground().size() &&
                g.owner_player[profile[i]] == i && !g.is_null(profile[i]),
            "utilities are defined over non-null own actions");
  }
  std::vector<double> v(n, 0.0);
  switch (g.utilities.kind) {
    case UtilityModel::Kind::kBasicDerived: {
      const double sw = g.welfare.evaluate(profile);
      std::vector<int> altered(profile.begin(), profile.end());
      for (int i = 0; i < n; ++i) {
        const int keep = altered[i];
        altered[i] = g.actions.null_action[i];
        v[i] = sw - g.welfare.evaluate(altered);
        altered[i] = keep;
      }
      break;
    }
    case UtilityModel::Kind::kEqualShareCoverage:
    case UtilityModel::Kind::kPriorityShareCoverage: {
      const bool priority = g.utilities.kind == UtilityModel::Kind::kPriorityShareCoverage;
      const auto& core = g.welfare.coverage_core();
      const int u_count = static_cast<int>(core.universe.size());
      std::vector<int> share_count(u_count, 0);
      std::vector<int> best_class(u_count, std::numeric_limits<int>::max());
      for (int i = 0; i < n; ++i) {
        const int cls = priority ? g.utilities.priority_class[i] : 0;
        for (int u : core.covers[profile[i]]) {
          if (cls < best_class[u]) {
            best_class[u] = cls;
            share_count[u] = 1;
          } else if (cls == best_class[u]) {
            ++share_count[u];
          }
        }
      }
      for (int i = 0; i < n; ++i) {
        const int cls = priority ? g.utilities.priority_class[i] : 0;
        for (int u : core.covers[profile[i]]) {
          if (cls == best_class[u]) {
            v[i] += core.weights[u] / share_count[u];
          }
        }
      }
      break;
    }
    case UtilityModel::Kind::kProportionalShareWeights: {
      std::vector<double> load(g.utilities.resource_payoffs.size(), 0.0);
      for (int i = 0; i < n; ++i) {
        for (int r : g.utilities.action_resources[profile[i]]) {
          load[r] += g.utilities.action_weight[profile[i]];
        }
      }
      for (int i = 0; i < n; ++i) {
        const double w = g.utilities.action_weight[profile[i]];
        for (int r : g.utilities.action_resources[profile[i]]) {
          v[i] += (w / load[r]) * g.utilities.resource_payoffs[r].at(load[r]);
        }
      }
      break;
    }
    case UtilityModel::Kind::kExplicitTable: {
      auto it = g.utilities.table.find(std::vector<int>(profile.begin(), profile.end()));
      require(it != g.utilities.table.end(), "utility table is missing the action profile");
      v = it->second;
      break;
    }
  }
  return v;
}

ValidationReport validate_game(const GameDefinition& g, const Budget& budget,
                               std::uint64_t sample_seed) {
  ValidationReport report;
  std::string note;
  report.null_actions_neutral =
      nulls_are_neutral(g.welfare, g.actions.null_action, &note);
  if (!note.empty()) report.notes.push_back(note);

  const int k = g.welfare.ground().size();
  if (k <= 62 && (std::int64_t{1} << std::min(k, 62)) <= budget.max_evaluations) {
    report.welfare_evidence = check_monotone_submodular(g.welfare, budget);
  } else {
    report.welfare_evidence =
        check_monotone_submodular_sampled(g.welfare, 20'000, sample_seed);
    report.notes.push_back(
        "welfare monotone-submodular evidence is sampled (ground too large "
        "for exhaustive enumeration)");
  }
  report.ok = report.null_actions_neutral && report.welfare_evidence.monotone &&
              report.welfare_evidence.submodular;
  return report;
}

ValidConditionsReport check_valid_conditions(const GameDefinition& g, const Budget& budget) {
  const int n = g.num_players();
  const auto flat = flattened_actions(g);
  std::vector<int> radix;
  for (const auto& f : flat) radix.push_back(static_cast<int>(f.size()));
  require_budget(capped_product(radix, budget.max_evaluations) <= budget.max_evaluations,
                 "valid-conditions check exceeds the enumeration budget");

  ValidConditionsReport report;
  std::vector<int> digits(n, 0);
  std::vector<int> profile(n);
  std::vector<int> altered(n);
  do {
    for (int i = 0; i < n; ++i) profile[i] = flat[i][digits[i]];
    ++report.profiles_checked;
    const std::vector<double> v = utility_vector(g, profile);
    const double sw = g.welfare.evaluate(profile);
    double total = 0.0;
    for (double x : v) total += x;
    if (report.total_utility_ok && total > sw + tol::kExact) {
      report.total_utility_ok = false;
      report.total_utility_witness = ConditionWitness{profile, -1, sw, total};
    }
    altered.assign(profile.begin(), profile.end());
    for (int i = 0; i < n; ++i) {
      const int keep = altered[i];
      altered[i] = g.actions.null_action[i];
      const double contribution = sw - g.welfare.evaluate(altered);
      altered[i] = keep;
      if (report.marginal_ok && v[i] < contribution - tol::kExact) {
        report.marginal_ok = false;
        report.marginal_witness = ConditionWitness{profile, i, v[i], contribution};
      }
      const double gap = std::abs(v[i] - contribution);
      report.max_basic_gap = std::max(report.max_basic_gap, gap);
      if (gap > tol::kExact) report.basic = false;
    }
  } while (next_tuple(digits, radix));
  return report;
}

void validate_strategy(const GameDefinition& g, const StrategyProfile& s) {
  require(static_cast<int>(s.action.size()) == g.num_players(),
          "strategy profile must cover every player");
  for (int i = 0; i < g.num_players(); ++i) {
    require(static_cast<int>(s.action[i].size()) == g.prior.num_types(i),
            "strategy must pick an action for every type");
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      const auto& set = g.action_set(i, t);
      require(std::find(set.begin(), set.end(), s.action[i][t]) != set.end(),
              "strategy picks an action outside the type's action set");
    }
  }
}

std::vector<int> play(const GameDefinition& g, const StrategyProfile& s,
                      std::span<const int> theta) {
  std::vector<int> profile(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) profile[i] = s.action[i][theta[i]];
  return profile;
}

double expected_strategy_welfare(const GameDefinition& g, const StrategyProfile& s,
                                 const Budget& budget) {
  validate_strategy(g, s);
  double total = 0.0;
  for (const auto& [theta, p] : g.prior.expanded_support(budget)) {
    total += p * g.welfare.evaluate(play(g, s, theta));
  }
  return total;
}

StrategicFormResult strategic_form(const GameDefinition& g, const Budget& budget) {
  const int n = g.num_players();
  const auto support = std::make_shared<const std::vector<Prior::SupportEntry>>(
      g.prior.expanded_support(budget));

  auto decode = std::make_shared<std::vector<std::vector<std::vector<int>>>>();
  decode->resize(n);
  std::vector<int> strategy_count(n);
  std::vector<std::string> ground_names;
  std::vector<int> offset(n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> radix;
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      radix.push_back(static_cast<int>(g.action_set(i, t).size()));
    }
    const std::int64_t count = capped_product(radix, budget.max_evaluations);
    require_budget(count <= budget.max_evaluations,
                   "strategy enumeration exceeds the budget");
    strategy_count[i] = static_cast<int>(count);
    std::vector<int> digits(radix.size(), 0);
    offset[i] = static_cast<int>(ground_names.size());
    int k = 0;
    do {
      std::vector<int> per_type(g.prior.num_types(i));
      for (int t = 0; t < g.prior.num_types(i); ++t) {
        per_type[t] = g.action_set(i, t)[digits[t]];
      }
      (*decode)[i].push_back(std::move(per_type));
      ground_names.push_back("p" + std::to_string(i) + "_s" + std::to_string(k));
      ++k;
    } while (next_tuple(digits, radix));
  }
  std::vector<int> null_ids(n);
  for (int i = 0; i < n; ++i) {
    null_ids[i] = static_cast<int>(ground_names.size());
    ground_names.push_back("p" + std::to_string(i) + "_null");
  }

  std::vector<int> profile_radix(strategy_count.begin(), strategy_count.end());
  require_budget(
      capped_product(profile_radix, budget.max_evaluations) <= budget.max_evaluations,
      "tabulating strategy-profile payoffs exceeds the budget");

  const auto base = std::make_shared<const GameDefinition>(g);
  const auto offsets = std::make_shared<const std::vector<int>>(offset);
  const auto counts = std::make_shared<const std::vector<int>>(strategy_count);

  auto lift = [base, decode, support, offsets, counts,
               n](std::span<const int> subset) -> double {
    // Strategies selected per player; null strategy elements contribute
    // nothing because they map to base null actions below.
    std::vector<std::vector<int>> chosen(n);
    for (int e : subset) {
      for (int i = 0; i < n; ++i) {
        if (e >= (*offsets)[i] && e < (*offsets)[i] + (*counts)[i]) {
          chosen[i].push_back(e - (*offsets)[i]);
          break;
        }
      }
    }
    double total = 0.0;
    std::vector<int> actions;
    for (const auto& [theta, p] : *support) {
      actions.clear();
      for (int i = 0; i < n; ++i) {
        for (int k : chosen[i]) actions.push_back((*decode)[i][k][theta[i]]);
      }
      total += p * base->welfare.evaluate(actions);
    }
    return total;
  };

  SetFunction lifted = SetFunction::strategic_lift(GroundSet(ground_names), lift);

  UtilityModel utilities;
  utilities.kind = UtilityModel::Kind::kExplicitTable;
  {
    std::vector<int> digits(n, 0);
    std::vector<int> key(n);
    do {
      std::vector<double> payoff(n, 0.0);
      for (const auto& [theta, p] : *support) {
        std::vector<int> played(n);
        for (int i = 0; i < n; ++i) played[i] = (*decode)[i][digits[i]][theta[i]];
        const std::vector<double> v = utility_vector(g, played);
        for (int i = 0; i < n; ++i) payoff[i] += p * v[i];
      }
      for (int i = 0; i < n; ++i) key[i] = offset[i] + digits[i];
      utilities.table.emplace(key, std::move(payoff));
    } while (next_tuple(digits, profile_radix));
  }

  std::vector<std::vector<std::string>> type_names(n, std::vector<std::string>{"s"});
  Prior prior = Prior::joint(std::move(type_names), {{std::vector<int>(n, 0), 1.0}});

  ActionFamily family;
  family.actions.resize(n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> ids(strategy_count[i]);
    for (int k = 0; k < strategy_count[i]; ++k) ids[k] = offset[i] + k;
    family.actions[i] = {std::move(ids)};
  }
  family.null_action = null_ids;

  StrategicFormResult result{
      make_game(std::move(prior), std::move(family), std::move(lifted),
                std::move(utilities)),
      *decode};
  return result;
}

}  // namespace subwelf
