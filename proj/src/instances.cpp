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

#include "subwelf/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace subwelf {
namespace {

std::int64_t cap_mul(std::int64_t a, std::int64_t b, std::int64_t cap) {
  if (a > cap || b <= 0) return cap + 1;
  if (a > cap / b) return cap + 1;
  return a * b;
}

// Coordinates of a grid type: digit 0 is the most significant, radix n.
std::vector<int> grid_coords(int code, int n, int k) {
  std::vector<int> coords(k);
  for (int h = k - 1; h >= 0; --h) {
    coords[h] = code % n;
    code /= n;
  }
  return coords;
}

int grid_code(const std::vector<int>& coords, int n) {
  int code = 0;
  for (int c : coords) code = code * n + c;
  return code;
}

std::string grid_type_name(const std::vector<int>& coords) {
  std::string name = "l";
  for (std::size_t h = 0; h < coords.size(); ++h) {
    if (h > 0) name += "_";
    name += std::to_string(coords[h]);
  }
  return name;
}

// All injective tuples of `slots` distinct values from [0, pool), in
// lexicographic order.
std::vector<std::vector<int>> injective_tuples(int pool, int slots) {
  std::vector<std::vector<int>> tuples;
  std::vector<int> current;
  std::vector<bool> used(pool, false);
  std::function<void()> grow = [&] {
    if (static_cast<int>(current.size()) == slots) {
      tuples.push_back(current);
      return;
    }
    for (int c = 0; c < pool; ++c) {
      if (used[c]) continue;
      used[c] = true;
      current.push_back(c);
      grow();
      current.pop_back();
      used[c] = false;
    }
  };
  grow();
  return tuples;
}

double recipe_param(const InstanceRecipe& recipe, const std::string& key,
                    double fallback) {
  const auto it = recipe.parameters.find(key);
  return it == recipe.parameters.end() ? fallback : it->second;
}

int recipe_int(const InstanceRecipe& recipe, const std::string& key, int fallback) {
  return static_cast<int>(
      std::llround(recipe_param(recipe, key, static_cast<double>(fallback))));
}

}  // namespace

GameDefinition make_figure2_game(double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "make_figure2_game needs epsilon in (0, 1)");
  GroundSet ground({"x1", "x1p", "a2", "a2p", "n0", "n1"});
  CoverageCore core;
  core.universe = {"u1", "u2", "u3"};
  core.weights = {2.0, 1.0, epsilon};
  core.covers = {{2}, {0}, {0, 2}, {1}, {}, {}};
  SetFunction f = SetFunction::weighted_coverage(std::move(ground), std::move(core));

  Prior prior = Prior::joint({{"t1", "t1p"}, {"t2"}}, {{{0, 0}, 0.5}, {{1, 0}, 0.5}});
  ActionFamily family;
  family.actions = {{{0}, {1}}, {{2, 3}}};
  family.null_action = {4, 5};
  UtilityModel utilities;
  utilities.kind = UtilityModel::Kind::kBasicDerived;
  return make_game(std::move(prior), std::move(family), std::move(f),
                   std::move(utilities));
}

PriorityGame make_priority_game(int n, int num_high, const Budget& budget) {
  require(n >= 2, "make_priority_game needs at least two players");
  if (num_high < 0) {
    require(n % 2 == 0,
            "make_priority_game needs an even number of players for the default "
            "even split");
    num_high = n / 2;
  }
  require(num_high >= 1 && num_high < n,
          "make_priority_game needs at least one player in each priority group");
  const int num_low = n - num_high;

  CoverageCore core;
  for (int v = 0; v < n; ++v) {
    core.universe.push_back("e" + std::to_string(v));
    core.weights.push_back(1.0);
  }

  std::vector<std::string> names;
  ActionFamily family;
  family.actions.resize(n);
  std::vector<std::vector<std::string>> type_names(n);
  std::vector<std::vector<double>> marginals(n);
  for (int i = 0; i < num_high; ++i) {
    type_names[i] = {"full"};
    marginals[i] = {1.0};
    family.actions[i].resize(1);
    for (int v = 0; v < n; ++v) {
      family.actions[i][0].push_back(static_cast<int>(names.size()));
      names.push_back("p" + std::to_string(i) + "_e" + std::to_string(v));
      core.covers.push_back({v});
    }
  }
  for (int i = num_high; i < n; ++i) {
    family.actions[i].resize(n);
    for (int v = 0; v < n; ++v) {
      type_names[i].push_back("e" + std::to_string(v));
      marginals[i].push_back(1.0 / static_cast<double>(n));
      family.actions[i][v].push_back(static_cast<int>(names.size()));
      names.push_back("p" + std::to_string(i) + "_e" + std::to_string(v));
      core.covers.push_back({v});
    }
  }
  for (int i = 0; i < n; ++i) {
    family.null_action.push_back(static_cast<int>(names.size()));
    names.push_back("p" + std::to_string(i) + "_null");
    core.covers.push_back({});
  }

  std::vector<int> classes(n, 1);
  for (int i = 0; i < num_high; ++i) classes[i] = 0;
  SetFunction f = SetFunction::priority_sharing_coverage(
      GroundSet(std::move(names)), std::move(core), std::move(classes));
  Prior prior = Prior::product(std::move(type_names), std::move(marginals));
  UtilityModel utilities;
  utilities.kind = UtilityModel::Kind::kPriorityShareCoverage;

  PriorityGame out{make_game(std::move(prior), std::move(family), std::move(f),
                             std::move(utilities)),
                   {},
                   num_high,
                   num_low};

  const std::vector<int> low_radix(num_low, n);
  const std::int64_t slices = capped_product(low_radix, budget.max_evaluations);
  std::int64_t assignments = 1;
  const int small = std::min(num_high, num_low);
  const int large = std::max(num_high, num_low);
  for (int v = 0; v < small; ++v) {
    assignments = cap_mul(assignments, large - v, budget.max_evaluations);
  }
  require_budget(
      assignments <= budget.max_evaluations &&
          slices <= budget.max_evaluations / std::max<std::int64_t>(1, assignments),
      "make_priority_game: enumerating the mediator needs more than " +
          std::to_string(budget.max_evaluations) + " draws");
  const std::vector<std::vector<int>> tuples = injective_tuples(large, small);
  const double share = 1.0 / static_cast<double>(tuples.size());

  std::vector<int> low_types(num_low, 0);
  do {
    TypeDependentDistribution::Slice slice;
    slice.types.assign(n, 0);
    for (int l = 0; l < num_low; ++l) slice.types[num_high + l] = low_types[l];
    std::map<std::vector<int>, double> mass;
    std::vector<int> rec_elem(num_high, -1);
    std::vector<bool> taken(n, false);
    for (const auto& tuple : tuples) {
      std::fill(rec_elem.begin(), rec_elem.end(), -1);
      if (num_high <= num_low) {
        for (int h = 0; h < num_high; ++h) rec_elem[h] = low_types[tuple[h]];
      } else {
        std::fill(taken.begin(), taken.end(), false);
        for (int l = 0; l < num_low; ++l) {
          rec_elem[tuple[l]] = low_types[l];
          taken[low_types[l]] = true;
        }
        for (int h = 0; h < num_high; ++h) {
          if (rec_elem[h] >= 0) continue;
          int v = 0;
          while (taken[v]) ++v;
          rec_elem[h] = v;
          taken[v] = true;
        }
      }
      std::vector<int> profile(n);
      for (int h = 0; h < num_high; ++h) {
        profile[h] = out.game.actions.actions[h][0][rec_elem[h]];
      }
      for (int l = 0; l < num_low; ++l) {
        profile[num_high + l] = out.game.actions.actions[num_high + l][low_types[l]][0];
      }
      mass[profile] += share;
    }
    for (auto& [profile, w] : mass) slice.mass.push_back({profile, w});
    out.mediator.slices.push_back(std::move(slice));
  } while (next_tuple(low_types, low_radix));

  return out;
}

GameDefinition make_grid_game(int n, int k, const Budget& budget) {
  require(n >= 1 && k >= 1, "make_grid_game needs n >= 1 and k >= 1");
  const std::int64_t cap = budget.max_evaluations;
  std::int64_t raw_draws = k;
  for (int h = 0; h + 1 < k; ++h) raw_draws = cap_mul(raw_draws, n, cap);
  for (int m = 2; m <= n; ++m) raw_draws = cap_mul(raw_draws, m, cap);
  require_budget(raw_draws <= cap,
                 "make_grid_game: the joint type support needs more than " +
                     std::to_string(cap) +
                     " prior draws (k * n^(k-1) * n!); use grid_strategy_welfare "
                     "with a seed for sampler-mode estimates");
  const std::vector<int> type_radix(k, n);
  const std::int64_t num_types = capped_product(type_radix, cap);
  const std::int64_t ground_count = cap_mul(cap_mul(num_types, n, cap), k, cap);
  require_budget(num_types <= cap && ground_count <= cap - n,
                 "make_grid_game: the action ground exceeds the enumeration "
                 "budget of " +
                     std::to_string(cap));

  CoverageCore core;
  for (int h = 0; h < k; ++h) {
    for (int v = 0; v < n; ++v) {
      core.universe.push_back("c" + std::to_string(h) + "_" + std::to_string(v));
      core.weights.push_back(1.0);
    }
  }

  std::vector<std::string> tnames;
  std::vector<std::vector<int>> tcoords;
  for (int c = 0; c < static_cast<int>(num_types); ++c) {
    tcoords.push_back(grid_coords(c, n, k));
    tnames.push_back(grid_type_name(tcoords.back()));
  }

  std::vector<std::string> names;
  ActionFamily family;
  family.actions.resize(n);
  for (int i = 0; i < n; ++i) {
    family.actions[i].resize(tcoords.size());
    for (std::size_t c = 0; c < tcoords.size(); ++c) {
      for (int h = 0; h < k; ++h) {
        family.actions[i][c].push_back(static_cast<int>(names.size()));
        names.push_back("p" + std::to_string(i) + "_" + tnames[c] + "_a" +
                        std::to_string(h));
        core.covers.push_back({h * n + tcoords[c][h]});
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    family.null_action.push_back(static_cast<int>(names.size()));
    names.push_back("p" + std::to_string(i) + "_null");
    core.covers.push_back({});
  }
  SetFunction f =
      SetFunction::weighted_coverage(GroundSet(std::move(names)), std::move(core));

  // One draw = an axis, the off-axis coordinates shared by everyone, and a
  // permutation handing out the n distinct axis values.
  std::map<std::vector<int>, double> mass;
  const double draw_weight = 1.0 / static_cast<double>(raw_draws);
  std::vector<int> rest(std::max(0, k - 1), 0);
  const std::vector<int> rest_radix(std::max(0, k - 1), n);
  std::vector<int> perm(n);
  std::vector<int> coords(k);
  std::vector<int> profile(n);
  for (int j = 0; j < k; ++j) {
    std::fill(rest.begin(), rest.end(), 0);
    do {
      std::iota(perm.begin(), perm.end(), 0);
      do {
        for (int i = 0; i < n; ++i) {
          for (int h = 0; h < k; ++h) {
            coords[h] = (h == j) ? perm[i] : rest[h < j ? h : h - 1];
          }
          profile[i] = grid_code(coords, n);
        }
        mass[profile] += draw_weight;
      } while (std::next_permutation(perm.begin(), perm.end()));
    } while (next_tuple(rest, rest_radix));
  }
  std::vector<Prior::SupportEntry> support;
  support.reserve(mass.size());
  for (const auto& [types, p] : mass) support.push_back({types, p});

  std::vector<std::vector<std::string>> type_names(n, tnames);
  Prior prior = Prior::joint(std::move(type_names), std::move(support));
  UtilityModel utilities;
  utilities.kind = UtilityModel::Kind::kBasicDerived;
  return make_game(std::move(prior), std::move(family), std::move(f),
                   std::move(utilities));
}

GridStrategy random_grid_strategy(int n, int k, std::uint64_t seed) {
  require(n >= 1 && k >= 1, "random_grid_strategy needs n >= 1 and k >= 1");
  const std::vector<int> type_radix(k, n);
  constexpr std::int64_t kCellLimit = 4'000'000;
  const std::int64_t num_types = capped_product(type_radix, kCellLimit);
  require(num_types <= kCellLimit / n,
          "random_grid_strategy: the strategy table needs more than " +
              std::to_string(kCellLimit) + " cells");
  Rng rng(seed);
  GridStrategy strategy;
  strategy.action.assign(n, std::vector<int>(static_cast<std::size_t>(num_types)));
  for (auto& row : strategy.action) {
    for (int& a : row) a = rng.index(k);
  }
  return strategy;
}

McEstimate grid_strategy_welfare(int n, int k, const GridStrategy& strategy,
                                 std::int64_t samples, std::uint64_t seed) {
  require(n >= 1 && k >= 1, "grid_strategy_welfare needs n >= 1 and k >= 1");
  require(samples >= 2, "grid_strategy_welfare needs at least two samples");
  const std::vector<int> type_radix(k, n);
  constexpr std::int64_t kCellLimit = 4'000'000;
  const std::int64_t num_types = capped_product(type_radix, kCellLimit);
  require(num_types <= kCellLimit / n,
          "grid_strategy_welfare: the strategy table needs more than " +
              std::to_string(kCellLimit) + " cells");
  require(static_cast<int>(strategy.action.size()) == n,
          "grid strategy must cover every player");
  for (const auto& row : strategy.action) {
    require(static_cast<std::int64_t>(row.size()) == num_types,
            "grid strategy must cover every type code");
    for (int a : row) require(a >= 0 && a < k, "grid strategy axis out of range");
  }

  Rng rng(seed);
  std::vector<int> perm(n);
  std::vector<int> base(k);
  std::vector<int> coords(k);
  std::vector<char> covered(static_cast<std::size_t>(k) * n, 0);
  std::vector<int> touched;
  double sum = 0.0;
  double sumsq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const int j = rng.index(k);
    for (int h = 0; h < k; ++h) base[h] = rng.index(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);

    touched.clear();
    int value = 0;
    for (int i = 0; i < n; ++i) {
      coords = base;
      coords[j] = perm[i];
      const int code = grid_code(coords, n);
      const int h = strategy.action[i][code];
      const int cell = h * n + coords[h];
      if (!covered[cell]) {
        covered[cell] = 1;
        touched.push_back(cell);
        ++value;
      }
    }
    for (int cell : touched) covered[cell] = 0;
    sum += static_cast<double>(value);
    sumsq += static_cast<double>(value) * static_cast<double>(value);
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

GameDefinition make_bipartite_game(int n, std::uint64_t seed, int draws,
                                   double edge_probability) {
  require(n >= 2, "make_bipartite_game needs at least two players");
  require(draws >= 1, "make_bipartite_game needs at least one type draw per player");
  double p = edge_probability;
  if (p < 0.0) p = std::min(1.0, 2.0 * std::log(static_cast<double>(n)) / n);
  require(p > 0.0 && p <= 1.0,
          "make_bipartite_game needs an edge probability in (0, 1]");

  Rng rng(seed);
  CoverageCore core;
  for (int v = 0; v < n; ++v) {
    core.universe.push_back("e" + std::to_string(v));
    core.weights.push_back(1.0);
  }

  std::vector<std::string> names;
  ActionFamily family;
  family.actions.resize(n);
  std::vector<std::vector<std::string>> type_names(n);
  std::vector<std::vector<double>> marginals(n);
  std::vector<int> draw;
  for (int i = 0; i < n; ++i) {
    std::map<std::vector<int>, int> counts;
    for (int d = 0; d < draws; ++d) {
      draw.clear();
      while (draw.empty()) {
        for (int v = 0; v < n; ++v) {
          if (rng.next_unit() < p) draw.push_back(v);
        }
      }
      ++counts[draw];
    }
    int t = 0;
    for (const auto& [set, count] : counts) {
      std::string tname = "s";
      for (std::size_t v = 0; v < set.size(); ++v) {
        if (v > 0) tname += "_";
        tname += std::to_string(set[v]);
      }
      type_names[i].push_back(tname);
      marginals[i].push_back(static_cast<double>(count) / draws);
      family.actions[i].emplace_back();
      for (int v : set) {
        family.actions[i].back().push_back(static_cast<int>(names.size()));
        names.push_back("p" + std::to_string(i) + "_t" + std::to_string(t) + "_e" +
                        std::to_string(v));
        core.covers.push_back({v});
      }
      ++t;
    }
  }
  for (int i = 0; i < n; ++i) {
    family.null_action.push_back(static_cast<int>(names.size()));
    names.push_back("p" + std::to_string(i) + "_null");
    core.covers.push_back({});
  }
  SetFunction f =
      SetFunction::weighted_coverage(GroundSet(std::move(names)), std::move(core));
  Prior prior = Prior::product(std::move(type_names), std::move(marginals));
  UtilityModel utilities;
  utilities.kind = UtilityModel::Kind::kBasicDerived;
  return make_game(std::move(prior), std::move(family), std::move(f),
                   std::move(utilities));
}

BipartiteSrReport bipartite_sr_proxy(const GameDefinition& g, std::int64_t samples,
                                     int restarts, std::uint64_t seed) {
  require(samples >= 2, "bipartite_sr_proxy needs at least two samples");
  require(restarts >= 1, "bipartite_sr_proxy needs at least one restart");
  require(g.prior.product_form(), "bipartite_sr_proxy needs an independent prior");
  require(g.welfare.is_coverage(), "bipartite_sr_proxy needs a coverage welfare");
  const CoverageCore& core = g.welfare.coverage_core();
  const int items = static_cast<int>(core.universe.size());
  for (double w : core.weights) {
    require(w == 1.0, "bipartite_sr_proxy needs unit item weights");
  }
  const int n = g.num_players();
  std::vector<int> item(core.covers.size(), -1);
  for (std::size_t e = 0; e < core.covers.size(); ++e) {
    if (g.is_null(static_cast<int>(e))) continue;
    require(core.covers[e].size() == 1,
            "bipartite_sr_proxy needs single-item actions");
    item[e] = core.covers[e][0];
  }

  // Strategy side: the coverage expectation factorizes over items under an
  // independent prior, and it is linear in one player's item probabilities,
  // so a per-player sweep is an exact block best response.
  std::vector<std::vector<double>> rho(n);
  std::vector<std::vector<int>> choice(n);
  for (int i = 0; i < n; ++i) {
    rho[i].resize(g.prior.num_types(i));
    choice[i].assign(g.prior.num_types(i), 0);
    for (int t = 0; t < g.prior.num_types(i); ++t) rho[i][t] = g.prior.marginal(i, t);
  }
  std::vector<std::vector<double>> prob(n, std::vector<double>(items, 0.0));
  auto rebuild_prob = [&](int i) {
    std::fill(prob[i].begin(), prob[i].end(), 0.0);
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      prob[i][item[g.action_set(i, t)[choice[i][t]]]] += rho[i][t];
    }
  };
  auto objective = [&] {
    double obj = 0.0;
    for (int e = 0; e < items; ++e) {
      double miss = 1.0;
      for (int i = 0; i < n; ++i) miss *= 1.0 - prob[i][e];
      obj += 1.0 - miss;
    }
    return obj;
  };

  Rng rng(seed);
  BipartiteSrReport report;
  report.restarts = restarts;
  std::vector<double> rest(items);
  for (int r = 0; r < restarts; ++r) {
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < g.prior.num_types(i); ++t) {
        choice[i][t] =
            (r == 0) ? 0 : rng.index(static_cast<int>(g.action_set(i, t).size()));
      }
      rebuild_prob(i);
    }
    double obj = objective();
    for (int sweep = 0; sweep < 500; ++sweep) {
      for (int i = 0; i < n; ++i) {
        std::fill(rest.begin(), rest.end(), 1.0);
        for (int jp = 0; jp < n; ++jp) {
          if (jp == i) continue;
          for (int e = 0; e < items; ++e) rest[e] *= 1.0 - prob[jp][e];
        }
        for (int t = 0; t < g.prior.num_types(i); ++t) {
          const auto& set = g.action_set(i, t);
          int best_a = choice[i][t];
          double best_q = rest[item[set[best_a]]];
          for (int a = 0; a < static_cast<int>(set.size()); ++a) {
            const double qa = rest[item[set[a]]];
            if (qa > best_q + 1e-15) {
              best_q = qa;
              best_a = a;
            }
          }
          choice[i][t] = best_a;
        }
        rebuild_prob(i);
      }
      const double next = objective();
      if (next <= obj + 1e-12) {
        obj = next;
        break;
      }
      obj = next;
    }
    report.str_local = std::max(report.str_local, obj);
  }

  // First-best side: sample a type profile and match players to distinct
  // items reachable from their realized action sets.
  std::vector<std::vector<int>> adj(n);
  std::vector<int> match_item(items, -1);
  std::vector<char> visited(items, 0);
  std::function<bool(int)> augment = [&](int i) -> bool {
    for (int e : adj[i]) {
      if (visited[e]) continue;
      visited[e] = 1;
      if (match_item[e] < 0 || augment(match_item[e])) {
        match_item[e] = i;
        return true;
      }
    }
    return false;
  };
  double sum = 0.0;
  double sumsq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const std::vector<int> theta = g.prior.sample(rng);
    for (int i = 0; i < n; ++i) {
      adj[i].clear();
      for (int a : g.action_set(i, theta[i])) adj[i].push_back(item[a]);
      std::sort(adj[i].begin(), adj[i].end());
      adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
    }
    std::fill(match_item.begin(), match_item.end(), -1);
    int value = 0;
    for (int i = 0; i < n; ++i) {
      std::fill(visited.begin(), visited.end(), 0);
      if (augment(i)) ++value;
    }
    sum += static_cast<double>(value);
    sumsq += static_cast<double>(value) * static_cast<double>(value);
  }
  report.opt.samples = samples;
  report.opt.seed = seed;
  report.opt.estimate = sum / static_cast<double>(samples);
  const double var = std::max(
      0.0, (sumsq - sum * report.opt.estimate) / static_cast<double>(samples - 1));
  report.opt.stderr_of_mean = std::sqrt(var / static_cast<double>(samples));
  require(report.opt.estimate > 0.0, "bipartite_sr_proxy: sampled first-best is zero");
  report.proxy = report.str_local / report.opt.estimate;
  return report;
}

GameDefinition make_random_game(const RandomGameSpec& spec) {
  require(spec.num_players >= 1, "make_random_game needs at least one player");
  require(spec.types_per_player >= 1, "make_random_game needs at least one type");
  require(spec.actions_per_type >= 1, "make_random_game needs at least one action");
  const std::int64_t cells = static_cast<std::int64_t>(spec.num_players) *
                             spec.types_per_player * spec.actions_per_type;
  require(cells <= 100'000,
          "make_random_game sizes exceed the test-scale limit of 100000 action "
          "cells");

  Rng rng(spec.seed);
  const int n = spec.num_players;
  const int universe = n + 2;
  CoverageCore core;
  for (int u = 0; u < universe; ++u) {
    core.universe.push_back("u" + std::to_string(u));
    core.weights.push_back(0.25 + rng.next_unit());
  }

  std::vector<std::vector<std::string>> type_names(n);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < spec.types_per_player; ++t) {
      type_names[i].push_back("t" + std::to_string(i) + "_" + std::to_string(t));
    }
  }

  std::vector<std::string> names;
  ActionFamily family;
  family.actions.resize(n);
  for (int i = 0; i < n; ++i) {
    family.actions[i].resize(spec.types_per_player);
    for (int t = 0; t < spec.types_per_player; ++t) {
      for (int a = 0; a < spec.actions_per_type; ++a) {
        family.actions[i][t].push_back(static_cast<int>(names.size()));
        names.push_back("a" + std::to_string(names.size()));
        std::vector<int> cov = {rng.index(universe)};
        for (int u = 0; u < universe; ++u) {
          if (rng.next_unit() < 0.4) cov.push_back(u);
        }
        core.covers.push_back(std::move(cov));
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    family.null_action.push_back(static_cast<int>(names.size()));
    names.push_back("null" + std::to_string(i));
    core.covers.push_back({});
  }
  SetFunction f =
      SetFunction::weighted_coverage(GroundSet(std::move(names)), std::move(core));

  Prior prior = [&] {
    if (!spec.correlated_prior) {
      std::vector<std::vector<double>> marginals(n);
      for (int i = 0; i < n; ++i) {
        double total = 0.0;
        for (int t = 0; t < spec.types_per_player; ++t) {
          marginals[i].push_back(0.2 + rng.next_unit());
          total += marginals[i].back();
        }
        for (double& m : marginals[i]) m /= total;
      }
      return Prior::product(std::move(type_names), std::move(marginals));
    }
    std::map<std::vector<int>, double> mass;
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < spec.types_per_player; ++t) {
        std::vector<int> profile(n);
        for (int j = 0; j < n; ++j) profile[j] = rng.index(spec.types_per_player);
        profile[i] = t;
        mass[profile] += 0.25 + rng.next_unit();
      }
    }
    double total = 0.0;
    for (const auto& [profile, p] : mass) total += p;
    std::vector<Prior::SupportEntry> support;
    for (const auto& [profile, p] : mass) support.push_back({profile, p / total});
    return Prior::joint(std::move(type_names), std::move(support));
  }();

  UtilityModel utilities;
  utilities.kind = spec.equal_share_utilities ? UtilityModel::Kind::kEqualShareCoverage
                                              : UtilityModel::Kind::kBasicDerived;
  return make_game(std::move(prior), std::move(family), std::move(f),
                   std::move(utilities));
}

GameDefinition make_resource_allocation_game(const ResourceAllocationSpec& spec) {
  const int num_resources = static_cast<int>(spec.resources.size());
  require(num_resources >= 1, "make_resource_allocation_game needs a resource");
  require(spec.payoff_points.size() == spec.resources.size(),
          "make_resource_allocation_game needs one payoff table per resource");
  {
    std::set<std::string> seen(spec.resources.begin(), spec.resources.end());
    require(static_cast<int>(seen.size()) == num_resources,
            "resource names must be unique");
  }
  require(!spec.players.empty(), "make_resource_allocation_game needs a player");
  const int n = static_cast<int>(spec.players.size());

  UtilityModel utilities;
  utilities.kind = UtilityModel::Kind::kProportionalShareWeights;
  for (int r = 0; r < num_resources; ++r) {
    utilities.resource_payoffs.push_back({spec.resources[r], spec.payoff_points[r]});
  }

  std::vector<std::string> names;
  ActionFamily family;
  family.actions.resize(n);
  std::vector<std::vector<std::string>> type_names(n);
  std::vector<std::vector<double>> marginals(n);
  for (int i = 0; i < n; ++i) {
    const ResourcePlayerSpec& player = spec.players[i];
    require(!player.types.empty(), "every player needs at least one type");
    if (player.marginal.empty()) {
      marginals[i].assign(player.types.size(),
                          1.0 / static_cast<double>(player.types.size()));
    } else {
      require(player.marginal.size() == player.types.size(),
              "type marginals must match the type list");
      double total = 0.0;
      for (double m : player.marginal) {
        require(m > 0.0, "type marginals must be positive");
        total += m;
      }
      for (double m : player.marginal) marginals[i].push_back(m / total);
    }
    family.actions[i].resize(player.types.size());
    std::set<std::string> tseen;
    for (std::size_t t = 0; t < player.types.size(); ++t) {
      const ResourceTypeSpec& type = player.types[t];
      require(tseen.insert(type.name).second, "type names must be unique per player");
      require(type.weight > 0.0, "type weights must be positive");
      require(!type.choices.empty(), "every type needs at least one choice");
      type_names[i].push_back(type.name);
      std::set<std::string> cseen;
      for (const ResourceChoice& choice : type.choices) {
        require(cseen.insert(choice.name).second,
                "choice names must be unique per type");
        std::vector<int> resources = choice.resources;
        std::sort(resources.begin(), resources.end());
        resources.erase(std::unique(resources.begin(), resources.end()),
                        resources.end());
        for (int r : resources) {
          require(r >= 0 && r < num_resources, "choice resource index out of range");
        }
        family.actions[i][t].push_back(static_cast<int>(names.size()));
        names.push_back("p" + std::to_string(i) + "_" + type.name + "_" + choice.name);
        utilities.action_weight.push_back(type.weight);
        utilities.action_resources.push_back(std::move(resources));
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    family.null_action.push_back(static_cast<int>(names.size()));
    names.push_back("p" + std::to_string(i) + "_null");
    utilities.action_weight.push_back(0.0);
    utilities.action_resources.push_back({});
  }

  const int ground = static_cast<int>(names.size());
  require(ground <= 20,
          "resource-allocation welfare tabulates the ground power set; " +
              std::to_string(ground) + " ground elements exceed the limit of 20");
  std::vector<double> table(std::size_t{1} << ground, 0.0);
  std::vector<double> load(num_resources);
  for (std::size_t mask = 1; mask < table.size(); ++mask) {
    std::fill(load.begin(), load.end(), 0.0);
    for (int e = 0; e < ground; ++e) {
      if (!(mask >> e & 1)) continue;
      for (int r : utilities.action_resources[e]) {
        load[r] += utilities.action_weight[e];
      }
    }
    double value = 0.0;
    for (int r = 0; r < num_resources; ++r) {
      value += utilities.resource_payoffs[r].at(load[r]);
    }
    table[mask] = value;
  }

  SetFunction f = SetFunction::explicit_table(GroundSet(std::move(names)),
                                              std::move(table));
  Prior prior = Prior::product(std::move(type_names), std::move(marginals));
  return make_game(std::move(prior), std::move(family), std::move(f),
                   std::move(utilities));
}

ResourceAllocationSpec reference_resource_spec() {
  ResourceAllocationSpec spec;
  spec.resources = {"r0", "r1"};
  spec.payoff_points = {{{2.0, 2.0}, {6.0, 2.0}}, {{2.0, 2.0}, {6.0, 2.0}}};
  for (int i = 0; i < 2; ++i) {
    ResourcePlayerSpec player;
    for (double w : {1.0, 2.0}) {
      ResourceTypeSpec type;
      type.name = "w" + std::to_string(static_cast<int>(w));
      type.weight = w;
      type.choices = {{"r0", {0}}, {"r1", {1}}};
      player.types.push_back(std::move(type));
    }
    player.marginal = {0.5, 0.5};
    spec.players.push_back(std::move(player));
  }
  return spec;
}

ResourceAllocationSpec reference_routing_spec() {
  ResourceAllocationSpec spec;
  spec.resources = {"e01", "e02", "e13", "e23"};
  spec.payoff_points.assign(4, {{1.0, 1.0}, {5.0, 1.0}});
  for (int i = 0; i < 2; ++i) {
    ResourcePlayerSpec player;
    ResourceTypeSpec far;
    far.name = "od03";
    far.weight = 1.0;
    far.choices = {{"via1", {0, 2}}, {"via2", {1, 3}}};
    ResourceTypeSpec near;
    near.name = "od13";
    near.weight = 1.0;
    near.choices = {{"direct", {2}}, {"around", {0, 1, 3}}};
    player.types = {std::move(far), std::move(near)};
    player.marginal = {0.5, 0.5};
    spec.players.push_back(std::move(player));
  }
  return spec;
}

GameDefinition make_from_recipe(const InstanceRecipe& recipe) {
  if (recipe.name == "figure2") {
    return make_figure2_game(recipe_param(recipe, "epsilon", 0.01));
  }
  if (recipe.name == "priority") {
    return make_priority_game(recipe_int(recipe, "n", 4),
                              recipe_int(recipe, "num_high", -1))
        .game;
  }
  if (recipe.name == "grid") {
    return make_grid_game(recipe_int(recipe, "n", 4), recipe_int(recipe, "k", 2));
  }
  if (recipe.name == "bipartite") {
    return make_bipartite_game(recipe_int(recipe, "n", 16), recipe.seed,
                               recipe_int(recipe, "draws", 32),
                               recipe_param(recipe, "edge_probability", -1.0));
  }
  if (recipe.name == "random") {
    RandomGameSpec spec;
    spec.num_players = recipe_int(recipe, "players", spec.num_players);
    spec.types_per_player = recipe_int(recipe, "types", spec.types_per_player);
    spec.actions_per_type = recipe_int(recipe, "actions", spec.actions_per_type);
    spec.correlated_prior = recipe_param(recipe, "correlated", 0.0) != 0.0;
    spec.equal_share_utilities = recipe_param(recipe, "equal_share", 0.0) != 0.0;
    spec.seed = recipe.seed;
    return make_random_game(spec);
  }
  if (recipe.name == "resource_weights") {
    return make_resource_allocation_game(reference_resource_spec());
  }
  if (recipe.name == "resource_routing") {
    return make_resource_allocation_game(reference_routing_spec());
  }
  throw InputError("unknown instance recipe: " + recipe.name);
}

std::vector<InstanceRecipe> reference_recipes() {
  std::vector<InstanceRecipe> out;
  out.push_back({"figure2",
                 {{"epsilon", 0.01}},
                 1,
                 {{"opt", 2.505},
                  {"comeq_welfare", 2.01},
                  {"bs_max", 2.505},
                  {"pos_comeq", 2.01 / 2.505}}});
  out.push_back({"priority",
                 {{"n", 4.0}},
                 1,
                 {{"opt", 3.75}, {"mediator_welfare", 1.75}}});
  out.push_back({"grid", {{"n", 4.0}, {"k", 2.0}}, 1, {{"opt", 4.0}}});
  out.push_back({"bipartite", {{"n", 16.0}, {"draws", 32.0}}, 7, {}});
  out.push_back(
      {"random", {{"players", 2.0}, {"types", 2.0}, {"actions", 2.0}}, 11, {}});
  out.push_back({"resource_weights", {}, 1, {}});
  out.push_back({"resource_routing", {}, 1, {}});
  return out;
}

}  // namespace subwelf
