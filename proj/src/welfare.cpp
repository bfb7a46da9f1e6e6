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

#include "subwelf/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace subwelf {

namespace {

constexpr double kOneMinusInvE = 0.6321205588285577;

std::vector<int> action_radix(const GameDefinition& g, const std::vector<int>& theta) {
  std::vector<int> radix(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) {
    radix[i] = static_cast<int>(g.action_set(i, theta[i]).size());
    require(radix[i] > 0, "every realized type needs at least one action");
  }
  return radix;
}

}  // namespace

OptimalProfileCertificate compute_opt(const GameDefinition& g, const Budget& budget) {
  OptimalProfileCertificate cert;
  cert.support = g.prior.expanded_support(budget);

  std::int64_t total = 0;
  for (const auto& [theta, p] : cert.support) {
    const auto radix = action_radix(g, theta);
    const std::int64_t count = capped_product(radix, budget.max_evaluations);
    require_budget(count <= budget.max_evaluations - total,
                   "compute_opt: per-profile action enumeration exceeds the budget");
    total += count;
  }

  const int n = g.num_players();
  cert.argmax.reserve(cert.support.size());
  cert.best_welfare.reserve(cert.support.size());
  std::vector<int> profile(n);
  for (const auto& [theta, p] : cert.support) {
    const auto radix = action_radix(g, theta);
    std::vector<int> digits(n, 0);
    double best = -1.0;
    std::vector<int> best_profile;
    do {
      for (int i = 0; i < n; ++i) profile[i] = g.action_set(i, theta[i])[digits[i]];
      const double w = social_welfare(g, profile);
      if (w > best) {
        best = w;
        best_profile = profile;
      }
    } while (next_tuple(digits, radix));
    cert.opt += p * best;
    cert.argmax.push_back(std::move(best_profile));
    cert.best_welfare.push_back(best);
  }
  return cert;
}

StrategySearchResult compute_str_exact(const GameDefinition& g, const Budget& budget) {
  const auto support = g.prior.expanded_support(budget);
  const int n = g.num_players();

  std::vector<std::pair<int, int>> cells;  // (player, type)
  std::vector<int> radix;
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      cells.emplace_back(i, t);
      radix.push_back(static_cast<int>(g.action_set(i, t).size()));
      require(radix.back() > 0, "every type needs at least one action");
    }
  }
  const std::int64_t profiles = capped_product(radix, budget.max_evaluations);
  const std::int64_t support_size = static_cast<std::int64_t>(support.size());
  require_budget(profiles <= budget.max_evaluations / std::max<std::int64_t>(1, support_size),
                 "compute_str_exact: strategy enumeration exceeds the budget; "
                 "use compute_str_local for a lower bound");

  StrategySearchResult result;
  result.exact = true;
  StrategyProfile s;
  s.action.resize(n);
  for (int i = 0; i < n; ++i) s.action[i].resize(g.prior.num_types(i));

  std::vector<int> digits(cells.size(), 0);
  std::vector<int> profile(n);
  double best = -1.0;
  do {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto [i, t] = cells[c];
      s.action[i][t] = g.action_set(i, t)[digits[c]];
    }
    double value = 0.0;
    for (const auto& [theta, p] : support) {
      for (int i = 0; i < n; ++i) profile[i] = s.action[i][theta[i]];
      value += p * social_welfare(g, profile);
    }
    if (value > best) {
      best = value;
      result.profile = s;
    }
  } while (next_tuple(digits, radix));
  result.value = best;
  return result;
}

StrategySearchResult compute_str_local(const GameDefinition& g, int restarts,
                                       std::uint64_t seed, const Budget& budget) {
  require(restarts >= 1, "compute_str_local needs at least one restart");
  const auto support = g.prior.expanded_support(budget);
  const int n = g.num_players();
  const std::int64_t support_size = static_cast<std::int64_t>(support.size());

  // Support indices grouped by (player, type); the objective is separable
  // across one player's type cells, so a full sweep is a best response.
  std::vector<std::vector<std::vector<int>>> cond(n);
  std::int64_t sweep_cost = 0;
  for (int i = 0; i < n; ++i) {
    cond[i].resize(g.prior.num_types(i));
    for (std::int64_t s = 0; s < support_size; ++s) {
      cond[i][support[s].first[i]].push_back(static_cast<int>(s));
    }
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      require(!g.action_set(i, t).empty(), "every type needs at least one action");
      sweep_cost += static_cast<std::int64_t>(g.action_set(i, t).size()) *
                    static_cast<std::int64_t>(cond[i][t].size());
    }
  }
  require_budget(sweep_cost > 0 && sweep_cost <= budget.max_evaluations,
                 "compute_str_local: one ascent sweep exceeds the budget");

  Rng rng(seed);
  std::int64_t evaluations = 0;
  StrategySearchResult result;
  result.exact = false;
  result.restarts = restarts;
  result.seed = seed;
  double best = -1.0;

  std::vector<int> profile(n);
  auto cell_value = [&](const StrategyProfile& s, int i, int t, int action) {
    double v = 0.0;
    for (int idx : cond[i][t]) {
      const auto& [theta, p] = support[idx];
      for (int j = 0; j < n; ++j) profile[j] = s.action[j][theta[j]];
      profile[i] = action;
      v += p * social_welfare(g, profile);
    }
    return v;
  };

  for (int r = 0; r < restarts; ++r) {
    StrategyProfile s;
    s.action.resize(n);
    for (int i = 0; i < n; ++i) {
      s.action[i].resize(g.prior.num_types(i));
      for (int t = 0; t < g.prior.num_types(i); ++t) {
        const auto& set = g.action_set(i, t);
        s.action[i][t] = (r == 0) ? set[0] : set[rng.index(static_cast<int>(set.size()))];
      }
    }

    int sweeps = 0;
    bool improved = true;
    while (improved) {
      require_budget(evaluations <= budget.max_evaluations - sweep_cost,
                     "compute_str_local: evaluation budget exhausted mid-ascent");
      improved = false;
      ++sweeps;
      for (int i = 0; i < n; ++i) {
        for (int t = 0; t < g.prior.num_types(i); ++t) {
          if (cond[i][t].empty()) continue;
          const auto& set = g.action_set(i, t);
          double cur = cell_value(s, i, t, s.action[i][t]);
          evaluations += static_cast<std::int64_t>(cond[i][t].size());
          for (int a : set) {
            if (a == s.action[i][t]) continue;
            const double v = cell_value(s, i, t, a);
            evaluations += static_cast<std::int64_t>(cond[i][t].size());
            if (v > cur + 1e-12) {
              cur = v;
              s.action[i][t] = a;
              improved = true;
            }
          }
        }
      }
    }

    double value = 0.0;
    for (const auto& [theta, p] : support) {
      for (int j = 0; j < n; ++j) profile[j] = s.action[j][theta[j]];
      value += p * social_welfare(g, profile);
    }
    evaluations += support_size;
    if (value > best + 1e-12 || r == 0) {
      best = value;
      result.profile = s;
      result.sweeps = sweeps;
    }
  }
  result.value = best;
  return result;
}

SrGapReport sr_gap(const GameDefinition& g, StrMode mode, const Budget& budget,
                   int restarts, std::uint64_t seed) {
  SrGapReport report;
  report.opt = compute_opt(g, budget).opt;
  const StrategySearchResult str = (mode == StrMode::kExact)
                                       ? compute_str_exact(g, budget)
                                       : compute_str_local(g, restarts, seed, budget);
  report.str = str.value;
  report.str_exact = str.exact;
  if (report.opt <= 0.0) {
    report.vacuous = true;
  } else {
    report.gap = report.str / report.opt;
  }
  return report;
}

MarginalProfile marginal_profile(const GameDefinition& g,
                                 const OptimalProfileCertificate& cert) {
  require(cert.support.size() == cert.argmax.size(),
          "certificate support and argmax lists must align");
  const int n = g.num_players();
  MarginalProfile mp;
  mp.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    mp.weight[i].resize(g.prior.num_types(i));
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      mp.weight[i][t].assign(g.action_set(i, t).size(), 0.0);
    }
  }
  for (std::size_t s = 0; s < cert.support.size(); ++s) {
    const auto& [theta, p] = cert.support[s];
    const auto& profile = cert.argmax[s];
    require(static_cast<int>(profile.size()) == n, "certificate profile has wrong arity");
    for (int i = 0; i < n; ++i) {
      const int a = profile[i];
      require(g.owner_player[a] == i && g.owner_type[a] == theta[i],
              "certificate action does not belong to the realized type");
      mp.weight[i][theta[i]][g.owner_slot[a]] += p;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      const double m = g.prior.marginal(i, t);
      for (double& w : mp.weight[i][t]) w /= m;
    }
  }
  return mp;
}

HeavyLightSplit heavy_light_split(const GameDefinition& g, const MarginalProfile& mp) {
  const int n = g.num_players();
  const int ground = g.welfare.ground().size();
  HeavyLightSplit split;
  split.threshold = 1.0 / std::sqrt(static_cast<double>(n));
  split.heavy.resize(n);
  split.light.resize(n);
  for (int i = 0; i < n; ++i) {
    const int types = g.prior.num_types(i);
    split.heavy[i].resize(types);
    split.light[i].assign(types, DensityVector(ground, 0.0));
    for (int t = 0; t < types; ++t) {
      const auto& set = g.action_set(i, t);
      for (std::size_t k = 0; k < set.size(); ++k) {
        const double w = mp.weight[i][t][k];
        if (w >= split.threshold - 1e-12) {
          split.heavy[i][t].push_back(set[k]);
        } else if (w > 0.0) {
          split.light[i][t][set[k]] = std::min(1.0, w / split.threshold);
        }
      }
    }
  }
  return split;
}

namespace {

// Value and standard error (0 when exact) of E_{X~x}[f(X)].
struct Expectation {
  double value = 0.0;
  double se = 0.0;
};

Expectation expect_multilinear(const SetFunction& f, const DensityVector& x,
                               const Budget& budget, std::int64_t samples, Rng& rng,
                               bool& exact_terms) {
  try {
    return {multilinear_exact(f, x, budget), 0.0};
  } catch (const BudgetError&) {
    exact_terms = false;
    const McEstimate est = multilinear_sampled(f, x, samples, rng.next_u64());
    return {est.estimate, est.stderr_of_mean};
  }
}

// E_{X~x}[f(element | X)]; zero whenever the draw already contains element.
Expectation expect_conditional_marginal(const SetFunction& f, const DensityVector& x,
                                        int element, const Budget& budget,
                                        std::int64_t samples, Rng& rng,
                                        bool& exact_terms) {
  if (x[element] >= 1.0) return {0.0, 0.0};
  try {
    const double grad = multilinear_gradient(f, x, element, budget);
    return {(1.0 - x[element]) * grad, 0.0};
  } catch (const BudgetError&) {
    exact_terms = false;
    Rng local(rng.next_u64());
    const int ground = static_cast<int>(x.size());
    std::vector<int> members;
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t s = 0; s < samples; ++s) {
      members.clear();
      bool has_element = false;
      for (int e = 0; e < ground; ++e) {
        if (x[e] > 0.0 && local.next_unit() < x[e]) {
          members.push_back(e);
          if (e == element) has_element = true;
        }
      }
      const double v = has_element ? 0.0 : f.marginal(element, members);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(samples);
    const double var = std::max(0.0, (sumsq - sum * mean) / static_cast<double>(samples - 1));
    return {mean, std::sqrt(var / static_cast<double>(samples))};
  }
}

AuditInequality make_inequality(const std::string& name, double lhs, double lhs_var,
                                double rhs, double rhs_var) {
  AuditInequality q;
  q.name = name;
  q.lhs = lhs;
  q.rhs = rhs;
  q.band = 4.0 * std::sqrt(lhs_var + rhs_var) + tol::kExact;
  q.holds = lhs <= rhs + q.band;
  return q;
}

}  // namespace

SrBoundAuditReport sr_bound_audit(const GameDefinition& g, std::int64_t samples,
                                  std::uint64_t seed, const Budget& budget) {
  const int n = g.num_players();
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  require(r * r == n, "sr_bound_audit requires a square number of players");
  require(samples >= 2, "sr_bound_audit needs at least two samples");

  SrBoundAuditReport report;
  report.num_players = n;
  report.sqrt_n = r;
  report.seed = seed;

  const OptimalProfileCertificate cert = compute_opt(g, budget);
  report.opt = cert.opt;
  StrategySearchResult str;
  try {
    str = compute_str_exact(g, budget);
  } catch (const BudgetError&) {
    str = compute_str_local(g, 8, seed ^ 0x9e3779b97f4a7c15ULL, budget);
  }
  report.str = str.value;
  report.str_exact = str.exact;

  const MarginalProfile mp = marginal_profile(g, cert);
  const HeavyLightSplit split = heavy_light_split(g, mp);
  Rng rng(seed);

  // (a) per (player, type): expected marginal of each optimal action on top
  // of that cell's own light draw plus heavy set.
  double term_a = 0.0, var_a = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      const double rho = g.prior.marginal(i, t);
      DensityVector z = split.light[i][t];
      for (int e : split.heavy[i][t]) z[e] = 1.0;
      const auto& set = g.action_set(i, t);
      for (std::size_t k = 0; k < set.size(); ++k) {
        const double w = mp.weight[i][t][k];
        if (w <= 0.0) continue;
        const Expectation e = expect_conditional_marginal(
            g.welfare, z, set[k], budget, samples, rng, report.exact_terms);
        term_a += rho * w * e.value;
        var_a += (rho * w * e.se) * (rho * w * e.se);
      }
    }
  }

  // (b) union of the light draws; action sets are disjoint so the union draw
  // is the independent draw from the summed densities. (c) heavy union.
  double term_b = 0.0, var_b = 0.0, term_c = 0.0;
  const int ground = g.welfare.ground().size();
  std::vector<int> heavy_members;
  for (const auto& [theta, p] : cert.support) {
    DensityVector sum(ground, 0.0);
    heavy_members.clear();
    for (int i = 0; i < n; ++i) {
      const int t = theta[i];
      for (int e = 0; e < ground; ++e) sum[e] += split.light[i][t][e];
      for (int e : split.heavy[i][t]) heavy_members.push_back(e);
    }
    const Expectation e = expect_multilinear(g.welfare, sum, budget, samples, rng,
                                             report.exact_terms);
    term_b += p * e.value;
    var_b += (p * e.se) * (p * e.se);
    term_c += p * g.welfare.evaluate(heavy_members);
  }

  // (d) strategic floor from the per-cell multilinear values.
  double sum_fy = 0.0, var_fy = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      const double rho = g.prior.marginal(i, t);
      const Expectation e = expect_multilinear(g.welfare, split.light[i][t], budget,
                                               samples, rng, report.exact_terms);
      sum_fy += rho * e.value;
      var_fy += (rho * e.se) * (rho * e.se);
    }
  }
  const double term_d = kOneMinusInvE / static_cast<double>(n) * sum_fy;
  const double var_d = (kOneMinusInvE / n) * (kOneMinusInvE / n) * var_fy;

  report.term_light_marginal = term_a;
  report.term_light_union = term_b;
  report.term_heavy_union = term_c;
  report.term_strategic_floor = term_d;
  report.samples = report.exact_terms ? 0 : samples;

  const double root = static_cast<double>(r);
  report.inequalities.push_back(make_inequality(
      "decomposition", report.opt, 0.0, term_a + term_b + term_c, var_a + var_b));
  report.inequalities.push_back(make_inequality(
      "light-marginal", term_a, var_a, root * report.str / kOneMinusInvE, 0.0));
  report.inequalities.push_back(
      make_inequality("light-union", term_b, var_b, root * report.str, 0.0));
  report.inequalities.push_back(
      make_inequality("heavy-union", term_c, 0.0, root * report.str, 0.0));
  report.inequalities.push_back(
      make_inequality("strategic-floor", term_d, var_d, report.str, 0.0));
  report.inequalities.push_back(make_inequality(
      "overall", report.opt, 0.0, (2.0 + 1.0 / kOneMinusInvE) * root * report.str, 0.0));
  report.all_hold = std::all_of(report.inequalities.begin(), report.inequalities.end(),
                                [](const AuditInequality& q) { return q.holds; });
  return report;
}

McEstimate str_sampling_lower_bound(const GameDefinition& g,
                                    const OptimalProfileCertificate& cert,
                                    std::int64_t samples, std::uint64_t seed) {
  require(samples >= 2, "str_sampling_lower_bound needs at least two samples");
  const MarginalProfile mp = marginal_profile(g, cert);
  const int n = g.num_players();
  Rng rng(seed);
  std::vector<int> profile(n);
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const std::vector<int> theta = g.prior.sample(rng);
    for (int i = 0; i < n; ++i) {
      const auto& weights = mp.weight[i][theta[i]];
      const double u = rng.next_unit();
      double acc = 0.0;
      int pick = static_cast<int>(weights.size()) - 1;
      for (std::size_t k = 0; k < weights.size(); ++k) {
        acc += weights[k];
        if (u < acc) {
          pick = static_cast<int>(k);
          break;
        }
      }
      profile[i] = g.action_set(i, theta[i])[pick];
    }
    const double v = social_welfare(g, profile);
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

}  // namespace subwelf
