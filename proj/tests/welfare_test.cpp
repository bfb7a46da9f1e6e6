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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "subwelf/welfare.hpp"

using namespace subwelf;

namespace {

// Two players, uniform prior over player 0's two single-action types; player
// 1 has one type with two actions. The per-type optima are (x1, a2) -> 2.01
// and (x1p, a2p) -> 3.0, while the best pure strategy plays a2 throughout.
GameDefinition two_type_game() {
  GroundSet ground({"x1", "x1p", "a2", "a2p", "n0", "n1"});
  CoverageCore core;
  core.universe = {"u1", "u2", "u3"};
  core.weights = {2.0, 1.0, 0.01};
  core.covers = {{2}, {0}, {0, 2}, {1}, {}, {}};
  SetFunction f = SetFunction::weighted_coverage(std::move(ground), std::move(core));

  Prior prior = Prior::joint({{"t1", "t1p"}, {"t2"}}, {{{0, 0}, 0.5}, {{1, 0}, 0.5}});
  ActionFamily family;
  family.actions = {{{0}, {1}}, {{2, 3}}};
  family.null_action = {4, 5};
  UtilityModel utilities;
  utilities.kind = UtilityModel::Kind::kBasicDerived;
  return make_game(std::move(prior), std::move(family), std::move(f), std::move(utilities));
}

struct GeneratorConfig {
  int min_players = 2;
  int max_players = 3;
  int max_types = 2;
  int max_actions = 2;
  bool product_prior = false;
};

GameDefinition random_coverage_game(std::uint64_t seed, const GeneratorConfig& cfg) {
  Rng rng(seed);
  const int n = cfg.min_players + rng.index(cfg.max_players - cfg.min_players + 1);
  std::vector<std::vector<std::string>> type_names(n);
  std::vector<int> types(n);
  for (int i = 0; i < n; ++i) {
    types[i] = 1 + rng.index(cfg.max_types);
    for (int t = 0; t < types[i]; ++t) {
      type_names[i].push_back("t" + std::to_string(i) + "_" + std::to_string(t));
    }
  }
  const int universe = 3 + rng.index(3);
  CoverageCore core;
  for (int u = 0; u < universe; ++u) {
    core.universe.push_back("u" + std::to_string(u));
    core.weights.push_back(0.25 + rng.next_unit());
  }
  std::vector<std::string> names;
  ActionFamily family;
  family.actions.resize(n);
  for (int i = 0; i < n; ++i) {
    family.actions[i].resize(types[i]);
    for (int t = 0; t < types[i]; ++t) {
      const int acts = 1 + rng.index(cfg.max_actions);
      for (int k = 0; k < acts; ++k) {
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
    if (cfg.product_prior) {
      std::vector<std::vector<double>> marginals(n);
      for (int i = 0; i < n; ++i) {
        double total = 0.0;
        for (int t = 0; t < types[i]; ++t) {
          marginals[i].push_back(0.2 + rng.next_unit());
          total += marginals[i].back();
        }
        for (double& m : marginals[i]) m /= total;
      }
      return Prior::product(std::move(type_names), std::move(marginals));
    }
    std::map<std::vector<int>, double> mass;
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < types[i]; ++t) {
        std::vector<int> profile(n);
        for (int j = 0; j < n; ++j) profile[j] = rng.index(types[j]);
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
  utilities.kind = UtilityModel::Kind::kBasicDerived;
  return make_game(std::move(prior), std::move(family), std::move(f), std::move(utilities));
}

GameDefinition singleton_type_game(int n, std::uint64_t seed) {
  Rng rng(seed);
  const int universe = 4;
  CoverageCore core;
  for (int u = 0; u < universe; ++u) {
    core.universe.push_back("u" + std::to_string(u));
    core.weights.push_back(0.5 + rng.next_unit());
  }
  std::vector<std::string> names;
  ActionFamily family;
  family.actions.resize(n);
  std::vector<std::vector<std::string>> type_names(n, {"t"});
  for (int i = 0; i < n; ++i) {
    family.actions[i].resize(1);
    for (int k = 0; k < 2; ++k) {
      family.actions[i][0].push_back(static_cast<int>(names.size()));
      names.push_back("a" + std::to_string(names.size()));
      core.covers.push_back({rng.index(universe), rng.index(universe)});
    }
  }
  for (int i = 0; i < n; ++i) {
    family.null_action.push_back(static_cast<int>(names.size()));
    names.push_back("null" + std::to_string(i));
    core.covers.push_back({});
  }
  SetFunction f =
      SetFunction::weighted_coverage(GroundSet(std::move(names)), std::move(core));
  Prior prior = Prior::joint(std::move(type_names), {{std::vector<int>(n, 0), 1.0}});
  UtilityModel utilities;
  utilities.kind = UtilityModel::Kind::kBasicDerived;
  return make_game(std::move(prior), std::move(family), std::move(f), std::move(utilities));
}

}  // namespace

TEST_CASE("compute_opt certifies the per-type optima") {
  const GameDefinition g = two_type_game();
  const OptimalProfileCertificate cert = compute_opt(g);
  CHECK(cert.opt == doctest::Approx(2.505).epsilon(1e-12));
  REQUIRE(cert.support.size() == 2);
  CHECK(cert.argmax[0] == std::vector<int>{0, 2});
  CHECK(cert.argmax[1] == std::vector<int>{1, 3});
  CHECK(cert.best_welfare[0] == doctest::Approx(2.01).epsilon(1e-12));
  CHECK(cert.best_welfare[1] == doctest::Approx(3.0).epsilon(1e-12));
  for (std::size_t s = 0; s < cert.support.size(); ++s) {
    CHECK(social_welfare(g, cert.argmax[s]) ==
          doctest::Approx(cert.best_welfare[s]).epsilon(1e-12));
  }
}

TEST_CASE("compute_opt ties break toward the first listed actions") {
  GroundSet ground({"a", "b", "n0"});
  CoverageCore core;
  core.universe = {"u"};
  core.weights = {1.0};
  core.covers = {{0}, {0}, {}};
  SetFunction f = SetFunction::weighted_coverage(std::move(ground), std::move(core));
  Prior prior = Prior::joint({{"t"}}, {{{0}, 1.0}});
  ActionFamily family;
  family.actions = {{{0, 1}}};
  family.null_action = {2};
  UtilityModel utilities;
  utilities.kind = UtilityModel::Kind::kBasicDerived;
  const GameDefinition g =
      make_game(std::move(prior), std::move(family), std::move(f), std::move(utilities));
  const OptimalProfileCertificate cert = compute_opt(g);
  CHECK(cert.argmax[0] == std::vector<int>{0});
}

TEST_CASE("compute_str_exact finds the best pure strategy profile") {
  const GameDefinition g = two_type_game();
  const StrategySearchResult str = compute_str_exact(g);
  CHECK(str.exact);
  CHECK(str.value == doctest::Approx(2.01).epsilon(1e-12));
  CHECK(str.profile.action[1][0] == 2);
  CHECK(expected_strategy_welfare(g, str.profile) ==
        doctest::Approx(str.value).epsilon(1e-12));
}

TEST_CASE("compute_str_exact refusal points at the local fallback") {
  const GameDefinition g = two_type_game();
  try {
    compute_str_exact(g, Budget{3});
    FAIL("expected a budget refusal");
  } catch (const BudgetError& e) {
    CHECK(std::string(e.what()).find("compute_str_local") != std::string::npos);
  }
}

TEST_CASE("compute_opt refuses past the enumeration budget") {
  const GameDefinition g = two_type_game();
  CHECK_THROWS_AS(compute_opt(g, Budget{1}), BudgetError);
}

TEST_CASE("compute_str_local reaches the global optimum on the fixture") {
  const GameDefinition g = two_type_game();
  const StrategySearchResult local = compute_str_local(g, 4, 7);
  CHECK_FALSE(local.exact);
  CHECK(local.value == doctest::Approx(2.01).epsilon(1e-12));
  CHECK(local.profile.action[1][0] == 2);
  CHECK(local.seed == 7);
}

TEST_CASE("compute_str_local is reproducible per seed") {
  const GameDefinition g = random_coverage_game(11, {});
  const StrategySearchResult a = compute_str_local(g, 6, 99);
  const StrategySearchResult b = compute_str_local(g, 6, 99);
  CHECK(a.value == b.value);
  CHECK(a.profile.action == b.profile.action);
}

TEST_CASE("search values are ordered: opt >= exact >= local >= sampled - band") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorConfig cfg;
    const GameDefinition g = random_coverage_game(seed, cfg);
    const OptimalProfileCertificate cert = compute_opt(g);
    const StrategySearchResult exact = compute_str_exact(g);
    const StrategySearchResult local = compute_str_local(g, 10, seed);
    const McEstimate sampled = str_sampling_lower_bound(g, cert, 4000, seed + 101);
    CAPTURE(seed);
    CHECK(cert.opt >= exact.value - 1e-9);
    CHECK(exact.value >= local.value - 1e-9);
    CHECK(local.value == doctest::Approx(exact.value).epsilon(1e-9));
    CHECK(local.value >= sampled.estimate - 4.0 * sampled.stderr_of_mean - 1e-9);
  }
}

TEST_CASE("single-player local search is exact in one pass") {
  GeneratorConfig cfg;
  cfg.min_players = 1;
  cfg.max_players = 1;
  cfg.max_actions = 3;
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    const GameDefinition g = random_coverage_game(seed, cfg);
    const StrategySearchResult exact = compute_str_exact(g);
    const StrategySearchResult local = compute_str_local(g, 1, 5);
    CHECK(local.value == doctest::Approx(exact.value).epsilon(1e-12));
    CHECK(local.sweeps <= 2);
  }
}

TEST_CASE("sr_gap reports the strategy representability ratio") {
  const GameDefinition g = two_type_game();
  const SrGapReport exact = sr_gap(g, StrMode::kExact);
  CHECK_FALSE(exact.vacuous);
  CHECK(exact.opt == doctest::Approx(2.505).epsilon(1e-12));
  CHECK(exact.str == doctest::Approx(2.01).epsilon(1e-12));
  REQUIRE(exact.gap.has_value());
  CHECK(*exact.gap == doctest::Approx(2.01 / 2.505).epsilon(1e-12));
  CHECK(exact.str_exact);

  const SrGapReport local = sr_gap(g, StrMode::kLocal, {}, 4, 3);
  CHECK_FALSE(local.str_exact);
  REQUIRE(local.gap.has_value());
  CHECK(*local.gap <= *exact.gap + 1e-9);
}

TEST_CASE("sr_gap flags zero-welfare games as vacuous") {
  GroundSet ground({"a", "n0"});
  CoverageCore core;
  core.universe = {"u"};
  core.weights = {1.0};
  core.covers = {{}, {}};
  SetFunction f = SetFunction::weighted_coverage(std::move(ground), std::move(core));
  Prior prior = Prior::joint({{"t"}}, {{{0}, 1.0}});
  ActionFamily family;
  family.actions = {{{0}}};
  family.null_action = {1};
  UtilityModel utilities;
  utilities.kind = UtilityModel::Kind::kBasicDerived;
  const GameDefinition g =
      make_game(std::move(prior), std::move(family), std::move(f), std::move(utilities));
  const SrGapReport report = sr_gap(g, StrMode::kExact);
  CHECK(report.vacuous);
  CHECK_FALSE(report.gap.has_value());
}

TEST_CASE("independent priors keep the gap above the correlation floor") {
  GeneratorConfig cfg;
  cfg.max_players = 3;
  cfg.max_types = 3;
  cfg.max_actions = 3;
  cfg.product_prior = true;
  int checked = 0;
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    const GameDefinition g = random_coverage_game(seed, cfg);
    const SrGapReport report = sr_gap(g, StrMode::kExact);
    if (report.vacuous) continue;
    ++checked;
    CAPTURE(seed);
    CHECK(*report.gap >= 1.0 - 1.0 / std::exp(1.0) - 1e-9);
  }
  CHECK(checked >= 25);
}

TEST_CASE("marginal_profile matches the hand-computed fixture frequencies") {
  const GameDefinition g = two_type_game();
  const OptimalProfileCertificate cert = compute_opt(g);
  const MarginalProfile mp = marginal_profile(g, cert);
  CHECK(mp.weight[0][0] == std::vector<double>{1.0});
  CHECK(mp.weight[0][1] == std::vector<double>{1.0});
  REQUIRE(mp.weight[1][0].size() == 2);
  CHECK(mp.weight[1][0][0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mp.weight[1][0][1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("marginal_profile rows sum to one on random games") {
  for (std::uint64_t seed = 40; seed < 55; ++seed) {
    const GameDefinition g = random_coverage_game(seed, {});
    const MarginalProfile mp = marginal_profile(g, compute_opt(g));
    for (std::size_t i = 0; i < mp.weight.size(); ++i) {
      for (std::size_t t = 0; t < mp.weight[i].size(); ++t) {
        double total = 0.0;
        for (double w : mp.weight[i][t]) {
          CHECK(w >= -1e-15);
          total += w;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("heavy_light_split separates at the threshold") {
  const GameDefinition g = two_type_game();
  const MarginalProfile mp = marginal_profile(g, compute_opt(g));
  const HeavyLightSplit split = heavy_light_split(g, mp);
  CHECK(split.threshold == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(split.heavy[0][0] == std::vector<int>{0});
  CHECK(split.heavy[0][1] == std::vector<int>{1});
  CHECK(split.heavy[1][0].empty());
  CHECK(split.light[1][0][2] == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(split.light[1][0][3] == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(split.light[0][0][0] == 0.0);
}

TEST_CASE("heavy_light_split invariants hold on random games") {
  for (std::uint64_t seed = 60; seed < 75; ++seed) {
    GeneratorConfig cfg;
    cfg.max_players = 3;
    cfg.max_actions = 3;
    const GameDefinition g = random_coverage_game(seed, cfg);
    const HeavyLightSplit split = heavy_light_split(g, marginal_profile(g, compute_opt(g)));
    const double root = std::sqrt(static_cast<double>(g.num_players()));
    for (int i = 0; i < g.num_players(); ++i) {
      for (int t = 0; t < g.prior.num_types(i); ++t) {
        CHECK(static_cast<double>(split.heavy[i][t].size()) <= root + 1e-9);
        for (double y : split.light[i][t]) {
          CHECK(y >= 0.0);
          CHECK(y <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("sr_bound_audit refuses non-square player counts") {
  const GameDefinition g = two_type_game();
  CHECK_THROWS_AS(sr_bound_audit(g), InputError);
}

TEST_CASE("sr_bound_audit is trivial on complete-information games") {
  const GameDefinition g = singleton_type_game(4, 5);
  const SrBoundAuditReport report = sr_bound_audit(g);
  CHECK(report.sqrt_n == 2);
  CHECK(report.str_exact);
  CHECK(report.exact_terms);
  CHECK(report.str == doctest::Approx(report.opt).epsilon(1e-12));
  CHECK(report.term_light_marginal == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.term_light_union == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.term_heavy_union == doctest::Approx(report.opt).epsilon(1e-12));
  CHECK(report.all_hold);
  REQUIRE(report.inequalities.size() == 6);
  for (const AuditInequality& q : report.inequalities) {
    CAPTURE(q.name);
    CHECK(q.holds);
  }
}

TEST_CASE("sr_bound_audit chain holds on random square games") {
  GeneratorConfig cfg;
  cfg.min_players = 4;
  cfg.max_players = 4;
  for (std::uint64_t seed = 300; seed < 310; ++seed) {
    const GameDefinition g = random_coverage_game(seed, cfg);
    const SrBoundAuditReport report = sr_bound_audit(g, 20000, seed);
    CAPTURE(seed);
    CHECK(report.exact_terms);
    CHECK(report.samples == 0);
    CHECK(report.all_hold);
    const double constant = 2.0 + 1.0 / (1.0 - 1.0 / std::exp(1.0));
    CHECK(report.opt <= constant * 2.0 * report.str + 1e-9);
  }
}

TEST_CASE("sr_bound_audit falls back to sampling under a tight budget") {
  // Player 0's type-k action covers every element but u_k; player 1's k-th
  // action covers exactly u_k. The optimum pairs them, so player 1's
  // in-optimum frequencies are uniform 1/13: thirteen light entries whose
  // exact expectations need 2^13 > 3000 enumerations. Players 2 and 3 are
  // spectators. OPT = 13, STR = 12 + 1/13, E[f(light union)] = 2.
  const int kTypes = 13;
  std::vector<std::string> names;
  CoverageCore core;
  for (int u = 0; u < kTypes; ++u) {
    core.universe.push_back("u" + std::to_string(u));
    core.weights.push_back(1.0);
  }
  ActionFamily family;
  family.actions.resize(4);
  std::vector<std::vector<std::string>> type_names(4);
  for (int k = 0; k < kTypes; ++k) {
    type_names[0].push_back("t" + std::to_string(k));
    family.actions[0].push_back({static_cast<int>(names.size())});
    names.push_back("x" + std::to_string(k));
    std::vector<int> cov;
    for (int u = 0; u < kTypes; ++u) {
      if (u != k) cov.push_back(u);
    }
    core.covers.push_back(std::move(cov));
  }
  type_names[1] = {"t"};
  family.actions[1].resize(1);
  for (int k = 0; k < kTypes; ++k) {
    family.actions[1][0].push_back(static_cast<int>(names.size()));
    names.push_back("a" + std::to_string(k));
    core.covers.push_back({k});
  }
  for (int i = 2; i < 4; ++i) {
    type_names[i] = {"t"};
    family.actions[i] = {{static_cast<int>(names.size())}};
    names.push_back("d" + std::to_string(i));
    core.covers.push_back({});
  }
  std::vector<Prior::SupportEntry> support;
  for (int k = 0; k < kTypes; ++k) {
    support.push_back({{k, 0, 0, 0}, 1.0 / kTypes});
  }
  for (int i = 0; i < 4; ++i) {
    family.null_action.push_back(static_cast<int>(names.size()));
    names.push_back("n" + std::to_string(i));
    core.covers.push_back({});
  }
  UtilityModel utilities;
  utilities.kind = UtilityModel::Kind::kBasicDerived;
  const GameDefinition g = make_game(
      Prior::joint(std::move(type_names), std::move(support)),
      { family.actions, family.null_action },
      SetFunction::weighted_coverage(GroundSet(std::move(names)), std::move(core)),
      std::move(utilities));

  Budget tight;
  tight.max_evaluations = 3000;
  const SrBoundAuditReport report = sr_bound_audit(g, 4000, 17, tight);
  CHECK_FALSE(report.exact_terms);
  CHECK(report.samples == 4000);
  CHECK(report.seed == 17);
  CHECK(report.rng == Rng::kAlgorithm);
  CHECK(report.str_exact);
  CHECK(report.opt == doctest::Approx(13.0).epsilon(1e-12));
  CHECK(report.str == doctest::Approx(12.0 + 1.0 / 13.0).epsilon(1e-12));
  CHECK(report.term_heavy_union == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(std::abs(report.term_light_union - 2.0) <= 0.2);
  CHECK(std::abs(report.term_light_marginal - 11.0 / 13.0) <= 0.05);
  CHECK(report.all_hold);

  const SrBoundAuditReport again = sr_bound_audit(g, 4000, 17, tight);
  CHECK(again.term_light_union == report.term_light_union);
  CHECK(again.term_light_marginal == report.term_light_marginal);
}

TEST_CASE("str_sampling_lower_bound estimates the mixture welfare") {
  const GameDefinition g = two_type_game();
  const OptimalProfileCertificate cert = compute_opt(g);
  const McEstimate est = str_sampling_lower_bound(g, cert, 20000, 9);
  CHECK(est.samples == 20000);
  CHECK(est.seed == 9);
  CHECK(est.rng == Rng::kAlgorithm);
  CHECK(std::abs(est.estimate - 2.0075) <= 4.0 * est.stderr_of_mean);
  const StrategySearchResult exact = compute_str_exact(g);
  CHECK(est.estimate - 4.0 * est.stderr_of_mean <= exact.value);
}

TEST_CASE("str_sampling_lower_bound is deterministic per seed and exact on indicators") {
  const GameDefinition g = singleton_type_game(3, 21);
  const OptimalProfileCertificate cert = compute_opt(g);
  const McEstimate a = str_sampling_lower_bound(g, cert, 500, 4);
  const McEstimate b = str_sampling_lower_bound(g, cert, 500, 4);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_of_mean == 0.0);
  CHECK(a.estimate == doctest::Approx(cert.opt).epsilon(1e-12));
}
