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
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "subwelf/instances.hpp"
#include "subwelf/json_io.hpp"
#include "subwelf/welfare.hpp"

using namespace subwelf;
using nlohmann::json;

namespace {

std::string round_trip_dump(const GameDefinition& g) {
  const json j = game_to_json(g);
  const std::string first = canonical_dump(j);
  const GameDefinition reloaded = game_from_json(j);
  const std::string second = canonical_dump(game_to_json(reloaded));
  CHECK(first == second);
  return first;
}

}  // namespace

TEST_CASE("game serialization round-trips byte-identically") {
  SUBCASE("joint prior with derived utilities") {
    GameDefinition g = make_figure2_game(0.01);
    round_trip_dump(g);
    GameDefinition reloaded = game_from_json(game_to_json(g));
    CHECK(compute_opt(reloaded).opt == doctest::Approx(compute_opt(g).opt).epsilon(1e-12));
    CHECK(reloaded.prior.probability({0, 0}) == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("product prior with priority sharing") {
    GameDefinition g = make_priority_game(4).game;
    round_trip_dump(g);
    GameDefinition reloaded = game_from_json(game_to_json(g));
    CHECK(reloaded.prior.product_form());
    CHECK(reloaded.utilities.kind == UtilityModel::Kind::kPriorityShareCoverage);
    CHECK(reloaded.utilities.priority_class == g.utilities.priority_class);
    CHECK(compute_opt(reloaded).opt == doctest::Approx(3.75).epsilon(1e-12));
  }

  SUBCASE("correlated grid prior") {
    GameDefinition g = make_grid_game(3, 1);
    round_trip_dump(g);
    GameDefinition reloaded = game_from_json(game_to_json(g));
    CHECK_FALSE(reloaded.prior.product_form());
    CHECK(reloaded.prior.expanded_support().size() == 6);
    CHECK(compute_opt(reloaded).opt == doctest::Approx(3.0).epsilon(1e-12));
  }

  SUBCASE("explicit welfare table with proportional shares") {
    GameDefinition g = make_resource_allocation_game(reference_resource_spec());
    round_trip_dump(g);
    GameDefinition reloaded = game_from_json(game_to_json(g));
    CHECK(reloaded.welfare.kind() == SetFunction::Kind::kExplicitTable);
    CHECK(reloaded.utilities.kind == UtilityModel::Kind::kProportionalShareWeights);
    CHECK(compute_opt(reloaded).opt == doctest::Approx(3.0).epsilon(1e-12));
  }

  SUBCASE("seeded random coverage game") {
    RandomGameSpec spec;
    spec.seed = 6;
    spec.equal_share_utilities = true;
    GameDefinition g = make_random_game(spec);
    const std::string dump = round_trip_dump(g);
    CHECK(dump == round_trip_dump(make_random_game(spec)));
  }
}

TEST_CASE("set function serialization covers every storable variant") {
  GroundSet ground({"a", "b", "c"});
  CoverageCore core;
  core.universe = {"u", "v"};
  core.weights = {1.5, 2.0};
  core.covers = {{0}, {0, 1}, {}};

  SUBCASE("weighted coverage") {
    SetFunction f = SetFunction::weighted_coverage(ground, core);
    SetFunction back = set_function_from_json(set_function_to_json(f));
    CHECK(back.kind() == SetFunction::Kind::kWeightedCoverage);
    std::vector<int> all = {0, 1, 2};
    CHECK(back.evaluate(all) == doctest::Approx(f.evaluate(all)).epsilon(1e-15));
    std::vector<int> one = {1};
    CHECK(back.evaluate(one) == doctest::Approx(3.5).epsilon(1e-15));
  }

  SUBCASE("priority sharing coverage") {
    SetFunction f = SetFunction::priority_sharing_coverage(ground, core, {0, 1});
    json j = set_function_to_json(f);
    CHECK(j["variant"] == "priority_sharing_coverage");
    SetFunction back = set_function_from_json(j);
    CHECK(back.priority_classes() == std::vector<int>{0, 1});
  }

  SUBCASE("explicit table") {
    SetFunction f = SetFunction::explicit_table(GroundSet({"a", "b"}), {0.0, 1.0, 2.0, 2.5});
    SetFunction back = set_function_from_json(set_function_to_json(f));
    std::vector<int> both = {0, 1};
    CHECK(back.evaluate(both) == doctest::Approx(2.5).epsilon(1e-15));
  }

  SUBCASE("strategic lifts are refused") {
    SetFunction f = SetFunction::strategic_lift(
        ground, [](std::span<const int> subset) { return static_cast<double>(subset.size()); });
    CHECK_THROWS_AS(set_function_to_json(f), InputError);
  }

  SUBCASE("unknown variant is refused") {
    json j;
    j["variant"] = "mystery";
    j["ground"] = std::vector<std::string>{"a"};
    CHECK_THROWS_AS(set_function_from_json(j), InputError);
  }
}

TEST_CASE("malformed game documents are refused with named fields") {
  const json good = game_to_json(make_figure2_game(0.01));

  SUBCASE("missing schema version") {
    json j = good;
    j.erase("schema_version");
    CHECK_THROWS_WITH_AS(game_from_json(j), "game JSON is missing field schema_version",
                         InputError);
  }

  SUBCASE("future schema version") {
    json j = good;
    j["schema_version"] = 99;
    try {
      game_from_json(j);
      FAIL("expected a version refusal");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("unsupported schema_version 99") != std::string::npos);
    }
  }

  SUBCASE("bad prior form") {
    json j = good;
    j["prior"]["form"] = "gaussian";
    CHECK_THROWS_AS(game_from_json(j), InputError);
  }

  SUBCASE("duplicate action entry") {
    json j = good;
    j["actions"].push_back(j["actions"][0]);
    try {
      game_from_json(j);
      FAIL("expected a duplicate refusal");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("twice") != std::string::npos);
    }
  }

  SUBCASE("missing action set") {
    json j = good;
    j["actions"].erase(0);
    try {
      game_from_json(j);
      FAIL("expected a missing-set refusal");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("missing an action set") != std::string::npos);
    }
  }

  SUBCASE("unknown utilities variant") {
    json j = good;
    j["utilities"]["variant"] = "mystery";
    try {
      game_from_json(j);
      FAIL("expected a variant refusal");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("unknown utilities variant") != std::string::npos);
    }
  }

  SUBCASE("types count mismatch") {
    json j = good;
    j["players"] = 3;
    CHECK_THROWS_AS(game_from_json(j), InputError);
  }
}

TEST_CASE("game files write and read back") {
  const std::string path = "json_io_test_game.json";
  GameDefinition g = make_priority_game(4).game;
  write_game_file(g, path);
  GameDefinition reloaded = read_game_file(path);
  CHECK(canonical_dump(game_to_json(reloaded)) == canonical_dump(game_to_json(g)));

  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  CHECK(text == canonical_dump(game_to_json(g)));
  CHECK(text.back() == '\n');
  std::remove(path.c_str());

  CHECK_THROWS_AS(read_game_file("does_not_exist.json"), InputError);

  const std::string broken = "json_io_test_broken.json";
  std::ofstream out(broken);
  out << "{ not json";
  out.close();
  try {
    read_game_file(broken);
    FAIL("expected a parse refusal");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("cannot parse") != std::string::npos);
  }
  std::remove(broken.c_str());
}

TEST_CASE("report serializers carry the fields the command line emits") {
  GameDefinition g = make_figure2_game(0.01);

  json validation = to_json(validate_game(g));
  CHECK(validation["ok"] == true);
  CHECK(validation["welfare_evidence"]["monotone"] == true);

  json conditions = to_json(check_valid_conditions(g));
  CHECK(conditions["valid"] == true);
  CHECK(conditions["basic"] == true);

  json opt = to_json(compute_opt(g));
  CHECK(opt["opt"].get<double>() == doctest::Approx(2.505).epsilon(1e-9));
  CHECK(opt["per_type_profile"].size() == 2);

  json gap = to_json(sr_gap(g));
  CHECK(gap["gap"].get<double>() == doctest::Approx(2.01 / 2.505).epsilon(1e-9));

  EquilibriumResult eq = max_welfare(g, ConceptId::kComEq);
  json eq_json = to_json(eq);
  CHECK(eq_json["concept"] == "ComEq");
  CHECK(eq_json["sense"] == "max");
  CHECK(eq_json["status"] == "optimal");
  CHECK(eq_json["value"].get<double>() == doctest::Approx(2.01).epsilon(1e-6));
  CHECK(eq_json.contains("pi"));

  CHECK(canonical_dump(eq_json) == canonical_dump(to_json(max_welfare(g, ConceptId::kComEq))));

  json lattice = to_json(lattice_check(g));
  CHECK(lattice["all_hold"] == true);
  CHECK(lattice["arrows"].size() == 11);

  json ratio = to_json(pos(g, ConceptId::kComEq));
  CHECK(ratio["ratio"].get<double>() == doctest::Approx(2.01 / 2.505).epsilon(1e-9));

  McEstimate mc;
  mc.estimate = 1.25;
  mc.stderr_of_mean = 0.03;
  mc.samples = 400;
  mc.seed = 17;
  json mc_json = to_json(mc);
  CHECK(mc_json["samples"] == 400);
  CHECK(mc_json["rng"] == Rng::kAlgorithm);
}
