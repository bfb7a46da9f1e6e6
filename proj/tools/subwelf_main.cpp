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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "subwelf/equilibria.hpp"
#include "subwelf/instances.hpp"
#include "subwelf/json_io.hpp"
#include "subwelf/welfare.hpp"

namespace {

using namespace subwelf;
using nlohmann::json;

struct Options {
  std::string game_path;
  std::string recipe;
  std::vector<std::string> set_params;
  std::vector<std::string> concepts;
  std::string sense = "min";
  std::uint64_t seed = 1;
  std::int64_t budget_enum = Budget{}.max_evaluations;
  std::int64_t budget_lp = LpBudget{}.max_cells;
  double tolerance = tol::kLpValue;
  std::string out_path;
  std::string format = "json";

  std::string str_mode = "exact";
  std::string experiment;
  std::string which;
  double eps = 0.01;
  int n = 4;
  int k = 2;
  int num_high = -1;
  int games = 20;
  int profiles = 1000;
  std::int64_t samples = 0;
  int restarts = 8;
  int bipartite_n = 16;
  bool correlated = false;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::map<std::string, double> parse_set_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& item : items) {
    const std::size_t eq = item.find('=');
    require(eq != std::string::npos && eq > 0 && eq + 1 < item.size(),
            "--set expects key=value, got: " + item);
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double parsed = 0.0;
    try {
      parsed = std::stod(value, &used);
    } catch (const std::exception&) {
      throw InputError("--set value for " + key + " is not a number: " + value);
    }
    require(used == value.size(), "--set value for " + key + " is not a number: " + value);
    out[key] = parsed;
  }
  return out;
}

json config_json(const Options& o, const std::string& command) {
  json set = json::object();
  for (const auto& [key, value] : parse_set_params(o.set_params)) set[key] = value;
  json c;
  c["command"] = command;
  c["game"] = o.game_path;
  c["recipe"] = o.recipe;
  c["set"] = std::move(set);
  c["concepts"] = o.concepts;
  c["sense"] = o.sense;
  c["seed"] = o.seed;
  c["budget_enum"] = o.budget_enum;
  c["budget_lp"] = o.budget_lp;
  c["tol"] = o.tolerance;
  c["format"] = o.format;
  c["str_mode"] = o.str_mode;
  c["experiment"] = o.experiment;
  c["which"] = o.which;
  c["eps"] = o.eps;
  c["n"] = o.n;
  c["k"] = o.k;
  c["num_high"] = o.num_high;
  c["games"] = o.games;
  c["profiles"] = o.profiles;
  c["samples"] = o.samples;
  c["restarts"] = o.restarts;
  c["bipartite_n"] = o.bipartite_n;
  c["correlated"] = o.correlated;
  return c;
}

Budget enum_budget(const Options& o) {
  require(o.budget_enum > 0, "--budget-enum must be positive");
  return Budget{o.budget_enum};
}

LpBudget lp_budget(const Options& o) {
  require(o.budget_lp > 0, "--budget-lp must be positive");
  return LpBudget{o.budget_lp};
}

GameDefinition load_game(const Options& o) {
  require(o.game_path.empty() || o.recipe.empty(), "use exactly one of --game or --recipe");
  if (!o.game_path.empty()) return read_game_file(o.game_path);
  require(!o.recipe.empty(), "provide a game with --game <file> or --recipe <name>");
  InstanceRecipe recipe;
  recipe.name = o.recipe;
  recipe.parameters = parse_set_params(o.set_params);
  recipe.seed = o.seed;
  return make_from_recipe(recipe);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_escape(table.header[i]);
  }
  out += '\n';
  for (const std::vector<std::string>& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  }
  return out;
}

void emit(const Options& o, const json& doc, const std::optional<Table>& table) {
  require(o.format == "json" || o.format == "csv", "unknown output format: " + o.format);
  std::string payload;
  if (o.format == "csv") {
    require(table.has_value(), "this command has no tabular output; use --format json");
    payload = render_csv(*table);
  } else {
    payload = canonical_dump(doc);
  }
  if (o.out_path.empty()) {
    std::fputs(payload.c_str(), stdout);
    return;
  }
  std::ofstream out(o.out_path);
  require(out.good(), "cannot open output file: " + o.out_path);
  out << payload;
  require(out.good(), "failed writing output file: " + o.out_path);
}

bool cmd_validate(const Options& o) {
  GameDefinition g = load_game(o);
  ValidationReport vr = validate_game(g, enum_budget(o));
  ValidConditionsReport vc = check_valid_conditions(g, enum_budget(o));
  IndependenceReport ir = is_independent(g.prior);
  const bool ok = vr.ok && vc.valid();

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = config_json(o, "validate");
  doc["validation"] = to_json(vr);
  doc["valid_conditions"] = to_json(vc);
  doc["independence"] = to_json(ir);
  doc["ok"] = ok;

  Table table;
  table.header = {"check", "result"};
  table.rows = {
      {"structure_ok", fmt_bool(vr.ok)},
      {"null_actions_neutral", fmt_bool(vr.null_actions_neutral)},
      {"welfare_monotone", fmt_bool(vr.welfare_evidence.monotone)},
      {"welfare_submodular", fmt_bool(vr.welfare_evidence.submodular)},
      {"total_utility_ok", fmt_bool(vc.total_utility_ok)},
      {"marginal_ok", fmt_bool(vc.marginal_ok)},
      {"basic", fmt_bool(vc.basic)},
      {"independent_prior", fmt_bool(ir.independent)},
  };
  emit(o, doc, table);
  return ok;
}

bool cmd_welfare(const Options& o) {
  require(o.str_mode == "exact" || o.str_mode == "local",
          "unknown --str-mode: " + o.str_mode + " (use exact or local)");
  GameDefinition g = load_game(o);
  OptimalProfileCertificate cert = compute_opt(g, enum_budget(o));
  const StrMode mode = o.str_mode == "exact" ? StrMode::kExact : StrMode::kLocal;
  SrGapReport rep = sr_gap(g, mode, enum_budget(o), o.restarts, o.seed);

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = config_json(o, "welfare");
  doc["opt_certificate"] = to_json(cert);
  doc["sr"] = to_json(rep);

  Table table;
  table.header = {"metric", "value"};
  table.rows = {
      {"opt", fmt(rep.opt)},
      {"str", fmt(rep.str)},
      {"str_exact", fmt_bool(rep.str_exact)},
      {"vacuous", fmt_bool(rep.vacuous)},
  };
  if (rep.gap) table.rows.push_back({"gap", fmt(*rep.gap)});
  emit(o, doc, table);
  return true;
}

bool cmd_equilibrium(const Options& o) {
  require(!o.concepts.empty(), "equilibrium needs at least one --concept");
  require(o.sense == "min" || o.sense == "max", "unknown --sense: " + o.sense);
  std::vector<ConceptId> ids;
  for (const std::string& name : o.concepts) {
    std::optional<ConceptId> id = concept_from_name(name);
    require(id.has_value(), "unknown concept name: " + name);
    ids.push_back(*id);
  }

  GameDefinition g = load_game(o);
  json results = json::array();
  Table table;
  table.header = {"concept", "sense", "value", "status", "none_found", "max_violation"};
  for (ConceptId id : ids) {
    EquilibriumResult result = o.sense == "min"
                                   ? min_welfare(g, id, enum_budget(o), lp_budget(o))
                                   : max_welfare(g, id, enum_budget(o), lp_budget(o));
    table.rows.push_back({concept_name(id), o.sense, fmt(result.value),
                          to_json(result)["status"].get<std::string>(),
                          fmt_bool(result.none_found), fmt(result.max_violation)});
    results.push_back(to_json(result));
  }

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = config_json(o, "equilibrium");
  doc["results"] = std::move(results);
  emit(o, doc, table);
  return true;
}

bool cmd_generate(const Options& o) {
  require(o.game_path.empty(), "generate builds from --recipe, not --game");
  require(!o.recipe.empty(), "generate needs --recipe");
  InstanceRecipe recipe;
  recipe.name = o.recipe;
  recipe.parameters = parse_set_params(o.set_params);
  recipe.seed = o.seed;
  GameDefinition g = make_from_recipe(recipe);

  json doc = game_to_json(g);
  doc["config"] = config_json(o, "generate");
  emit(o, doc, std::nullopt);
  return true;
}

struct CheckRow {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  bool has_reference = false;
  bool ok = true;
};

void append_check_rows(json& doc, Table& table, const std::vector<CheckRow>& rows) {
  table.header = {"name", "value", "reference", "ok"};
  json items = json::array();
  for (const CheckRow& row : rows) {
    json item;
    item["name"] = row.name;
    item["value"] = row.value;
    if (row.has_reference) item["reference"] = row.reference;
    item["ok"] = row.ok;
    items.push_back(std::move(item));
    table.rows.push_back({row.name, fmt(row.value),
                          row.has_reference ? fmt(row.reference) : std::string(),
                          fmt_bool(row.ok)});
  }
  doc["checks"] = std::move(items);
}

CheckRow near(const std::string& name, double value, double reference, double tolerance) {
  CheckRow row;
  row.name = name;
  row.value = value;
  row.reference = reference;
  row.has_reference = true;
  row.ok = std::abs(value - reference) <= tolerance;
  return row;
}

CheckRow at_least(const std::string& name, double value, double floor, double tolerance) {
  CheckRow row;
  row.name = name;
  row.value = value;
  row.reference = floor;
  row.has_reference = true;
  row.ok = value >= floor - tolerance;
  return row;
}

CheckRow at_most(const std::string& name, double value, double ceiling, double tolerance) {
  CheckRow row;
  row.name = name;
  row.value = value;
  row.reference = ceiling;
  row.has_reference = true;
  row.ok = value <= ceiling + tolerance;
  return row;
}

bool reproduce_figure2(const Options& o, json& doc, Table& table) {
  GameDefinition g = make_figure2_game(o.eps);
  const double opt_ref = 2.5 + o.eps / 2.0;
  const double eq_ref = 2.0 + o.eps;

  const double opt = compute_opt(g, enum_budget(o)).opt;
  const double str = compute_str_exact(g, enum_budget(o)).value;
  const double comeq_min = min_welfare(g, ConceptId::kComEq, enum_budget(o), lp_budget(o)).value;
  const double comeq_max = max_welfare(g, ConceptId::kComEq, enum_budget(o), lp_budget(o)).value;
  const double bs_max = max_welfare(g, ConceptId::kBs, enum_budget(o), lp_budget(o)).value;
  std::vector<PureBneEntry> bne = enumerate_pure_bne(g, enum_budget(o));

  std::vector<CheckRow> rows;
  rows.push_back(near("opt", opt, opt_ref, o.tolerance));
  rows.push_back(near("str", str, eq_ref, o.tolerance));
  rows.push_back(near("comeq_min", comeq_min, eq_ref, o.tolerance));
  rows.push_back(near("comeq_max", comeq_max, eq_ref, o.tolerance));
  rows.push_back(near("bs_max", bs_max, opt_ref, o.tolerance));
  rows.push_back(near("pure_bne_count", static_cast<double>(bne.size()), 1.0, 0.0));
  if (!bne.empty()) {
    rows.push_back(near("pure_bne_welfare", bne[0].welfare, eq_ref, o.tolerance));
  }
  rows.push_back(near("pos_comeq", comeq_max / opt, eq_ref / opt_ref, 1e-5));
  rows.push_back(near("pos_bs", bs_max / opt, 1.0, 1e-5));

  bool ok = true;
  for (const CheckRow& row : rows) ok = ok && row.ok;
  append_check_rows(doc, table, rows);
  return ok;
}

bool reproduce_solution_gap(const Options& o, json& doc, Table& table) {
  PriorityGame pg = make_priority_game(o.n, o.num_high, enum_budget(o));
  const GameDefinition& g = pg.game;
  const double opt = compute_opt(g, enum_budget(o)).opt;
  const double mediator = expected_welfare(g, pg.mediator);
  const std::size_t bs_violations =
      check_equilibrium(g, ConceptId::kBs, pg.mediator, o.tolerance, enum_budget(o)).size();
  const std::size_t comeq_violations =
      check_equilibrium(g, ConceptId::kComEq, pg.mediator, o.tolerance, enum_budget(o)).size();
  const double bs_min = min_welfare(g, ConceptId::kBs, enum_budget(o), lp_budget(o)).value;
  const double comeq_min = min_welfare(g, ConceptId::kComEq, enum_budget(o), lp_budget(o)).value;

  std::vector<CheckRow> rows;
  CheckRow opt_row;
  opt_row.name = "opt";
  opt_row.value = opt;
  rows.push_back(opt_row);
  if (pg.num_high == o.n - pg.num_high) {
    const double mediator_ref =
        o.n * (1.0 - std::pow(1.0 - 1.0 / o.n, static_cast<double>(pg.num_high)));
    rows.push_back(near("mediator_welfare", mediator, mediator_ref, o.tolerance));
  } else {
    CheckRow med_row;
    med_row.name = "mediator_welfare";
    med_row.value = mediator;
    rows.push_back(med_row);
  }
  rows.push_back(near("mediator_bs_violations", static_cast<double>(bs_violations), 0.0, 0.0));
  rows.push_back(at_least("mediator_comeq_violations", static_cast<double>(comeq_violations),
                          1.0, 0.0));
  rows.push_back(at_most("bs_min", bs_min, mediator, o.tolerance));
  rows.push_back(at_least("comeq_min", comeq_min, opt / 2.0, o.tolerance));
  rows.push_back(at_most("poa_bs", bs_min / opt, mediator / opt, 1e-5));
  rows.push_back(at_least("poa_comeq", comeq_min / opt, 0.5, 1e-5));

  bool ok = true;
  for (const CheckRow& row : rows) ok = ok && row.ok;
  append_check_rows(doc, table, rows);
  return ok;
}

bool reproduce_sr_independent(const Options& o, json& doc, Table& table) {
  const double floor = 1.0 - 1.0 / std::exp(1.0);
  table.header = {"instance", "seed", "players", "opt", "str", "ratio", "lower", "upper", "ok"};
  json items = json::array();
  bool ok = true;

  for (int j = 0; j < o.games; ++j) {
    const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(j);
    RandomGameSpec spec;
    spec.num_players = 2 + static_cast<int>(seed % 2);
    spec.seed = seed;
    GameDefinition g = make_random_game(spec);
    SrGapReport rep = sr_gap(g, StrMode::kExact, enum_budget(o));
    const double ratio = rep.gap.value_or(0.0);
    const bool row_ok = rep.gap.has_value() && ratio >= floor - 1e-9;
    ok = ok && row_ok;
    table.rows.push_back({"random", std::to_string(seed), std::to_string(spec.num_players),
                          fmt(rep.opt), fmt(rep.str), fmt(ratio), fmt(floor), fmt(1.0),
                          fmt_bool(row_ok)});
    json item;
    item["instance"] = "random";
    item["seed"] = seed;
    item["players"] = spec.num_players;
    item["sr"] = to_json(rep);
    item["ok"] = row_ok;
    items.push_back(std::move(item));
  }

  if (o.bipartite_n > 0) {
    GameDefinition g = make_bipartite_game(o.bipartite_n, o.seed);
    const std::int64_t samples = o.samples > 0 ? o.samples : 2000;
    BipartiteSrReport rep = bipartite_sr_proxy(g, samples, o.restarts);
    const bool row_ok = rep.proxy >= 0.55 && rep.proxy <= 0.90;
    ok = ok && row_ok;
    table.rows.push_back({"bipartite", std::to_string(o.seed),
                          std::to_string(o.bipartite_n), fmt(rep.opt.estimate),
                          fmt(rep.str_local), fmt(rep.proxy), fmt(0.55), fmt(0.90),
                          fmt_bool(row_ok)});
    json item;
    item["instance"] = "bipartite";
    item["seed"] = o.seed;
    item["players"] = o.bipartite_n;
    item["str_local"] = rep.str_local;
    item["opt_estimate"] = to_json(rep.opt);
    item["proxy"] = rep.proxy;
    item["ok"] = row_ok;
    items.push_back(std::move(item));
  }

  doc["rows"] = std::move(items);
  doc["floor"] = floor;
  return ok;
}

bool reproduce_sr_grid(const Options& o, json& doc, Table& table) {
  bool constructible = true;
  std::string refusal;
  try {
    GameDefinition g = make_grid_game(o.n, o.k, enum_budget(o));
    const double opt = compute_opt(g, enum_budget(o)).opt;
    doc["mode"] = "exact";
    std::vector<CheckRow> rows;
    rows.push_back(near("opt", opt, static_cast<double>(o.n), 1e-9));
    bool ok = rows[0].ok;
    append_check_rows(doc, table, rows);
    return ok;
  } catch (const BudgetError& e) {
    constructible = false;
    refusal = e.what();
  }

  doc["mode"] = "sampler";
  doc["constructor_refusal"] = refusal;
  const double bound = static_cast<double>(o.n) / o.k + o.k;
  const std::int64_t samples = o.samples > 0 ? o.samples : 500;
  table.header = {"profile_seed", "estimate", "stderr", "bound", "ok"};
  json items = json::array();
  bool ok = !constructible;
  double max_estimate = 0.0;
  for (int p = 0; p < o.profiles; ++p) {
    const std::uint64_t strategy_seed = o.seed + static_cast<std::uint64_t>(p);
    GridStrategy s = random_grid_strategy(o.n, o.k, strategy_seed);
    McEstimate est = grid_strategy_welfare(o.n, o.k, s, samples,
                                           o.seed + 100000 + static_cast<std::uint64_t>(p));
    const bool row_ok = est.estimate <= bound + 4.0 * est.stderr_of_mean;
    ok = ok && row_ok;
    max_estimate = std::max(max_estimate, est.estimate);
    table.rows.push_back({std::to_string(strategy_seed), fmt(est.estimate),
                          fmt(est.stderr_of_mean), fmt(bound), fmt_bool(row_ok)});
    json item;
    item["profile_seed"] = strategy_seed;
    item["estimate"] = to_json(est);
    item["ok"] = row_ok;
    items.push_back(std::move(item));
  }
  doc["rows"] = std::move(items);
  doc["bound"] = bound;
  doc["max_estimate"] = max_estimate;
  return ok;
}

bool run_lattice(const Options& o, json& doc, Table& table) {
  Options effective = o;
  if (effective.game_path.empty() && effective.recipe.empty()) effective.recipe = "figure2";
  GameDefinition g = load_game(effective);
  LatticeReport rep = lattice_check(g, enum_budget(o), lp_budget(o));
  doc["lattice"] = to_json(rep);
  table.header = {"sub", "super", "sub_min", "sub_max", "super_min", "super_max", "holds"};
  for (const LatticeArrowReport& a : rep.arrows) {
    table.rows.push_back({concept_name(a.sub), concept_name(a.super), fmt(a.sub_min),
                          fmt(a.sub_max), fmt(a.super_min), fmt(a.super_max),
                          fmt_bool(a.holds)});
  }
  return rep.all_hold;
}

bool reproduce_smoothness(const Options& o, json& doc, Table& table) {
  table.header = {"seed", "opt", "str", "sfcbs_min", "comeq_min", "sfcce_min", "ok"};
  json items = json::array();
  bool ok = true;
  for (int j = 0; j < o.games; ++j) {
    const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(j);
    RandomGameSpec spec;
    spec.num_players = 2 + static_cast<int>(seed % 2);
    spec.equal_share_utilities = j % 2 == 0;
    spec.correlated_prior = o.correlated;
    spec.seed = seed;
    GameDefinition g = make_random_game(spec);
    const double opt = compute_opt(g, enum_budget(o)).opt;
    const double str = compute_str_exact(g, enum_budget(o)).value;
    const double sfcbs = min_welfare(g, ConceptId::kSfcbs, enum_budget(o), lp_budget(o)).value;
    bool row_ok = sfcbs >= str / 2.0 - 1e-6;
    json item;
    item["seed"] = seed;
    item["opt"] = opt;
    item["str"] = str;
    item["sfcbs_min"] = sfcbs;
    std::string comeq_cell;
    std::string sfcce_cell;
    if (!o.correlated) {
      const double comeq = min_welfare(g, ConceptId::kComEq, enum_budget(o), lp_budget(o)).value;
      const double sfcce = min_welfare(g, ConceptId::kSfcce, enum_budget(o), lp_budget(o)).value;
      row_ok = row_ok && comeq >= opt / 2.0 - 1e-6 && sfcce >= opt / 2.0 - 1e-6;
      item["comeq_min"] = comeq;
      item["sfcce_min"] = sfcce;
      comeq_cell = fmt(comeq);
      sfcce_cell = fmt(sfcce);
    }
    item["ok"] = row_ok;
    items.push_back(std::move(item));
    table.rows.push_back({std::to_string(seed), fmt(opt), fmt(str), fmt(sfcbs), comeq_cell,
                          sfcce_cell, fmt_bool(row_ok)});
    ok = ok && row_ok;
  }
  doc["rows"] = std::move(items);
  return ok;
}

bool cmd_reproduce(const Options& o) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = config_json(o, "reproduce");
  Table table;
  bool ok = false;
  if (o.experiment == "figure2") {
    ok = reproduce_figure2(o, doc, table);
  } else if (o.experiment == "bayesian-solution-gap") {
    ok = reproduce_solution_gap(o, doc, table);
  } else if (o.experiment == "sr-independent") {
    ok = reproduce_sr_independent(o, doc, table);
  } else if (o.experiment == "sr-grid") {
    ok = reproduce_sr_grid(o, doc, table);
  } else if (o.experiment == "lattice") {
    ok = run_lattice(o, doc, table);
  } else if (o.experiment == "smoothness") {
    ok = reproduce_smoothness(o, doc, table);
  } else {
    throw InputError("unknown experiment: " + o.experiment);
  }
  doc["ok"] = ok;
  emit(o, doc, table);
  return ok;
}

bool cmd_audit(const Options& o) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = config_json(o, "audit");
  Table table;
  bool ok = false;
  if (o.which == "sr-bound") {
    GameDefinition g = load_game(o);
    const std::int64_t samples = o.samples > 0 ? o.samples : 20000;
    SrBoundAuditReport rep = sr_bound_audit(g, samples, o.seed, enum_budget(o));
    doc["audit"] = to_json(rep);
    table.header = {"name", "lhs", "rhs", "band", "holds"};
    for (const AuditInequality& q : rep.inequalities) {
      table.rows.push_back({q.name, fmt(q.lhs), fmt(q.rhs), fmt(q.band), fmt_bool(q.holds)});
    }
    ok = rep.all_hold;
  } else if (o.which == "lattice") {
    ok = run_lattice(o, doc, table);
  } else if (o.which == "submodular") {
    GameDefinition g = load_game(o);
    MonotoneSubmodularReport rep = check_monotone_submodular(g.welfare, enum_budget(o));
    doc["audit"] = to_json(rep);
    table.header = {"check", "result"};
    table.rows = {
        {"monotone", fmt_bool(rep.monotone)},
        {"submodular", fmt_bool(rep.submodular)},
        {"exhaustive", fmt_bool(rep.exhaustive)},
    };
    ok = rep.monotone && rep.submodular;
  } else {
    throw InputError("unknown audit: " + o.which + " (use sr-bound, lattice, or submodular)");
  }
  doc["ok"] = ok;
  emit(o, doc, table);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Finite Bayesian games with submodular social welfare: validation, welfare "
               "bounds, equilibrium LPs, and reproduction suites."};
  app.require_subcommand(1);
  app.fallthrough(true);

  app.add_option("--game", o.game_path, "Path to a game JSON file")->envname("SUBWELF_GAME");
  app.add_option("--recipe", o.recipe, "Named instance recipe")->envname("SUBWELF_RECIPE");
  app.add_option("--set", o.set_params, "Recipe parameter key=value (repeatable)")
      ->envname("SUBWELF_SET");
  app.add_option("--concept", o.concepts, "Equilibrium concept name (repeatable)")
      ->envname("SUBWELF_CONCEPT");
  app.add_option("--sense", o.sense, "Objective sense: min or max")->envname("SUBWELF_SENSE");
  app.add_option("--seed", o.seed, "Base random seed")->envname("SUBWELF_SEED");
  app.add_option("--budget-enum", o.budget_enum, "Enumeration budget (welfare evaluations)")
      ->envname("SUBWELF_BUDGET_ENUM");
  app.add_option("--budget-lp", o.budget_lp, "LP budget (tableau cells)")
      ->envname("SUBWELF_BUDGET_LP");
  app.add_option("--tol", o.tolerance, "Comparison tolerance")->envname("SUBWELF_TOL");
  app.add_option("--out", o.out_path, "Output file (default stdout)")->envname("SUBWELF_OUT");
  app.add_option("--format", o.format, "Output format: json or csv")
      ->envname("SUBWELF_FORMAT");

  CLI::App* validate = app.add_subcommand("validate", "Structural and payoff-condition checks");
  CLI::App* generate = app.add_subcommand("generate", "Write a recipe instance as game JSON");
  CLI::App* welfare = app.add_subcommand("welfare", "Optimal and strategy-reachable welfare");
  welfare->add_option("--str-mode", o.str_mode, "Strategy search: exact or local");
  welfare->add_option("--restarts", o.restarts, "Local search restarts");
  CLI::App* equilibrium = app.add_subcommand("equilibrium", "Extremal equilibrium welfare");
  CLI::App* reproduce = app.add_subcommand("reproduce", "Named reproduction experiments");
  reproduce->add_option("experiment", o.experiment,
                        "figure2|bayesian-solution-gap|sr-independent|sr-grid|lattice|smoothness")
      ->required();
  reproduce->add_option("--eps", o.eps, "figure2 third-universe weight");
  reproduce->add_option("--n", o.n, "Instance size");
  reproduce->add_option("--k", o.k, "Grid coordinate count");
  reproduce->add_option("--num-high", o.num_high, "High-priority player count");
  reproduce->add_option("--games", o.games, "Number of seeded games");
  reproduce->add_option("--profiles", o.profiles, "Number of sampled strategy profiles");
  reproduce->add_option("--samples", o.samples, "Monte Carlo samples per estimate");
  reproduce->add_option("--restarts", o.restarts, "Local search restarts");
  reproduce->add_option("--bipartite-n", o.bipartite_n,
                        "Bipartite surrogate size (0 disables)");
  reproduce->add_flag("--correlated", o.correlated, "Use correlated priors");
  CLI::App* audit = app.add_subcommand("audit", "Inequality chain and structure audits");
  audit->add_option("which", o.which, "sr-bound|lattice|submodular")->required();
  audit->add_option("--samples", o.samples, "Monte Carlo samples per estimate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    bool ok = false;
    if (app.got_subcommand(validate)) {
      ok = cmd_validate(o);
    } else if (app.got_subcommand(generate)) {
      ok = cmd_generate(o);
    } else if (app.got_subcommand(welfare)) {
      ok = cmd_welfare(o);
    } else if (app.got_subcommand(equilibrium)) {
      ok = cmd_equilibrium(o);
    } else if (app.got_subcommand(reproduce)) {
      ok = cmd_reproduce(o);
    } else if (app.got_subcommand(audit)) {
      ok = cmd_audit(o);
    }
    return ok ? 0 : 1;
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const BudgetError& e) {
    std::fprintf(stderr, "budget refusal: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
