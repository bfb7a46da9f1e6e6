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

#include "subwelf/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subwelf/welfare.hpp"

namespace subwelf {
namespace {

constexpr const char* kConceptNames[] = {
    "BNE_pure", "SFCE", "ANFCE", "ComEq", "BS", "ANFCCE", "SFCCE", "ANFCBS", "SFCBS",
};

struct ProfileHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Memo of per-profile payoffs and welfare. Charges the evaluation budget on
// misses only: one welfare evaluation plus the utility vector per profile.
class UtilCache {
 public:
  UtilCache(const GameDefinition& g, const Budget& budget) : g_(g), budget_(budget) {}

  struct Entry {
    std::vector<double> utils;
    double welfare = 0.0;
  };

  const Entry& at(const std::vector<int>& profile) {
    auto it = table_.find(profile);
    if (it != table_.end()) return it->second;
    const std::int64_t cost = g_.num_players() + 1;
    require_budget(used_ + cost <= budget_.max_evaluations,
                   "equilibrium computation needs more than " +
                       std::to_string(budget_.max_evaluations) +
                       " welfare/utility evaluations");
    used_ += cost;
    Entry e;
    e.utils = utility_vector(g_, profile);
    e.welfare = social_welfare(g_, profile);
    return table_.emplace(profile, std::move(e)).first->second;
  }

 private:
  const GameDefinition& g_;
  Budget budget_;
  std::int64_t used_ = 0;
  std::unordered_map<std::vector<int>, Entry, ProfileHash> table_;
};

const std::string& ground_name(const GameDefinition& g, int element) {
  return g.welfare.ground().name(element);
}

const std::string& type_label(const GameDefinition& g, int player, int type) {
  return g.prior.type_names()[player][type];
}

int action_count(const GameDefinition& g, int player, int type) {
  return static_cast<int>(g.action_set(player, type).size());
}

int concept_index(ConceptId concept_id) { return static_cast<int>(concept_id); }

// Flat index for a (player, type) cell and the total cell count.
struct CellLayout {
  std::vector<int> offset;  // per player
  int total = 0;

  explicit CellLayout(const GameDefinition& g) {
    offset.resize(g.num_players());
    for (int i = 0; i < g.num_players(); ++i) {
      offset[i] = total;
      total += g.prior.num_types(i);
    }
  }
  int cell(int player, int type) const { return offset[player] + type; }
};

// ---------------------------------------------------------------------------
// Mediated concepts: variable space over per-type-profile action distributions
// ---------------------------------------------------------------------------

struct PiSlice {
  std::vector<int> types;
  double rho = 0.0;  // joint prior probability, 0 off support
  std::vector<int> radix;
  std::vector<std::int64_t> stride;
  std::int64_t count = 0;
  std::int64_t var_base = 0;
};

struct PiSpace {
  std::vector<PiSlice> slices;
  std::map<std::vector<int>, int> index;
  std::vector<Prior::SupportEntry> support;
  std::int64_t num_pi_vars = 0;
};

void slice_profile(const GameDefinition& g, const PiSlice& s, const std::vector<int>& digits,
                   std::vector<int>& out) {
  for (int i = 0; i < g.num_players(); ++i) {
    out[i] = g.action_set(i, s.types[i])[digits[i]];
  }
}

PiSpace make_pi_space(const GameDefinition& g, bool with_misreports, const Budget& budget,
                      const LpBudget& lp_budget) {
  const int n = g.num_players();
  PiSpace sp;
  sp.support = g.prior.expanded_support(budget);
  auto add_slice = [&](const std::vector<int>& types, double rho) {
    if (sp.index.find(types) != sp.index.end()) return;
    PiSlice s;
    s.types = types;
    s.rho = rho;
    s.radix.resize(n);
    for (int i = 0; i < n; ++i) s.radix[i] = action_count(g, i, types[i]);
    s.count = capped_product(s.radix, lp_budget.max_cells);
    s.stride.assign(n, 1);
    for (int i = n - 2; i >= 0; --i) s.stride[i] = s.stride[i + 1] * s.radix[i + 1];
    s.var_base = sp.num_pi_vars;
    sp.num_pi_vars += s.count;
    require_budget(sp.num_pi_vars <= lp_budget.max_cells,
                   "mediator policy space needs more than " +
                       std::to_string(lp_budget.max_cells) +
                       " action-profile variables; exceeds the LP cell budget");
    sp.index.emplace(s.types, static_cast<int>(sp.slices.size()));
    sp.slices.push_back(std::move(s));
  };
  for (const auto& [types, rho] : sp.support) add_slice(types, rho);
  if (with_misreports) {
    for (const auto& [types, rho] : sp.support) {
      std::vector<int> alt = types;
      for (int i = 0; i < n; ++i) {
        for (int tp = 0; tp < g.prior.num_types(i); ++tp) {
          if (tp == types[i]) continue;
          alt[i] = tp;
          add_slice(alt, g.prior.probability(alt));
        }
        alt[i] = types[i];
      }
    }
  }
  return sp;
}

struct PiBundle {
  PiSpace space;
  LinearProgramDescription lp;
};

PiBundle build_pi_lp(const GameDefinition& g, ConceptId concept_id, Sense sense,
                     const Budget& budget, const LpBudget& lp_budget, UtilCache& cache) {
  const int n = g.num_players();
  PiBundle bundle;
  bundle.space = make_pi_space(g, concept_id == ConceptId::kComEq, budget, lp_budget);
  PiSpace& sp = bundle.space;
  LinearProgramDescription& lp = bundle.lp;
  lp.sense = sense == Sense::kMax ? LinearProgramDescription::Sense::kMaximize
                                  : LinearProgramDescription::Sense::kMinimize;

  // Size the program before materializing anything.
  std::int64_t rows = static_cast<std::int64_t>(sp.slices.size());
  std::int64_t extra_vars = 0;
  for (int i = 0; i < n; ++i) {
    const int types = g.prior.num_types(i);
    for (int t = 0; t < types; ++t) {
      const std::int64_t m = action_count(g, i, t);
      switch (concept_id) {
        case ConceptId::kBs:
          rows += m * (m - 1);
          break;
        case ConceptId::kComEq:
          rows += m * (m - 1);
          for (int tp = 0; tp < types; ++tp) {
            if (tp == t) continue;
            const std::int64_t mp = action_count(g, i, tp);
            rows += mp * m + 1;
            extra_vars += mp;
          }
          break;
        case ConceptId::kAnfcbs:
          rows += m;
          break;
        case ConceptId::kSfcbs:
          rows += m;
          extra_vars += 1;
          break;
        default:
          break;
      }
    }
    if (concept_id == ConceptId::kSfcbs) rows += 1;
  }
  const std::int64_t vars = sp.num_pi_vars + extra_vars;
  require_budget(rows <= lp_budget.max_cells && rows * vars <= lp_budget.max_cells,
                 std::string(concept_name(concept_id)) + " LP needs " + std::to_string(rows) +
                     " x " + std::to_string(vars) +
                     " tableau cells; exceeds the LP cell budget of " +
                     std::to_string(lp_budget.max_cells));

  lp.var_names.reserve(static_cast<std::size_t>(vars));
  for (std::size_t si = 0; si < sp.slices.size(); ++si) {
    for (std::int64_t k = 0; k < sp.slices[si].count; ++k) {
      lp.var_names.push_back("pi[" + std::to_string(si) + "][" + std::to_string(k) + "]");
    }
  }
  auto new_var = [&](std::string name) {
    lp.var_names.push_back(std::move(name));
    return static_cast<int>(lp.var_names.size()) - 1;
  };
  auto new_row = [&](std::string name, char rel, double rhs) {
    LinearProgramDescription::Row row;
    row.name = std::move(name);
    row.relation = rel;
    row.rhs = rhs;
    lp.rows.push_back(std::move(row));
    return static_cast<int>(lp.rows.size()) - 1;
  };
  auto coeff = [&](int row, std::int64_t var, double c) {
    if (c != 0.0) lp.rows[row].coeffs.emplace_back(static_cast<int>(var), c);
  };

  for (std::size_t si = 0; si < sp.slices.size(); ++si) {
    const int row = new_row("sum[" + std::to_string(si) + "]", '=', 1.0);
    for (std::int64_t k = 0; k < sp.slices[si].count; ++k) {
      coeff(row, sp.slices[si].var_base + k, 1.0);
    }
  }

  // Row registries, allocated per concept.
  std::vector<std::vector<std::vector<int>>> pair_row;    // [i][t][ka*m+kb]
  std::vector<std::vector<std::vector<int>>> single_row;  // [i][t][kb]
  std::vector<int> player_row;                            // SFCBS [i]
  std::vector<std::vector<int>> z_cell;                   // SFCBS [i][t]
  std::vector<std::vector<std::vector<std::vector<int>>>> mis_row;  // [i][t][tp][ka'*m+kb]
  std::vector<std::vector<std::vector<int>>> truth_row;             // [i][t][tp]
  std::vector<std::vector<std::vector<std::vector<int>>>> z_mis;    // [i][t][tp][ka']

  if (concept_id == ConceptId::kBs || concept_id == ConceptId::kComEq) {
    pair_row.resize(n);
    for (int i = 0; i < n; ++i) {
      pair_row[i].resize(g.prior.num_types(i));
      for (int t = 0; t < g.prior.num_types(i); ++t) {
        const int m = action_count(g, i, t);
        pair_row[i][t].assign(static_cast<std::size_t>(m) * m, -1);
        for (int ka = 0; ka < m; ++ka) {
          for (int kb = 0; kb < m; ++kb) {
            if (kb == ka) continue;
            pair_row[i][t][ka * m + kb] =
                new_row("bs[" + std::to_string(i) + "][" + std::to_string(t) + "][" +
                            ground_name(g, g.action_set(i, t)[ka]) + "->" +
                            ground_name(g, g.action_set(i, t)[kb]) + "]",
                        '>', 0.0);
          }
        }
      }
    }
  }
  if (concept_id == ConceptId::kComEq) {
    mis_row.resize(n);
    truth_row.resize(n);
    z_mis.resize(n);
    for (int i = 0; i < n; ++i) {
      const int types = g.prior.num_types(i);
      mis_row[i].resize(types);
      truth_row[i].resize(types);
      z_mis[i].resize(types);
      for (int t = 0; t < types; ++t) {
        const int m = action_count(g, i, t);
        mis_row[i][t].resize(types);
        truth_row[i][t].assign(types, -1);
        z_mis[i][t].resize(types);
        for (int tp = 0; tp < types; ++tp) {
          if (tp == t) continue;
          const int mp = action_count(g, i, tp);
          z_mis[i][t][tp].resize(mp);
          for (int kap = 0; kap < mp; ++kap) {
            z_mis[i][t][tp][kap] =
                new_var("z[" + std::to_string(i) + "][" + std::to_string(t) + "][" +
                        std::to_string(tp) + "][" + std::to_string(kap) + "]");
          }
          mis_row[i][t][tp].assign(static_cast<std::size_t>(mp) * m, -1);
          for (int kap = 0; kap < mp; ++kap) {
            for (int kb = 0; kb < m; ++kb) {
              const int r =
                  new_row("misreport[" + std::to_string(i) + "][" + std::to_string(t) + "][" +
                              std::to_string(tp) + "][" +
                              ground_name(g, g.action_set(i, tp)[kap]) + "->" +
                              ground_name(g, g.action_set(i, t)[kb]) + "]",
                          '>', 0.0);
              coeff(r, z_mis[i][t][tp][kap], 1.0);
              mis_row[i][t][tp][kap * m + kb] = r;
            }
          }
          const int r = new_row("truthful[" + std::to_string(i) + "][" + std::to_string(t) +
                                    "][" + std::to_string(tp) + "]",
                                '>', 0.0);
          for (int kap = 0; kap < mp; ++kap) coeff(r, z_mis[i][t][tp][kap], -1.0);
          truth_row[i][t][tp] = r;
        }
      }
    }
  }
  if (concept_id == ConceptId::kAnfcbs || concept_id == ConceptId::kSfcbs) {
    single_row.resize(n);
    if (concept_id == ConceptId::kSfcbs) {
      z_cell.resize(n);
      player_row.assign(n, -1);
    }
    for (int i = 0; i < n; ++i) {
      const int types = g.prior.num_types(i);
      single_row[i].resize(types);
      if (concept_id == ConceptId::kSfcbs) z_cell[i].assign(types, -1);
      for (int t = 0; t < types; ++t) {
        const int m = action_count(g, i, t);
        single_row[i][t].assign(m, -1);
        if (concept_id == ConceptId::kSfcbs) {
          z_cell[i][t] = new_var("z[" + std::to_string(i) + "][" + std::to_string(t) + "]");
        }
        for (int kb = 0; kb < m; ++kb) {
          const char* tag = concept_id == ConceptId::kSfcbs ? "sfcbs[" : "anfcbs[";
          const int r = new_row(tag + std::to_string(i) + "][" + std::to_string(t) + "][" +
                                    ground_name(g, g.action_set(i, t)[kb]) + "]",
                                '>', 0.0);
          if (concept_id == ConceptId::kSfcbs) coeff(r, z_cell[i][t], 1.0);
          single_row[i][t][kb] = r;
        }
      }
      if (concept_id == ConceptId::kSfcbs) {
        const int r = new_row("sfcbs_total[" + std::to_string(i) + "]", '>', 0.0);
        for (int t = 0; t < types; ++t) coeff(r, z_cell[i][t], -1.0);
        player_row[i] = r;
      }
    }
  }

  // Sweep the on-support slices: objective plus truthful/deviation masses.
  std::vector<int> digits(n, 0);
  std::vector<int> prof(n, 0);
  std::vector<int> dev(n, 0);
  for (const PiSlice& s : sp.slices) {
    if (s.rho <= 0.0) continue;
    std::fill(digits.begin(), digits.end(), 0);
    std::int64_t k = 0;
    do {
      slice_profile(g, s, digits, prof);
      const UtilCache::Entry& e = cache.at(prof);
      const std::int64_t var = s.var_base + k;
      if (e.welfare != 0.0) {
        lp.objective.emplace_back(static_cast<int>(var), s.rho * e.welfare);
      }
      for (int i = 0; i < n; ++i) {
        const int t = s.types[i];
        const int m = s.radix[i];
        const int ka = digits[i];
        const double vt = e.utils[i];
        switch (concept_id) {
          case ConceptId::kBs:
          case ConceptId::kComEq: {
            dev = prof;
            for (int kb = 0; kb < m; ++kb) {
              if (kb == ka) continue;
              dev[i] = g.action_set(i, t)[kb];
              const double vd = cache.at(dev).utils[i];
              coeff(pair_row[i][t][ka * m + kb], var, s.rho * (vt - vd));
            }
            if (concept_id == ConceptId::kComEq) {
              for (int tp = 0; tp < g.prior.num_types(i); ++tp) {
                if (tp == t) continue;
                coeff(truth_row[i][t][tp], var, s.rho * vt);
              }
            }
            break;
          }
          case ConceptId::kAnfcbs: {
            dev = prof;
            for (int kb = 0; kb < m; ++kb) {
              if (kb == ka) continue;
              dev[i] = g.action_set(i, t)[kb];
              const double vd = cache.at(dev).utils[i];
              coeff(single_row[i][t][kb], var, s.rho * (vt - vd));
            }
            break;
          }
          case ConceptId::kSfcbs: {
            dev = prof;
            for (int kb = 0; kb < m; ++kb) {
              dev[i] = g.action_set(i, t)[kb];
              const double vd = kb == ka ? vt : cache.at(dev).utils[i];
              coeff(single_row[i][t][kb], var, -s.rho * vd);
            }
            coeff(player_row[i], var, s.rho * vt);
            break;
          }
          default:
            break;
        }
      }
      ++k;
    } while (next_tuple(digits, s.radix));
  }

  // ComEq: recommendation masses under every misreported type.
  if (concept_id == ConceptId::kComEq) {
    for (int i = 0; i < n; ++i) {
      for (const auto& [theta, rho] : sp.support) {
        const int t = theta[i];
        const int m = action_count(g, i, t);
        std::vector<int> alt = theta;
        for (int tp = 0; tp < g.prior.num_types(i); ++tp) {
          if (tp == t) continue;
          alt[i] = tp;
          const PiSlice& s2 = sp.slices[static_cast<std::size_t>(sp.index.at(alt))];
          std::fill(digits.begin(), digits.end(), 0);
          std::int64_t k = 0;
          do {
            slice_profile(g, s2, digits, prof);
            const int kap = digits[i];
            dev = prof;
            for (int kb = 0; kb < m; ++kb) {
              dev[i] = g.action_set(i, t)[kb];
              const double vd = cache.at(dev).utils[i];
              coeff(mis_row[i][t][tp][kap * m + kb], s2.var_base + k, -rho * vd);
            }
            ++k;
          } while (next_tuple(digits, s2.radix));
        }
      }
    }
  }
  return bundle;
}

// ---------------------------------------------------------------------------
// Strategy concepts: variable space over pure strategy profiles
// ---------------------------------------------------------------------------

struct SigmaSpace {
  std::vector<Prior::SupportEntry> support;
  CellLayout cells;
  std::vector<std::vector<int>> support_by_type;  // per cell: support indices
  std::vector<std::int64_t> s_count;              // per player
  std::vector<std::int64_t> s_stride;             // player stride in a flat index
  std::int64_t num_flat = 0;
  std::vector<std::vector<std::vector<int>>> strat_ground;  // [i][si][t] -> ground id
  std::vector<double> util_bar;    // [flat*n + i]
  std::vector<double> sw_bar;      // [flat]
  std::vector<double> cond_truth;  // [flat*cells.total + cell]

  explicit SigmaSpace(const GameDefinition& g) : cells(g) {}
};

// Strategy-space frame without the payoff tables; tabulate_sigma fills them.
SigmaSpace make_sigma_frame(const GameDefinition& g, const Budget& budget,
                            std::int64_t flat_cap) {
  const int n = g.num_players();
  SigmaSpace sp(g);
  sp.support = g.prior.expanded_support(budget);
  sp.support_by_type.resize(sp.cells.total);
  for (std::size_t u = 0; u < sp.support.size(); ++u) {
    for (int i = 0; i < n; ++i) {
      sp.support_by_type[sp.cells.cell(i, sp.support[u].first[i])].push_back(
          static_cast<int>(u));
    }
  }
  sp.s_count.resize(n);
  sp.strat_ground.resize(n);
  std::string product;
  std::int64_t flat = 1;
  for (int i = 0; i < n; ++i) {
    const int types = g.prior.num_types(i);
    std::vector<int> radix(types);
    for (int t = 0; t < types; ++t) radix[t] = action_count(g, i, t);
    sp.s_count[i] = capped_product(radix, flat_cap);
    if (i > 0) product += " x ";
    product += sp.s_count[i] > flat_cap ? ">" + std::to_string(flat_cap)
                                        : std::to_string(sp.s_count[i]);
    if (sp.s_count[i] > flat_cap || flat > flat_cap / std::max<std::int64_t>(1, sp.s_count[i])) {
      flat = flat_cap + 1;
    } else {
      flat *= sp.s_count[i];
    }
  }
  require_budget(flat <= flat_cap, "pure strategy profile space " + product +
                                       " exceeds the budget of " + std::to_string(flat_cap) +
                                       " profiles");
  sp.num_flat = flat;
  require_budget(sp.num_flat <= budget.max_evaluations / std::max<std::int64_t>(
                                    1, static_cast<std::int64_t>(sp.support.size())),
                 "tabulating " + std::to_string(sp.num_flat) + " strategy profiles over " +
                     std::to_string(sp.support.size()) +
                     " support entries exceeds the evaluation budget of " +
                     std::to_string(budget.max_evaluations));
  sp.s_stride.assign(n, 1);
  for (int i = n - 2; i >= 0; --i) sp.s_stride[i] = sp.s_stride[i + 1] * sp.s_count[i + 1];
  for (int i = 0; i < n; ++i) {
    const int types = g.prior.num_types(i);
    std::vector<int> radix(types);
    for (int t = 0; t < types; ++t) radix[t] = action_count(g, i, t);
    std::vector<int> digits(types, 0);
    sp.strat_ground[i].reserve(static_cast<std::size_t>(sp.s_count[i]));
    do {
      std::vector<int> per_type(types);
      for (int t = 0; t < types; ++t) per_type[t] = g.action_set(i, t)[digits[t]];
      sp.strat_ground[i].push_back(std::move(per_type));
    } while (next_tuple(digits, radix));
  }
  return sp;
}

void decode_flat(const SigmaSpace& sp, std::int64_t flat, std::vector<int>& si) {
  for (std::size_t i = 0; i < sp.s_count.size(); ++i) {
    si[i] = static_cast<int>((flat / sp.s_stride[i]) % sp.s_count[i]);
  }
}

void tabulate_sigma(const GameDefinition& g, SigmaSpace& sp, UtilCache& cache) {
  const int n = g.num_players();
  sp.util_bar.assign(static_cast<std::size_t>(sp.num_flat) * n, 0.0);
  sp.sw_bar.assign(static_cast<std::size_t>(sp.num_flat), 0.0);
  sp.cond_truth.assign(static_cast<std::size_t>(sp.num_flat) * sp.cells.total, 0.0);
  std::vector<int> si(n), prof(n);
  for (std::int64_t flat = 0; flat < sp.num_flat; ++flat) {
    decode_flat(sp, flat, si);
    for (const auto& [theta, rho] : sp.support) {
      for (int i = 0; i < n; ++i) prof[i] = sp.strat_ground[i][si[i]][theta[i]];
      const UtilCache::Entry& e = cache.at(prof);
      sp.sw_bar[flat] += rho * e.welfare;
      for (int i = 0; i < n; ++i) {
        sp.util_bar[flat * n + i] += rho * e.utils[i];
        sp.cond_truth[flat * sp.cells.total + sp.cells.cell(i, theta[i])] += rho * e.utils[i];
      }
    }
  }
}

// Expected payoff to player i of switching to action slot kb at type t while
// everyone else follows the decoded profile, summed over the t-conditional
// joint prior.
double deviation_mass(const GameDefinition& g, const SigmaSpace& sp, UtilCache& cache,
                      const std::vector<int>& si, int player, int type, int kb,
                      std::vector<int>& prof) {
  const int n = g.num_players();
  double mass = 0.0;
  for (int u : sp.support_by_type[sp.cells.cell(player, type)]) {
    const auto& [theta, rho] = sp.support[static_cast<std::size_t>(u)];
    for (int j = 0; j < n; ++j) prof[j] = sp.strat_ground[j][si[j]][theta[j]];
    prof[player] = g.action_set(player, type)[kb];
    mass += rho * cache.at(prof).utils[player];
  }
  return mass;
}

struct SigmaBundle {
  SigmaSpace space;
  LinearProgramDescription lp;
};

SigmaBundle build_sigma_lp(const GameDefinition& g, ConceptId concept_id, Sense sense,
                           const Budget& budget, const LpBudget& lp_budget, UtilCache& cache) {
  const int n = g.num_players();
  SigmaBundle bundle{make_sigma_frame(g, budget, lp_budget.max_cells), {}};
  SigmaSpace& sp = bundle.space;
  LinearProgramDescription& lp = bundle.lp;
  lp.sense = sense == Sense::kMax ? LinearProgramDescription::Sense::kMaximize
                                  : LinearProgramDescription::Sense::kMinimize;

  std::int64_t rows = 1;
  std::int64_t extra_vars = 0;
  for (int i = 0; i < n; ++i) {
    switch (concept_id) {
      case ConceptId::kSfce:
        rows += sp.s_count[i] * (sp.s_count[i] - 1);
        break;
      case ConceptId::kAnfce:
        for (int t = 0; t < g.prior.num_types(i); ++t) {
          const std::int64_t m = action_count(g, i, t);
          rows += m * (m - 1);
        }
        break;
      case ConceptId::kAnfcce:
        for (int t = 0; t < g.prior.num_types(i); ++t) rows += action_count(g, i, t);
        break;
      case ConceptId::kSfcce:
        for (int t = 0; t < g.prior.num_types(i); ++t) rows += action_count(g, i, t);
        rows += 1;
        extra_vars += g.prior.num_types(i);
        break;
      default:
        break;
    }
  }
  const std::int64_t vars = sp.num_flat + extra_vars;
  require_budget(rows <= lp_budget.max_cells && rows * vars <= lp_budget.max_cells,
                 std::string(concept_name(concept_id)) + " LP needs " + std::to_string(rows) +
                     " x " + std::to_string(vars) +
                     " tableau cells; exceeds the LP cell budget of " +
                     std::to_string(lp_budget.max_cells));
  tabulate_sigma(g, sp, cache);

  lp.var_names.reserve(static_cast<std::size_t>(vars));
  for (std::int64_t f = 0; f < sp.num_flat; ++f) {
    lp.var_names.push_back("sigma[" + std::to_string(f) + "]");
  }
  auto new_var = [&](std::string name) {
    lp.var_names.push_back(std::move(name));
    return static_cast<int>(lp.var_names.size()) - 1;
  };
  auto new_row = [&](std::string name, char rel, double rhs) {
    LinearProgramDescription::Row row;
    row.name = std::move(name);
    row.relation = rel;
    row.rhs = rhs;
    lp.rows.push_back(std::move(row));
    return static_cast<int>(lp.rows.size()) - 1;
  };
  auto coeff = [&](int row, std::int64_t var, double c) {
    if (c != 0.0) lp.rows[row].coeffs.emplace_back(static_cast<int>(var), c);
  };

  {
    const int row = new_row("sum", '=', 1.0);
    for (std::int64_t f = 0; f < sp.num_flat; ++f) coeff(row, f, 1.0);
  }
  for (std::int64_t f = 0; f < sp.num_flat; ++f) {
    if (sp.sw_bar[f] != 0.0) lp.objective.emplace_back(static_cast<int>(f), sp.sw_bar[f]);
  }

  std::vector<int> si(n), prof(n);
  switch (concept_id) {
    case ConceptId::kSfce: {
      for (int i = 0; i < n; ++i) {
        const std::int64_t block = sp.s_count[i] * sp.s_stride[i];
        for (std::int64_t ksi = 0; ksi < sp.s_count[i]; ++ksi) {
          for (std::int64_t ksj = 0; ksj < sp.s_count[i]; ++ksj) {
            if (ksj == ksi) continue;
            const int row = new_row("sfce[" + std::to_string(i) + "][" + std::to_string(ksi) +
                                        "->" + std::to_string(ksj) + "]",
                                    '>', 0.0);
            for (std::int64_t base = ksi * sp.s_stride[i]; base < sp.num_flat; base += block) {
              for (std::int64_t off = 0; off < sp.s_stride[i]; ++off) {
                const std::int64_t flat = base + off;
                const std::int64_t swapped = flat + (ksj - ksi) * sp.s_stride[i];
                coeff(row, flat, sp.util_bar[flat * n + i] - sp.util_bar[swapped * n + i]);
              }
            }
          }
        }
      }
      break;
    }
    case ConceptId::kAnfce: {
      for (int i = 0; i < n; ++i) {
        for (int t = 0; t < g.prior.num_types(i); ++t) {
          const int m = action_count(g, i, t);
          for (int ka = 0; ka < m; ++ka) {
            for (int kb = 0; kb < m; ++kb) {
              if (kb == ka) continue;
              const int row =
                  new_row("anfce[" + std::to_string(i) + "][" + std::to_string(t) + "][" +
                              ground_name(g, g.action_set(i, t)[ka]) + "->" +
                              ground_name(g, g.action_set(i, t)[kb]) + "]",
                          '>', 0.0);
              for (std::int64_t flat = 0; flat < sp.num_flat; ++flat) {
                decode_flat(sp, flat, si);
                if (g.owner_slot[sp.strat_ground[i][si[i]][t]] != ka) continue;
                const double truth = sp.cond_truth[flat * sp.cells.total + sp.cells.cell(i, t)];
                const double devm = deviation_mass(g, sp, cache, si, i, t, kb, prof);
                coeff(row, flat, truth - devm);
              }
            }
          }
        }
      }
      break;
    }
    case ConceptId::kAnfcce: {
      for (int i = 0; i < n; ++i) {
        for (int t = 0; t < g.prior.num_types(i); ++t) {
          const int m = action_count(g, i, t);
          for (int kb = 0; kb < m; ++kb) {
            const int row = new_row("anfcce[" + std::to_string(i) + "][" + std::to_string(t) +
                                        "][" + ground_name(g, g.action_set(i, t)[kb]) + "]",
                                    '>', 0.0);
            for (std::int64_t flat = 0; flat < sp.num_flat; ++flat) {
              decode_flat(sp, flat, si);
              const double truth = sp.cond_truth[flat * sp.cells.total + sp.cells.cell(i, t)];
              const double devm = deviation_mass(g, sp, cache, si, i, t, kb, prof);
              coeff(row, flat, truth - devm);
            }
          }
        }
      }
      break;
    }
    case ConceptId::kSfcce: {
      for (int i = 0; i < n; ++i) {
        const int types = g.prior.num_types(i);
        std::vector<int> zs(types);
        for (int t = 0; t < types; ++t) {
          zs[t] = new_var("z[" + std::to_string(i) + "][" + std::to_string(t) + "]");
        }
        for (int t = 0; t < types; ++t) {
          const int m = action_count(g, i, t);
          for (int kb = 0; kb < m; ++kb) {
            const int row = new_row("sfcce[" + std::to_string(i) + "][" + std::to_string(t) +
                                        "][" + ground_name(g, g.action_set(i, t)[kb]) + "]",
                                    '>', 0.0);
            coeff(row, zs[t], 1.0);
            for (std::int64_t flat = 0; flat < sp.num_flat; ++flat) {
              decode_flat(sp, flat, si);
              coeff(row, flat, -deviation_mass(g, sp, cache, si, i, t, kb, prof));
            }
          }
        }
        const int row = new_row("sfcce_total[" + std::to_string(i) + "]", '>', 0.0);
        for (int t = 0; t < types; ++t) coeff(row, zs[t], -1.0);
        for (std::int64_t flat = 0; flat < sp.num_flat; ++flat) {
          coeff(row, flat, sp.util_bar[flat * n + i]);
        }
      }
      break;
    }
    default:
      break;
  }
  return bundle;
}

// ---------------------------------------------------------------------------
// Witness validation, expected welfare, and incentive-gain evaluation
// ---------------------------------------------------------------------------

std::map<std::vector<int>, int> validate_pi(const GameDefinition& g,
                                            const TypeDependentDistribution& pi) {
  const int n = g.num_players();
  std::map<std::vector<int>, int> index;
  require(!pi.slices.empty(), "type-dependent distribution has no slices");
  for (std::size_t s = 0; s < pi.slices.size(); ++s) {
    const auto& slice = pi.slices[s];
    require(static_cast<int>(slice.types.size()) == n,
            "slice type profile arity does not match the player count");
    for (int i = 0; i < n; ++i) {
      require(slice.types[i] >= 0 && slice.types[i] < g.prior.num_types(i),
              "slice type id out of range");
    }
    require(index.emplace(slice.types, static_cast<int>(s)).second,
            "duplicate slice for a type profile");
    require(!slice.mass.empty(), "slice carries no action profiles");
    double total = 0.0;
    for (const auto& [prof, w] : slice.mass) {
      require(static_cast<int>(prof.size()) == n,
              "action profile arity does not match the player count");
      require(w >= -tol::kProbSum, "negative probability in a slice");
      total += w;
      for (int i = 0; i < n; ++i) {
        const int a = prof[i];
        require(a >= 0 && a < g.welfare.ground().size() && !g.is_null(a) &&
                    g.owner_player[a] == i && g.owner_type[a] == slice.types[i],
                "profile entry is not an action of the recommended (player, type)");
      }
    }
    require(std::abs(total - 1.0) <= tol::kExact, "slice masses must sum to 1");
  }
  return index;
}

void validate_sigma(const GameDefinition& g, const StrategyDistribution& sigma) {
  require(!sigma.mass.empty(), "strategy distribution has no support");
  double total = 0.0;
  for (const auto& [s, w] : sigma.mass) {
    require(w >= -tol::kProbSum, "negative probability in a strategy distribution");
    validate_strategy(g, s);
    total += w;
  }
  require(std::abs(total - 1.0) <= tol::kExact, "strategy distribution masses must sum to 1");
}

double pi_expected_welfare(const TypeDependentDistribution& pi,
                           const std::map<std::vector<int>, int>& index,
                           const std::vector<Prior::SupportEntry>& support, UtilCache& cache) {
  double value = 0.0;
  for (const auto& [theta, rho] : support) {
    const auto it = index.find(theta);
    require(it != index.end(), "distribution is missing a slice for an on-support type profile");
    for (const auto& [prof, w] : pi.slices[static_cast<std::size_t>(it->second)].mass) {
      value += rho * w * cache.at(prof).welfare;
    }
  }
  return value;
}

double sigma_expected_welfare(const GameDefinition& g, const StrategyDistribution& sigma,
                              const std::vector<Prior::SupportEntry>& support,
                              UtilCache& cache) {
  const int n = g.num_players();
  double value = 0.0;
  std::vector<int> prof(n);
  for (const auto& [s, w] : sigma.mass) {
    for (const auto& [theta, rho] : support) {
      for (int i = 0; i < n; ++i) prof[i] = s.action[i][theta[i]];
      value += w * rho * cache.at(prof).welfare;
    }
  }
  return value;
}

// One candidate per deviation family (the family's best deviation with its
// gain); callers filter by tolerance or take the maximum.
std::vector<Violation> pi_gain_candidates(const GameDefinition& g, ConceptId concept_id,
                                          const TypeDependentDistribution& pi,
                                          UtilCache& cache, const Budget& budget) {
  const int n = g.num_players();
  const auto index = validate_pi(g, pi);
  const auto support = g.prior.expanded_support(budget);
  const CellLayout cells(g);

  std::vector<std::vector<double>> truth_rec(cells.total);
  std::vector<std::vector<double>> dev(cells.total);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      const std::size_t m = static_cast<std::size_t>(action_count(g, i, t));
      truth_rec[cells.cell(i, t)].assign(m, 0.0);
      dev[cells.cell(i, t)].assign(m * m, 0.0);
    }
  }
  std::vector<int> sub(n);
  for (const auto& [theta, rho] : support) {
    const auto it = index.find(theta);
    require(it != index.end(), "distribution is missing a slice for an on-support type profile");
    for (const auto& [prof, w] : pi.slices[static_cast<std::size_t>(it->second)].mass) {
      const UtilCache::Entry& e = cache.at(prof);
      for (int i = 0; i < n; ++i) {
        const int t = theta[i];
        const int m = action_count(g, i, t);
        const int ka = g.owner_slot[prof[i]];
        const int cell = cells.cell(i, t);
        truth_rec[cell][ka] += rho * w * e.utils[i];
        sub = prof;
        for (int kb = 0; kb < m; ++kb) {
          sub[i] = g.action_set(i, t)[kb];
          const double v = kb == ka ? e.utils[i] : cache.at(sub).utils[i];
          dev[cell][static_cast<std::size_t>(ka) * m + kb] += rho * w * v;
        }
      }
    }
  }

  // ComEq: recommendation masses after a misreport, keyed (i, true t, tp).
  std::map<std::tuple<int, int, int>, std::vector<double>> mis;
  if (concept_id == ConceptId::kComEq) {
    for (const auto& [theta, rho] : support) {
      std::vector<int> alt = theta;
      for (int i = 0; i < n; ++i) {
        const int t = theta[i];
        const int m = action_count(g, i, t);
        for (int tp = 0; tp < g.prior.num_types(i); ++tp) {
          if (tp == t) continue;
          alt[i] = tp;
          const auto it = index.find(alt);
          require(it != index.end(),
                  "distribution is missing the slice reached by a misreport");
          const int mp = action_count(g, i, tp);
          auto& table = mis[{i, t, tp}];
          if (table.empty()) table.assign(static_cast<std::size_t>(mp) * m, 0.0);
          for (const auto& [prof, w] : pi.slices[static_cast<std::size_t>(it->second)].mass) {
            const int kap = g.owner_slot[prof[i]];
            sub = prof;
            for (int kb = 0; kb < m; ++kb) {
              sub[i] = g.action_set(i, t)[kb];
              table[static_cast<std::size_t>(kap) * m + kb] +=
                  rho * w * cache.at(sub).utils[i];
            }
          }
        }
        alt[i] = t;
      }
    }
  }

  std::vector<Violation> out;
  const bool mediated_swap =
      concept_id == ConceptId::kBs || concept_id == ConceptId::kComEq;
  for (int i = 0; i < n; ++i) {
    const int types = g.prior.num_types(i);
    std::vector<double> best_coarse(types, 0.0);
    std::vector<int> best_coarse_slot(types, 0);
    std::vector<double> truth_total(types, 0.0);
    for (int t = 0; t < types; ++t) {
      const int m = action_count(g, i, t);
      const int cell = cells.cell(i, t);
      const double marg = g.prior.marginal(i, t);
      for (int ka = 0; ka < m; ++ka) truth_total[t] += truth_rec[cell][ka];
      if (mediated_swap) {
        double gain = 0.0;
        std::string map;
        for (int ka = 0; ka < m; ++ka) {
          int best = ka;
          double best_mass = dev[cell][static_cast<std::size_t>(ka) * m + ka];
          for (int kb = 0; kb < m; ++kb) {
            if (dev[cell][static_cast<std::size_t>(ka) * m + kb] > best_mass) {
              best_mass = dev[cell][static_cast<std::size_t>(ka) * m + kb];
              best = kb;
            }
          }
          gain += best_mass - truth_rec[cell][ka];
          if (best != ka) {
            if (!map.empty()) map += ", ";
            map += ground_name(g, g.action_set(i, t)[ka]) + "->" +
                   ground_name(g, g.action_set(i, t)[best]);
          }
        }
        out.push_back({i, t, -1, map.empty() ? "identity" : map, gain / marg});
      }
      if (concept_id == ConceptId::kComEq) {
        for (int tp = 0; tp < types; ++tp) {
          if (tp == t) continue;
          const int mp = action_count(g, i, tp);
          const auto& table = mis.at({i, t, tp});
          double dev_sum = 0.0;
          std::string map = "report " + type_label(g, i, tp);
          for (int kap = 0; kap < mp; ++kap) {
            int best = 0;
            double best_mass = table[static_cast<std::size_t>(kap) * m];
            for (int kb = 1; kb < m; ++kb) {
              if (table[static_cast<std::size_t>(kap) * m + kb] > best_mass) {
                best_mass = table[static_cast<std::size_t>(kap) * m + kb];
                best = kb;
              }
            }
            dev_sum += best_mass;
            map += ", " + ground_name(g, g.action_set(i, tp)[kap]) + "->" +
                   ground_name(g, g.action_set(i, t)[best]);
          }
          out.push_back({i, t, tp, map, (dev_sum - truth_total[t]) / marg});
        }
      }
      if (concept_id == ConceptId::kAnfcbs || concept_id == ConceptId::kSfcbs) {
        int best = 0;
        double best_mass = 0.0;
        for (int kb = 0; kb < m; ++kb) {
          double total = 0.0;
          for (int ka = 0; ka < m; ++ka) {
            total += dev[cell][static_cast<std::size_t>(ka) * m + kb];
          }
          if (kb == 0 || total > best_mass) {
            best_mass = total;
            best = kb;
          }
        }
        best_coarse[t] = best_mass;
        best_coarse_slot[t] = best;
        if (concept_id == ConceptId::kAnfcbs) {
          out.push_back({i, t, -1, "always " + ground_name(g, g.action_set(i, t)[best]),
                         (best_mass - truth_total[t]) / marg});
        }
      }
    }
    if (concept_id == ConceptId::kSfcbs) {
      double gain = 0.0;
      std::string map;
      for (int t = 0; t < types; ++t) {
        gain += best_coarse[t] - truth_total[t];
        if (t > 0) map += ", ";
        map += type_label(g, i, t) + ":" +
               ground_name(g, g.action_set(i, t)[best_coarse_slot[t]]);
      }
      out.push_back({i, -1, -1, map, gain});
    }
  }
  return out;
}

std::vector<Violation> sigma_gain_candidates(const GameDefinition& g, ConceptId concept_id,
                                             const StrategyDistribution& sigma,
                                             UtilCache& cache, const Budget& budget) {
  const int n = g.num_players();
  validate_sigma(g, sigma);
  require(concept_id != ConceptId::kBnePure || sigma.mass.size() == 1,
          "BNE_pure verification requires a point-mass strategy distribution");
  const auto support = g.prior.expanded_support(budget);
  const CellLayout cells(g);

  std::vector<double> truth_total(cells.total, 0.0);
  std::vector<double> util_total(n, 0.0);
  std::vector<std::vector<double>> dev_coarse(cells.total);
  std::vector<std::vector<double>> truth_rec(cells.total);
  std::vector<std::vector<double>> dev_rec(cells.total);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      const std::size_t m = static_cast<std::size_t>(action_count(g, i, t));
      dev_coarse[cells.cell(i, t)].assign(m, 0.0);
      if (concept_id == ConceptId::kAnfce) {
        truth_rec[cells.cell(i, t)].assign(m, 0.0);
        dev_rec[cells.cell(i, t)].assign(m * m, 0.0);
      }
    }
  }
  // SFCE groups recommendations by the whole per-player strategy.
  struct SfceGroup {
    double truth = 0.0;
    std::vector<double> dev;  // per (type, slot), laid out by type offsets
  };
  std::vector<std::map<std::vector<int>, SfceGroup>> groups(n);
  std::vector<std::vector<int>> slot_offset(n);
  std::vector<int> slot_total(n, 0);
  for (int i = 0; i < n; ++i) {
    slot_offset[i].resize(g.prior.num_types(i));
    for (int t = 0; t < g.prior.num_types(i); ++t) {
      slot_offset[i][t] = slot_total[i];
      slot_total[i] += action_count(g, i, t);
    }
  }

  std::vector<int> prof(n), sub(n);
  for (const auto& [s, w] : sigma.mass) {
    std::vector<SfceGroup*> group(n, nullptr);
    if (concept_id == ConceptId::kSfce) {
      for (int i = 0; i < n; ++i) {
        SfceGroup& gref = groups[i][s.action[i]];
        if (gref.dev.empty()) gref.dev.assign(slot_total[i], 0.0);
        group[i] = &gref;
      }
    }
    for (const auto& [theta, rho] : support) {
      for (int i = 0; i < n; ++i) prof[i] = s.action[i][theta[i]];
      const UtilCache::Entry& e = cache.at(prof);
      for (int i = 0; i < n; ++i) {
        const int t = theta[i];
        const int m = action_count(g, i, t);
        const int cell = cells.cell(i, t);
        const int ka = g.owner_slot[prof[i]];
        truth_total[cell] += w * rho * e.utils[i];
        util_total[i] += w * rho * e.utils[i];
        if (concept_id == ConceptId::kAnfce) truth_rec[cell][ka] += w * rho * e.utils[i];
        if (concept_id == ConceptId::kSfce) group[i]->truth += w * rho * e.utils[i];
        sub = prof;
        for (int kb = 0; kb < m; ++kb) {
          sub[i] = g.action_set(i, t)[kb];
          const double v = kb == ka ? e.utils[i] : cache.at(sub).utils[i];
          dev_coarse[cell][kb] += w * rho * v;
          if (concept_id == ConceptId::kAnfce) {
            dev_rec[cell][static_cast<std::size_t>(ka) * m + kb] += w * rho * v;
          }
          if (concept_id == ConceptId::kSfce) {
            group[i]->dev[slot_offset[i][t] + kb] += w * rho * v;
          }
        }
      }
    }
  }

  std::vector<Violation> out;
  for (int i = 0; i < n; ++i) {
    const int types = g.prior.num_types(i);
    switch (concept_id) {
      case ConceptId::kSfce: {
        for (const auto& [strategy, gref] : groups[i]) {
          double dev_sum = 0.0;
          std::string map;
          for (int t = 0; t < types; ++t) {
            const int m = action_count(g, i, t);
            int best = 0;
            double best_mass = gref.dev[slot_offset[i][t]];
            for (int kb = 1; kb < m; ++kb) {
              if (gref.dev[slot_offset[i][t] + kb] > best_mass) {
                best_mass = gref.dev[slot_offset[i][t] + kb];
                best = kb;
              }
            }
            dev_sum += best_mass;
            if (g.action_set(i, t)[best] != strategy[t]) {
              if (!map.empty()) map += ", ";
              map += type_label(g, i, t) + ":" + ground_name(g, strategy[t]) + "->" +
                     ground_name(g, g.action_set(i, t)[best]);
            }
          }
          out.push_back({i, -1, -1, map.empty() ? "identity" : map, dev_sum - gref.truth});
        }
        break;
      }
      case ConceptId::kAnfce: {
        for (int t = 0; t < types; ++t) {
          const int m = action_count(g, i, t);
          const int cell = cells.cell(i, t);
          const double marg = g.prior.marginal(i, t);
          double gain = 0.0;
          std::string map;
          for (int ka = 0; ka < m; ++ka) {
            int best = ka;
            double best_mass = dev_rec[cell][static_cast<std::size_t>(ka) * m + ka];
            for (int kb = 0; kb < m; ++kb) {
              if (dev_rec[cell][static_cast<std::size_t>(ka) * m + kb] > best_mass) {
                best_mass = dev_rec[cell][static_cast<std::size_t>(ka) * m + kb];
                best = kb;
              }
            }
            gain += best_mass - truth_rec[cell][ka];
            if (best != ka) {
              if (!map.empty()) map += ", ";
              map += ground_name(g, g.action_set(i, t)[ka]) + "->" +
                     ground_name(g, g.action_set(i, t)[best]);
            }
          }
          out.push_back({i, t, -1, map.empty() ? "identity" : map, gain / marg});
        }
        break;
      }
      case ConceptId::kAnfcce: {
        for (int t = 0; t < types; ++t) {
          const int m = action_count(g, i, t);
          const int cell = cells.cell(i, t);
          int best = 0;
          for (int kb = 1; kb < m; ++kb) {
            if (dev_coarse[cell][kb] > dev_coarse[cell][best]) best = kb;
          }
          out.push_back({i, t, -1, "always " + ground_name(g, g.action_set(i, t)[best]),
                         (dev_coarse[cell][best] - truth_total[cell]) /
                             g.prior.marginal(i, t)});
        }
        break;
      }
      case ConceptId::kSfcce:
      case ConceptId::kBnePure: {
        double dev_sum = 0.0;
        std::string map;
        for (int t = 0; t < types; ++t) {
          const int m = action_count(g, i, t);
          const int cell = cells.cell(i, t);
          int best = 0;
          for (int kb = 1; kb < m; ++kb) {
            if (dev_coarse[cell][kb] > dev_coarse[cell][best]) best = kb;
          }
          dev_sum += dev_coarse[cell][best];
          if (t > 0) map += ", ";
          map += type_label(g, i, t) + ":" + ground_name(g, g.action_set(i, t)[best]);
        }
        out.push_back({i, -1, -1, map, dev_sum - util_total[i]});
        break;
      }
      default:
        break;
    }
  }
  return out;
}

std::vector<Violation> gain_candidates_pi(const GameDefinition& g, ConceptId concept_id,
                                          const TypeDependentDistribution& pi,
                                          UtilCache& cache, const Budget& budget) {
  require(!uses_strategy_distribution(concept_id),
          std::string(concept_name(concept_id)) +
              " expects a strategy distribution, not a type-dependent one");
  return pi_gain_candidates(g, concept_id, pi, cache, budget);
}

std::vector<Violation> gain_candidates_sigma(const GameDefinition& g, ConceptId concept_id,
                                             const StrategyDistribution& sigma,
                                             UtilCache& cache, const Budget& budget) {
  require(uses_strategy_distribution(concept_id),
          std::string(concept_name(concept_id)) +
              " expects a type-dependent distribution, not a strategy one");
  return sigma_gain_candidates(g, concept_id, sigma, cache, budget);
}

double max_gain(const std::vector<Violation>& candidates) {
  double worst = 0.0;
  for (const Violation& v : candidates) worst = std::max(worst, v.gain);
  return worst;
}

// ---------------------------------------------------------------------------
// Solving and witness extraction
// ---------------------------------------------------------------------------

void guard_status(const LpSolution& sol, const LinearProgramDescription& lp,
                  ConceptId concept_id) {
  if (sol.status == LpStatus::kOptimal) return;
  const char* what = sol.status == LpStatus::kInfeasible   ? "infeasible"
                     : sol.status == LpStatus::kUnbounded  ? "unbounded"
                                                           : "stopped at the iteration limit";
  throw std::runtime_error(std::string("internal error: the ") + concept_name(concept_id) +
                           " equilibrium LP is " + what + "\n" + lp_to_text(lp));
}

TypeDependentDistribution extract_pi(const GameDefinition& g, const PiSpace& sp,
                                     const std::vector<double>& x) {
  const int n = g.num_players();
  TypeDependentDistribution out;
  std::vector<int> digits(n), prof(n);
  for (const PiSlice& s : sp.slices) {
    TypeDependentDistribution::Slice slice;
    slice.types = s.types;
    double total = 0.0;
    std::fill(digits.begin(), digits.end(), 0);
    std::int64_t k = 0;
    std::int64_t argmax = 0;
    do {
      if (x[static_cast<std::size_t>(s.var_base + k)] >
          x[static_cast<std::size_t>(s.var_base + argmax)]) {
        argmax = k;
      }
      const double w = x[static_cast<std::size_t>(s.var_base + k)];
      if (w > tol::kProbSum) {
        slice_profile(g, s, digits, prof);
        slice.mass.emplace_back(prof, w);
        total += w;
      }
      ++k;
    } while (next_tuple(digits, s.radix));
    if (slice.mass.empty() || total <= 0.0) {
      std::fill(digits.begin(), digits.end(), 0);
      for (std::int64_t j = 0; j < argmax; ++j) next_tuple(digits, s.radix);
      slice_profile(g, s, digits, prof);
      slice.mass.assign(1, {prof, 1.0});
    } else {
      for (auto& entry : slice.mass) entry.second /= total;
    }
    out.slices.push_back(std::move(slice));
  }
  return out;
}

StrategyDistribution extract_sigma(const GameDefinition& g, const SigmaSpace& sp,
                                   const std::vector<double>& x) {
  const int n = g.num_players();
  StrategyDistribution out;
  double total = 0.0;
  std::vector<int> si(n);
  std::int64_t argmax = 0;
  for (std::int64_t flat = 0; flat < sp.num_flat; ++flat) {
    if (x[static_cast<std::size_t>(flat)] > x[static_cast<std::size_t>(argmax)]) argmax = flat;
    const double w = x[static_cast<std::size_t>(flat)];
    if (w <= tol::kProbSum) continue;
    decode_flat(sp, flat, si);
    StrategyProfile s;
    s.action.resize(n);
    for (int i = 0; i < n; ++i) s.action[i] = sp.strat_ground[i][si[i]];
    out.mass.emplace_back(std::move(s), w);
    total += w;
  }
  if (out.mass.empty() || total <= 0.0) {
    decode_flat(sp, argmax, si);
    StrategyProfile s;
    s.action.resize(n);
    for (int i = 0; i < n; ++i) s.action[i] = sp.strat_ground[i][si[i]];
    out.mass.assign(1, {std::move(s), 1.0});
  } else {
    for (auto& entry : out.mass) entry.second /= total;
  }
  return out;
}

EquilibriumResult finish_result(EquilibriumResult res,
                                const std::vector<Violation>& candidates,
                                double recomputed_value, double lp_value) {
  const double worst = max_gain(candidates);
  if (worst > tol::kVerify) {
    throw std::runtime_error(std::string("internal error: ") +
                             concept_name(res.concept_id) +
                             " witness fails re-verification with gain " +
                             std::to_string(worst));
  }
  if (std::abs(recomputed_value - lp_value) > tol::kVerify) {
    throw std::runtime_error(std::string("internal error: ") +
                             concept_name(res.concept_id) + " witness welfare " +
                             std::to_string(recomputed_value) +
                             " disagrees with the LP value " + std::to_string(lp_value));
  }
  res.value = recomputed_value;
  res.max_violation = worst;
  return res;
}

EquilibriumResult bne_extremum(const GameDefinition& g, Sense sense, const Budget& budget) {
  EquilibriumResult res;
  res.concept_id = ConceptId::kBnePure;
  res.sense = sense;
  const auto found = enumerate_pure_bne(g, budget);
  if (found.empty()) {
    res.none_found = true;
    return res;
  }
  std::size_t pick = 0;
  for (std::size_t j = 1; j < found.size(); ++j) {
    if (sense == Sense::kMin ? found[j].welfare < found[pick].welfare
                             : found[j].welfare > found[pick].welfare) {
      pick = j;
    }
  }
  StrategyDistribution sigma;
  sigma.mass.emplace_back(found[pick].profile, 1.0);
  UtilCache cache(g, budget);
  const auto candidates = sigma_gain_candidates(g, ConceptId::kBnePure, sigma, cache, budget);
  res.sigma = std::move(sigma);
  return finish_result(std::move(res), candidates, found[pick].welfare,
                       found[pick].welfare);
}

EquilibriumResult solve_concept(const GameDefinition& g, ConceptId concept_id, Sense sense,
                                const Budget& budget, const LpBudget& lp_budget) {
  if (concept_id == ConceptId::kBnePure) return bne_extremum(g, sense, budget);
  EquilibriumResult res;
  res.concept_id = concept_id;
  res.sense = sense;
  UtilCache cache(g, budget);
  if (uses_strategy_distribution(concept_id)) {
    const SigmaBundle bundle = build_sigma_lp(g, concept_id, sense, budget, lp_budget, cache);
    const LpSolution sol = solve_lp(bundle.lp, lp_budget);
    guard_status(sol, bundle.lp, concept_id);
    res.status = sol.status;
    res.sigma = extract_sigma(g, bundle.space, sol.x);
    const auto candidates =
        sigma_gain_candidates(g, concept_id, *res.sigma, cache, budget);
    const double value =
        sigma_expected_welfare(g, *res.sigma, bundle.space.support, cache);
    return finish_result(std::move(res), candidates, value, sol.objective);
  }
  const PiBundle bundle = build_pi_lp(g, concept_id, sense, budget, lp_budget, cache);
  const LpSolution sol = solve_lp(bundle.lp, lp_budget);
  guard_status(sol, bundle.lp, concept_id);
  res.status = sol.status;
  res.pi = extract_pi(g, bundle.space, sol.x);
  const auto candidates = pi_gain_candidates(g, concept_id, *res.pi, cache, budget);
  const auto index = validate_pi(g, *res.pi);
  const double value =
      pi_expected_welfare(*res.pi, index, bundle.space.support, cache);
  return finish_result(std::move(res), candidates, value, sol.objective);
}

}  // namespace

const char* concept_name(ConceptId concept_id) {
  return kConceptNames[concept_index(concept_id)];
}

std::optional<ConceptId> concept_from_name(std::string_view name) {
  for (std::size_t c = 0; c < std::size(kAllConcepts); ++c) {
    if (name == kConceptNames[c]) return kAllConcepts[c];
  }
  return std::nullopt;
}

bool uses_strategy_distribution(ConceptId concept_id) {
  switch (concept_id) {
    case ConceptId::kBnePure:
    case ConceptId::kSfce:
    case ConceptId::kAnfce:
    case ConceptId::kAnfcce:
    case ConceptId::kSfcce:
      return true;
    default:
      return false;
  }
}

std::vector<Violation> check_equilibrium(const GameDefinition& game, ConceptId concept_id,
                                         const TypeDependentDistribution& pi,
                                         double tolerance, const Budget& budget) {
  UtilCache cache(game, budget);
  std::vector<Violation> out;
  for (Violation& v : gain_candidates_pi(game, concept_id, pi, cache, budget)) {
    if (v.gain > tolerance) out.push_back(std::move(v));
  }
  return out;
}

std::vector<Violation> check_equilibrium(const GameDefinition& game, ConceptId concept_id,
                                         const StrategyDistribution& sigma,
                                         double tolerance, const Budget& budget) {
  UtilCache cache(game, budget);
  std::vector<Violation> out;
  for (Violation& v : gain_candidates_sigma(game, concept_id, sigma, cache, budget)) {
    if (v.gain > tolerance) out.push_back(std::move(v));
  }
  return out;
}

LinearProgramDescription build_lp(const GameDefinition& game, ConceptId concept_id,
                                  Sense sense, const Budget& budget,
                                  const LpBudget& lp_budget) {
  require(concept_id != ConceptId::kBnePure,
          "BNE_pure is computed by enumeration, not as an LP");
  UtilCache cache(game, budget);
  if (uses_strategy_distribution(concept_id)) {
    return build_sigma_lp(game, concept_id, sense, budget, lp_budget, cache).lp;
  }
  return build_pi_lp(game, concept_id, sense, budget, lp_budget, cache).lp;
}

EquilibriumResult min_welfare(const GameDefinition& game, ConceptId concept_id,
                              const Budget& budget, const LpBudget& lp_budget) {
  return solve_concept(game, concept_id, Sense::kMin, budget, lp_budget);
}

EquilibriumResult max_welfare(const GameDefinition& game, ConceptId concept_id,
                              const Budget& budget, const LpBudget& lp_budget) {
  return solve_concept(game, concept_id, Sense::kMax, budget, lp_budget);
}

RatioReport poa(const GameDefinition& game, ConceptId concept_id, const Budget& budget,
                const LpBudget& lp_budget) {
  RatioReport rep;
  rep.concept_id = concept_id;
  rep.sense = Sense::kMin;
  rep.opt = compute_opt(game, budget).opt;
  const EquilibriumResult r = min_welfare(game, concept_id, budget, lp_budget);
  rep.none_found = r.none_found;
  rep.welfare = r.value;
  rep.vacuous = rep.opt <= 0.0;
  if (!rep.vacuous && !rep.none_found) rep.ratio = rep.welfare / rep.opt;
  return rep;
}

RatioReport pos(const GameDefinition& game, ConceptId concept_id, const Budget& budget,
                const LpBudget& lp_budget) {
  RatioReport rep;
  rep.concept_id = concept_id;
  rep.sense = Sense::kMax;
  rep.opt = compute_opt(game, budget).opt;
  const EquilibriumResult r = max_welfare(game, concept_id, budget, lp_budget);
  rep.none_found = r.none_found;
  rep.welfare = r.value;
  rep.vacuous = rep.opt <= 0.0;
  if (!rep.vacuous && !rep.none_found) rep.ratio = rep.welfare / rep.opt;
  return rep;
}

TypeDependentDistribution strategy_to_type_dependent(const GameDefinition& game,
                                                     const StrategyDistribution& sigma,
                                                     const Budget& budget) {
  validate_sigma(game, sigma);
  const int n = game.num_players();
  TypeDependentDistribution out;
  std::vector<int> prof(n);
  for (const auto& [theta, rho] : game.prior.expanded_support(budget)) {
    TypeDependentDistribution::Slice slice;
    slice.types = theta;
    std::map<std::vector<int>, double> acc;
    for (const auto& [s, w] : sigma.mass) {
      for (int i = 0; i < n; ++i) prof[i] = s.action[i][theta[i]];
      acc[prof] += w;
    }
    slice.mass.assign(acc.begin(), acc.end());
    out.slices.push_back(std::move(slice));
  }
  return out;
}

double expected_welfare(const GameDefinition& game, const TypeDependentDistribution& pi) {
  double total = 0.0;
  for (const TypeDependentDistribution::Slice& slice : pi.slices) {
    const double p = game.prior.probability(slice.types);
    if (p == 0.0) continue;
    for (const auto& [profile, w] : slice.mass) {
      total += p * w * social_welfare(game, profile);
    }
  }
  return total;
}

std::vector<PureBneEntry> enumerate_pure_bne(const GameDefinition& game,
                                             const Budget& budget) {
  const int n = game.num_players();
  UtilCache cache(game, budget);
  SigmaSpace sp = make_sigma_frame(game, budget, budget.max_evaluations);
  tabulate_sigma(game, sp, cache);
  std::vector<PureBneEntry> out;
  std::vector<int> si(n), prof(n);
  for (std::int64_t flat = 0; flat < sp.num_flat; ++flat) {
    decode_flat(sp, flat, si);
    bool stable = true;
    for (int i = 0; i < n && stable; ++i) {
      double best_sum = 0.0;
      for (int t = 0; t < game.prior.num_types(i); ++t) {
        double best = 0.0;
        for (int kb = 0; kb < action_count(game, i, t); ++kb) {
          best = std::max(best, deviation_mass(game, sp, cache, si, i, t, kb, prof));
        }
        best_sum += best;
      }
      stable = best_sum - sp.util_bar[flat * n + i] <= tol::kExact;
    }
    if (!stable) continue;
    PureBneEntry entry;
    entry.profile.action.resize(n);
    for (int i = 0; i < n; ++i) entry.profile.action[i] = sp.strat_ground[i][si[i]];
    entry.welfare = sp.sw_bar[flat];
    out.push_back(std::move(entry));
  }
  return out;
}

LatticeReport lattice_check(const GameDefinition& game, const Budget& budget,
                            const LpBudget& lp_budget) {
  LatticeReport rep;
  constexpr std::size_t kCount = std::size(kAllConcepts);
  std::optional<std::pair<double, double>> range[kCount];
  std::string reason[kCount];
  for (std::size_t c = 0; c < kCount; ++c) {
    const ConceptId id = kAllConcepts[c];
    try {
      const EquilibriumResult lo = min_welfare(game, id, budget, lp_budget);
      if (lo.none_found) {
        reason[c] = "no pure equilibrium found";
        continue;
      }
      const EquilibriumResult hi = max_welfare(game, id, budget, lp_budget);
      range[c] = {lo.value, hi.value};
    } catch (const BudgetError& e) {
      reason[c] = e.what();
    }
    if (!range[c]) {
      rep.skipped.push_back(std::string(concept_name(id)) + ": " + reason[c]);
    }
  }
  for (const LatticeArrow& arrow : kLatticeArrows) {
    const std::size_t sub = static_cast<std::size_t>(concept_index(arrow.sub));
    const std::size_t super = static_cast<std::size_t>(concept_index(arrow.super));
    if (!range[sub] || !range[super]) {
      rep.skipped.push_back(std::string(concept_name(arrow.sub)) + "->" +
                            concept_name(arrow.super) + ": endpoint unavailable");
      continue;
    }
    LatticeArrowReport ar;
    ar.sub = arrow.sub;
    ar.super = arrow.super;
    ar.sub_min = range[sub]->first;
    ar.sub_max = range[sub]->second;
    ar.super_min = range[super]->first;
    ar.super_max = range[super]->second;
    ar.holds = ar.sub_min >= ar.super_min - tol::kLpValue &&
               ar.sub_max <= ar.super_max + tol::kLpValue;
    rep.all_hold = rep.all_hold && ar.holds;
    rep.arrows.push_back(ar);
  }
  return rep;
}

}  // namespace subwelf
