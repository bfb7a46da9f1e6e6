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

#include "subwelf/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace subwelf {
namespace {

constexpr double kCostEps = 1e-10;
constexpr double kPivotEps = 1e-9;
constexpr double kRatioTie = 1e-9;
constexpr double kPhase1Feasible = 1e-9;
constexpr double kResidualRetry = 1e-7;

struct Tableau {
  int m = 0;       // constraint rows
  int cols = 0;    // total columns incl. rhs
  std::vector<double> data;

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

void pivot(Tableau& t, std::vector<int>& basis, int row, int col) {
  const double p = t.at(row, col);
  const double inv = 1.0 / p;
  for (int c = 0; c < t.cols; ++c) t.at(row, c) *= inv;
  t.at(row, col) = 1.0;
  for (int r = 0; r <= t.m; ++r) {
    if (r == row) continue;
    const double factor = t.at(r, col);
    if (factor == 0.0) continue;
    for (int c = 0; c < t.cols; ++c) t.at(r, c) -= factor * t.at(row, c);
    t.at(r, col) = 0.0;
  }
  basis[row] = col;
}

// Runs simplex iterations on the cost row t[m]. Entering rule: most negative
// reduced cost with lowest index; ratio-test ties take the largest pivot
// element so degenerate chains never grind the tableau through near-zero
// pivots. From `bland_after` iterations on, both rules switch to Bland's
// (first negative cost, lowest basis index on ties) so degenerate programs
// terminate. Returns kOptimal when no entering column exists.
LpStatus run_simplex(Tableau& t, std::vector<int>& basis, const std::vector<char>& banned,
                     std::int64_t bland_after, std::int64_t max_iters,
                     std::int64_t* iterations) {
  const int rhs = t.cols - 1;
  while (true) {
    const bool bland = *iterations >= bland_after;
    int enter = -1;
    if (!bland) {
      double best = -kCostEps;
      for (int c = 0; c < rhs; ++c) {
        if (banned[c]) continue;
        const double r = t.at(t.m, c);
        if (r < best) {
          best = r;
          enter = c;
        }
      }
    } else {
      for (int c = 0; c < rhs; ++c) {
        if (!banned[c] && t.at(t.m, c) < -kCostEps) {
          enter = c;
          break;
        }
      }
    }
    if (enter < 0) return LpStatus::kOptimal;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_abs = 0.0;
    for (int r = 0; r < t.m; ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotEps) continue;
      const double ratio = t.at(r, rhs) / a;
      if (leave < 0 || ratio < best_ratio - kRatioTie) {
        leave = r;
        best_ratio = ratio;
        best_abs = a;
        continue;
      }
      if (ratio > best_ratio + kRatioTie) continue;
      if (ratio < best_ratio) best_ratio = ratio;
      if (bland ? basis[r] < basis[leave] : a > best_abs) {
        leave = r;
        best_abs = a;
      }
    }
    if (leave < 0) return LpStatus::kUnbounded;
    pivot(t, basis, leave, enter);
    if (++*iterations > max_iters) return LpStatus::kIterationLimit;
  }
}

// One full two-phase pass. `bland_always` starts both phases directly under
// Bland's rule; the slower pivots sidestep numerical trouble a greedy pass
// ran into.
LpSolution attempt_solve(const LinearProgramDescription& lp, bool bland_always) {
  const int n = lp.num_vars();
  const int m = static_cast<int>(lp.rows.size());
  int slacks = 0;
  for (const auto& row : lp.rows) {
    if (row.relation != '=') ++slacks;
  }
  const int total_cols = n + slacks + m + 1;  // structural, slack, artificial, rhs

  Tableau t;
  t.m = m;
  t.cols = total_cols;
  t.data.assign(static_cast<std::size_t>(m + 1) * total_cols, 0.0);
  const int rhs_col = total_cols - 1;

  std::vector<int> basis(m, -1);
  std::vector<char> banned(total_cols - 1, 0);
  std::vector<char> is_artificial(total_cols - 1, 0);

  int next_slack = n;
  int next_artificial = n + slacks;
  for (int r = 0; r < m; ++r) {
    const auto& row = lp.rows[r];
    double sign = 1.0;
    char rel = row.relation;
    if (row.rhs < 0.0) {
      sign = -1.0;
      rel = rel == '<' ? '>' : (rel == '>' ? '<' : '=');
    }
    for (const auto& [var, coef] : row.coeffs) t.at(r, var) += sign * coef;
    t.at(r, rhs_col) = sign * row.rhs;
    if (row.relation != '=') {
      t.at(r, next_slack) = rel == '<' ? 1.0 : -1.0;
      if (rel == '<') basis[r] = next_slack;
      ++next_slack;
    }
    if (basis[r] < 0) {
      t.at(r, next_artificial) = 1.0;
      is_artificial[next_artificial] = 1;
      basis[r] = next_artificial;
      ++next_artificial;
    }
  }

  LpSolution solution;

  // Phase 1: minimize the artificial sum. Reduced costs start as the negated
  // sum of the artificial-basis rows.
  bool any_artificial = false;
  for (int r = 0; r < m; ++r) {
    if (!is_artificial[basis[r]]) continue;
    any_artificial = true;
    for (int c = 0; c < total_cols; ++c) t.at(m, c) -= t.at(r, c);
    t.at(m, basis[r]) = 0.0;
  }
  const std::int64_t bland_after = bland_always ? 0 : 200 + 5LL * (m + total_cols);
  const std::int64_t max_iters = 20000 + 40LL * (m + total_cols);
  if (any_artificial) {
    const LpStatus status =
        run_simplex(t, basis, banned, bland_after, max_iters, &solution.iterations);
    if (status == LpStatus::kIterationLimit) {
      solution.status = status;
      return solution;
    }
    // -t(m, rhs) is the artificial sum at the phase-1 optimum.
    if (-t.at(m, rhs_col) > kPhase1Feasible) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    // Pivot leftover artificials out on the largest structural or slack
    // entry; a row with no usable entry is redundant and is zeroed so later
    // pivots cannot push mass back into it.
    for (int r = 0; r < m; ++r) {
      if (!is_artificial[basis[r]]) continue;
      int best = -1;
      double best_abs = kPivotEps;
      for (int c = 0; c < n + slacks; ++c) {
        const double a = std::abs(t.at(r, c));
        if (a > best_abs) {
          best_abs = a;
          best = c;
        }
      }
      if (best >= 0) {
        pivot(t, basis, r, best);
      } else {
        for (int c = 0; c < total_cols; ++c) t.at(r, c) = 0.0;
        t.at(r, basis[r]) = 1.0;
      }
    }
  }
  for (int c = 0; c < total_cols - 1; ++c) {
    if (is_artificial[c]) banned[c] = 1;
  }

  // Phase 2 cost row for the internal minimization objective.
  std::vector<double> cost(total_cols - 1, 0.0);
  const double obj_sign = lp.sense == LinearProgramDescription::Sense::kMaximize ? -1.0 : 1.0;
  for (const auto& [var, coef] : lp.objective) cost[var] += obj_sign * coef;
  for (int c = 0; c < total_cols; ++c) t.at(m, c) = 0.0;
  for (int c = 0; c < total_cols - 1; ++c) t.at(m, c) = cost[c];
  for (int r = 0; r < m; ++r) {
    const double cb = cost[basis[r]];
    if (cb == 0.0) continue;
    for (int c = 0; c < total_cols; ++c) t.at(m, c) -= cb * t.at(r, c);
  }
  for (int r = 0; r < m; ++r) t.at(m, basis[r]) = 0.0;

  const LpStatus status =
      run_simplex(t, basis, banned, bland_after + solution.iterations,
                  max_iters + solution.iterations, &solution.iterations);
  if (status != LpStatus::kOptimal) {
    solution.status = status;
    return solution;
  }

  solution.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) solution.x[basis[r]] = std::max(0.0, t.at(r, rhs_col));
  }
  double objective = 0.0;
  for (const auto& [var, coef] : lp.objective) objective += coef * solution.x[var];
  solution.objective = objective;

  for (const auto& row : lp.rows) {
    double lhs = 0.0;
    for (const auto& [var, coef] : row.coeffs) lhs += coef * solution.x[var];
    double violation = 0.0;
    if (row.relation == '<') {
      violation = lhs - row.rhs;
    } else if (row.relation == '>') {
      violation = row.rhs - lhs;
    } else {
      violation = std::abs(lhs - row.rhs);
    }
    solution.max_residual = std::max(solution.max_residual, violation);
  }
  solution.status = LpStatus::kOptimal;
  return solution;
}

}  // namespace

LpSolution solve_lp(const LinearProgramDescription& lp, const LpBudget& budget) {
  const int n = lp.num_vars();
  const int m = static_cast<int>(lp.rows.size());
  require(n > 0, "linear program has no variables");
  for (const auto& [var, coef] : lp.objective) {
    require(var >= 0 && var < n, "objective references an unknown variable");
    require(std::isfinite(coef), "objective coefficients must be finite");
  }
  int slacks = 0;
  for (const auto& row : lp.rows) {
    require(row.relation == '<' || row.relation == '=' || row.relation == '>',
            "row relation must be one of <, =, >");
    require(std::isfinite(row.rhs), "row right-hand sides must be finite");
    for (const auto& [var, coef] : row.coeffs) {
      require(var >= 0 && var < n, "row references an unknown variable");
      require(std::isfinite(coef), "row coefficients must be finite");
    }
    if (row.relation != '=') ++slacks;
  }
  const std::int64_t cells =
      static_cast<std::int64_t>(m + 1) * (n + slacks + m + 1);
  require_budget(cells <= budget.max_cells,
                 "LP tableau of " + std::to_string(cells) +
                     " cells exceeds the size budget");

  // A suspect first pass (bad residual, unbounded claim, or iteration limit)
  // is rerun under Bland's rule from the start. Both passes are
  // deterministic, so repeat solves stay bit-identical.
  LpSolution first = attempt_solve(lp, false);
  if (first.status == LpStatus::kInfeasible ||
      (first.status == LpStatus::kOptimal && first.max_residual <= kResidualRetry)) {
    return first;
  }
  LpSolution second = attempt_solve(lp, true);
  second.iterations += first.iterations;
  return second;
}

std::string lp_to_text(const LinearProgramDescription& lp) {
  std::string out;
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  auto terms = [&](const std::vector<std::pair<int, double>>& coeffs) {
    std::string s;
    for (const auto& [var, coef] : coeffs) {
      if (!s.empty()) s += " + ";
      s += num(coef) + " " + lp.var_names[var];
    }
    return s.empty() ? "0" : s;
  };
  out += lp.sense == LinearProgramDescription::Sense::kMaximize ? "maximize: " : "minimize: ";
  out += terms(lp.objective) + "\n";
  out += "subject to\n";
  for (const auto& row : lp.rows) {
    out += "  " + row.name + ": " + terms(row.coeffs);
    out += row.relation == '<' ? " <= " : (row.relation == '>' ? " >= " : " = ");
    out += num(row.rhs) + "\n";
  }
  out += "nonnegative: all variables\n";
  return out;
}

}  // namespace subwelf
