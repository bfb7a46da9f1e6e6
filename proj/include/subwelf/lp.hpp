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

#ifndef SUBWELF_LP_HPP_
#define SUBWELF_LP_HPP_

#include <string>
#include <vector>

#include "subwelf/common.hpp"

namespace subwelf {

// Linear program over nonnegative variables. Rows are sparse; every variable
// has an implicit bound x >= 0.
struct LinearProgramDescription {
  enum class Sense { kMinimize, kMaximize };

  struct Row {
    std::string name;
    std::vector<std::pair<int, double>> coeffs;
    char relation = '<';  // '<' (<=), '=' or '>' (>=)
    double rhs = 0.0;
  };

  Sense sense = Sense::kMaximize;
  std::vector<std::string> var_names;
  std::vector<std::pair<int, double>> objective;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(var_names.size()); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double objective = 0.0;
  std::vector<double> x;
  // Maximum constraint violation of the returned point against the original
  // rows (0 for a clean optimal basis).
  double max_residual = 0.0;
  std::int64_t iterations = 0;
};

// Dense two-phase simplex with a fixed pivot rule (most negative reduced
// cost; ratio ties take the largest pivot element, and a stalled run switches
// to Bland's rule so degenerate programs terminate). A pass that ends with a
// bad residual is rerun wholly under Bland's rule. The same description
// always produces the same solution bit for bit.
LpSolution solve_lp(const LinearProgramDescription& lp, const LpBudget& budget = {});

// Plain-text rendering, one row per line.
std::string lp_to_text(const LinearProgramDescription& lp);

}  // namespace subwelf

#endif  // SUBWELF_LP_HPP_
