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

#ifndef SUBWELF_COMMON_HPP_
#define SUBWELF_COMMON_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace subwelf {

// Error taxonomy shared with the CLI exit-code contract:
//   InputError  -> exit 2 (malformed or inconsistent input)
//   BudgetError -> exit 3 (work refused because it exceeds an explicit budget;
//                  never silently truncated)
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

inline void require_budget(bool cond, const std::string& msg) {
  if (!cond) throw BudgetError(msg);
}

// Enumeration budget, measured in set-function / utility evaluations or
// enumerated tuples depending on the operation.
struct Budget {
  std::int64_t max_evaluations = 10'000'000;
};

// LP size budget, measured in tableau cells (rows x columns).
struct LpBudget {
  std::int64_t max_cells = 4'000'000;
};

namespace tol {
// Probability mass consistency (prior sums, distribution sums).
inline constexpr double kProbSum = 1e-12;
// Exact-arithmetic comparisons: solver residuals, basic-equality checks,
// analytic inequalities evaluated without sampling.
inline constexpr double kExact = 1e-9;
// Re-verification of externally supplied or solver-produced witnesses.
inline constexpr double kVerify = 1e-7;
// Assertions on LP optimal values.
inline constexpr double kLpValue = 1e-6;
}  // namespace tol

// Deterministic PRNG. The algorithm name is recorded in every sampled
// report so estimates can be reproduced bit-for-bit from (algorithm, seed).
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in {0, ..., n-1}, unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw InputError("Rng::below: n must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  int index(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

 private:
  std::mt19937_64 engine_;
};

// Dynamic bitset sized at construction; used for coverage masks.
class Bitset {
 public:
  Bitset() : bits_(0) {}
  explicit Bitset(int bits)
      : bits_(bits), words_((bits + 63) / 64, 0) {}

  int size() const { return bits_; }

  void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(int i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  void or_with(const Bitset& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  }

  template <typename F>
  void for_each(F&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        const int bit = std::countr_zero(word);
        fn(static_cast<int>(w * 64 + bit));
        word &= word - 1;
      }
    }
  }

  bool operator==(const Bitset&) const = default;

 private:
  int bits_;
  std::vector<std::uint64_t> words_;
};

// Mixed-radix odometer. Initialize digits to all zeros; next_tuple advances
// to the lexicographic successor and returns false after the last tuple.
inline bool next_tuple(std::vector<int>& digits, std::span<const int> radix) {
  for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

// Product of radices, capped: returns cap + 1 as soon as the product
// exceeds cap, so callers can budget-check without overflow.
inline std::int64_t capped_product(std::span<const int> radix, std::int64_t cap) {
  std::int64_t p = 1;
  for (int r : radix) {
    if (r <= 0) return 0;
    if (p > cap / r) return cap + 1;
    p *= r;
  }
  return p;
}

}  // namespace subwelf

#endif  // SUBWELF_COMMON_HPP_
