// Copyright 2026 The msrec Authors.
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

// Result-set selection over a bank of posterior samples.
//
// For a sample f with top-r slice R_f, the truncated score of result b is
// u(f, b) if b is in R_f and 0 otherwise. Two per-sample utilities of a set B:
//
//   saturating  sum of the t largest truncated scores in B
//   average     sum of all truncated scores in B (saturating with t = inf)
//
// The bank objective U(B) sums a utility over samples. Both utilities are
// monotone and submodular in B, so greedy selection attains at least
// (1 - 1/e) of the optimum for a cardinality budget k.

#ifndef MSREC_SELECTION_H_
#define MSREC_SELECTION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "msrec/scoring.h"
#include "msrec/types.h"

namespace msrec {

enum class UtilityKind { kSaturating, kAverage };

std::string_view UtilityKindName(UtilityKind kind);
std::optional<UtilityKind> ParseUtilityKind(std::string_view name);

struct SelectionParams {
  std::size_t k = 5;     // results returned
  std::size_t t = 1;     // saturation level
  std::size_t r = 100;   // top-r truncation
  std::size_t q1 = 25;   // posterior samples

  // Throws InvalidArgument unless 1 <= t <= k <= catalog_size,
  // 1 <= r <= catalog_size and q1 >= 1.
  void Validate(std::size_t catalog_size) const;
};

// One sampled feature: its score table over the catalog and its top-r slice.
struct BankRow {
  std::vector<double> scores;
  std::vector<ResultId> top_r;       // best first
  std::vector<std::uint8_t> in_top_r;  // indexed by result id

  double Truncated(ResultId b) const {
    const auto i = static_cast<std::size_t>(b);
    return in_top_r[i] ? scores[i] : 0.0;
  }
};

// The sample set F_s with precomputed per-sample tables. Immutable.
class SampleBank {
 public:
  // Scores every sample against every result.
  static SampleBank Build(const ScoringModel& model,
                          const std::vector<FeatureVector>& samples,
                          std::size_t r);
  // From explicit score tables (rows x catalog size).
  static SampleBank FromScores(std::vector<std::vector<double>> scores,
                               std::size_t r);

  std::size_t size() const { return rows_.size(); }
  std::size_t catalog_size() const { return catalog_size_; }
  std::size_t r() const { return r_; }
  const BankRow& operator[](std::size_t i) const { return rows_[i]; }
  const std::vector<BankRow>& rows() const { return rows_; }

 private:
  std::vector<BankRow> rows_;
  std::size_t catalog_size_ = 0;
  std::size_t r_ = 0;
};

// Sum of the min(t, |B n R_f|) largest truncated scores. Duplicate ids in B
// count once.
double UtilitySat(const BankRow& row, std::span<const ResultId> set,
                  std::size_t t);
// Sum of truncated scores over B.
double UtilityAvg(const BankRow& row, std::span<const ResultId> set);

// U(B) = sum over rows. `t` is ignored for kAverage.
double BankObjective(const SampleBank& bank, std::span<const ResultId> set,
                     UtilityKind kind, std::size_t t);

struct GreedyResult {
  std::vector<ResultId> ids;       // in selection order
  std::vector<double> objective;   // U after each step; non-decreasing
};

// Adds, k times, the result with the largest marginal gain; ties go to the
// smaller id (so zero-gain steps fill with the smallest unused ids).
// Deterministic. Throws InvalidArgument on invalid params or empty bank.
GreedyResult GreedySelect(const SampleBank& bank,
                          const SelectionParams& params, UtilityKind kind);

}  // namespace msrec

#endif  // MSREC_SELECTION_H_
