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

#include "msrec/selection.h"

#include <algorithm>
#include <functional>
#include <string>

#include "msrec/status.h"

namespace msrec {
namespace {

BankRow MakeRow(std::vector<double> scores, std::size_t r) {
  BankRow row;
  row.top_r = TopRFromScores(scores, r);
  row.in_top_r.assign(scores.size(), 0);
  for (ResultId b : row.top_r) row.in_top_r[static_cast<std::size_t>(b)] = 1;
  row.scores = std::move(scores);
  return row;
}

std::vector<ResultId> Distinct(std::span<const ResultId> set) {
  std::vector<ResultId> ids(set.begin(), set.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::string Count(std::size_t n) { return std::to_string(n); }

}  // namespace

std::string_view UtilityKindName(UtilityKind kind) {
  return kind == UtilityKind::kSaturating ? "sat" : "avg";
}

std::optional<UtilityKind> ParseUtilityKind(std::string_view name) {
  if (name == "sat") return UtilityKind::kSaturating;
  if (name == "avg") return UtilityKind::kAverage;
  return std::nullopt;
}

void SelectionParams::Validate(std::size_t catalog_size) const {
  if (t < 1 || t > k || k > catalog_size) {
    throw InvalidArgument("SelectionParams: need 1 <= t <= k <= |B|; got t=" +
                          Count(t) + " k=" + Count(k) +
                          " |B|=" + Count(catalog_size));
  }
  if (r < 1 || r > catalog_size) {
    throw InvalidArgument("SelectionParams: need 1 <= r <= |B|; got r=" +
                          Count(r) + " |B|=" + Count(catalog_size));
  }
  if (q1 < 1) throw InvalidArgument("SelectionParams: q1 must be >= 1");
}

SampleBank SampleBank::Build(const ScoringModel& model,
                             const std::vector<FeatureVector>& samples,
                             std::size_t r) {
  std::vector<std::vector<double>> scores;
  scores.reserve(samples.size());
  for (const FeatureVector& f : samples) scores.push_back(model.ScoreAll(f));
  return FromScores(std::move(scores), r);
}

SampleBank SampleBank::FromScores(std::vector<std::vector<double>> scores,
                                  std::size_t r) {
  SampleBank bank;
  bank.r_ = r;
  bank.catalog_size_ = scores.empty() ? 0 : scores.front().size();
  bank.rows_.reserve(scores.size());
  for (auto& s : scores) {
    if (s.size() != bank.catalog_size_) {
      throw DimensionMismatch("SampleBank: ragged score table");
    }
    bank.rows_.push_back(MakeRow(std::move(s), r));
  }
  return bank;
}

double UtilitySat(const BankRow& row, std::span<const ResultId> set,
                  std::size_t t) {
  std::vector<double> values;
  for (ResultId b : Distinct(set)) {
    if (row.in_top_r[static_cast<std::size_t>(b)]) {
      values.push_back(row.scores[static_cast<std::size_t>(b)]);
    }
  }
  const std::size_t take = std::min(t, values.size());
  std::partial_sort(values.begin(), values.begin() + take, values.end(),
                    std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += values[i];
  return sum;
}

double UtilityAvg(const BankRow& row, std::span<const ResultId> set) {
  double sum = 0.0;
  for (ResultId b : Distinct(set)) sum += row.Truncated(b);
  return sum;
}

double BankObjective(const SampleBank& bank, std::span<const ResultId> set,
                     UtilityKind kind, std::size_t t) {
  double total = 0.0;
  for (const BankRow& row : bank.rows()) {
    total += kind == UtilityKind::kAverage ? UtilityAvg(row, set)
                                           : UtilitySat(row, set, t);
  }
  return total;
}

GreedyResult GreedySelect(const SampleBank& bank,
                          const SelectionParams& params, UtilityKind kind) {
  if (bank.size() == 0) throw InvalidArgument("GreedySelect: empty bank");
  const std::size_t n = bank.catalog_size();
  SelectionParams checked = params;
  checked.r = bank.r();
  checked.q1 = bank.size();
  checked.Validate(n);
  const std::size_t k = params.k;
  const std::size_t t = params.t;
  const bool saturating = kind == UtilityKind::kSaturating;

  // Per row, the t largest truncated scores selected so far, ascending.
  std::vector<std::vector<double>> kept(bank.size());
  std::vector<std::uint8_t> chosen(n, 0);

  GreedyResult out;
  std::vector<double> gains(n);
  double objective = 0.0;
  for (std::size_t step = 0; step < k; ++step) {
    // Only a row's top-r results can gain from that row.
    std::fill(gains.begin(), gains.end(), 0.0);
    for (std::size_t s = 0; s < bank.size(); ++s) {
      const BankRow& row = bank[s];
      const bool open = !saturating || kept[s].size() < t;
      const double floor = open ? 0.0 : kept[s].front();
      for (ResultId id : row.top_r) {
        const auto b = static_cast<std::size_t>(id);
        const double v = row.scores[b];
        if (open) {
          gains[b] += v;
        } else if (v > floor) {
          gains[b] += v - floor;
        }
      }
    }
    ResultId best = -1;
    double best_gain = -1.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (!chosen[b] && gains[b] > best_gain) {
        best_gain = gains[b];
        best = static_cast<ResultId>(b);
      }
    }
    const auto pick = static_cast<std::size_t>(best);
    chosen[pick] = 1;
    out.ids.push_back(best);
    objective += best_gain;
    out.objective.push_back(objective);
    if (!saturating) continue;
    for (std::size_t s = 0; s < bank.size(); ++s) {
      const BankRow& row = bank[s];
      if (!row.in_top_r[pick]) continue;
      std::vector<double>& top = kept[s];
      top.insert(std::upper_bound(top.begin(), top.end(), row.scores[pick]),
                 row.scores[pick]);
      if (top.size() > t) top.erase(top.begin());
    }
  }
  return out;
}

}  // namespace msrec
