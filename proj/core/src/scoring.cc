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

#include "msrec/scoring.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "msrec/status.h"

namespace msrec {
namespace {

double Clamp(double score) {
  return std::clamp(score, kMinScore, kMaxScore);
}

void CheckDimension(const ScoringModel& model,
                    std::span<const double> features) {
  if (features.size() != model.dimension()) {
    throw DimensionMismatch("ScoringModel: expected " +
                            std::to_string(model.dimension()) +
                            " features, got " +
                            std::to_string(features.size()));
  }
}

}  // namespace

double ScoringModel::Score(std::span<const double> features,
                           ResultId result) const {
  CheckDimension(*this, features);
  if (result < 0 || static_cast<std::size_t>(result) >= result_count()) {
    throw InvalidArgument("ScoringModel: unknown result id " +
                          std::to_string(result));
  }
  return Clamp(RawScore(features, result));
}

std::vector<double> ScoringModel::ScoreAll(
    std::span<const double> features) const {
  CheckDimension(*this, features);
  std::vector<double> out(result_count());
  RawScoreAll(features, out);
  for (double& s : out) s = Clamp(s);
  return out;
}

void ScoringModel::RawScoreAll(std::span<const double> features,
                               std::span<double> out) const {
  for (std::size_t b = 0; b < out.size(); ++b) {
    out[b] = RawScore(features, static_cast<ResultId>(b));
  }
}

LinearReferenceModel::LinearReferenceModel(const Catalog& catalog,
                                           std::size_t half_split)
    : half_split_(half_split) {
  if (catalog.genre_count() != half_split) {
    throw InvalidArgument(
        "LinearReferenceModel: catalog genre width " +
        std::to_string(catalog.genre_count()) +
        " must equal the feature half split " + std::to_string(half_split));
  }
  weights_.reserve(catalog.size());
  for (const CatalogEntry& e : catalog.entries()) {
    const double norm = std::accumulate(e.genres.begin(), e.genres.end(), 0.0);
    std::vector<double> w(e.genres.size());
    for (std::size_t g = 0; g < w.size(); ++g) w[g] = e.genres[g] / norm;
    weights_.push_back(std::move(w));
  }
}

double LinearReferenceModel::RawScore(std::span<const double> features,
                                      ResultId result) const {
  const std::vector<double>& w = weights_[static_cast<std::size_t>(result)];
  double affinity = 0.0;
  for (std::size_t g = 0; g < half_split_; ++g) {
    affinity += (features[g] - features[half_split_ + g]) * w[g];
  }
  return 2.5 + 2.5 * affinity;
}

void LinearReferenceModel::RawScoreAll(std::span<const double> features,
                                       std::span<double> out) const {
  std::vector<double> diff(half_split_);
  for (std::size_t g = 0; g < half_split_; ++g) {
    diff[g] = features[g] - features[half_split_ + g];
  }
  for (std::size_t b = 0; b < out.size(); ++b) {
    const std::vector<double>& w = weights_[b];
    double affinity = 0.0;
    for (std::size_t g = 0; g < half_split_; ++g) affinity += diff[g] * w[g];
    out[b] = 2.5 + 2.5 * affinity;
  }
}

std::vector<ResultId> TopRFromScores(std::span<const double> scores,
                                     std::size_t r) {
  if (r < 1 || r > scores.size()) {
    throw InvalidArgument("TopR: r = " + std::to_string(r) +
                          " outside [1, " + std::to_string(scores.size()) +
                          "]");
  }
  std::vector<ResultId> ids(scores.size());
  std::iota(ids.begin(), ids.end(), 0);
  auto better = [&](ResultId a, ResultId b) {
    const double sa = scores[static_cast<std::size_t>(a)];
    const double sb = scores[static_cast<std::size_t>(b)];
    return sa > sb || (sa == sb && a < b);
  };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(r),
                    ids.end(), better);
  ids.resize(r);
  return ids;
}

std::vector<ResultId> TopRResults(const ScoringModel& model,
                                  std::span<const double> features,
                                  const Catalog& catalog, std::size_t r) {
  if (model.result_count() != catalog.size()) {
    throw DimensionMismatch("TopRResults: model and catalog sizes differ");
  }
  return TopRFromScores(model.ScoreAll(features), r);
}

}  // namespace msrec
