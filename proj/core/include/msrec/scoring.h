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

#ifndef MSREC_SCORING_H_
#define MSREC_SCORING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "msrec/types.h"

namespace msrec {

inline constexpr double kMinScore = 0.0;
inline constexpr double kMaxScore = 5.0;

// Ground-truth rating oracle u(f, b) on the 0-5 scale.
//
// Implementations override RawScore(); the public entry points clamp to
// [kMinScore, kMaxScore]. Inputs are raw spans so that unconstrained signals
// (noised vectors outside [0, 1]) can be scored directly. Implementations
// must be stateless or internally synchronized.
class ScoringModel {
 public:
  virtual ~ScoringModel() = default;

  // Feature dimension the model accepts.
  virtual std::size_t dimension() const = 0;
  virtual std::size_t result_count() const = 0;

  double Score(std::span<const double> features, ResultId result) const;
  double Score(const FeatureVector& f, ResultId result) const {
    return Score(f.values(), result);
  }

  // Scores for every result id in [0, result_count()).
  std::vector<double> ScoreAll(std::span<const double> features) const;
  std::vector<double> ScoreAll(const FeatureVector& f) const {
    return ScoreAll(f.values());
  }

 protected:
  virtual double RawScore(std::span<const double> features,
                          ResultId result) const = 0;
  // Default loops over RawScore. Output has result_count() entries.
  virtual void RawScoreAll(std::span<const double> features,
                           std::span<double> out) const;
};

// score(f, b) = 2.5 + 2.5 * (f_liked - f_disliked) . g_b / |g_b|_1.
//
// Linear in f, so every row [1, f, u(f, .)] of a design matrix lies in a
// (1 + d)-dimensional subspace. The genre width must equal the half split.
class LinearReferenceModel final : public ScoringModel {
 public:
  // Throws InvalidArgument unless catalog.genre_count() == half_split.
  LinearReferenceModel(const Catalog& catalog, std::size_t half_split);

  std::size_t dimension() const override { return 2 * half_split_; }
  std::size_t result_count() const override { return weights_.size(); }

 protected:
  double RawScore(std::span<const double> features,
                  ResultId result) const override;
  void RawScoreAll(std::span<const double> features,
                   std::span<double> out) const override;

 private:
  std::size_t half_split_;
  // Per result: the genre vector divided by its l1 norm.
  std::vector<std::vector<double>> weights_;
};

// The r highest-scoring results for `features`, best first. Ties break by
// ascending result id. Throws InvalidArgument unless 1 <= r <= |catalog|.
std::vector<ResultId> TopRResults(const ScoringModel& model,
                                  std::span<const double> features,
                                  const Catalog& catalog, std::size_t r);
inline std::vector<ResultId> TopRResults(const ScoringModel& model,
                                         const FeatureVector& f,
                                         const Catalog& catalog,
                                         std::size_t r) {
  return TopRResults(model, f.values(), catalog, r);
}

// Same ordering rule applied to a precomputed score vector.
std::vector<ResultId> TopRFromScores(std::span<const double> scores,
                                     std::size_t r);

}  // namespace msrec

#endif  // MSREC_SCORING_H_
