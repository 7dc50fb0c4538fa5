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

// Frugal surrogate model shipped with the selected results.
//
// The server stacks q2 posterior samples into X (q2 x (1 + d + k)), one row
// [1, f, u(f, b_1), ..., u(f, b_k)] per sample, and keeps the top-p right
// singular vectors W_L of X. X is not mean-centered. The client finds x
// minimizing |W_L[0:1+d] x - [1; f_a]|_2 and reads utility estimates for the
// k results off W_L[1+d:] x.

#ifndef MSREC_FRUGAL_H_
#define MSREC_FRUGAL_H_

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "msrec/posterior.h"
#include "msrec/random.h"
#include "msrec/scoring.h"
#include "msrec/types.h"

namespace msrec {

inline constexpr std::size_t kDefaultFrugalRank = 20;
inline constexpr std::size_t kDefaultFrugalSamples = 200;
// Relative singular-value cutoff for the client's pseudoinverse.
inline constexpr double kPseudoInverseCutoff = 1e-10;

struct FrugalModel {
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t p = 0;
  std::vector<ResultId> result_ids;  // the k results, in server order
  Eigen::MatrixXd w_l;               // (1 + d + k) x p, orthonormal columns

  // Throws InvalidArgument when dimensions disagree.
  void Validate() const;
};

// The design matrix for `samples` and `result_ids`.
Eigen::MatrixXd FrugalDesignMatrix(const ScoringModel& model,
                                   const std::vector<FeatureVector>& samples,
                                   const std::vector<ResultId>& result_ids);

// Top-p right singular vectors of X, ordered by descending singular value,
// each with its largest-magnitude entry made positive. When p exceeds the
// numerical rank of X, the trailing columns are drawn from the null space of
// X ordered by decreasing energy in the first `head` coordinates (head = 0
// keeps the decomposition's own order). Throws InvalidArgument unless
// 1 <= p <= min(rows, cols), NumericalError when X is not finite or the
// decomposition fails.
Eigen::MatrixXd TopRightSingularVectors(const Eigen::MatrixXd& x,
                                        std::size_t p, std::size_t head = 0);

FrugalModel BuildFrugalFromSamples(const ScoringModel& model,
                                   const std::vector<FeatureVector>& samples,
                                   const std::vector<ResultId>& result_ids,
                                   std::size_t p);

// Draws q2 samples from `posterior` (in order) and builds the model.
FrugalModel BuildFrugal(const ScoringModel& model,
                        const PosteriorSampler& posterior,
                        const std::vector<ResultId>& result_ids,
                        std::size_t q2, std::size_t p, RandomSource& rng);

struct ClientChoice {
  ResultId result = -1;
  std::vector<double> estimates;  // one per frugal.result_ids entry
};

// Minimum-norm least squares fit, then argmax over the estimates (ties to
// the earlier position). Throws DimensionMismatch when f_a has the wrong
// dimension.
ClientChoice ClientSelect(const FrugalModel& frugal, const FeatureVector& f_a);

}  // namespace msrec

#endif  // MSREC_FRUGAL_H_
