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

#include "msrec/frugal.h"

#include <Eigen/SVD>
#include <algorithm>
#include <limits>
#include <sstream>
#include <string>

#include "msrec/status.h"

namespace msrec {

void FrugalModel::Validate() const {
  if (result_ids.size() != k) {
    throw InvalidArgument("FrugalModel: " + std::to_string(result_ids.size()) +
                          " result ids for k = " + std::to_string(k));
  }
  if (static_cast<std::size_t>(w_l.rows()) != 1 + d + k ||
      static_cast<std::size_t>(w_l.cols()) != p || p == 0) {
    throw InvalidArgument("FrugalModel: W_L is " +
                          std::to_string(w_l.rows()) + "x" +
                          std::to_string(w_l.cols()) + ", expected " +
                          std::to_string(1 + d + k) + "x" + std::to_string(p));
  }
}

Eigen::MatrixXd FrugalDesignMatrix(const ScoringModel& model,
                                   const std::vector<FeatureVector>& samples,
                                   const std::vector<ResultId>& result_ids) {
  if (samples.empty()) {
    throw InvalidArgument("FrugalDesignMatrix: no samples");
  }
  const std::size_t d = samples.front().size();
  const std::size_t k = result_ids.size();
  Eigen::MatrixXd x(samples.size(), 1 + d + k);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const FeatureVector& f = samples[i];
    if (f.size() != d) {
      throw DimensionMismatch("FrugalDesignMatrix: sample dimensions differ");
    }
    const auto row = static_cast<Eigen::Index>(i);
    x(row, 0) = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      x(row, static_cast<Eigen::Index>(1 + j)) = f[j];
    }
    for (std::size_t j = 0; j < k; ++j) {
      x(row, static_cast<Eigen::Index>(1 + d + j)) =
          model.Score(f, result_ids[j]);
    }
  }
  return x;
}

Eigen::MatrixXd TopRightSingularVectors(const Eigen::MatrixXd& x,
                                        std::size_t p, std::size_t head) {
  const auto rank_limit =
      static_cast<std::size_t>(std::min(x.rows(), x.cols()));
  if (p < 1 || p > rank_limit) {
    throw InvalidArgument("frugal rank p = " + std::to_string(p) +
                          " outside [1, " + std::to_string(rank_limit) + "]");
  }
  if (head > static_cast<std::size_t>(x.cols())) {
    throw InvalidArgument("frugal head exceeds the column count");
  }
  if (!x.allFinite()) {
    throw NumericalError("frugal design matrix has non-finite entries");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (svd.info() != Eigen::Success || !sigma.allFinite()) {
    std::ostringstream msg;
    msg << "SVD of the " << x.rows() << "x" << x.cols()
        << " design matrix failed; sigma_max = " << sigma(0)
        << ", sigma_min = " << sigma(sigma.size() - 1)
        << ", rank = " << svd.rank();
    throw NumericalError(msg.str());
  }
  const Eigen::MatrixXd& v = svd.matrixV();
  const Eigen::Index cols = static_cast<Eigen::Index>(p);

  // Numerical rank, with the usual max(m, n) * eps * sigma_max threshold.
  const double tol = static_cast<double>(std::max(x.rows(), x.cols())) *
                     std::numeric_limits<double>::epsilon() * sigma(0);
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > tol) ++rank;

  Eigen::MatrixXd w(x.cols(), cols);
  if (rank >= cols || head == 0) {
    w = v.leftCols(cols);
  } else {
    // Directions past the rank span the null space of X and their order is
    // arbitrary. Re-basis that space by decreasing energy in the first
    // `head` coordinates, so that filler directions stay out of the tail
    // block whenever the null space allows it.
    const Eigen::MatrixXd null = v.rightCols(x.cols() - rank);
    const Eigen::Index h = static_cast<Eigen::Index>(head);
    Eigen::JacobiSVD<Eigen::MatrixXd> head_svd(null.topRows(h),
                                               Eigen::ComputeFullV);
    w.leftCols(rank) = v.leftCols(rank);
    w.rightCols(cols - rank) =
        (null * head_svd.matrixV()).leftCols(cols - rank);
  }
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    Eigen::Index arg = 0;
    w.col(c).cwiseAbs().maxCoeff(&arg);
    if (w(arg, c) < 0) w.col(c) = -w.col(c);
  }
  return w;
}

FrugalModel BuildFrugalFromSamples(const ScoringModel& model,
                                   const std::vector<FeatureVector>& samples,
                                   const std::vector<ResultId>& result_ids,
                                   std::size_t p) {
  if (result_ids.empty()) {
    throw InvalidArgument("BuildFrugal: empty result set");
  }
  FrugalModel out;
  out.d = samples.empty() ? 0 : samples.front().size();
  out.k = result_ids.size();
  out.p = p;
  out.result_ids = result_ids;
  out.w_l = TopRightSingularVectors(
      FrugalDesignMatrix(model, samples, result_ids), p, 1 + out.d);
  return out;
}

FrugalModel BuildFrugal(const ScoringModel& model,
                        const PosteriorSampler& posterior,
                        const std::vector<ResultId>& result_ids,
                        std::size_t q2, std::size_t p, RandomSource& rng) {
  if (q2 < 1) throw InvalidArgument("BuildFrugal: q2 must be >= 1");
  std::vector<FeatureVector> samples;
  samples.reserve(q2);
  for (std::size_t i = 0; i < q2; ++i) samples.push_back(posterior.Sample(rng));
  return BuildFrugalFromSamples(model, samples, result_ids, p);
}

ClientChoice ClientSelect(const FrugalModel& frugal, const FeatureVector& f_a) {
  frugal.Validate();
  if (f_a.size() != frugal.d) {
    throw DimensionMismatch("ClientSelect: feature has dimension " +
                            std::to_string(f_a.size()) + ", model expects " +
                            std::to_string(frugal.d));
  }
  const auto head = static_cast<Eigen::Index>(1 + frugal.d);
  const auto tail = static_cast<Eigen::Index>(frugal.k);

  Eigen::VectorXd target(head);
  target(0) = 1.0;
  for (std::size_t j = 0; j < frugal.d; ++j) {
    target(static_cast<Eigen::Index>(1 + j)) = f_a[j];
  }

  const Eigen::MatrixXd a = frugal.w_l.topRows(head);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = kPseudoInverseCutoff * (sigma.size() ? sigma(0) : 0.0);
  Eigen::VectorXd projected = svd.matrixU().transpose() * target;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    projected(i) = sigma(i) > cutoff ? projected(i) / sigma(i) : 0.0;
  }
  const Eigen::VectorXd coeffs = svd.matrixV() * projected;
  const Eigen::VectorXd estimates = frugal.w_l.bottomRows(tail) * coeffs;

  ClientChoice out;
  out.estimates.assign(estimates.data(), estimates.data() + estimates.size());
  std::size_t best = 0;
  for (std::size_t j = 1; j < out.estimates.size(); ++j) {
    if (out.estimates[j] > out.estimates[best]) best = j;
  }
  out.result = frugal.result_ids[best];
  return out;
}

}  // namespace msrec
