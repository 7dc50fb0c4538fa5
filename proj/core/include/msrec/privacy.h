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

// Geographic differential privacy for the user agent.
//
// Adding i.i.d. Laplace(eta) noise to every component of a feature vector is
// (1/eta)-geographically private under the l1 metric: for any two inputs
// u1, u2 and any output y the density ratio is at most exp(|u1 - u2|_1 / eta).
// Restricted to a set of diameter R this is (R/eta)-local DP.

#ifndef MSREC_PRIVACY_H_
#define MSREC_PRIVACY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "msrec/random.h"
#include "msrec/types.h"

namespace msrec {

struct NoiseParams {
  // Laplace scale, in feature units. Privacy level is 1/eta.
  double eta = 0.1;

  // Throws InvalidArgument unless eta > 0 and finite.
  void Validate() const;
};

// y_i = f_i + Laplace(eta), drawing one uniform per component in order. The
// result is the raw signal: neither clamped nor renormalized.
std::vector<double> LaplaceMechanism(std::span<const double> f,
                                     const NoiseParams& params,
                                     RandomSource& rng);
inline std::vector<double> LaplaceMechanism(const FeatureVector& f,
                                            const NoiseParams& params,
                                            RandomSource& rng) {
  return LaplaceMechanism(f.values(), params, rng);
}

// Clamps every component to [0, 1] and rescales each half to sum to one. A
// half that is all zero after clamping becomes the uniform profile.
FeatureVector CapAndRescale(std::span<const double> signal,
                            std::size_t half_split);

struct DensityRatioCheck {
  // p(y | u1) / p(y | u2) for the Laplace mechanism.
  double ratio = 1.0;
  // exp(|u1 - u2|_1 / eta).
  double bound = 1.0;
  bool holds = true;
};

// Evaluates the geographic-DP inequality for one output y. The comparison is
// made on log-ratios with a rigorous floating-point error allowance, so
// `holds` is false only for a genuine violation.
DensityRatioCheck DensityRatioBoundCheck(std::span<const double> u1,
                                         std::span<const double> u2,
                                         std::span<const double> y,
                                         const NoiseParams& params);

// Local-DP epsilon implied on a set of l1 diameter `diameter`.
double GeoToLocalEpsilon(double eta, double diameter);

}  // namespace msrec

#endif  // MSREC_PRIVACY_H_
