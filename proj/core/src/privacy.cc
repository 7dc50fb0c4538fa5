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

#include "msrec/privacy.h"

#include <glog/logging.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "msrec/status.h"

namespace msrec {
namespace {

void RescaleHalf(std::span<double> half) {
  double sum = 0.0;
  for (double& v : half) {
    v = std::clamp(v, 0.0, 1.0);
    sum += v;
  }
  if (sum == 0.0) {
    VLOG(1) << "all-zero half after clamping; using the uniform profile";
    std::fill(half.begin(), half.end(), 1.0 / static_cast<double>(half.size()));
    return;
  }
  for (double& v : half) v /= sum;
}

}  // namespace

void NoiseParams::Validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidArgument("NoiseParams: eta must be positive and finite, got " +
                          std::to_string(eta));
  }
}

std::vector<double> LaplaceMechanism(std::span<const double> f,
                                     const NoiseParams& params,
                                     RandomSource& rng) {
  params.Validate();
  std::vector<double> y(f.begin(), f.end());
  for (double& v : y) v += SampleLaplace(rng, params.eta);
  return y;
}

FeatureVector CapAndRescale(std::span<const double> signal,
                            std::size_t half_split) {
  if (half_split < 1 || half_split >= signal.size()) {
    throw InvalidArgument("CapAndRescale: half split " +
                          std::to_string(half_split) + " invalid for length " +
                          std::to_string(signal.size()));
  }
  std::vector<double> values(signal.begin(), signal.end());
  std::span<double> all(values);
  RescaleHalf(all.first(half_split));
  RescaleHalf(all.subspan(half_split));
  return FeatureVector(std::move(values), half_split);
}

DensityRatioCheck DensityRatioBoundCheck(std::span<const double> u1,
                                         std::span<const double> u2,
                                         std::span<const double> y,
                                         const NoiseParams& params) {
  params.Validate();
  if (u1.size() != u2.size() || u1.size() != y.size()) {
    throw DimensionMismatch("DensityRatioBoundCheck: dimensions differ");
  }
  const double to_u1 = L1Distance(y, u1);
  const double to_u2 = L1Distance(y, u2);
  const double between = L1Distance(u1, u2);

  // log p(y|u1) - log p(y|u2) = (|y - u2| - |y - u1|) / eta.
  const double log_ratio = (to_u2 - to_u1) / params.eta;
  const double log_bound = between / params.eta;

  // Each l1 sum of n terms carries relative error <= (n + 1) * u on a sum of
  // non-negative terms; the difference and division add a few more ulps.
  constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;
  const double n = static_cast<double>(y.size());
  const double slack =
      (n + 4.0) * kUnit * (to_u1 + to_u2 + between) / params.eta;

  DensityRatioCheck out;
  out.ratio = std::exp(log_ratio);
  out.bound = std::exp(log_bound);
  out.holds = log_ratio <= log_bound + slack;
  return out;
}

double GeoToLocalEpsilon(double eta, double diameter) {
  NoiseParams{eta}.Validate();
  if (!(diameter >= 0.0)) {
    throw InvalidArgument("GeoToLocalEpsilon: diameter must be >= 0");
  }
  return diameter / eta;
}

}  // namespace msrec
