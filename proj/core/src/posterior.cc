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

#include "msrec/posterior.h"

#include <algorithm>
#include <cmath>

#include "msrec/status.h"

namespace msrec {
namespace {

void RequireNonEmpty(const TrainingSet& train, const char* who) {
  if (train.empty()) {
    throw InvalidArgument(std::string(who) + ": empty training set");
  }
}

std::vector<double> CumulativeSums(const std::vector<double>& weights) {
  std::vector<double> cumulative(weights.size());
  double running = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    cumulative[i] = running;
  }
  return cumulative;
}

}  // namespace

std::string_view PosteriorKindName(PosteriorKind kind) {
  switch (kind) {
    case PosteriorKind::kRealUser:
      return "realuser";
    case PosteriorKind::kCap:
      return "cap";
    case PosteriorKind::kUniform:
      return "uniform";
  }
  return "unknown";
}

std::optional<PosteriorKind> ParsePosteriorKind(std::string_view name) {
  for (PosteriorKind k : {PosteriorKind::kRealUser, PosteriorKind::kCap,
                          PosteriorKind::kUniform}) {
    if (PosteriorKindName(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<double> ExponentialWeights(std::span<const double> distances,
                                       double eta) {
  NoiseParams{eta}.Validate();
  if (distances.empty()) {
    throw InvalidArgument("ExponentialWeights: no candidates");
  }
  std::vector<double> w(distances.size());
  double max_log = -INFINITY;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = -distances[i] / eta;
    max_log = std::max(max_log, w[i]);
  }
  double total = 0.0;
  for (double& v : w) {
    v = std::exp(v - max_log);
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

std::vector<double> RealUserWeights(const TrainingSet& train,
                                    std::span<const double> signal,
                                    double eta) {
  RequireNonEmpty(train, "RealUserWeights");
  std::vector<double> distances(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    distances[i] = L1Distance(signal, train[i].feature.values());
  }
  return ExponentialWeights(distances, eta);
}

std::size_t SampleCategorical(std::span<const double> cumulative, double u) {
  if (cumulative.empty()) {
    throw InvalidArgument("SampleCategorical: no categories");
  }
  const double target = u * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) {
    // u * total rounded up to the total: last entry with positive mass.
    std::size_t i = cumulative.size() - 1;
    while (i > 0 && cumulative[i] == cumulative[i - 1]) --i;
    return i;
  }
  return static_cast<std::size_t>(it - cumulative.begin());
}

RealUserPosterior::RealUserPosterior(const TrainingSet& train,
                                     std::span<const double> signal,
                                     double eta)
    : train_(train),
      weights_(RealUserWeights(train, signal, eta)),
      cumulative_(CumulativeSums(weights_)) {}

std::size_t RealUserPosterior::SampleIndex(RandomSource& rng) const {
  return SampleCategorical(cumulative_, rng.Uniform());
}

CapPosterior::CapPosterior(std::span<const double> signal, double eta,
                           std::size_t half_split)
    : signal_(signal.begin(), signal.end()),
      noise_{eta},
      half_split_(half_split) {
  noise_.Validate();
  if (half_split_ < 1 || half_split_ >= signal_.size()) {
    throw InvalidArgument("CapPosterior: invalid half split");
  }
}

FeatureVector CapPosterior::Sample(RandomSource& rng) const {
  return CapAndRescale(LaplaceMechanism(signal_, noise_, rng), half_split_);
}

UniformPosterior::UniformPosterior(const TrainingSet& train) : train_(train) {
  RequireNonEmpty(train, "UniformPosterior");
}

FeatureVector SampleRealUser(const TrainingSet& train,
                             std::span<const double> signal, double eta,
                             RandomSource& rng) {
  return RealUserPosterior(train, signal, eta).Sample(rng);
}

FeatureVector SampleCap(std::span<const double> signal, double eta,
                        std::size_t half_split, RandomSource& rng) {
  return CapPosterior(signal, eta, half_split).Sample(rng);
}

FeatureVector SampleUniform(const TrainingSet& train, RandomSource& rng) {
  return UniformPosterior(train).Sample(rng);
}

std::unique_ptr<PosteriorSampler> MakePosterior(PosteriorKind kind,
                                                const TrainingSet& train,
                                                std::span<const double> signal,
                                                double eta) {
  switch (kind) {
    case PosteriorKind::kRealUser:
      return std::make_unique<RealUserPosterior>(train, signal, eta);
    case PosteriorKind::kCap:
      return std::make_unique<CapPosterior>(signal, eta, train.half_split());
    case PosteriorKind::kUniform:
      return std::make_unique<UniformPosterior>(train);
  }
  throw InvalidArgument("MakePosterior: unknown kind");
}

}  // namespace msrec
