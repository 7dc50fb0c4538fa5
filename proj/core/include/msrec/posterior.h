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

// The server's guess of the user's true feature given a noised signal.
//
//   realuser  training user a with probability proportional to
//             exp(-|signal - f_a|_1 / eta) (an exponential mechanism)
//   cap       signal + Laplace(eta) noise, clamped to [0, 1] and rescaled
//   uniform   training user drawn uniformly; ignores the signal
//
// All samplers draw with replacement. Samplers hold references to their
// inputs; the caller keeps them alive.

#ifndef MSREC_POSTERIOR_H_
#define MSREC_POSTERIOR_H_

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "msrec/privacy.h"
#include "msrec/random.h"
#include "msrec/types.h"

namespace msrec {

enum class PosteriorKind { kRealUser, kCap, kUniform };

std::string_view PosteriorKindName(PosteriorKind kind);
std::optional<PosteriorKind> ParsePosteriorKind(std::string_view name);

// Normalized exponential-mechanism weights over `train`, computed from
// log-weights with a max shift. Throws InvalidArgument on an empty set.
std::vector<double> RealUserWeights(const TrainingSet& train,
                                    std::span<const double> signal,
                                    double eta);

// Same computation from precomputed distances. Exposed for property tests.
std::vector<double> ExponentialWeights(std::span<const double> distances,
                                       double eta);

// Index i with cumulative[i-1] <= u * total < cumulative[i], skipping
// zero-mass entries; the lowest such index wins ties.
std::size_t SampleCategorical(std::span<const double> cumulative, double u);

class PosteriorSampler {
 public:
  virtual ~PosteriorSampler() = default;
  virtual PosteriorKind kind() const = 0;
  // Feature dimension and half split of the samples.
  virtual std::size_t dimension() const = 0;
  virtual std::size_t half_split() const = 0;
  virtual FeatureVector Sample(RandomSource& rng) const = 0;
};

class RealUserPosterior final : public PosteriorSampler {
 public:
  RealUserPosterior(const TrainingSet& train, std::span<const double> signal,
                    double eta);

  PosteriorKind kind() const override { return PosteriorKind::kRealUser; }
  std::size_t dimension() const override { return train_.dimension(); }
  std::size_t half_split() const override { return train_.half_split(); }
  FeatureVector Sample(RandomSource& rng) const override {
    return train_[SampleIndex(rng)].feature;
  }

  // One uniform variate per call.
  std::size_t SampleIndex(RandomSource& rng) const;
  const std::vector<double>& weights() const { return weights_; }

 private:
  const TrainingSet& train_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

class CapPosterior final : public PosteriorSampler {
 public:
  CapPosterior(std::span<const double> signal, double eta,
               std::size_t half_split);

  PosteriorKind kind() const override { return PosteriorKind::kCap; }
  std::size_t dimension() const override { return signal_.size(); }
  std::size_t half_split() const override { return half_split_; }
  // d uniform variates per call.
  FeatureVector Sample(RandomSource& rng) const override;

 private:
  std::vector<double> signal_;
  NoiseParams noise_;
  std::size_t half_split_;
};

class UniformPosterior final : public PosteriorSampler {
 public:
  explicit UniformPosterior(const TrainingSet& train);

  PosteriorKind kind() const override { return PosteriorKind::kUniform; }
  std::size_t dimension() const override { return train_.dimension(); }
  std::size_t half_split() const override { return train_.half_split(); }
  FeatureVector Sample(RandomSource& rng) const override {
    return train_[SampleIndex(rng)].feature;
  }
  std::size_t SampleIndex(RandomSource& rng) const {
    return rng.UniformIndex(train_.size());
  }

 private:
  const TrainingSet& train_;
};

// Free-function forms.
FeatureVector SampleRealUser(const TrainingSet& train,
                             std::span<const double> signal, double eta,
                             RandomSource& rng);
FeatureVector SampleCap(std::span<const double> signal, double eta,
                        std::size_t half_split, RandomSource& rng);
FeatureVector SampleUniform(const TrainingSet& train, RandomSource& rng);

std::unique_ptr<PosteriorSampler> MakePosterior(PosteriorKind kind,
                                                const TrainingSet& train,
                                                std::span<const double> signal,
                                                double eta);

}  // namespace msrec

#endif  // MSREC_POSTERIOR_H_
