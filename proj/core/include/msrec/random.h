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

#ifndef MSREC_RANDOM_H_
#define MSREC_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace msrec {

// Source of uniform variates. All sampling in the library goes through this
// interface so that every distribution is derived from the same bit stream
// on every platform (std::*_distribution is implementation-defined).
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  // Uniform double in the open interval (0, 1).
  virtual double Uniform() = 0;

  // Uniform integer in [0, n). Requires n > 0.
  std::size_t UniformIndex(std::size_t n);
};

// mt19937_64-backed stream. The engine's output sequence is fixed by the
// C++ standard, so a seed reproduces bit-identical draws everywhere.
class Rng final : public RandomSource {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double Uniform() override;

 private:
  std::mt19937_64 engine_;
};

// Test hook: emits the same variate forever. Uniform() == 0.5 makes every
// inverse-CDF Laplace draw exactly zero.
class ConstantSource final : public RandomSource {
 public:
  explicit ConstantSource(double value = 0.5) : value_(value) {}

  double Uniform() override { return value_; }

 private:
  double value_;
};

// SplitMix64 finalizer.
std::uint64_t MixBits(std::uint64_t x);

// Stable substream seed for (parent, index). Used for per-trial streams and
// for separating the agent's and server's randomness inside a trial.
std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t index);

// Laplace(0, scale) by inverse CDF on one uniform variate.
double SampleLaplace(RandomSource& rng, double scale);

}  // namespace msrec

#endif  // MSREC_RANDOM_H_
