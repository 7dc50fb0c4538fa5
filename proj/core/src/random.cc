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

#include "msrec/random.h"

#include <cmath>

#include "msrec/status.h"

namespace msrec {

std::size_t RandomSource::UniformIndex(std::size_t n) {
  if (n == 0) throw InvalidArgument("UniformIndex: empty range");
  const auto index = static_cast<std::size_t>(Uniform() * static_cast<double>(n));
  return index < n ? index : n - 1;
}

double Rng::Uniform() {
  // 53 random mantissa bits, shifted by half an ulp to exclude 0 and 1.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t index) {
  return MixBits(MixBits(parent) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

double SampleLaplace(RandomSource& rng, double scale) {
  const double centered = rng.Uniform() - 0.5;
  if (centered == 0.0) return 0.0;
  const double magnitude = -scale * std::log1p(-2.0 * std::fabs(centered));
  return centered < 0 ? -magnitude : magnitude;
}

}  // namespace msrec
