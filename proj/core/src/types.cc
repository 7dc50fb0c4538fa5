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

#include "msrec/types.h"

#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "msrec/status.h"

namespace msrec {

FeatureVector::FeatureVector(std::vector<double> values,
                             std::size_t half_split,
                             Normalization normalization)
    : values_(std::move(values)),
      half_split_(half_split),
      normalization_(normalization) {
  if (values_.size() < 2) {
    throw InvalidArgument("FeatureVector: dimension must be at least 2");
  }
  if (half_split_ < 1 || half_split_ >= values_.size()) {
    throw InvalidArgument("FeatureVector: half split " +
                          std::to_string(half_split_) +
                          " outside [1, " + std::to_string(values_.size()) +
                          ")");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("FeatureVector: component " + std::to_string(i) +
                            " = " + std::to_string(v) + " outside [0, 1]");
    }
  }
  if (normalization_ == Normalization::kHalves) {
    const double liked =
        std::accumulate(values_.begin(), values_.begin() + half_split_, 0.0);
    const double disliked =
        std::accumulate(values_.begin() + half_split_, values_.end(), 0.0);
    if (std::fabs(liked - 1.0) > kNormalizationTolerance ||
        std::fabs(disliked - 1.0) > kNormalizationTolerance) {
      throw InvalidArgument("FeatureVector: half sums (" +
                            std::to_string(liked) + ", " +
                            std::to_string(disliked) + ") are not 1");
    }
  }
}

Catalog::Catalog(std::vector<CatalogEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) return;
  genre_count_ = entries_.front().genres.size();
  if (genre_count_ == 0) {
    throw InvalidArgument("Catalog: genre vectors must be non-empty");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const CatalogEntry& e = entries_[i];
    if (e.id != static_cast<ResultId>(i)) {
      throw InvalidArgument("Catalog: result ids must be dense; entry " +
                            std::to_string(i) + " has id " +
                            std::to_string(e.id));
    }
    if (e.genres.size() != genre_count_) {
      throw InvalidArgument("Catalog: result " + std::to_string(e.id) +
                            " has inconsistent genre width");
    }
    bool any = false;
    for (std::uint8_t g : e.genres) {
      if (g > 1) {
        throw InvalidArgument("Catalog: genre vectors must be binary");
      }
      any = any || g == 1;
    }
    if (!any) {
      throw InvalidArgument("Catalog: result " + std::to_string(e.id) +
                            " has no genre");
    }
  }
}

const CatalogEntry& Catalog::at(ResultId id) const {
  if (!contains(id)) {
    throw InvalidArgument("Catalog: unknown result id " + std::to_string(id));
  }
  return entries_[static_cast<std::size_t>(id)];
}

TrainingSet::TrainingSet(std::vector<User> users) : users_(std::move(users)) {
  if (users_.empty()) return;
  dimension_ = users_.front().feature.size();
  half_split_ = users_.front().feature.half_split();
  std::unordered_set<UserId> seen;
  for (const User& u : users_) {
    if (!seen.insert(u.id).second) {
      throw InvalidArgument("TrainingSet: duplicate user id " +
                            std::to_string(u.id));
    }
    if (u.feature.size() != dimension_ ||
        u.feature.half_split() != half_split_) {
      throw InvalidArgument("TrainingSet: user " + std::to_string(u.id) +
                            " has an inconsistent feature shape");
    }
  }
}

double L1Distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("L1Distance: dimensions " +
                            std::to_string(a.size()) + " and " +
                            std::to_string(b.size()) + " differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::fabs(a[i] - b[i]);
  return sum;
}

}  // namespace msrec
