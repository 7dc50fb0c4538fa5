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

// Domain types shared by every module: user feature vectors, the result
// catalog and the public training population.

#ifndef MSREC_TYPES_H_
#define MSREC_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace msrec {

using ResultId = std::int32_t;
using UserId = std::int64_t;

// Absolute tolerance on the per-half sums of a normalized feature vector.
inline constexpr double kNormalizationTolerance = 1e-9;

enum class Normalization {
  // Each half sums to one (liked-genre and disliked-genre profiles).
  kHalves,
  // Only the [0, 1] component bound is enforced. For generic datasets.
  kNone,
};

// A user's profile. Components [0, half_split) describe liked genres and
// [half_split, size) disliked genres. Immutable after construction.
class FeatureVector {
 public:
  // Throws InvalidArgument when an invariant is violated.
  FeatureVector(std::vector<double> values, std::size_t half_split,
                Normalization normalization = Normalization::kHalves);

  std::size_t size() const { return values_.size(); }
  std::size_t half_split() const { return half_split_; }
  Normalization normalization() const { return normalization_; }

  std::span<const double> values() const { return values_; }
  std::span<const double> liked() const {
    return std::span<const double>(values_).first(half_split_);
  }
  std::span<const double> disliked() const {
    return std::span<const double>(values_).subspan(half_split_);
  }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<double> values_;
  std::size_t half_split_;
  Normalization normalization_;
};

struct CatalogEntry {
  ResultId id = 0;
  // Identifier in the source dataset (MovieLens movieId); equals id for
  // synthetic catalogs.
  std::int64_t external_id = 0;
  std::vector<std::uint8_t> genres;
  std::string title;
};

// The result set B. Ids are dense: entry i has id i.
class Catalog {
 public:
  Catalog() = default;
  // Throws InvalidArgument when ids are not dense, genre widths differ or an
  // entry has no genre.
  explicit Catalog(std::vector<CatalogEntry> entries);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t genre_count() const { return genre_count_; }

  const CatalogEntry& at(ResultId id) const;
  const std::vector<CatalogEntry>& entries() const { return entries_; }
  bool contains(ResultId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < entries_.size();
  }

 private:
  std::vector<CatalogEntry> entries_;
  std::size_t genre_count_ = 0;
};

struct User {
  UserId id = 0;
  FeatureVector feature;
};

// Public population A^tr. All features share one dimension and split.
class TrainingSet {
 public:
  TrainingSet() = default;
  // Throws InvalidArgument on duplicate ids or inconsistent shapes.
  explicit TrainingSet(std::vector<User> users);

  std::size_t size() const { return users_.size(); }
  bool empty() const { return users_.empty(); }
  std::size_t dimension() const { return dimension_; }
  std::size_t half_split() const { return half_split_; }

  const User& operator[](std::size_t i) const { return users_[i]; }
  const std::vector<User>& users() const { return users_; }
  auto begin() const { return users_.begin(); }
  auto end() const { return users_.end(); }

 private:
  std::vector<User> users_;
  std::size_t dimension_ = 0;
  std::size_t half_split_ = 0;
};

// Sum of absolute component differences. Throws DimensionMismatch.
double L1Distance(std::span<const double> a, std::span<const double> b);
inline double L1Distance(const FeatureVector& a, const FeatureVector& b) {
  return L1Distance(a.values(), b.values());
}

}  // namespace msrec

#endif  // MSREC_TYPES_H_
