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

#include "msrec/features.h"

#include <glog/logging.h>

#include <numeric>
#include <string>

#include "msrec/status.h"

namespace msrec {

std::optional<std::size_t> GenreIndex(std::string_view name) {
  for (std::size_t i = 0; i < kMovieLensGenres.size(); ++i) {
    if (kMovieLensGenres[i] == name) return i;
  }
  return std::nullopt;
}

UserFeatureAccumulator::UserFeatureAccumulator(const Catalog& catalog,
                                               double like_threshold)
    : catalog_(catalog), like_threshold_(like_threshold) {}

void UserFeatureAccumulator::Add(const Rating& rating) {
  if (!catalog_.contains(rating.result)) {
    throw IngestError("ratings row " + std::to_string(rating.row) +
                      ": unknown result id " + std::to_string(rating.result));
  }
  if (!(rating.rating >= 0.0 && rating.rating <= 5.0)) {
    throw IngestError("ratings row " + std::to_string(rating.row) +
                      ": rating " + std::to_string(rating.rating) +
                      " outside [0, 5]");
  }
  const std::size_t genres = catalog_.genre_count();
  std::vector<double>& counts = counts_[rating.user];
  if (counts.empty()) counts.assign(2 * genres, 0.0);
  const std::size_t offset = rating.rating >= like_threshold_ ? 0 : genres;
  const CatalogEntry& entry = catalog_.at(rating.result);
  for (std::size_t g = 0; g < genres; ++g) counts[offset + g] += entry.genres[g];
}

TrainingSet UserFeatureAccumulator::Finish(std::size_t* dropped) const {
  const std::size_t genres = catalog_.genre_count();
  std::vector<User> users;
  std::size_t skipped = 0;
  for (const auto& [id, counts] : counts_) {
    const double liked =
        std::accumulate(counts.begin(), counts.begin() + genres, 0.0);
    const double disliked =
        std::accumulate(counts.begin() + genres, counts.end(), 0.0);
    if (liked == 0.0 || disliked == 0.0) {
      ++skipped;
      continue;
    }
    std::vector<double> values(counts.size());
    for (std::size_t g = 0; g < genres; ++g) {
      values[g] = counts[g] / liked;
      values[genres + g] = counts[genres + g] / disliked;
    }
    users.push_back(User{id, FeatureVector(std::move(values), genres)});
  }
  if (skipped > 0) {
    LOG(INFO) << "dropped " << skipped
              << " users with an empty liked or disliked profile";
  }
  if (dropped != nullptr) *dropped = skipped;
  return TrainingSet(std::move(users));
}

TrainingSet BuildUserFeatures(const std::vector<Rating>& ratings,
                              const Catalog& catalog, double like_threshold,
                              std::size_t* dropped) {
  UserFeatureAccumulator acc(catalog, like_threshold);
  for (const Rating& r : ratings) acc.Add(r);
  return acc.Finish(dropped);
}

}  // namespace msrec
