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

// Genre-profile feature engineering from explicit ratings.
//
// A user's liked half counts, per genre, the rated results with rating >=
// like_threshold that carry the genre (a result counts once for each genre
// it is tagged with); the disliked half does the same for ratings below the
// threshold. Each half is then divided by its sum.

#ifndef MSREC_FEATURES_H_
#define MSREC_FEATURES_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "msrec/types.h"

namespace msrec {

inline constexpr double kDefaultLikeThreshold = 4.0;

// The fixed MovieLens genre index table. Position i is genre index i.
inline constexpr std::array<std::string_view, 19> kMovieLensGenres = {
    "Action",   "Adventure", "Animation", "Children", "Comedy",
    "Crime",    "Documentary", "Drama",   "Fantasy",  "Film-Noir",
    "Horror",   "IMAX",      "Musical",   "Mystery",  "Romance",
    "Sci-Fi",   "Thriller",  "War",       "Western"};

// Index of a genre name in kMovieLensGenres, or nullopt when unknown.
std::optional<std::size_t> GenreIndex(std::string_view name);

struct Rating {
  UserId user = 0;
  ResultId result = 0;
  double rating = 0.0;
  // 1-based source row, used in error messages. 0 when unknown.
  std::size_t row = 0;
};

// Streaming accumulator: memory is O(users * genres), not O(ratings).
class UserFeatureAccumulator {
 public:
  UserFeatureAccumulator(const Catalog& catalog, double like_threshold);

  // Throws IngestError naming the row when the result id is unknown or the
  // rating is outside [0, 5].
  void Add(const Rating& rating);

  // Users ordered by ascending id. Users with an all-zero half are dropped;
  // their number is written to *dropped when non-null.
  TrainingSet Finish(std::size_t* dropped = nullptr) const;

 private:
  const Catalog& catalog_;
  double like_threshold_;
  std::map<UserId, std::vector<double>> counts_;
};

TrainingSet BuildUserFeatures(const std::vector<Rating>& ratings,
                              const Catalog& catalog,
                              double like_threshold = kDefaultLikeThreshold,
                              std::size_t* dropped = nullptr);

}  // namespace msrec

#endif  // MSREC_FEATURES_H_
