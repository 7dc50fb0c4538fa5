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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gtest/gtest.h"
#include "msrec/dataset_io.h"
#include "msrec/features.h"
#include "msrec/scoring.h"
#include "msrec/status.h"
#include "msrec/types.h"
#include "test_util.h"

namespace msrec {
namespace {

using testing::RandomCatalog;
using testing::RandomFeature;
using testing::TableModel;

TEST(FeatureVectorTest, AcceptsNormalizedHalves) {
  const FeatureVector f({0.25, 0.75, 1.0, 0.0}, 2);
  EXPECT_EQ(f.size(), 4u);
  EXPECT_EQ(f.liked().size(), 2u);
  EXPECT_DOUBLE_EQ(f.disliked()[0], 1.0);
}

TEST(FeatureVectorTest, RejectsInvalidInput) {
  EXPECT_THROW(FeatureVector({1.0}, 1), InvalidArgument);
  EXPECT_THROW(FeatureVector({0.5, 0.5}, 0), InvalidArgument);
  EXPECT_THROW(FeatureVector({0.5, 0.5}, 2), InvalidArgument);
  EXPECT_THROW(FeatureVector({1.2, -0.2, 1.0, 0.0}, 2), InvalidArgument);
  EXPECT_THROW(FeatureVector({0.5, 0.4, 1.0, 0.0}, 2), InvalidArgument);
  // Within the 1e-9 tolerance.
  EXPECT_NO_THROW(FeatureVector({0.5, 0.5 + 5e-10, 1.0, 0.0}, 2));
  // Generic datasets only enforce the unit box.
  EXPECT_NO_THROW(FeatureVector({0.0, 0.0, 0.1, 0.2}, 2, Normalization::kNone));
}

TEST(CatalogTest, ValidatesEntries) {
  std::vector<CatalogEntry> ok = {{0, 10, {1, 0}, "a"}, {1, 11, {0, 1}, "b"}};
  const Catalog catalog(ok);
  EXPECT_EQ(catalog.size(), 2u);
  EXPECT_EQ(catalog.genre_count(), 2u);
  EXPECT_EQ(catalog.at(1).external_id, 11);
  EXPECT_FALSE(catalog.contains(2));

  std::vector<CatalogEntry> sparse = {{0, 0, {1, 0}, ""}, {2, 0, {1, 0}, ""}};
  EXPECT_THROW(Catalog{sparse}, InvalidArgument);
  std::vector<CatalogEntry> empty_genre = {{0, 0, {0, 0}, ""}};
  EXPECT_THROW(Catalog{empty_genre}, InvalidArgument);
  std::vector<CatalogEntry> not_binary = {{0, 0, {2, 0}, ""}};
  EXPECT_THROW(Catalog{not_binary}, InvalidArgument);
}

TEST(TrainingSetTest, RejectsDuplicatesAndShapeMismatch) {
  const FeatureVector f({0.5, 0.5, 1.0, 0.0}, 2);
  const FeatureVector g({1.0, 0.0, 0.0, 0.5, 0.5, 0.0}, 3);
  EXPECT_THROW(TrainingSet({User{1, f}, User{1, f}}), InvalidArgument);
  EXPECT_THROW(TrainingSet({User{1, f}, User{2, g}}), InvalidArgument);
  const TrainingSet train({User{1, f}, User{2, f}});
  EXPECT_EQ(train.dimension(), 4u);
  EXPECT_EQ(train.half_split(), 2u);
}

TEST(L1DistanceTest, Examples) {
  const std::vector<double> a = {0.5, 0.5};
  const std::vector<double> b = {0.0, 1.0};
  EXPECT_EQ(L1Distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(L1Distance(a, b), 1.0);
  EXPECT_EQ(L1Distance(a, b), L1Distance(b, a));
  const std::vector<double> c = {0.0, 1.0, 0.0};
  EXPECT_THROW(L1Distance(a, c), DimensionMismatch);
}

TEST(L1DistanceTest, MatchesLoopOracle) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = testing::RandomVector(rng, 38, -1.0, 2.0);
    const auto b = testing::RandomVector(rng, 38, -1.0, 2.0);
    double oracle = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) oracle += std::fabs(a[i] - b[i]);
    EXPECT_NEAR(L1Distance(a, b), oracle, 1e-12);
  }
}

TEST(TopRTest, Examples) {
  const TableModel model({3, 4, 2}, 2);
  const std::vector<double> f = {0.5, 0.5};
  EXPECT_EQ(TopRFromScores(model.ScoreAll(f), 2),
            (std::vector<ResultId>{1, 0}));
  EXPECT_EQ(TopRFromScores(std::vector<double>{1, 1, 1}, 2),
            (std::vector<ResultId>{0, 1}));
  EXPECT_THROW(TopRFromScores(std::vector<double>{1, 2}, 0), InvalidArgument);
  EXPECT_THROW(TopRFromScores(std::vector<double>{1, 2}, 3), InvalidArgument);
}

TEST(TopRTest, FullRankMatchesSortOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> scores(40);
    // Coarse values force plenty of ties.
    for (double& s : scores) s = std::floor(rng.Uniform() * 6.0);
    std::vector<ResultId> oracle(scores.size());
    std::iota(oracle.begin(), oracle.end(), 0);
    std::stable_sort(oracle.begin(), oracle.end(), [&](ResultId a, ResultId b) {
      return scores[static_cast<std::size_t>(a)] >
             scores[static_cast<std::size_t>(b)];
    });
    EXPECT_EQ(TopRFromScores(scores, scores.size()), oracle);
  }
}

TEST(TopRTest, ShorterListIsPrefix) {
  Rng rng(12);
  const Catalog catalog = RandomCatalog(60, 5, rng);
  const LinearReferenceModel model(catalog, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const FeatureVector f = RandomFeature(rng, 10, 5);
    const auto all = TopRResults(model, f, catalog, catalog.size());
    for (std::size_t r = 1; r <= catalog.size(); r += 7) {
      const auto top = TopRResults(model, f, catalog, r);
      EXPECT_TRUE(std::equal(top.begin(), top.end(), all.begin()));
    }
  }
}

TEST(LinearReferenceModelTest, ClosedForm) {
  const Catalog catalog(std::vector<CatalogEntry>{{0, 0, {1, 0}, ""},
                                                  {1, 1, {1, 1}, ""}});
  const LinearReferenceModel model(catalog, 2);
  const FeatureVector f({1.0, 0.0, 0.0, 1.0}, 2);
  // Liked minus disliked is (1, -1).
  EXPECT_DOUBLE_EQ(model.Score(f, 0), 5.0);
  EXPECT_DOUBLE_EQ(model.Score(f, 1), 2.5);
  EXPECT_THROW(LinearReferenceModel(catalog, 3), InvalidArgument);
}

TEST(LinearReferenceModelTest, ScoresStayInRangeEvenForRawSignals) {
  Rng rng(13);
  const Catalog catalog = RandomCatalog(50, 6, rng);
  const LinearReferenceModel model(catalog, 6);
  for (int trial = 0; trial < 2000; ++trial) {
    const FeatureVector f = RandomFeature(rng, 12, 6);
    for (double s : model.ScoreAll(f)) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 5.0);
    }
    const auto raw = testing::RandomVector(rng, 12, -3.0, 3.0);
    for (double s : model.ScoreAll(raw)) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 5.0);
    }
  }
  EXPECT_THROW(model.Score(std::vector<double>(5, 0.1), 0), DimensionMismatch);
}

// --- feature engineering -----------------------------------------------

Catalog GenreCatalog() {
  // Genres: 0 Action, 1 Comedy, 2 Drama.
  return Catalog(std::vector<CatalogEntry>{{0, 0, {1, 0, 0}, "action"},
                                           {1, 1, {1, 1, 0}, "action comedy"},
                                           {2, 2, {0, 0, 1}, "drama"},
                                           {3, 3, {0, 1, 1}, "comedy drama"}});
}

TEST(BuildUserFeaturesTest, LikedHalfCountsGenres) {
  const Catalog catalog = GenreCatalog();
  const std::vector<Rating> ratings = {
      {7, 0, 5.0, 1}, {7, 1, 4.0, 2}, {7, 2, 1.0, 3}};
  const TrainingSet train = BuildUserFeatures(ratings, catalog);
  ASSERT_EQ(train.size(), 1u);
  const FeatureVector& f = train[0].feature;
  EXPECT_NEAR(f[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(f[1], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(f[2], 0.0);
  EXPECT_EQ(f[5], 1.0);
}

TEST(BuildUserFeaturesTest, DropsUsersWithEmptyHalf) {
  const Catalog catalog = GenreCatalog();
  const std::vector<Rating> ratings = {{1, 0, 2.0, 1}, {2, 0, 5.0, 2},
                                       {2, 2, 0.5, 3}};
  std::size_t dropped = 0;
  const TrainingSet train =
      BuildUserFeatures(ratings, catalog, kDefaultLikeThreshold, &dropped);
  EXPECT_EQ(dropped, 1u);
  ASSERT_EQ(train.size(), 1u);
  EXPECT_EQ(train[0].id, 2);
}

TEST(BuildUserFeaturesTest, UnknownResultNamesRow) {
  const Catalog catalog = GenreCatalog();
  try {
    BuildUserFeatures({{1, 0, 5.0, 1}, {1, 9, 5.0, 42}}, catalog);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("42"), std::string::npos);
  }
  EXPECT_THROW(BuildUserFeatures({{1, 0, 6.0, 1}}, catalog), IngestError);
}

TEST(BuildUserFeaturesTest, ThreeUserFileMatchesCountingOracle) {
  std::istringstream movies(
      "movieId,title,genres\n"
      "10,Heat (1995),Action|Crime|Thriller\n"
      "20,\"Birdcage, The (1996)\",Comedy\n"
      "30,Casino (1995),Crime|Drama\n"
      "40,Unknown,(no genres listed)\n"
      "50,Toy Story (1995),Adventure|Animation|Children|Comedy|Fantasy\n");
  std::istringstream ratings(
      "userId,movieId,rating,timestamp\n"
      "1,10,4.5,0\n1,20,2.0,0\n1,30,4.0,0\n1,40,5.0,0\n"
      "2,50,5.0,0\n2,10,3.5,0\n2,30,1.0,0\n"
      "3,20,4.0,0\n3,50,0.5,0\n3,30,3.0,0\n");
  const MovieLensCatalog ml = ReadMovieLensCatalog(movies);
  ASSERT_EQ(ml.catalog.size(), 4u);
  EXPECT_EQ(ml.skipped_movie_ids, std::vector<std::int64_t>{40});
  EXPECT_EQ(ml.catalog.at(1).title, "Birdcage, The (1996)");

  std::vector<Rating> rows;
  const RatingsScan scan = ForEachMovieLensRating(
      ratings, ml, [&](const Rating& r) { rows.push_back(r); });
  EXPECT_EQ(scan.rows, 10u);
  EXPECT_EQ(scan.skipped_rows, 1u);
  const TrainingSet train = BuildUserFeatures(rows, ml.catalog);
  ASSERT_EQ(train.size(), 3u);

  // Hand-coded oracle: per user and half, genre counts over rated movies.
  const std::map<std::int64_t, std::vector<std::string>> genres = {
      {10, {"Action", "Crime", "Thriller"}},
      {20, {"Comedy"}},
      {30, {"Crime", "Drama"}},
      {50, {"Adventure", "Animation", "Children", "Comedy", "Fantasy"}}};
  const std::vector<std::tuple<int, std::int64_t, double>> table = {
      {1, 10, 4.5}, {1, 20, 2.0}, {1, 30, 4.0}, {2, 50, 5.0}, {2, 10, 3.5},
      {2, 30, 1.0}, {3, 20, 4.0}, {3, 50, 0.5}, {3, 30, 3.0}};
  for (const User& u : train) {
    std::vector<double> liked(19, 0.0), disliked(19, 0.0);
    for (const auto& [user, movie, rating] : table) {
      if (user != u.id) continue;
      for (const std::string& g : genres.at(movie)) {
        (rating >= 4.0 ? liked : disliked)[*GenreIndex(g)] += 1.0;
      }
    }
    const double ls = std::accumulate(liked.begin(), liked.end(), 0.0);
    const double ds = std::accumulate(disliked.begin(), disliked.end(), 0.0);
    for (std::size_t g = 0; g < 19; ++g) {
      EXPECT_NEAR(u.feature[g], liked[g] / ls, 1e-15) << u.id << " " << g;
      EXPECT_NEAR(u.feature[19 + g], disliked[g] / ds, 1e-15);
    }
  }
}

TEST(DatasetIoTest, RejectsBadHeadersAndUnknownMovies) {
  std::istringstream bad("id,title,genres\n");
  EXPECT_THROW(ReadMovieLensCatalog(bad), IngestError);
  std::istringstream movies("movieId,title,genres\n1,A,Drama\n");
  const MovieLensCatalog ml = ReadMovieLensCatalog(movies);
  std::istringstream ratings("userId,movieId,rating,timestamp\n1,2,4.0,0\n");
  try {
    ForEachMovieLensRating(ratings, ml, [](const Rating&) {});
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
}

TEST(DatasetIoTest, NativeFilesRoundTripExactly) {
  Rng rng(5);
  std::vector<User> users;
  for (int i = 0; i < 20; ++i) {
    users.push_back(User{100 + i, RandomFeature(rng, 8, 4)});
  }
  std::stringstream fs;
  WriteFeaturesCsv(fs, users);
  const std::vector<User> back = ReadFeaturesCsv(fs);
  ASSERT_EQ(back.size(), users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    EXPECT_EQ(back[i].id, users[i].id);
    EXPECT_EQ(back[i].feature, users[i].feature);
  }
  const Catalog catalog = RandomCatalog(15, 4, rng);
  std::stringstream cs;
  WriteCatalogCsv(cs, catalog);
  const Catalog catalog_back = ReadCatalogCsv(cs);
  ASSERT_EQ(catalog_back.size(), catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto id = static_cast<ResultId>(i);
    EXPECT_EQ(catalog_back.at(id).genres, catalog.at(id).genres);
  }
}

}  // namespace
}  // namespace msrec
