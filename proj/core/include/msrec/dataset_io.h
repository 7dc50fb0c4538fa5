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

// CSV readers and writers.
//
// MovieLens inputs:
//   movies.csv   movieId,title,genres        (genres pipe-separated)
//   ratings.csv  userId,movieId,rating,timestamp
//
// Native files (header row mandatory, UTF-8, LF line endings):
//   features     user_id,half_split,f0,...,f{d-1}
//   catalog      result_id,external_id,g0,...,g{G-1}

#ifndef MSREC_DATASET_IO_H_
#define MSREC_DATASET_IO_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "msrec/features.h"
#include "msrec/types.h"

namespace msrec {

// Shortest decimal that parses back to the same double. Used for every float written to a
// CSV file or wire message.
std::string FormatDouble(double value);

// Splits one CSV record. Handles double-quoted fields with "" escapes.
std::vector<std::string> SplitCsvLine(std::string_view line);

struct MovieLensCatalog {
  Catalog catalog;
  std::unordered_map<std::int64_t, ResultId> by_movie_id;
  // Movies without any genre from kMovieLensGenres. They are left out of the
  // catalog and their ratings are skipped.
  std::vector<std::int64_t> skipped_movie_ids;
};

MovieLensCatalog ReadMovieLensCatalog(std::istream& in);

struct RatingsScan {
  std::size_t rows = 0;
  std::size_t skipped_rows = 0;
};

// Streams ratings.csv, translating movieId to catalog ids. Ratings of
// skipped movies are counted and ignored; a movieId absent from movies.csv
// is an IngestError naming the row.
RatingsScan ForEachMovieLensRating(
    std::istream& in, const MovieLensCatalog& catalog,
    const std::function<void(const Rating&)>& sink);

void WriteFeaturesCsv(std::ostream& out, const std::vector<User>& users);
std::vector<User> ReadFeaturesCsv(
    std::istream& in, Normalization normalization = Normalization::kHalves);

void WriteCatalogCsv(std::ostream& out, const Catalog& catalog);
Catalog ReadCatalogCsv(std::istream& in);

// File-path conveniences. Throw IngestError when a file cannot be opened.
std::vector<User> ReadFeaturesFile(
    const std::string& path,
    Normalization normalization = Normalization::kHalves);
Catalog ReadCatalogFile(const std::string& path);
void WriteTextFile(const std::string& path,
                   const std::function<void(std::ostream&)>& writer);

}  // namespace msrec

#endif  // MSREC_DATASET_IO_H_
