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

#include "msrec/dataset_io.h"

#include <glog/logging.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "msrec/status.h"

namespace msrec {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

template <typename T>
T ParseNumber(std::string_view field, std::size_t row, const char* what) {
  field = Trim(field);
  T value{};
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw IngestError("row " + std::to_string(row) + ": cannot parse " + what +
                      " from '" + std::string(field) + "'");
  }
  return value;
}

// Returns false at end of input.
bool ReadRecord(std::istream& in, std::string& line, std::size_t& row) {
  while (std::getline(in, line)) {
    ++row;
    if (!Trim(line).empty()) return true;
  }
  return false;
}

void ExpectHeader(std::istream& in, std::string_view expected_prefix,
                  std::size_t& row, std::string& header) {
  if (!ReadRecord(in, header, row)) {
    throw IngestError("empty input: expected header '" +
                      std::string(expected_prefix) + "...'");
  }
  if (Trim(header).substr(0, expected_prefix.size()) != expected_prefix) {
    throw IngestError("unexpected header '" + std::string(Trim(header)) +
                      "', expected '" + std::string(expected_prefix) + "...'");
  }
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  line = Trim(line);
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

MovieLensCatalog ReadMovieLensCatalog(std::istream& in) {
  std::size_t row = 0;
  std::string line;
  ExpectHeader(in, "movieId,title,genres", row, line);
  MovieLensCatalog out;
  std::vector<CatalogEntry> entries;
  while (ReadRecord(in, line, row)) {
    const auto fields = SplitCsvLine(line);
    if (fields.size() != 3) {
      throw IngestError("movies row " + std::to_string(row) + ": expected 3 " +
                        "fields, got " + std::to_string(fields.size()));
    }
    const auto movie_id = ParseNumber<std::int64_t>(fields[0], row, "movieId");
    CatalogEntry entry;
    entry.external_id = movie_id;
    entry.title = fields[1];
    entry.genres.assign(kMovieLensGenres.size(), 0);
    bool any = false;
    std::string_view genres = fields[2];
    while (!genres.empty()) {
      const std::size_t bar = genres.find('|');
      const std::string_view name = genres.substr(0, bar);
      if (auto index = GenreIndex(Trim(name))) {
        entry.genres[*index] = 1;
        any = true;
      }
      if (bar == std::string_view::npos) break;
      genres.remove_prefix(bar + 1);
    }
    if (!any) {
      out.skipped_movie_ids.push_back(movie_id);
      continue;
    }
    entry.id = static_cast<ResultId>(entries.size());
    if (!out.by_movie_id.emplace(movie_id, entry.id).second) {
      throw IngestError("movies row " + std::to_string(row) +
                        ": duplicate movieId " + std::to_string(movie_id));
    }
    entries.push_back(std::move(entry));
  }
  if (!out.skipped_movie_ids.empty()) {
    LOG(INFO) << "skipped " << out.skipped_movie_ids.size()
              << " movies without a known genre";
  }
  out.catalog = Catalog(std::move(entries));
  return out;
}

RatingsScan ForEachMovieLensRating(
    std::istream& in, const MovieLensCatalog& catalog,
    const std::function<void(const Rating&)>& sink) {
  std::size_t row = 0;
  std::string line;
  ExpectHeader(in, "userId,movieId,rating", row, line);
  std::unordered_map<std::int64_t, bool> skipped;
  for (std::int64_t id : catalog.skipped_movie_ids) skipped[id] = true;
  RatingsScan scan;
  while (ReadRecord(in, line, row)) {
    ++scan.rows;
    const auto fields = SplitCsvLine(line);
    if (fields.size() < 3) {
      throw IngestError("ratings row " + std::to_string(row) +
                        ": expected userId,movieId,rating[,timestamp]");
    }
    Rating r;
    r.row = row;
    r.user = ParseNumber<std::int64_t>(fields[0], row, "userId");
    const auto movie = ParseNumber<std::int64_t>(fields[1], row, "movieId");
    r.rating = ParseNumber<double>(fields[2], row, "rating");
    auto it = catalog.by_movie_id.find(movie);
    if (it == catalog.by_movie_id.end()) {
      if (skipped.count(movie) != 0) {
        ++scan.skipped_rows;
        continue;
      }
      throw IngestError("ratings row " + std::to_string(row) +
                        ": unknown movieId " + std::to_string(movie));
    }
    r.result = it->second;
    sink(r);
  }
  return scan;
}

void WriteFeaturesCsv(std::ostream& out, const std::vector<User>& users) {
  const std::size_t d = users.empty() ? 0 : users.front().feature.size();
  out << "user_id,half_split";
  for (std::size_t i = 0; i < d; ++i) out << ",f" << i;
  out << '\n';
  for (const User& u : users) {
    out << u.id << ',' << u.feature.half_split();
    for (double v : u.feature.values()) out << ',' << FormatDouble(v);
    out << '\n';
  }
}

std::vector<User> ReadFeaturesCsv(std::istream& in,
                                  Normalization normalization) {
  std::size_t row = 0;
  std::string line;
  ExpectHeader(in, "user_id,half_split", row, line);
  const std::size_t d = SplitCsvLine(line).size() - 2;
  std::vector<User> users;
  while (ReadRecord(in, line, row)) {
    const auto fields = SplitCsvLine(line);
    if (fields.size() != d + 2) {
      throw IngestError("features row " + std::to_string(row) + ": expected " +
                        std::to_string(d + 2) + " fields");
    }
    const auto id = ParseNumber<std::int64_t>(fields[0], row, "user_id");
    const auto h = ParseNumber<std::size_t>(fields[1], row, "half_split");
    std::vector<double> values(d);
    for (std::size_t i = 0; i < d; ++i) {
      values[i] = ParseNumber<double>(fields[i + 2], row, "feature");
    }
    try {
      users.push_back(User{id, FeatureVector(std::move(values), h,
                                             normalization)});
    } catch (const InvalidArgument& e) {
      throw IngestError("features row " + std::to_string(row) + ": " +
                        e.what());
    }
  }
  return users;
}

void WriteCatalogCsv(std::ostream& out, const Catalog& catalog) {
  out << "result_id,external_id";
  for (std::size_t g = 0; g < catalog.genre_count(); ++g) out << ",g" << g;
  out << '\n';
  for (const CatalogEntry& e : catalog.entries()) {
    out << e.id << ',' << e.external_id;
    for (std::uint8_t g : e.genres) out << ',' << static_cast<int>(g);
    out << '\n';
  }
}

Catalog ReadCatalogCsv(std::istream& in) {
  std::size_t row = 0;
  std::string line;
  ExpectHeader(in, "result_id,external_id", row, line);
  const std::size_t genres = SplitCsvLine(line).size() - 2;
  std::vector<CatalogEntry> entries;
  while (ReadRecord(in, line, row)) {
    const auto fields = SplitCsvLine(line);
    if (fields.size() != genres + 2) {
      throw IngestError("catalog row " + std::to_string(row) + ": expected " +
                        std::to_string(genres + 2) + " fields");
    }
    CatalogEntry e;
    e.id = ParseNumber<ResultId>(fields[0], row, "result_id");
    e.external_id = ParseNumber<std::int64_t>(fields[1], row, "external_id");
    e.genres.resize(genres);
    for (std::size_t g = 0; g < genres; ++g) {
      e.genres[g] = ParseNumber<std::uint8_t>(fields[g + 2], row, "genre");
    }
    entries.push_back(std::move(e));
  }
  try {
    return Catalog(std::move(entries));
  } catch (const InvalidArgument& e) {
    throw IngestError(std::string("catalog: ") + e.what());
  }
}

std::vector<User> ReadFeaturesFile(const std::string& path,
                                   Normalization normalization) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open features file " + path);
  return ReadFeaturesCsv(in, normalization);
}

Catalog ReadCatalogFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open catalog file " + path);
  return ReadCatalogCsv(in);
}

void WriteTextFile(const std::string& path,
                   const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError("cannot open " + path + " for writing");
  writer(out);
  out.flush();
  if (!out) throw IngestError("write to " + path + " failed");
}

}  // namespace msrec
