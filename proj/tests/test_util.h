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

// Shared fixtures for the unit, property and acceptance tests.

#ifndef MSREC_TESTS_TEST_UTIL_H_
#define MSREC_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "msrec/random.h"
#include "msrec/scoring.h"
#include "msrec/types.h"

namespace msrec::testing {

// A model whose score of result b is table[b] for every feature vector.
class TableModel final : public ScoringModel {
 public:
  TableModel(std::vector<double> table, std::size_t dimension)
      : table_(std::move(table)), dimension_(dimension) {}
  std::size_t dimension() const override { return dimension_; }
  std::size_t result_count() const override { return table_.size(); }

 protected:
  double RawScore(std::span<const double>, ResultId b) const override {
    return table_[static_cast<std::size_t>(b)];
  }

 private:
  std::vector<double> table_;
  std::size_t dimension_;
};

// A catalog of `n` results with one genre each (result i has genre i % g).
inline Catalog SingleGenreCatalog(std::size_t n, std::size_t g) {
  std::vector<CatalogEntry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    CatalogEntry e;
    e.id = static_cast<ResultId>(i);
    e.external_id = static_cast<std::int64_t>(i);
    e.genres.assign(g, 0);
    e.genres[i % g] = 1;
    entries.push_back(std::move(e));
  }
  return Catalog(std::move(entries));
}

// Random nonzero binary genre vectors.
inline Catalog RandomCatalog(std::size_t n, std::size_t g, RandomSource& rng,
                             double p = 0.3) {
  std::vector<CatalogEntry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    CatalogEntry e;
    e.id = static_cast<ResultId>(i);
    e.external_id = static_cast<std::int64_t>(i);
    e.genres.assign(g, 0);
    bool any = false;
    for (std::size_t j = 0; j < g; ++j) {
      if (rng.Uniform() < p) {
        e.genres[j] = 1;
        any = true;
      }
    }
    if (!any) e.genres[rng.UniformIndex(g)] = 1;
    entries.push_back(std::move(e));
  }
  return Catalog(std::move(entries));
}

// A random point of the half-normalized simplex product: each half is an
// exponential-spacing Dirichlet(1) draw.
inline FeatureVector RandomFeature(RandomSource& rng, std::size_t d,
                                   std::size_t h) {
  std::vector<double> v(d);
  auto fill = [&](std::size_t lo, std::size_t hi) {
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      v[i] = -std::log(rng.Uniform());
      sum += v[i];
    }
    for (std::size_t i = lo; i < hi; ++i) v[i] /= sum;
  };
  fill(0, h);
  fill(h, d);
  return FeatureVector(std::move(v), h);
}

inline TrainingSet RandomTrainingSet(RandomSource& rng, std::size_t n,
                                     std::size_t d, std::size_t h) {
  std::vector<User> users;
  for (std::size_t i = 0; i < n; ++i) {
    users.push_back(User{static_cast<UserId>(i), RandomFeature(rng, d, h)});
  }
  return TrainingSet(std::move(users));
}

inline std::vector<double> RandomVector(RandomSource& rng, std::size_t d,
                                        double lo, double hi) {
  std::vector<double> v(d);
  for (double& x : v) x = lo + (hi - lo) * rng.Uniform();
  return v;
}

}  // namespace msrec::testing

#endif  // MSREC_TESTS_TEST_UTIL_H_
