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

// Synthetic datasets and descriptive statistics of a user population.

#ifndef MSREC_ANALYTICS_H_
#define MSREC_ANALYTICS_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "msrec/scoring.h"
#include "msrec/types.h"

namespace msrec {

// Prototype-mixture generator.
//
// Each of `prototypes` prototypes holds, per half, a Dirichlet(1) profile on
// a random subset of min_active..max_active genres. A user picks a prototype
// uniformly and a mixing weight lambda ~ U(0, max_jitter); each half is
//
//   (1 - lambda) * prototype_half + lambda * J
//
// where J is Dirichlet(1) on a random genre subset (each genre kept with
// probability jitter_density, at least one). Users with small lambda sit
// close to their prototype, so tight l1 clusters exist. Result genre vectors
// set each genre with probability genre_probability, forcing one genre when
// none is set. Every draw comes from one Rng(seed) stream in a fixed order:
// prototypes, training users, held-out users, catalog.
struct SyntheticOptions {
  std::size_t n_users = 2000;
  std::size_t n_heldout = 500;
  std::size_t n_results = 300;
  std::size_t d = 38;
  std::size_t prototypes = 24;
  std::size_t min_active = 2;
  std::size_t max_active = 5;
  double max_jitter = 0.6;
  double jitter_density = 0.25;
  double genre_probability = 0.25;
  std::uint64_t seed = 1;

  void Validate() const;
};

struct SyntheticDataset {
  TrainingSet train;
  Catalog catalog;
  // Evaluation users, disjoint ids from train (they continue the numbering).
  std::vector<User> heldout;
};

SyntheticDataset SynthesizeDataset(const SyntheticOptions& options);
// Defaults for everything but the sizes; n_heldout = max(1, n_users / 4).
SyntheticDataset SynthesizeDataset(std::size_t n_users, std::size_t n_results,
                                   std::size_t d, std::uint64_t seed);

struct ClusterReport {
  UserId center_user_id = 0;
  std::vector<UserId> member_ids;  // nearest first; the center leads
  double diameter = 0.0;           // max pairwise l1 among members
};

// m nearest training users (by l1, ties to smaller id, center first) around
// each of `sample_size` centers drawn uniformly with replacement.
std::vector<ClusterReport> ClusterDiameters(const TrainingSet& train,
                                            std::size_t sample_size,
                                            std::size_t m, std::uint64_t seed);

// Cluster around one given center index.
ClusterReport ClusterAround(const TrainingSet& train, std::size_t center,
                            std::size_t m);

// 1 - q / (m * top_n) with q the size of the union of the members' top-n
// sets. Lies in [0, 1 - 1/m].
double DuplicationMeasure(const ScoringModel& model,
                          const ClusterReport& cluster, std::size_t top_n,
                          const TrainingSet& train, const Catalog& catalog);

struct NeighborGap {
  UserId first = 0;
  UserId second = 0;
  double distance = 0.0;
  // Mean score `first` gives its own top-n minus the mean score it gives the
  // top-n of `second`. Non-negative.
  double gap = 0.0;
};

double RatingGap(const ScoringModel& model, const FeatureVector& first,
                 const FeatureVector& second, const Catalog& catalog,
                 std::size_t top_n);

// Samples a first user uniformly, then a second uniformly among the other
// users within max_l1 of it; attempts without a neighbor are discarded.
// Stops at `pairs` pairs or after 20 * pairs attempts. An empty result means
// no qualifying pair was found.
std::vector<NeighborGap> NeighborRatingGap(const ScoringModel& model,
                                           const TrainingSet& train,
                                           const Catalog& catalog,
                                           double max_l1, std::size_t top_n,
                                           std::size_t pairs,
                                           std::uint64_t seed);

// max_b u(f, b) per user, sorted ascending (an empirical CDF).
std::vector<double> TopRatingDistribution(const ScoringModel& model,
                                          std::span<const User> users,
                                          const Catalog& catalog);

// CSV emitters.
void WriteClusterCsv(std::ostream& out,
                     const std::vector<ClusterReport>& clusters,
                     const std::vector<double>& duplication);
void WriteNeighborGapCsv(std::ostream& out,
                         const std::vector<NeighborGap>& gaps);
// Two-column x,y CDF: x = sorted value, y = (i + 1) / n.
void WriteCdfCsv(std::ostream& out, const std::vector<double>& sorted_values);

}  // namespace msrec

#endif  // MSREC_ANALYTICS_H_
