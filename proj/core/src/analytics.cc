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

#include "msrec/analytics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "msrec/dataset_io.h"
#include "msrec/random.h"
#include "msrec/status.h"

namespace msrec {
namespace {

// Dirichlet(1) weights on a subset of `width` slots, zero elsewhere.
std::vector<double> DirichletOnSubset(Rng& rng,
                                      const std::vector<std::size_t>& subset,
                                      std::size_t width) {
  std::vector<double> out(width, 0.0);
  double total = 0.0;
  for (std::size_t g : subset) {
    out[g] = -std::log(rng.Uniform());
    total += out[g];
  }
  for (double& v : out) v /= total;
  return out;
}

std::vector<std::size_t> RandomSubset(Rng& rng, std::size_t width,
                                      std::size_t count) {
  std::vector<std::size_t> all(width);
  std::iota(all.begin(), all.end(), 0);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(all[i], all[i + rng.UniformIndex(width - i)]);
  }
  all.resize(count);
  return all;
}

std::vector<std::size_t> BernoulliSubset(Rng& rng, std::size_t width,
                                         double probability) {
  std::vector<std::size_t> kept;
  for (std::size_t g = 0; g < width; ++g) {
    if (rng.Uniform() < probability) kept.push_back(g);
  }
  if (kept.empty()) kept.push_back(rng.UniformIndex(width));
  return kept;
}

struct Prototype {
  std::vector<double> liked;
  std::vector<double> disliked;
};

std::vector<double> Renormalized(std::vector<double> half) {
  const double total = std::accumulate(half.begin(), half.end(), 0.0);
  for (double& v : half) v /= total;
  return half;
}

std::vector<double> MixHalf(Rng& rng, const std::vector<double>& proto,
                            double lambda, double density) {
  const std::size_t width = proto.size();
  const std::vector<double> jitter =
      DirichletOnSubset(rng, BernoulliSubset(rng, width, density), width);
  std::vector<double> half(width);
  for (std::size_t g = 0; g < width; ++g) {
    half[g] = (1.0 - lambda) * proto[g] + lambda * jitter[g];
  }
  return Renormalized(std::move(half));
}

User MakeUser(Rng& rng, const std::vector<Prototype>& prototypes, UserId id,
              const SyntheticOptions& opt) {
  const Prototype& proto = prototypes[rng.UniformIndex(prototypes.size())];
  const double lambda = opt.max_jitter * rng.Uniform();
  std::vector<double> values = MixHalf(rng, proto.liked, lambda,
                                       opt.jitter_density);
  const std::vector<double> disliked =
      MixHalf(rng, proto.disliked, lambda, opt.jitter_density);
  values.insert(values.end(), disliked.begin(), disliked.end());
  return User{id, FeatureVector(std::move(values), opt.d / 2)};
}

std::vector<double> Distances(const TrainingSet& train, std::size_t from) {
  std::vector<double> out(train.size());
  for (std::size_t j = 0; j < train.size(); ++j) {
    out[j] = L1Distance(train[from].feature, train[j].feature);
  }
  return out;
}

double MeanScore(const std::vector<double>& scores,
                 const std::vector<ResultId>& ids) {
  double sum = 0.0;
  for (ResultId b : ids) sum += scores[static_cast<std::size_t>(b)];
  return sum / static_cast<double>(ids.size());
}

}  // namespace

void SyntheticOptions::Validate() const {
  if (n_users < 2) throw InvalidArgument("synthesize: n_users must be >= 2");
  if (n_results < 1) {
    throw InvalidArgument("synthesize: n_results must be >= 1");
  }
  if (d < 2 || d % 2 != 0) {
    throw InvalidArgument("synthesize: d must be even and >= 2");
  }
  if (prototypes < 1) {
    throw InvalidArgument("synthesize: need at least one prototype");
  }
  if (min_active < 1 || min_active > max_active || max_active > d / 2) {
    throw InvalidArgument("synthesize: need 1 <= min_active <= max_active <= d/2");
  }
  if (!(max_jitter >= 0.0 && max_jitter <= 1.0)) {
    throw InvalidArgument("synthesize: max_jitter must lie in [0, 1]");
  }
  if (!(jitter_density > 0.0 && jitter_density <= 1.0) ||
      !(genre_probability > 0.0 && genre_probability <= 1.0)) {
    throw InvalidArgument("synthesize: probabilities must lie in (0, 1]");
  }
}

SyntheticDataset SynthesizeDataset(const SyntheticOptions& opt) {
  opt.Validate();
  Rng rng(opt.seed);
  const std::size_t width = opt.d / 2;

  std::vector<Prototype> prototypes(opt.prototypes);
  for (Prototype& p : prototypes) {
    const std::size_t span = opt.max_active - opt.min_active + 1;
    p.liked = DirichletOnSubset(
        rng, RandomSubset(rng, width, opt.min_active + rng.UniformIndex(span)),
        width);
    p.disliked = DirichletOnSubset(
        rng, RandomSubset(rng, width, opt.min_active + rng.UniformIndex(span)),
        width);
  }

  std::vector<User> train;
  train.reserve(opt.n_users);
  for (std::size_t i = 0; i < opt.n_users; ++i) {
    train.push_back(MakeUser(rng, prototypes, static_cast<UserId>(i), opt));
  }
  SyntheticDataset out;
  out.heldout.reserve(opt.n_heldout);
  for (std::size_t i = 0; i < opt.n_heldout; ++i) {
    out.heldout.push_back(MakeUser(
        rng, prototypes, static_cast<UserId>(opt.n_users + i), opt));
  }

  std::vector<CatalogEntry> entries(opt.n_results);
  for (std::size_t b = 0; b < opt.n_results; ++b) {
    CatalogEntry& e = entries[b];
    e.id = static_cast<ResultId>(b);
    e.external_id = static_cast<std::int64_t>(b);
    e.genres.assign(width, 0);
    for (std::size_t g : BernoulliSubset(rng, width, opt.genre_probability)) {
      e.genres[g] = 1;
    }
  }
  out.train = TrainingSet(std::move(train));
  out.catalog = Catalog(std::move(entries));
  return out;
}

SyntheticDataset SynthesizeDataset(std::size_t n_users, std::size_t n_results,
                                   std::size_t d, std::uint64_t seed) {
  SyntheticOptions opt;
  opt.n_users = n_users;
  opt.n_heldout = std::max<std::size_t>(1, n_users / 4);
  opt.n_results = n_results;
  opt.d = d;
  opt.max_active = std::min(opt.max_active, std::max<std::size_t>(1, d / 2));
  opt.min_active = std::min(opt.min_active, opt.max_active);
  opt.seed = seed;
  return SynthesizeDataset(opt);
}

ClusterReport ClusterAround(const TrainingSet& train, std::size_t center,
                            std::size_t m) {
  if (m < 1 || m > train.size()) {
    throw InvalidArgument("cluster size m = " + std::to_string(m) +
                          " outside [1, " + std::to_string(train.size()) + "]");
  }
  if (center >= train.size()) {
    throw InvalidArgument("cluster center index out of range");
  }
  const std::vector<double> dist = Distances(train, center);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  auto closer = [&](std::size_t a, std::size_t b) {
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    if ((a == center) != (b == center)) return a == center;
    return train[a].id < train[b].id;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m),
                    order.end(), closer);
  order.resize(m);

  ClusterReport report;
  report.center_user_id = train[center].id;
  for (std::size_t i : order) report.member_ids.push_back(train[i].id);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      report.diameter =
          std::max(report.diameter, L1Distance(train[order[i]].feature,
                                               train[order[j]].feature));
    }
  }
  return report;
}

std::vector<ClusterReport> ClusterDiameters(const TrainingSet& train,
                                            std::size_t sample_size,
                                            std::size_t m, std::uint64_t seed) {
  if (m < 1 || m > train.size()) {
    throw InvalidArgument("cluster size m = " + std::to_string(m) +
                          " outside [1, " + std::to_string(train.size()) + "]");
  }
  Rng rng(seed);
  std::vector<ClusterReport> out;
  out.reserve(sample_size);
  for (std::size_t i = 0; i < sample_size; ++i) {
    out.push_back(ClusterAround(train, rng.UniformIndex(train.size()), m));
  }
  return out;
}

double DuplicationMeasure(const ScoringModel& model,
                          const ClusterReport& cluster, std::size_t top_n,
                          const TrainingSet& train, const Catalog& catalog) {
  if (cluster.member_ids.empty()) {
    throw InvalidArgument("DuplicationMeasure: empty cluster");
  }
  std::unordered_map<UserId, std::size_t> index;
  for (std::size_t i = 0; i < train.size(); ++i) index[train[i].id] = i;
  std::unordered_set<ResultId> distinct;
  for (UserId id : cluster.member_ids) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw InvalidArgument("DuplicationMeasure: unknown user " +
                            std::to_string(id));
    }
    for (ResultId b :
         TopRResults(model, train[it->second].feature, catalog, top_n)) {
      distinct.insert(b);
    }
  }
  const double total =
      static_cast<double>(cluster.member_ids.size() * top_n);
  return 1.0 - static_cast<double>(distinct.size()) / total;
}

double RatingGap(const ScoringModel& model, const FeatureVector& first,
                 const FeatureVector& second, const Catalog& catalog,
                 std::size_t top_n) {
  const std::vector<double> scores = model.ScoreAll(first);
  const double own = MeanScore(scores, TopRFromScores(scores, top_n));
  const double other =
      MeanScore(scores, TopRResults(model, second, catalog, top_n));
  return own - other;
}

std::vector<NeighborGap> NeighborRatingGap(const ScoringModel& model,
                                           const TrainingSet& train,
                                           const Catalog& catalog,
                                           double max_l1, std::size_t top_n,
                                           std::size_t pairs,
                                           std::uint64_t seed) {
  std::vector<NeighborGap> out;
  if (train.size() < 2 || pairs == 0) return out;
  Rng rng(seed);
  const std::size_t attempts = 20 * pairs;
  for (std::size_t a = 0; a < attempts && out.size() < pairs; ++a) {
    const std::size_t first = rng.UniformIndex(train.size());
    const std::vector<double> dist = Distances(train, first);
    std::vector<std::size_t> near;
    for (std::size_t j = 0; j < train.size(); ++j) {
      if (j != first && dist[j] <= max_l1) near.push_back(j);
    }
    if (near.empty()) continue;
    const std::size_t second = near[rng.UniformIndex(near.size())];
    out.push_back(NeighborGap{
        train[first].id, train[second].id, dist[second],
        RatingGap(model, train[first].feature, train[second].feature, catalog,
                  top_n)});
  }
  return out;
}

std::vector<double> TopRatingDistribution(const ScoringModel& model,
                                          std::span<const User> users,
                                          const Catalog& catalog) {
  if (model.result_count() != catalog.size()) {
    throw DimensionMismatch("TopRatingDistribution: model/catalog mismatch");
  }
  std::vector<double> best;
  best.reserve(users.size());
  for (const User& u : users) {
    const std::vector<double> scores = model.ScoreAll(u.feature);
    best.push_back(*std::max_element(scores.begin(), scores.end()));
  }
  std::sort(best.begin(), best.end());
  return best;
}

void WriteClusterCsv(std::ostream& out,
                     const std::vector<ClusterReport>& clusters,
                     const std::vector<double>& duplication) {
  out << "center_user_id,m,diameter,duplication,member_ids\n";
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const ClusterReport& c = clusters[i];
    out << c.center_user_id << ',' << c.member_ids.size() << ','
        << FormatDouble(c.diameter) << ','
        << (i < duplication.size() ? FormatDouble(duplication[i]) : "") << ',';
    for (std::size_t j = 0; j < c.member_ids.size(); ++j) {
      out << (j ? ";" : "") << c.member_ids[j];
    }
    out << '\n';
  }
}

void WriteNeighborGapCsv(std::ostream& out,
                         const std::vector<NeighborGap>& gaps) {
  out << "first_user_id,second_user_id,l1_distance,rating_gap\n";
  for (const NeighborGap& g : gaps) {
    out << g.first << ',' << g.second << ',' << FormatDouble(g.distance) << ','
        << FormatDouble(g.gap) << '\n';
  }
}

void WriteCdfCsv(std::ostream& out, const std::vector<double>& sorted_values) {
  out << "x,y\n";
  const double n = static_cast<double>(sorted_values.size());
  for (std::size_t i = 0; i < sorted_values.size(); ++i) {
    out << FormatDouble(sorted_values[i]) << ','
        << FormatDouble(static_cast<double>(i + 1) / n) << '\n';
  }
}

}  // namespace msrec
