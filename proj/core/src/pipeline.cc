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

#include "msrec/pipeline.h"

#include <algorithm>
#include <string>

#include "msrec/status.h"

namespace msrec {
namespace {

constexpr std::uint64_t kAgentStream = 1;
constexpr std::uint64_t kServerStream = 2;

double BestScore(const std::vector<double>& scores) {
  return *std::max_element(scores.begin(), scores.end());
}

}  // namespace

std::string_view MechanismName(Mechanism m) {
  switch (m) {
    case Mechanism::kNoPost:
      return "nopost";
    case Mechanism::kNoPostRealUser:
      return "nopost-realuser";
    case Mechanism::kIgnoreSignal:
      return "ig-sig";
    case Mechanism::kSatRealUser:
      return "sat-realuser";
    case Mechanism::kSat:
      return "sat";
    case Mechanism::kAvgRealUser:
      return "avg-realuser";
    case Mechanism::kAvg:
      return "avg";
  }
  return "unknown";
}

std::optional<Mechanism> ParseMechanism(std::string_view name) {
  for (Mechanism m : kAllMechanisms) {
    if (MechanismName(m) == name) return m;
  }
  return std::nullopt;
}

bool UsesPosterior(Mechanism m) {
  return m != Mechanism::kNoPost && m != Mechanism::kNoPostRealUser;
}

PosteriorKind MechanismPosterior(Mechanism m) {
  switch (m) {
    case Mechanism::kIgnoreSignal:
      return PosteriorKind::kUniform;
    case Mechanism::kSat:
    case Mechanism::kAvg:
      return PosteriorKind::kCap;
    case Mechanism::kSatRealUser:
    case Mechanism::kAvgRealUser:
      return PosteriorKind::kRealUser;
    default:
      throw InvalidArgument(std::string(MechanismName(m)) +
                            " does not sample a posterior");
  }
}

UtilityKind MechanismUtility(Mechanism m) {
  return m == Mechanism::kAvg || m == Mechanism::kAvgRealUser
             ? UtilityKind::kAverage
             : UtilityKind::kSaturating;
}

void AlgorithmSpec::Validate(std::size_t catalog_size) const {
  noise.Validate();
  if (UsesPosterior(mechanism)) {
    selection.Validate(catalog_size);
  } else if (selection.k < 1 || selection.k > catalog_size) {
    throw InvalidArgument("AlgorithmSpec: k must lie in [1, |B|]");
  }
  if (BuildsFrugal() && (frugal.q2 < 1 || frugal.p < 1)) {
    throw InvalidArgument("AlgorithmSpec: frugal q2 and p must be >= 1");
  }
  if (BuildsFrugal() && frugal.p > frugal.q2) {
    throw InvalidArgument("AlgorithmSpec: frugal p = " +
                          std::to_string(frugal.p) + " exceeds q2 = " +
                          std::to_string(frugal.q2));
  }
}

std::vector<ResultId> RunNoPost(const ScoringModel& model,
                                std::span<const double> signal,
                                const Catalog& catalog, std::size_t k) {
  return TopRResults(model, signal, catalog, k);
}

std::size_t NearestTrainingUser(const TrainingSet& train,
                                std::span<const double> signal) {
  if (train.empty()) {
    throw InvalidArgument("NearestTrainingUser: empty training set");
  }
  std::size_t best = 0;
  double best_distance = L1Distance(signal, train[0].feature.values());
  for (std::size_t i = 1; i < train.size(); ++i) {
    const double dist = L1Distance(signal, train[i].feature.values());
    if (dist < best_distance ||
        (dist == best_distance && train[i].id < train[best].id)) {
      best = i;
      best_distance = dist;
    }
  }
  return best;
}

std::vector<ResultId> RunNoPostRealUser(const ScoringModel& model,
                                        const TrainingSet& train,
                                        std::span<const double> signal,
                                        const Catalog& catalog,
                                        std::size_t k) {
  const User& nearest = train[NearestTrainingUser(train, signal)];
  return TopRResults(model, nearest.feature, catalog, k);
}

ServerResponse RunPosteriorAlgorithm(const AlgorithmSpec& spec,
                                     const ScoringModel& model,
                                     const TrainingSet& train,
                                     const Catalog& catalog,
                                     std::span<const double> signal,
                                     RandomSource& rng) {
  if (!UsesPosterior(spec.mechanism)) {
    throw InvalidArgument(std::string(MechanismName(spec.mechanism)) +
                          " is not a posterior mechanism");
  }
  spec.Validate(catalog.size());
  const auto posterior = MakePosterior(MechanismPosterior(spec.mechanism),
                                       train, signal, spec.noise.eta);

  std::vector<FeatureVector> samples;
  samples.reserve(spec.selection.q1);
  for (std::size_t i = 0; i < spec.selection.q1; ++i) {
    samples.push_back(posterior->Sample(rng));
  }
  const SampleBank bank = SampleBank::Build(model, samples, spec.selection.r);

  ServerResponse out;
  out.ids = GreedySelect(bank, spec.selection,
                         MechanismUtility(spec.mechanism))
                .ids;
  if (spec.BuildsFrugal()) {
    out.frugal = BuildFrugal(model, *posterior, out.ids, spec.frugal.q2,
                             spec.frugal.p, rng);
  }
  return out;
}

ServerResponse ServeSignal(const AlgorithmSpec& spec,
                           const ScoringModel& model, const TrainingSet& train,
                           const Catalog& catalog,
                           std::span<const double> signal, RandomSource& rng) {
  spec.Validate(catalog.size());
  switch (spec.mechanism) {
    case Mechanism::kNoPost:
      return {RunNoPost(model, signal, catalog, spec.selection.k), {}};
    case Mechanism::kNoPostRealUser:
      return {RunNoPostRealUser(model, train, signal, catalog,
                                spec.selection.k),
              {}};
    default:
      return RunPosteriorAlgorithm(spec, model, train, catalog, signal, rng);
  }
}

double DisutilityIntermediate(const ScoringModel& model,
                              const FeatureVector& f_a, const Catalog& catalog,
                              std::span<const ResultId> selected) {
  if (selected.empty()) {
    throw InvalidArgument("DisutilityIntermediate: empty result set");
  }
  const std::vector<double> scores = model.ScoreAll(f_a);
  double best_selected = kMinScore;
  for (ResultId b : selected) {
    if (!catalog.contains(b)) {
      throw InvalidArgument("DisutilityIntermediate: unknown result id " +
                            std::to_string(b));
    }
    best_selected = std::max(best_selected, scores[static_cast<std::size_t>(b)]);
  }
  return BestScore(scores) - best_selected;
}

double DisutilityFinal(const ScoringModel& model, const FeatureVector& f_a,
                       const Catalog& catalog, ResultId final_pick) {
  if (!catalog.contains(final_pick)) {
    throw InvalidArgument("DisutilityFinal: unknown result id " +
                          std::to_string(final_pick));
  }
  const std::vector<double> scores = model.ScoreAll(f_a);
  return BestScore(scores) - scores[static_cast<std::size_t>(final_pick)];
}

ResultId AgentChoose(const ServerResponse& response, const ScoringModel& model,
                     const FeatureVector& f_a) {
  if (response.ids.empty()) {
    throw InvalidArgument("AgentChoose: server returned no results");
  }
  if (response.frugal) return ClientSelect(*response.frugal, f_a).result;
  ResultId best = response.ids.front();
  double best_score = model.Score(f_a, best);
  for (ResultId b : response.ids) {
    const double s = model.Score(f_a, b);
    if (s > best_score) {
      best = b;
      best_score = s;
    }
  }
  return best;
}

TrialRecord CompleteTrial(const AlgorithmSpec& spec, const ScoringModel& model,
                          const Catalog& catalog, const User& user,
                          const ServerResponse& response) {
  TrialRecord rec;
  rec.user_id = user.id;
  rec.eta = spec.noise.eta;
  rec.algorithm = std::string(MechanismName(spec.mechanism));
  rec.k = spec.selection.k;
  rec.q1 = UsesPosterior(spec.mechanism) ? spec.selection.q1 : 0;
  rec.selected = response.ids;
  rec.final_pick = AgentChoose(response, model, user.feature);

  const std::vector<double> scores = model.ScoreAll(user.feature);
  const double best = BestScore(scores);
  double best_selected = kMinScore;
  for (ResultId b : rec.selected) {
    if (!catalog.contains(b)) {
      throw InvalidArgument("CompleteTrial: unknown result id " +
                            std::to_string(b));
    }
    best_selected = std::max(best_selected, scores[static_cast<std::size_t>(b)]);
  }
  rec.final_score = scores[static_cast<std::size_t>(rec.final_pick)];
  rec.d_i = best - best_selected;
  rec.d_f = best - rec.final_score;
  return rec;
}

std::uint64_t AgentStreamSeed(std::uint64_t trial_seed) {
  return DeriveSeed(trial_seed, kAgentStream);
}

std::uint64_t ServerStreamSeed(std::uint64_t trial_seed) {
  return DeriveSeed(trial_seed, kServerStream);
}

TrialRecord RunTrial(const AlgorithmSpec& spec, const ScoringModel& model,
                     const TrainingSet& train, const Catalog& catalog,
                     const User& user, RandomSource& agent_rng,
                     RandomSource& server_rng) {
  const std::vector<double> signal =
      LaplaceMechanism(user.feature, spec.noise, agent_rng);
  const ServerResponse response =
      ServeSignal(spec, model, train, catalog, signal, server_rng);
  return CompleteTrial(spec, model, catalog, user, response);
}

TrialRecord RunTrial(const AlgorithmSpec& spec, const ScoringModel& model,
                     const TrainingSet& train, const Catalog& catalog,
                     const User& user, std::uint64_t trial_seed) {
  Rng agent(AgentStreamSeed(trial_seed));
  Rng server(ServerStreamSeed(trial_seed));
  TrialRecord rec =
      RunTrial(spec, model, train, catalog, user, agent, server);
  rec.seed = trial_seed;
  return rec;
}

}  // namespace msrec
