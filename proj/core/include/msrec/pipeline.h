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

// End-to-end multi-selection mechanisms and their evaluation.
//
// A trial runs the architecture once: the agent noises the user's feature,
// the server answers the signal with k results (and, for posterior-based
// mechanisms, a frugal model), and the agent picks one result locally.
//
//   mechanism        posterior   utility     frugal model
//   nopost           -           top-k       no
//   nopost-realuser  -           top-k       no
//   ig-sig           uniform     sat         yes
//   sat-realuser     realuser    sat         yes
//   sat              cap         sat         yes
//   avg-realuser     realuser    avg         yes
//   avg              cap         avg         yes
//
// Randomness: a trial seed yields two independent substreams, one for the
// agent (Laplace noise, d draws) and one for the server (q1 posterior draws,
// then q2 frugal draws). Adding draws to one side never shifts the other.

#ifndef MSREC_PIPELINE_H_
#define MSREC_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "msrec/frugal.h"
#include "msrec/posterior.h"
#include "msrec/privacy.h"
#include "msrec/random.h"
#include "msrec/scoring.h"
#include "msrec/selection.h"
#include "msrec/types.h"

namespace msrec {

enum class Mechanism {
  kNoPost,
  kNoPostRealUser,
  kIgnoreSignal,
  kSatRealUser,
  kSat,
  kAvgRealUser,
  kAvg,
};

inline constexpr Mechanism kAllMechanisms[] = {
    Mechanism::kNoPost,      Mechanism::kNoPostRealUser,
    Mechanism::kIgnoreSignal, Mechanism::kSatRealUser,
    Mechanism::kSat,         Mechanism::kAvgRealUser,
    Mechanism::kAvg};

std::string_view MechanismName(Mechanism m);
std::optional<Mechanism> ParseMechanism(std::string_view name);

bool UsesPosterior(Mechanism m);
// Valid only when UsesPosterior(m).
PosteriorKind MechanismPosterior(Mechanism m);
UtilityKind MechanismUtility(Mechanism m);

struct FrugalSettings {
  bool enabled = true;
  std::size_t q2 = kDefaultFrugalSamples;
  std::size_t p = kDefaultFrugalRank;
};

struct AlgorithmSpec {
  Mechanism mechanism = Mechanism::kSatRealUser;
  SelectionParams selection;
  NoiseParams noise;
  FrugalSettings frugal;

  // A frugal model is built only for posterior mechanisms with it enabled.
  bool BuildsFrugal() const {
    return frugal.enabled && UsesPosterior(mechanism);
  }
  // Throws InvalidArgument for parameters inconsistent with the catalog.
  void Validate(std::size_t catalog_size) const;
};

struct ServerResponse {
  std::vector<ResultId> ids;
  std::optional<FrugalModel> frugal;
};

struct TrialRecord {
  std::uint64_t trial_index = 0;
  UserId user_id = 0;
  std::uint64_t seed = 0;
  double eta = 0.0;
  std::string algorithm;
  std::size_t k = 0;
  std::size_t q1 = 0;
  std::vector<ResultId> selected;
  ResultId final_pick = -1;
  double d_i = 0.0;
  double d_f = 0.0;
  // u(f_a, b_f).
  double final_score = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

// Top-k of the raw signal, best first.
std::vector<ResultId> RunNoPost(const ScoringModel& model,
                                std::span<const double> signal,
                                const Catalog& catalog, std::size_t k);

// Index of the training user closest to the signal in l1; ties go to the
// smaller user id. Throws InvalidArgument on an empty set.
std::size_t NearestTrainingUser(const TrainingSet& train,
                                std::span<const double> signal);

std::vector<ResultId> RunNoPostRealUser(const ScoringModel& model,
                                        const TrainingSet& train,
                                        std::span<const double> signal,
                                        const Catalog& catalog, std::size_t k);

// Posterior mechanisms: q1 draws into a bank, greedy selection, then the
// frugal model from q2 fresh draws of the same posterior.
ServerResponse RunPosteriorAlgorithm(const AlgorithmSpec& spec,
                                     const ScoringModel& model,
                                     const TrainingSet& train,
                                     const Catalog& catalog,
                                     std::span<const double> signal,
                                     RandomSource& rng);

// Dispatches any mechanism. This is everything the server does.
ServerResponse ServeSignal(const AlgorithmSpec& spec,
                           const ScoringModel& model, const TrainingSet& train,
                           const Catalog& catalog,
                           std::span<const double> signal, RandomSource& rng);

// max_b u(f_a, b) - max_{b in B_i} u(f_a, b). Throws on empty B_i.
double DisutilityIntermediate(const ScoringModel& model,
                              const FeatureVector& f_a, const Catalog& catalog,
                              std::span<const ResultId> selected);

// max_b u(f_a, b) - u(f_a, b_f).
double DisutilityFinal(const ScoringModel& model, const FeatureVector& f_a,
                       const Catalog& catalog, ResultId final_pick);

// The agent's local pick: via the frugal model when present, otherwise the
// ground-truth best of the returned results (earlier position on ties).
ResultId AgentChoose(const ServerResponse& response, const ScoringModel& model,
                     const FeatureVector& f_a);

// Evaluates a response for the true user and fills every record field
// except trial_index, seed and eta.
TrialRecord CompleteTrial(const AlgorithmSpec& spec, const ScoringModel& model,
                          const Catalog& catalog, const User& user,
                          const ServerResponse& response);

// Substream seeds inside one trial.
std::uint64_t AgentStreamSeed(std::uint64_t trial_seed);
std::uint64_t ServerStreamSeed(std::uint64_t trial_seed);

// One full trial with explicit random sources. `agent_rng` drives the
// Laplace noise, `server_rng` the posterior draws.
TrialRecord RunTrial(const AlgorithmSpec& spec, const ScoringModel& model,
                     const TrainingSet& train, const Catalog& catalog,
                     const User& user, RandomSource& agent_rng,
                     RandomSource& server_rng);

// One full trial from a trial seed (both substreams derived from it).
TrialRecord RunTrial(const AlgorithmSpec& spec, const ScoringModel& model,
                     const TrainingSet& train, const Catalog& catalog,
                     const User& user, std::uint64_t trial_seed);

}  // namespace msrec

#endif  // MSREC_PIPELINE_H_
