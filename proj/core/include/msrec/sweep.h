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

// Monte-Carlo experiment sweeps.
//
// A sweep runs every cell of algorithms x eta x k x q1 (q1 only varies for
// posterior mechanisms) for `trials` trials. Trial i of every cell uses the
// same trial seed DeriveSeed(master, i), hence the same held-out user and
// the same Laplace draws: comparisons across algorithms and eta are paired.
// Inside a cell the saturation level is min(t, k).
//
// Output files (UTF-8, LF, header row):
//   trials.csv   cell,trial_index,algorithm,eta,k,q1,user_id,seed,selected,
//                final_pick,d_i,d_f,final_score
//   summary.csv  algorithm,eta,k,q1,q2,p,r,t,trials,mean_d_i,std_d_i,
//                mean_d_f,std_d_f,mean_utility
// `selected` is the ';'-joined result ids in selection order. Standard
// deviations use the n - 1 denominator (0 for a single trial).

#ifndef MSREC_SWEEP_H_
#define MSREC_SWEEP_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msrec/config.h"
#include "msrec/pipeline.h"
#include "msrec/scoring.h"
#include "msrec/types.h"

namespace msrec {

struct SweepCell {
  AlgorithmSpec spec;
};

struct SummaryRow {
  std::string algorithm;
  double eta = 0.0;
  std::size_t k = 0;
  std::size_t q1 = 0;
  std::size_t q2 = 0;
  std::size_t p = 0;
  std::size_t r = 0;
  std::size_t t = 0;
  std::size_t trials = 0;
  double mean_d_i = 0.0;
  double std_d_i = 0.0;
  double mean_d_f = 0.0;
  double std_d_f = 0.0;
  double mean_utility = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  // records[c][i] is trial i of cell c.
  std::vector<std::vector<TrialRecord>> records;
  std::vector<SummaryRow> summary;
};

// A loaded dataset: public training users, the catalog, evaluation users.
struct Dataset {
  TrainingSet train;
  Catalog catalog;
  std::vector<User> heldout;
};

Dataset LoadDataset(const DatasetSource& source);

// The cartesian cell list in output order.
std::vector<SweepCell> EnumerateCells(const ExperimentConfig& config,
                                      std::size_t catalog_size);

// Trial seed and evaluation-user index of trial i.
std::uint64_t TrialSeed(std::uint64_t master_seed, std::uint64_t trial_index);
std::size_t TrialUserIndex(std::uint64_t trial_seed, std::size_t n_users);

SummaryRow Summarize(const AlgorithmSpec& spec,
                     const std::vector<TrialRecord>& records);

// Runs the sweep on a worker pool. The result does not depend on the number
// of threads or on completion order. `progress`, when set, is called from
// worker threads with the number of finished trials.
SweepResult RunSweep(const ExperimentConfig& config, const Dataset& dataset,
                     const ScoringModel& model,
                     const std::function<void(std::size_t)>& progress = {});

void WriteTrialsCsv(std::ostream& out, const SweepResult& result);
void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> ReadSummaryCsv(std::istream& in);

// Writes trials.csv, summary.csv and config.json into config.out_dir.
void WriteSweepOutputs(const ExperimentConfig& config,
                       const SweepResult& result);

struct KTarget {
  std::string algorithm;
  double eta = 0.0;
  std::size_t q1 = 0;
  // Smallest k of the grid with mean_d_i <= target; empty when unattained.
  std::optional<std::size_t> k;
};

// Groups rows by (algorithm, eta, q1) in first-appearance order.
std::vector<KTarget> KForTargetDisutility(const std::vector<SummaryRow>& rows,
                                          double target_d_i);

// Plot series files written by `msrec plotdata`; returns the paths written.
std::vector<std::string> WritePlotData(const std::vector<SummaryRow>& rows,
                                       const std::string& out_dir,
                                       std::optional<double> target_d_i);

}  // namespace msrec

#endif  // MSREC_SWEEP_H_
