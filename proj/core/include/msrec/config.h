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

// Experiment configuration, read from one JSON document:
//
//   {
//     "dataset": {"synthetic": {"n_users": 2000, "n_heldout": 500,
//                               "n_results": 300, "d": 38, "seed": 7}},
//     // or {"train": "train.csv", "heldout": "heldout.csv",
//     //     "catalog": "catalog.csv", "normalized": true}
//     "algorithms": ["nopost", "nopost-realuser", "ig-sig", "sat-realuser"],
//     "eta": [0.03, 0.05, 0.1, 0.15, 0.2],
//     "k": [1, 2, 3, 5],
//     "q1": [25],            // a number or a list
//     "q2": 200, "p": 20, "r": 100, "t": 1, "frugal": true,
//     "trials": 1500, "seed": 1, "out": "results", "threads": 0
//   }
//
// Every key is optional; missing keys keep the defaults below.

#ifndef MSREC_CONFIG_H_
#define MSREC_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "msrec/analytics.h"
#include "msrec/pipeline.h"

namespace msrec {

struct DatasetSource {
  bool synthetic = true;
  SyntheticOptions synthetic_options;
  std::string train_path;
  std::string heldout_path;
  std::string catalog_path;
  bool normalized = true;
};

struct ExperimentConfig {
  DatasetSource dataset;
  std::vector<Mechanism> algorithms = {
      Mechanism::kNoPost, Mechanism::kNoPostRealUser,
      Mechanism::kIgnoreSignal, Mechanism::kSatRealUser};
  std::vector<double> eta_grid = {0.03, 0.05, 0.1, 0.15, 0.2};
  std::vector<std::size_t> k_grid = {1, 2, 3, 5};
  std::vector<std::size_t> q1_grid = {25};
  std::size_t q2 = kDefaultFrugalSamples;
  std::size_t p = kDefaultFrugalRank;
  std::size_t r = 100;
  std::size_t t = 1;
  bool frugal = true;
  std::size_t trials = 1500;
  std::uint64_t seed = 1;
  std::string out_dir = "results";
  // Worker threads; 0 means std::thread::hardware_concurrency().
  std::size_t threads = 0;

  // Throws InvalidArgument naming the offending key.
  void Validate() const;
};

// Throws InvalidArgument on unknown algorithms, wrong types or bad JSON.
ExperimentConfig ParseExperimentConfig(const std::string& json_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);
std::string ExperimentConfigToJson(const ExperimentConfig& config);

}  // namespace msrec

#endif  // MSREC_CONFIG_H_
