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

#include "msrec/config.h"

#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>
#include <string_view>

#include "msrec/status.h"

namespace msrec {
namespace {

using nlohmann::json;

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
  }
}

template <typename T>
void ReadScalarOrList(const json& j, const char* key, std::vector<T>& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  try {
    out = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
  }
}

// Typos would otherwise fall back to defaults without a word.
void RejectUnknownKeys(const json& j, std::string_view where,
                       std::initializer_list<std::string_view> known) {
  if (!j.is_object()) {
    throw InvalidArgument("config: '" + std::string(where) +
                          "' must be a JSON object");
  }
  for (const auto& item : j.items()) {
    bool found = false;
    for (std::string_view k : known) found = found || item.key() == k;
    if (!found) {
      throw InvalidArgument("config: unknown key '" + item.key() + "' in " +
                            std::string(where));
    }
  }
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (algorithms.empty()) throw InvalidArgument("config: 'algorithms' is empty");
  if (eta_grid.empty()) throw InvalidArgument("config: 'eta' is empty");
  if (k_grid.empty()) throw InvalidArgument("config: 'k' is empty");
  if (q1_grid.empty()) throw InvalidArgument("config: 'q1' is empty");
  for (double eta : eta_grid) {
    if (!(eta > 0.0)) throw InvalidArgument("config: every 'eta' must be > 0");
  }
  for (std::size_t k : k_grid) {
    if (k < 1) throw InvalidArgument("config: every 'k' must be >= 1");
  }
  for (std::size_t q1 : q1_grid) {
    if (q1 < 1) throw InvalidArgument("config: every 'q1' must be >= 1");
  }
  if (trials < 1) throw InvalidArgument("config: 'trials' must be >= 1");
  if (t < 1) throw InvalidArgument("config: 't' must be >= 1");
  if (r < 1) throw InvalidArgument("config: 'r' must be >= 1");
  if (frugal && (q2 < 1 || p < 1)) {
    throw InvalidArgument("config: 'q2' and 'p' must be >= 1");
  }
  if (!dataset.synthetic &&
      (dataset.train_path.empty() || dataset.heldout_path.empty() ||
       dataset.catalog_path.empty())) {
    throw InvalidArgument(
        "config: a file dataset needs 'train', 'heldout' and 'catalog'");
  }
}

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");

  RejectUnknownKeys(j, "the top level",
                    {"dataset", "algorithms", "eta", "k", "q1", "q2", "p",
                     "r", "t", "frugal", "trials", "seed", "out", "threads"});
  ExperimentConfig c;
  if (j.contains("dataset")) {
    const json& ds = j.at("dataset");
    if (ds.is_object() && ds.contains("synthetic")) {
      RejectUnknownKeys(ds, "dataset", {"synthetic"});
      const json& s = ds.at("synthetic");
      RejectUnknownKeys(s, "dataset.synthetic",
                        {"n_users", "n_heldout", "n_results", "d",
                         "prototypes", "min_active", "max_active",
                         "max_jitter", "jitter_density", "genre_probability",
                         "seed"});
      SyntheticOptions& o = c.dataset.synthetic_options;
      c.dataset.synthetic = true;
      Read(s, "n_users", o.n_users);
      Read(s, "n_heldout", o.n_heldout);
      Read(s, "n_results", o.n_results);
      Read(s, "d", o.d);
      Read(s, "prototypes", o.prototypes);
      Read(s, "min_active", o.min_active);
      Read(s, "max_active", o.max_active);
      Read(s, "max_jitter", o.max_jitter);
      Read(s, "jitter_density", o.jitter_density);
      Read(s, "genre_probability", o.genre_probability);
      Read(s, "seed", o.seed);
    } else {
      RejectUnknownKeys(ds, "dataset",
                        {"train", "heldout", "catalog", "normalized"});
      c.dataset.synthetic = false;
      Read(ds, "train", c.dataset.train_path);
      Read(ds, "heldout", c.dataset.heldout_path);
      Read(ds, "catalog", c.dataset.catalog_path);
      Read(ds, "normalized", c.dataset.normalized);
    }
  }
  if (j.contains("algorithms")) {
    std::vector<std::string> names;
    ReadScalarOrList(j, "algorithms", names);
    c.algorithms.clear();
    for (const std::string& n : names) {
      auto m = ParseMechanism(n);
      if (!m) throw InvalidArgument("config: unknown algorithm '" + n + "'");
      c.algorithms.push_back(*m);
    }
  }
  ReadScalarOrList(j, "eta", c.eta_grid);
  ReadScalarOrList(j, "k", c.k_grid);
  ReadScalarOrList(j, "q1", c.q1_grid);
  Read(j, "q2", c.q2);
  Read(j, "p", c.p);
  Read(j, "r", c.r);
  Read(j, "t", c.t);
  Read(j, "frugal", c.frugal);
  Read(j, "trials", c.trials);
  Read(j, "seed", c.seed);
  Read(j, "out", c.out_dir);
  Read(j, "threads", c.threads);
  c.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseExperimentConfig(text.str());
}

std::string ExperimentConfigToJson(const ExperimentConfig& c) {
  json j;
  if (c.dataset.synthetic) {
    const SyntheticOptions& o = c.dataset.synthetic_options;
    j["dataset"]["synthetic"] = {
        {"n_users", o.n_users},       {"n_heldout", o.n_heldout},
        {"n_results", o.n_results},   {"d", o.d},
        {"prototypes", o.prototypes}, {"min_active", o.min_active},
        {"max_active", o.max_active}, {"max_jitter", o.max_jitter},
        {"jitter_density", o.jitter_density},
        {"genre_probability", o.genre_probability},
        {"seed", o.seed}};
  } else {
    j["dataset"] = {{"train", c.dataset.train_path},
                    {"heldout", c.dataset.heldout_path},
                    {"catalog", c.dataset.catalog_path},
                    {"normalized", c.dataset.normalized}};
  }
  std::vector<std::string> names;
  for (Mechanism m : c.algorithms) names.emplace_back(MechanismName(m));
  j["algorithms"] = names;
  j["eta"] = c.eta_grid;
  j["k"] = c.k_grid;
  j["q1"] = c.q1_grid;
  j["q2"] = c.q2;
  j["p"] = c.p;
  j["r"] = c.r;
  j["t"] = c.t;
  j["frugal"] = c.frugal;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["out"] = c.out_dir;
  j["threads"] = c.threads;
  return j.dump(2);
}

}  // namespace msrec
