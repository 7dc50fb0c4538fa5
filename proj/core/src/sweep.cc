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

#include "msrec/sweep.h"

#include <glog/logging.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "msrec/dataset_io.h"
#include "msrec/status.h"

namespace msrec {
namespace {

constexpr std::uint64_t kUserStream = 0;

std::string ShortNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments ComputeMoments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - m.mean) * (v - m.mean);
    m.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return m;
}

template <typename T>
T ParseField(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    T v{};
    if constexpr (std::is_same_v<T, double>) {
      v = std::stod(s, &used);
    } else {
      v = static_cast<T>(std::stoull(s, &used));
    }
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IngestError(std::string("summary: cannot parse ") + what +
                      " from '" + s + "'");
  }
}

void WriteSeries(const std::string& path,
                 const std::vector<std::pair<double, double>>& points) {
  WriteTextFile(path, [&](std::ostream& out) {
    out << "x,y\n";
    for (const auto& [x, y] : points) {
      out << FormatDouble(x) << ',' << FormatDouble(y) << '\n';
    }
  });
}

}  // namespace

Dataset LoadDataset(const DatasetSource& source) {
  Dataset ds;
  if (source.synthetic) {
    SyntheticDataset s = SynthesizeDataset(source.synthetic_options);
    ds.train = std::move(s.train);
    ds.catalog = std::move(s.catalog);
    ds.heldout = std::move(s.heldout);
  } else {
    const Normalization norm =
        source.normalized ? Normalization::kHalves : Normalization::kNone;
    ds.train = TrainingSet(ReadFeaturesFile(source.train_path, norm));
    ds.heldout = ReadFeaturesFile(source.heldout_path, norm);
    ds.catalog = ReadCatalogFile(source.catalog_path);
  }
  if (ds.train.empty()) throw InvalidArgument("dataset: no training users");
  if (ds.heldout.empty()) throw InvalidArgument("dataset: no held-out users");
  if (ds.catalog.empty()) throw InvalidArgument("dataset: empty catalog");
  return ds;
}

std::vector<SweepCell> EnumerateCells(const ExperimentConfig& config,
                                      std::size_t catalog_size) {
  std::vector<SweepCell> cells;
  for (Mechanism m : config.algorithms) {
    const std::vector<std::size_t> q1s =
        UsesPosterior(m) ? config.q1_grid
                         : std::vector<std::size_t>{config.q1_grid.front()};
    for (double eta : config.eta_grid) {
      for (std::size_t k : config.k_grid) {
        for (std::size_t q1 : q1s) {
          SweepCell cell;
          AlgorithmSpec& s = cell.spec;
          s.mechanism = m;
          s.noise.eta = eta;
          s.selection.k = k;
          s.selection.t = std::min(config.t, k);
          s.selection.r = std::min(config.r, catalog_size);
          s.selection.q1 = q1;
          s.frugal.enabled = config.frugal;
          s.frugal.q2 = config.q2;
          s.frugal.p = config.p;
          s.Validate(catalog_size);
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

std::uint64_t TrialSeed(std::uint64_t master_seed, std::uint64_t trial_index) {
  return DeriveSeed(master_seed, trial_index);
}

std::size_t TrialUserIndex(std::uint64_t trial_seed, std::size_t n_users) {
  Rng rng(DeriveSeed(trial_seed, kUserStream));
  return rng.UniformIndex(n_users);
}

SummaryRow Summarize(const AlgorithmSpec& spec,
                     const std::vector<TrialRecord>& records) {
  SummaryRow row;
  row.algorithm = std::string(MechanismName(spec.mechanism));
  row.eta = spec.noise.eta;
  row.k = spec.selection.k;
  const bool posterior = UsesPosterior(spec.mechanism);
  row.q1 = posterior ? spec.selection.q1 : 0;
  row.q2 = spec.BuildsFrugal() ? spec.frugal.q2 : 0;
  row.p = spec.BuildsFrugal() ? spec.frugal.p : 0;
  row.r = posterior ? spec.selection.r : 0;
  row.t = posterior ? spec.selection.t : 0;
  row.trials = records.size();
  std::vector<double> di, df, util;
  for (const TrialRecord& r : records) {
    di.push_back(r.d_i);
    df.push_back(r.d_f);
    util.push_back(r.final_score);
  }
  const Moments mi = ComputeMoments(di);
  const Moments mf = ComputeMoments(df);
  row.mean_d_i = mi.mean;
  row.std_d_i = mi.stddev;
  row.mean_d_f = mf.mean;
  row.std_d_f = mf.stddev;
  row.mean_utility = ComputeMoments(util).mean;
  return row;
}

SweepResult RunSweep(const ExperimentConfig& config, const Dataset& dataset,
                     const ScoringModel& model,
                     const std::function<void(std::size_t)>& progress) {
  config.Validate();
  SweepResult result;
  result.cells = EnumerateCells(config, dataset.catalog.size());
  const std::size_t n_cells = result.cells.size();
  const std::size_t n_trials = config.trials;
  result.records.assign(n_cells, std::vector<TrialRecord>(n_trials));

  std::vector<std::uint64_t> seeds(n_trials);
  std::vector<std::size_t> users(n_trials);
  for (std::size_t i = 0; i < n_trials; ++i) {
    seeds[i] = TrialSeed(config.seed, i);
    users[i] = TrialUserIndex(seeds[i], dataset.heldout.size());
  }

  const std::size_t total = n_cells * n_trials;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      const std::size_t c = job / n_trials;
      const std::size_t i = job % n_trials;
      try {
        TrialRecord rec =
            RunTrial(result.cells[c].spec, model, dataset.train,
                     dataset.catalog, dataset.heldout[users[i]], seeds[i]);
        rec.trial_index = i;
        result.records[c][i] = std::move(rec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) progress(finished);
    }
  };

  std::size_t threads = config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, total));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t c = 0; c < n_cells; ++c) {
    result.summary.push_back(Summarize(result.cells[c].spec, result.records[c]));
  }
  return result;
}

void WriteTrialsCsv(std::ostream& out, const SweepResult& result) {
  out << "cell,trial_index,algorithm,eta,k,q1,user_id,seed,selected,"
         "final_pick,d_i,d_f,final_score\n";
  for (std::size_t c = 0; c < result.records.size(); ++c) {
    for (const TrialRecord& r : result.records[c]) {
      out << c << ',' << r.trial_index << ',' << r.algorithm << ','
          << FormatDouble(r.eta) << ',' << r.k << ',' << r.q1 << ','
          << r.user_id << ',' << r.seed << ',';
      for (std::size_t j = 0; j < r.selected.size(); ++j) {
        out << (j ? ";" : "") << r.selected[j];
      }
      out << ',' << r.final_pick << ',' << FormatDouble(r.d_i) << ','
          << FormatDouble(r.d_f) << ',' << FormatDouble(r.final_score) << '\n';
    }
  }
}

void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "algorithm,eta,k,q1,q2,p,r,t,trials,mean_d_i,std_d_i,mean_d_f,"
         "std_d_f,mean_utility\n";
  for (const SummaryRow& s : rows) {
    out << s.algorithm << ',' << FormatDouble(s.eta) << ',' << s.k << ','
        << s.q1 << ',' << s.q2 << ',' << s.p << ',' << s.r << ',' << s.t << ','
        << s.trials << ',' << FormatDouble(s.mean_d_i) << ','
        << FormatDouble(s.std_d_i) << ',' << FormatDouble(s.mean_d_f) << ','
        << FormatDouble(s.std_d_f) << ',' << FormatDouble(s.mean_utility)
        << '\n';
  }
}

std::vector<SummaryRow> ReadSummaryCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("algorithm,eta,k", 0) != 0) {
    throw IngestError("summary: missing or unexpected header");
  }
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 14) {
      throw IngestError("summary: expected 14 fields, got " +
                        std::to_string(f.size()));
    }
    SummaryRow s;
    s.algorithm = f[0];
    s.eta = ParseField<double>(f[1], "eta");
    s.k = ParseField<std::size_t>(f[2], "k");
    s.q1 = ParseField<std::size_t>(f[3], "q1");
    s.q2 = ParseField<std::size_t>(f[4], "q2");
    s.p = ParseField<std::size_t>(f[5], "p");
    s.r = ParseField<std::size_t>(f[6], "r");
    s.t = ParseField<std::size_t>(f[7], "t");
    s.trials = ParseField<std::size_t>(f[8], "trials");
    s.mean_d_i = ParseField<double>(f[9], "mean_d_i");
    s.std_d_i = ParseField<double>(f[10], "std_d_i");
    s.mean_d_f = ParseField<double>(f[11], "mean_d_f");
    s.std_d_f = ParseField<double>(f[12], "std_d_f");
    s.mean_utility = ParseField<double>(f[13], "mean_utility");
    rows.push_back(std::move(s));
  }
  return rows;
}

void WriteSweepOutputs(const ExperimentConfig& config,
                       const SweepResult& result) {
  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path dir(config.out_dir);
  WriteTextFile((dir / "trials.csv").string(),
                [&](std::ostream& out) { WriteTrialsCsv(out, result); });
  WriteTextFile((dir / "summary.csv").string(), [&](std::ostream& out) {
    WriteSummaryCsv(out, result.summary);
  });
  WriteTextFile((dir / "config.json").string(), [&](std::ostream& out) {
    out << ExperimentConfigToJson(config) << '\n';
  });
}

std::vector<KTarget> KForTargetDisutility(const std::vector<SummaryRow>& rows,
                                          double target_d_i) {
  std::vector<KTarget> out;
  auto find = [&](const SummaryRow& r) -> KTarget& {
    for (KTarget& t : out) {
      if (t.algorithm == r.algorithm && t.eta == r.eta && t.q1 == r.q1) {
        return t;
      }
    }
    out.push_back(KTarget{r.algorithm, r.eta, r.q1, std::nullopt});
    return out.back();
  };
  for (const SummaryRow& r : rows) {
    KTarget& t = find(r);
    if (r.mean_d_i <= target_d_i && (!t.k || r.k < *t.k)) t.k = r.k;
  }
  return out;
}

std::vector<std::string> WritePlotData(const std::vector<SummaryRow>& rows,
                                       const std::string& out_dir,
                                       std::optional<double> target_d_i) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  std::vector<std::string> written;

  // Disutility against eta, one series per (algorithm, k, q1).
  std::map<std::tuple<std::string, std::size_t, std::size_t>,
           std::vector<const SummaryRow*>>
      by_eta;
  // Disutility against q1, one series per (algorithm, eta, k).
  std::map<std::tuple<std::string, double, std::size_t>,
           std::vector<const SummaryRow*>>
      by_q1;
  for (const SummaryRow& r : rows) {
    by_eta[{r.algorithm, r.k, r.q1}].push_back(&r);
    if (r.q1 > 0) by_q1[{r.algorithm, r.eta, r.k}].push_back(&r);
  }
  for (auto& [key, series] : by_eta) {
    std::sort(series.begin(), series.end(),
              [](auto* a, auto* b) { return a->eta < b->eta; });
    const auto& [alg, k, q1] = key;
    const std::string stem = "eta__" + alg + "__k" + std::to_string(k) +
                             "__q1" + std::to_string(q1);
    std::vector<std::pair<double, double>> di, df;
    for (const SummaryRow* r : series) {
      di.emplace_back(r->eta, r->mean_d_i);
      df.emplace_back(r->eta, r->mean_d_f);
    }
    WriteSeries((dir / (stem + "__d_i.csv")).string(), di);
    WriteSeries((dir / (stem + "__d_f.csv")).string(), df);
    written.push_back((dir / (stem + "__d_i.csv")).string());
    written.push_back((dir / (stem + "__d_f.csv")).string());
  }
  for (auto& [key, series] : by_q1) {
    if (series.size() < 2) continue;
    std::sort(series.begin(), series.end(),
              [](auto* a, auto* b) { return a->q1 < b->q1; });
    const auto& [alg, eta, k] = key;
    const std::string path =
        (dir / ("q1__" + alg + "__eta" + ShortNumber(eta) + "__k" +
                std::to_string(k) + "__d_i.csv"))
            .string();
    std::vector<std::pair<double, double>> points;
    for (const SummaryRow* r : series) {
      points.emplace_back(static_cast<double>(r->q1), r->mean_d_i);
    }
    WriteSeries(path, points);
    written.push_back(path);
  }
  if (target_d_i) {
    std::map<std::pair<std::string, std::size_t>,
             std::vector<std::pair<double, double>>>
        minima;
    for (const KTarget& t : KForTargetDisutility(rows, *target_d_i)) {
      if (!t.k) {
        LOG(INFO) << t.algorithm << " eta=" << t.eta << " q1=" << t.q1
                  << ": target " << *target_d_i << " not attained";
        continue;
      }
      minima[{t.algorithm, t.q1}].emplace_back(t.eta,
                                               static_cast<double>(*t.k));
    }
    for (auto& [key, points] : minima) {
      std::sort(points.begin(), points.end());
      const std::string path =
          (dir / ("k_for_target__" + key.first + "__q1" +
                  std::to_string(key.second) + ".csv"))
              .string();
      WriteSeries(path, points);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace msrec
