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

// msrec: command line front end.
//
//   msrec synth     generate a synthetic dataset
//   msrec ingest    MovieLens movies.csv + ratings.csv -> feature files
//   msrec analyze   cluster diameters, duplication, neighbor gaps, top-rating CDF
//   msrec sweep     Monte-Carlo experiment sweep
//   msrec serve     run the server side over TCP
//   msrec agent     run trials as a user agent against a server
//   msrec plotdata  x,y series from a summary.csv

#include <glog/logging.h>
#include <signal.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "msrec/analytics.h"
#include "msrec/config.h"
#include "msrec/dataset_io.h"
#include "msrec/features.h"
#include "msrec/pipeline.h"
#include "msrec/random.h"
#include "msrec/scoring.h"
#include "msrec/status.h"
#include "msrec/sweep.h"
#include "msrec/wire.h"

namespace msrec {
namespace {

namespace fs = std::filesystem;

// Dataset selection shared by analyze, serve and agent: a config file, or
// explicit feature/catalog files, or the default synthetic generator.
struct DatasetArgs {
  std::string config;
  std::string train;
  std::string heldout;
  std::string catalog;
  bool unnormalized = false;
};

void AddDatasetOptions(CLI::App* app, DatasetArgs& args) {
  app->add_option("--config", args.config,
                  "Experiment config JSON (its 'dataset' section is used)");
  app->add_option("--train", args.train, "Training features CSV");
  app->add_option("--heldout", args.heldout, "Held-out features CSV");
  app->add_option("--catalog", args.catalog, "Catalog CSV");
  app->add_flag("--unnormalized", args.unnormalized,
                "Feature halves are not required to sum to one");
}

ExperimentConfig BaseConfig(const DatasetArgs& args) {
  ExperimentConfig config;
  if (!args.config.empty()) config = LoadExperimentConfig(args.config);
  if (!args.train.empty() || !args.catalog.empty()) {
    config.dataset.synthetic = false;
    config.dataset.train_path = args.train;
    config.dataset.heldout_path =
        args.heldout.empty() ? args.train : args.heldout;
    config.dataset.catalog_path = args.catalog;
    config.dataset.normalized = !args.unnormalized;
  }
  return config;
}

// Mechanism parameters for serve and agent. Unset values come from the
// config: the first eta and q1 entries and the largest k.
struct SpecArgs {
  std::string algorithm = "sat-realuser";
  std::optional<double> eta;
  std::optional<std::size_t> k;
  std::optional<std::size_t> q1;
  std::optional<std::size_t> q2;
  std::optional<std::size_t> p;
  std::optional<std::size_t> r;
  std::optional<std::size_t> t;
  bool no_frugal = false;
};

void AddSpecOptions(CLI::App* app, SpecArgs& args) {
  app->add_option("--algorithm", args.algorithm,
                  "nopost|nopost-realuser|ig-sig|sat-realuser|sat|"
                  "avg-realuser|avg")
      ->capture_default_str();
  app->add_option("--eta", args.eta, "Laplace scale");
  app->add_option("--k", args.k, "Results returned");
  app->add_option("--q1", args.q1, "Posterior samples for selection");
  app->add_option("--q2", args.q2, "Posterior samples for the frugal model");
  app->add_option("--p", args.p, "Frugal model rank");
  app->add_option("--r", args.r, "Top-r truncation");
  app->add_option("--t", args.t, "Saturation level");
  app->add_flag("--no-frugal", args.no_frugal, "Do not build frugal models");
}

AlgorithmSpec MakeSpec(const SpecArgs& args, const ExperimentConfig& config,
                       std::size_t catalog_size) {
  AlgorithmSpec spec;
  const auto mechanism = ParseMechanism(args.algorithm);
  if (!mechanism) {
    throw InvalidArgument("unknown algorithm '" + args.algorithm + "'");
  }
  spec.mechanism = *mechanism;
  spec.noise.eta = args.eta.value_or(config.eta_grid.front());
  spec.selection.k = args.k.value_or(
      *std::max_element(config.k_grid.begin(), config.k_grid.end()));
  spec.selection.q1 = args.q1.value_or(config.q1_grid.front());
  spec.selection.r = std::min(args.r.value_or(config.r), catalog_size);
  spec.selection.t = std::min(args.t.value_or(config.t), spec.selection.k);
  spec.frugal.enabled = config.frugal && !args.no_frugal;
  spec.frugal.q2 = args.q2.value_or(config.q2);
  spec.frugal.p = args.p.value_or(config.p);
  spec.Validate(catalog_size);
  return spec;
}

void WriteUsers(const fs::path& path, const std::vector<User>& users) {
  WriteTextFile(path.string(),
                [&](std::ostream& out) { WriteFeaturesCsv(out, users); });
}

void WriteCatalog(const fs::path& path, const Catalog& catalog) {
  WriteTextFile(path.string(),
                [&](std::ostream& out) { WriteCatalogCsv(out, catalog); });
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  SyntheticOptions options;
  std::string out;
};

void RunSynth(const SynthArgs& args) {
  const SyntheticDataset ds = SynthesizeDataset(args.options);
  const fs::path dir(args.out);
  fs::create_directories(dir);
  WriteUsers(dir / "train.csv", ds.train.users());
  WriteUsers(dir / "heldout.csv", ds.heldout);
  WriteCatalog(dir / "catalog.csv", ds.catalog);
  std::cout << "wrote " << ds.train.size() << " training users, "
            << ds.heldout.size() << " held-out users and "
            << ds.catalog.size() << " results to " << dir.string() << "\n";
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::string movies;
  std::string ratings;
  std::string out;
  double like_threshold = kDefaultLikeThreshold;
  double heldout_fraction = 0.2;
  std::uint64_t seed = 1;
};

void RunIngest(const IngestArgs& args) {
  if (!(args.heldout_fraction >= 0.0 && args.heldout_fraction < 1.0)) {
    throw InvalidArgument("--heldout-fraction must lie in [0, 1)");
  }
  std::ifstream movies(args.movies);
  if (!movies) throw IngestError("cannot open " + args.movies);
  const MovieLensCatalog ml = ReadMovieLensCatalog(movies);

  std::ifstream ratings(args.ratings);
  if (!ratings) throw IngestError("cannot open " + args.ratings);
  UserFeatureAccumulator acc(ml.catalog, args.like_threshold);
  const RatingsScan scan = ForEachMovieLensRating(
      ratings, ml, [&](const Rating& r) { acc.Add(r); });
  std::size_t dropped = 0;
  const TrainingSet all = acc.Finish(&dropped);

  // Deterministic per-user split, independent of file order.
  std::vector<User> train, heldout;
  for (const User& u : all) {
    Rng rng(DeriveSeed(args.seed, static_cast<std::uint64_t>(u.id)));
    (rng.Uniform() < args.heldout_fraction ? heldout : train).push_back(u);
  }

  const fs::path dir(args.out);
  fs::create_directories(dir);
  WriteCatalog(dir / "catalog.csv", ml.catalog);
  WriteUsers(dir / "train.csv", train);
  WriteUsers(dir / "heldout.csv", heldout);
  std::cout << "catalog: " << ml.catalog.size() << " movies ("
            << ml.skipped_movie_ids.size() << " without genres skipped)\n"
            << "ratings: " << scan.rows << " rows (" << scan.skipped_rows
            << " for skipped movies)\n"
            << "users: " << train.size() << " train, " << heldout.size()
            << " held out, " << dropped << " dropped (empty half)\n";
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  DatasetArgs dataset;
  std::string out;
  std::uint64_t seed = 1;
  std::size_t centers = 200;
  std::vector<std::size_t> cluster_sizes = {5, 10, 15};
  std::size_t top_n = 5;
  double max_l1 = 0.1;
  std::size_t pairs = 500;
};

void RunAnalyze(const AnalyzeArgs& args) {
  const ExperimentConfig config = BaseConfig(args.dataset);
  const Dataset ds = LoadDataset(config.dataset);
  const LinearReferenceModel model(ds.catalog, ds.train.half_split());
  const fs::path dir(args.out);
  fs::create_directories(dir);

  for (std::size_t m : args.cluster_sizes) {
    const std::vector<ClusterReport> clusters =
        ClusterDiameters(ds.train, args.centers, m, DeriveSeed(args.seed, m));
    std::vector<double> duplication;
    double mean_diameter = 0.0, mean_dup = 0.0;
    for (const ClusterReport& c : clusters) {
      duplication.push_back(
          DuplicationMeasure(model, c, args.top_n, ds.train, ds.catalog));
      mean_diameter += c.diameter;
      mean_dup += duplication.back();
    }
    const fs::path path = dir / ("clusters_m" + std::to_string(m) + ".csv");
    WriteTextFile(path.string(), [&](std::ostream& out) {
      WriteClusterCsv(out, clusters, duplication);
    });
    std::vector<double> diameters;
    for (const ClusterReport& c : clusters) diameters.push_back(c.diameter);
    std::sort(diameters.begin(), diameters.end());
    WriteTextFile(
        (dir / ("diameter_cdf_m" + std::to_string(m) + ".csv")).string(),
        [&](std::ostream& out) { WriteCdfCsv(out, diameters); });
    const double n = static_cast<double>(clusters.size());
    std::cout << "m=" << m << ": mean diameter " << mean_diameter / n
              << ", mean duplication " << mean_dup / n << "\n";
  }

  const std::vector<NeighborGap> gaps =
      NeighborRatingGap(model, ds.train, ds.catalog, args.max_l1, args.top_n,
                        args.pairs, DeriveSeed(args.seed, 0));
  WriteTextFile((dir / "neighbor_gaps.csv").string(),
                [&](std::ostream& out) { WriteNeighborGapCsv(out, gaps); });
  if (gaps.empty()) {
    std::cout << "neighbor gaps: no pair within l1 " << args.max_l1 << "\n";
  } else {
    double mean = 0.0;
    std::vector<double> values;
    for (const NeighborGap& g : gaps) {
      mean += g.gap;
      values.push_back(g.gap);
    }
    std::sort(values.begin(), values.end());
    WriteTextFile((dir / "neighbor_gap_cdf.csv").string(),
                  [&](std::ostream& out) { WriteCdfCsv(out, values); });
    std::cout << "neighbor gaps: " << gaps.size() << " pairs, mean "
              << mean / static_cast<double>(gaps.size()) << "\n";
  }

  const std::vector<double> best =
      TopRatingDistribution(model, ds.heldout, ds.catalog);
  WriteTextFile((dir / "top_rating_cdf.csv").string(),
                [&](std::ostream& out) { WriteCdfCsv(out, best); });
  double mean = 0.0;
  for (double v : best) mean += v;
  std::cout << "top rating: mean " << mean / static_cast<double>(best.size())
            << " over " << best.size() << " users\n";
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threads;
  std::vector<std::string> algorithms;
  std::vector<double> eta;
  std::vector<std::size_t> k;
  std::vector<std::size_t> q1;
  std::optional<std::size_t> q2;
  std::optional<std::size_t> p;
  std::optional<std::size_t> r;
  std::optional<std::size_t> t;
  bool no_frugal = false;
};

void RunSweepCommand(const SweepArgs& args) {
  ExperimentConfig config = LoadExperimentConfig(args.config);
  config.seed = args.seed;
  config.out_dir = args.out;
  if (args.trials) config.trials = *args.trials;
  if (args.threads) config.threads = *args.threads;
  if (!args.algorithms.empty()) {
    config.algorithms.clear();
    for (const std::string& name : args.algorithms) {
      const auto m = ParseMechanism(name);
      if (!m) throw InvalidArgument("unknown algorithm '" + name + "'");
      config.algorithms.push_back(*m);
    }
  }
  if (!args.eta.empty()) config.eta_grid = args.eta;
  if (!args.k.empty()) config.k_grid = args.k;
  if (!args.q1.empty()) config.q1_grid = args.q1;
  if (args.q2) config.q2 = *args.q2;
  if (args.p) config.p = *args.p;
  if (args.r) config.r = *args.r;
  if (args.t) config.t = *args.t;
  if (args.no_frugal) config.frugal = false;
  config.Validate();

  const Dataset ds = LoadDataset(config.dataset);
  const LinearReferenceModel model(ds.catalog, ds.train.half_split());
  const SweepResult result = RunSweep(config, ds, model);
  WriteSweepOutputs(config, result);
  std::cout << "algorithm,eta,k,q1,mean_d_i,mean_d_f\n";
  for (const SummaryRow& row : result.summary) {
    std::cout << row.algorithm << "," << row.eta << "," << row.k << ","
              << row.q1 << "," << row.mean_d_i << "," << row.mean_d_f
              << "\n";
  }
  std::cout << "wrote " << config.out_dir << "/{trials.csv,summary.csv,"
            << "config.json}\n";
}

// ---------------------------------------------------------------- serve

struct ServeArgs {
  DatasetArgs dataset;
  SpecArgs spec;
  std::string host = "127.0.0.1";
  std::uint16_t port = 7878;
  std::uint64_t seed = 1;
  std::string log;
};

void RunServe(const ServeArgs& args) {
  const ExperimentConfig config = BaseConfig(args.dataset);
  const Dataset ds = LoadDataset(config.dataset);
  const LinearReferenceModel model(ds.catalog, ds.train.half_split());

  ServerContext context;
  context.spec = MakeSpec(args.spec, config, ds.catalog.size());
  context.model = &model;
  context.train = &ds.train;
  context.catalog = &ds.catalog;
  context.seed = args.seed;

  std::ofstream log_file;
  ServerLog log;
  if (!args.log.empty()) {
    log_file.open(args.log, std::ios::app);
    if (!log_file) throw InvalidArgument("cannot open log file " + args.log);
    log = [&log_file](const std::string& line) {
      log_file << line << '\n';
      log_file.flush();
    };
  }

  // Block termination signals in every thread; the main thread waits for
  // them and shuts the server down cleanly.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Server server(context, log);
  server.Listen(args.host, args.port);
  server.Start();
  std::cout << "listening on " << args.host << ":" << server.port() << " ("
            << MechanismName(context.spec.mechanism)
            << ", eta=" << context.spec.noise.eta
            << ", k=" << context.spec.selection.k << ")" << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  LOG(INFO) << "signal " << received << ", shutting down";
  server.Stop();
}

// ---------------------------------------------------------------- agent

struct AgentArgs {
  DatasetArgs dataset;
  SpecArgs spec;
  std::string host = "127.0.0.1";
  std::uint16_t port = 7878;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  std::string out;
};

void RunAgent(const AgentArgs& args) {
  const ExperimentConfig config = BaseConfig(args.dataset);
  const Dataset ds = LoadDataset(config.dataset);
  const LinearReferenceModel model(ds.catalog, ds.train.half_split());
  const AlgorithmSpec spec = MakeSpec(args.spec, config, ds.catalog.size());

  AgentClient client(args.host, args.port);
  SweepResult result;
  result.cells.push_back(SweepCell{spec});
  result.records.emplace_back();
  for (std::size_t i = 0; i < args.trials; ++i) {
    const std::uint64_t seed = TrialSeed(args.seed, i);
    const User& user = ds.heldout[TrialUserIndex(seed, ds.heldout.size())];
    TrialRecord rec = client.RunTrial(spec, model, ds.catalog, user, seed);
    rec.trial_index = i;
    result.records.back().push_back(std::move(rec));
  }
  result.summary.push_back(Summarize(spec, result.records.back()));
  const SummaryRow& row = result.summary.back();
  std::cout << MechanismName(spec.mechanism) << " eta=" << row.eta
            << " k=" << row.k << " trials=" << row.trials
            << " mean_d_i=" << row.mean_d_i << " mean_d_f=" << row.mean_d_f
            << "\n";
  if (!args.out.empty()) {
    WriteTextFile(args.out,
                  [&](std::ostream& out) { WriteTrialsCsv(out, result); });
  }
}

// ---------------------------------------------------------------- plotdata

struct PlotArgs {
  std::string summary;
  std::string out;
  std::optional<double> target;
};

void RunPlotData(const PlotArgs& args) {
  std::ifstream in(args.summary);
  if (!in) throw InvalidArgument("cannot open " + args.summary);
  const std::vector<SummaryRow> rows = ReadSummaryCsv(in);
  const std::vector<std::string> written =
      WritePlotData(rows, args.out, args.target);
  for (const std::string& path : written) std::cout << path << "\n";
}

int Main(int argc, char** argv) {
  CLI::App app{"Private multi-selection recommendation toolkit"};
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a dataset");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--users", synth.options.n_users, "Training users")
      ->capture_default_str();
  synth_cmd->add_option("--heldout", synth.options.n_heldout,
                        "Held-out users")
      ->capture_default_str();
  synth_cmd->add_option("--results", synth.options.n_results, "Catalog size")
      ->capture_default_str();
  synth_cmd->add_option("--d", synth.options.d, "Feature dimension (even)")
      ->capture_default_str();
  synth_cmd->add_option("--prototypes", synth.options.prototypes,
                        "Mixture prototypes")
      ->capture_default_str();
  synth_cmd->add_option("--max-jitter", synth.options.max_jitter,
                        "Largest mixing weight toward random noise")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.options.seed, "Generator seed")
      ->capture_default_str();

  IngestArgs ingest;
  CLI::App* ingest_cmd =
      app.add_subcommand("ingest", "MovieLens CSVs to feature files");
  ingest_cmd->add_option("--movies", ingest.movies, "movies.csv")->required();
  ingest_cmd->add_option("--ratings", ingest.ratings, "ratings.csv")
      ->required();
  ingest_cmd->add_option("--out", ingest.out, "Output directory")->required();
  ingest_cmd->add_option("--like-threshold", ingest.like_threshold,
                         "Ratings at or above this count as likes")
      ->capture_default_str();
  ingest_cmd->add_option("--heldout-fraction", ingest.heldout_fraction,
                         "Share of users written to heldout.csv")
      ->capture_default_str();
  ingest_cmd->add_option("--seed", ingest.seed, "Split seed")
      ->capture_default_str();

  AnalyzeArgs analyze;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Descriptive statistics of a dataset");
  AddDatasetOptions(analyze_cmd, analyze.dataset);
  analyze_cmd->add_option("--out", analyze.out, "Output directory")
      ->required();
  analyze_cmd->add_option("--seed", analyze.seed, "Sampling seed")
      ->capture_default_str();
  analyze_cmd->add_option("--centers", analyze.centers,
                          "Cluster centers per size")
      ->capture_default_str();
  analyze_cmd->add_option("--m", analyze.cluster_sizes, "Cluster sizes")
      ->capture_default_str();
  analyze_cmd->add_option("--top-n", analyze.top_n, "Top-n set size")
      ->capture_default_str();
  analyze_cmd->add_option("--max-l1", analyze.max_l1,
                          "Neighbor distance bound")
      ->capture_default_str();
  analyze_cmd->add_option("--pairs", analyze.pairs, "Neighbor pairs")
      ->capture_default_str();

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Run an experiment sweep; flags override config keys");
  sweep_cmd->add_option("--config", sweep.config, "Experiment config JSON")
      ->required();
  sweep_cmd->add_option("--seed", sweep.seed, "Master seed")->required();
  sweep_cmd->add_option("--out", sweep.out, "Output directory")->required();
  sweep_cmd->add_option("--trials", sweep.trials, "Trials per cell");
  sweep_cmd->add_option("--threads", sweep.threads,
                        "Worker threads (0: all cores)");
  sweep_cmd->add_option("--algorithms", sweep.algorithms, "Mechanisms")
      ->delimiter(',');
  sweep_cmd->add_option("--eta", sweep.eta, "Eta grid")->delimiter(',');
  sweep_cmd->add_option("--k", sweep.k, "k grid")->delimiter(',');
  sweep_cmd->add_option("--q1", sweep.q1, "q1 grid")->delimiter(',');
  sweep_cmd->add_option("--q2", sweep.q2, "Frugal samples");
  sweep_cmd->add_option("--p", sweep.p, "Frugal rank");
  sweep_cmd->add_option("--r", sweep.r, "Top-r truncation");
  sweep_cmd->add_option("--t", sweep.t, "Saturation level");
  sweep_cmd->add_flag("--no-frugal", sweep.no_frugal,
                      "Do not build frugal models");

  ServeArgs serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the server");
  AddDatasetOptions(serve_cmd, serve.dataset);
  AddSpecOptions(serve_cmd, serve.spec);
  serve_cmd->add_option("--host", serve.host, "Bind address")
      ->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Port (0: ephemeral)")
      ->capture_default_str();
  serve_cmd->add_option("--seed", serve.seed,
                        "Base seed for queries without one")
      ->capture_default_str();
  serve_cmd->add_option("--log", serve.log, "Append request log to file");

  AgentArgs agent;
  CLI::App* agent_cmd =
      app.add_subcommand("agent", "Run trials against a server");
  AddDatasetOptions(agent_cmd, agent.dataset);
  AddSpecOptions(agent_cmd, agent.spec);
  agent_cmd->add_option("--host", agent.host, "Server address")
      ->capture_default_str();
  agent_cmd->add_option("--port", agent.port, "Server port")
      ->capture_default_str();
  agent_cmd->add_option("--seed", agent.seed, "Master seed")
      ->capture_default_str();
  agent_cmd->add_option("--trials", agent.trials, "Trials to run")
      ->capture_default_str();
  agent_cmd->add_option("--out", agent.out, "Write trial records CSV");

  PlotArgs plot;
  CLI::App* plot_cmd =
      app.add_subcommand("plotdata", "Plot series from a sweep summary");
  plot_cmd->add_option("--summary", plot.summary, "summary.csv")->required();
  plot_cmd->add_option("--out", plot.out, "Output directory")->required();
  plot_cmd->add_option("--target", plot.target,
                       "Target mean d_i for minimum-k series");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth_cmd) RunSynth(synth);
    if (*ingest_cmd) RunIngest(ingest);
    if (*analyze_cmd) RunAnalyze(analyze);
    if (*sweep_cmd) RunSweepCommand(sweep);
    if (*serve_cmd) RunServe(serve);
    if (*agent_cmd) RunAgent(agent);
    if (*plot_cmd) RunPlotData(plot);
  } catch (const Error& e) {
    std::cerr << "msrec: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "msrec: unexpected failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace
}  // namespace msrec

int main(int argc, char** argv) {
  google::InitGoogleLogging(argv[0]);
  FLAGS_logtostderr = true;
  return msrec::Main(argc, argv);
}
