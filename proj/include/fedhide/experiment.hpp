#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fedhide/convergence.hpp"
#include "fedhide/dataset.hpp"
#include "fedhide/federation.hpp"
#include "fedhide/metrics.hpp"

namespace fedhide {

enum class DataSource { kSynthetic, kCsv };

struct DataConfig {
  DataSource source = DataSource::kSynthetic;
  SyntheticSpec synthetic;
  std::string csv_path;
  std::string class_column = "label";
  std::vector<std::string> feature_columns;

  friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DataConfig data;
  // num_clients is taken from the data; seed is taken from `seeds`.
  TrainConfig train;
  std::vector<std::uint64_t> seeds = {0};
  std::string output_dir = "runs";
  bool save_checkpoint = true;
  bool trace = false;
  int trace_client = 0;
  int trace_redraws = 8;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// INI text with sections [experiment] [data] [model] [train] [proxy]
// [trace]. Unknown sections or keys, and keys that do not belong to the
// selected proxy method, are errors (ConfigError).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);

// Relative CSV paths resolve against `base_dir`. A missing file is a
// ConfigError naming the path.
std::vector<ClientDataset> load_datasets(const ExperimentConfig& config, const std::filesystem::path& base_dir);

// `requested` (from --out) wins over the config; a relative result is placed
// under $FEDHIDE_OUTPUT_ROOT when that variable is set.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config,
                                         const std::optional<std::string>& requested = std::nullopt);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample std across seeds (0 for a single seed)
  std::size_t n = 0;
};

MeanStd mean_std(const std::vector<double>& values);

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::vector<RoundMetrics> history;
  std::optional<ConstantEstimate> constants;
};

struct ExperimentSummary {
  MeanStd leakage, accuracy, eer, proxy_similarity_avg, proxy_similarity_std, mean_total_loss;
};

struct ExperimentOutcome {
  std::filesystem::path out_dir;
  std::vector<SeedOutcome> seeds;
  ExperimentSummary summary;
};

// Trains once per seed. Writes out_dir/run.json, out_dir/summary.json and,
// per seed, seed_<s>/metrics.jsonl (one RoundMetrics record per evaluated
// round, flushed as produced), seed_<s>/checkpoint.json and optionally
// seed_<s>/trace.jsonl.
ExperimentOutcome run_experiment(const ExperimentConfig& config, const std::vector<ClientDataset>& datasets,
                                 const std::filesystem::path& out_dir);

ExperimentSummary summarize(const std::vector<SeedOutcome>& seeds);

struct GridPoint {
  ProxyMethod method;
  std::string label;  // directory name, e.g. "fedgn_sigma=0.1"
};

// "fedgn(sigma=0.1|0.5); fedhide(alpha=0.1|0.01, k=3); fedaws"
// Each group expands to the cartesian product of its value lists.
std::vector<GridPoint> parse_grid(const std::string& spec);

struct SweepRow {
  std::string method;
  std::string params;
  bool failed = false;
  std::string error;
  ExperimentSummary summary;
};

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const std::vector<ClientDataset>& datasets,
                                const std::vector<GridPoint>& grid, const std::filesystem::path& out_dir,
                                int jobs = 1);

std::string render_sweep_table(const std::vector<SweepRow>& rows);

struct ReportRow {
  ProxyMethod method;
  std::string run_dir;
  std::size_t seeds = 0;
  ExperimentSummary summary;
};

struct Report {
  std::vector<ReportRow> rows;
  std::size_t skipped_lines = 0;
  std::string text;
};

// Scans `metrics_dir` recursively for runs written by run_experiment and
// renders a prototype/proxy similarity table and a results table. Rows are
// ordered by method, then parameters ascending. Corrupt record lines are
// skipped and counted.
Report build_report(const std::filesystem::path& metrics_dir);

}  // namespace fedhide
