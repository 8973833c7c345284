#include "fedhide/cli.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fedhide/errors.hpp"
#include "fedhide/experiment.hpp"

namespace fedhide {

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> rounds;
  std::optional<std::string> out;
  std::optional<int> threads;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Run a single seed instead of the configured list");
  cmd->add_option("--rounds", o.rounds, "Number of communication rounds");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--threads", o.threads, "Worker threads per round");
}

struct Prepared {
  ExperimentConfig config;
  std::vector<ClientDataset> datasets;
  fs::path out_dir;
};

Prepared prepare(const std::string& config_path, const Overrides& o) {
  Prepared p;
  p.config = load_config(config_path);
  if (o.seed) p.config.seeds = {*o.seed};
  if (o.rounds) {
    if (*o.rounds < 1) throw ConfigError("--rounds must be >= 1");
    p.config.train.rounds = *o.rounds;
  }
  if (o.threads) {
    if (*o.threads < 1) throw ConfigError("--threads must be >= 1");
    p.config.train.threads = *o.threads;
  }
  p.datasets = load_datasets(p.config, fs::path(config_path).parent_path());
  p.config.train.num_clients = static_cast<int>(p.datasets.size());
  TrainConfig probe = p.config.train;
  probe.validate();
  p.out_dir = resolve_output_dir(p.config, o.out);
  return p;
}

void print_summary(const ExperimentOutcome& outcome) {
  const auto& s = outcome.summary;
  auto line = [](const char* name, const MeanStd& m) {
    if (m.n == 0) return;
    std::printf("%-22s %.6f +- %.6f (n=%zu)\n", name, m.mean, m.std, m.n);
  };
  line("leakage", s.leakage);
  line("accuracy", s.accuracy);
  line("eer", s.eer);
  line("proxy_similarity_avg", s.proxy_similarity_avg);
  line("proxy_similarity_std", s.proxy_similarity_std);
  line("mean_total_loss", s.mean_total_loss);
  std::printf("output: %s\n", outcome.out_dir.string().c_str());
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Federated prototype learning simulator"};
  app.require_subcommand(1);

  Overrides run_o;
  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "Train one configuration over its seeds");
  run->add_option("config", run_config, "Experiment config file")->required();
  add_overrides(run, run_o);

  Overrides sweep_o;
  std::string sweep_config;
  std::string grid;
  int jobs = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "Run one experiment per proxy grid point");
  sweep->add_option("config", sweep_config, "Base experiment config file")->required();
  sweep->add_option("--grid", grid, "e.g. \"fedgn(sigma=0.1|0.5); fedaws\"")->required();
  sweep->add_option("--jobs", jobs, "Grid points run in parallel")->check(CLI::PositiveNumber);
  add_overrides(sweep, sweep_o);

  std::string report_dir;
  CLI::App* report = app.add_subcommand("report", "Render tables from a metrics directory");
  report->add_option("dir", report_dir, "Directory written by run or sweep")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      Prepared p = prepare(run_config, run_o);
      print_summary(run_experiment(p.config, p.datasets, p.out_dir));
    } else if (*sweep) {
      Prepared p = prepare(sweep_config, sweep_o);
      const auto points = parse_grid(grid);
      const auto rows = run_sweep(p.config, p.datasets, points, p.out_dir, jobs);
      std::cout << render_sweep_table(rows);
    } else if (*report) {
      std::cout << build_report(report_dir).text;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << one_line(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace fedhide
