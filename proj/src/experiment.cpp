#include "fedhide/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "fedhide/checkpoint.hpp"
#include "fedhide/errors.hpp"

namespace fedhide {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <class T>
T parse_number(const std::string& where, const std::string& text) {
  T value{};
  const std::string t = trim(text);
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last) {
    throw ConfigError(where + ": expected a number, got '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& where, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(where + ": expected true/false, got '" + text + "'");
}

template <class T>
std::vector<T> parse_list(const std::string& where, const std::string& text) {
  std::vector<T> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number<T>(where, item));
  return out;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    if constexpr (std::is_floating_point_v<T>) {
      os << fmt(values[i]);
    } else {
      os << values[i];
    }
  }
  return os.str();
}

// Reads one section, remembering which keys were consumed.
class Section {
 public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) {
    seen_.insert(key);
    if (tree_ == nullptr) return std::nullopt;
    const auto it = tree_->find(key);
    if (it == tree_->not_found()) return std::nullopt;
    return it->second.data();
  }
  bool has(const std::string& key) const { return tree_ != nullptr && tree_->find(key) != tree_->not_found(); }
  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  template <class T>
  void number(const std::string& key, T& out) {
    if (auto v = raw(key)) out = parse_number<T>(where(key), *v);
  }
  void text(const std::string& key, std::string& out) {
    if (auto v = raw(key)) out = trim(*v);
  }
  void boolean(const std::string& key, bool& out) {
    if (auto v = raw(key)) out = parse_bool(where(key), *v);
  }

  void reject_unknown() const {
    if (tree_ == nullptr) return;
    for (const auto& [key, value] : *tree_) {
      if (!seen_.count(key)) throw ConfigError("unknown key [" + name_ + "] " + key);
    }
  }

 private:
  std::string name_;
  const pt::ptree* tree_;
  std::set<std::string> seen_;
};

const std::set<std::string> kSections = {"experiment", "data", "model", "train", "proxy", "trace"};

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree root;
  try {
    std::istringstream is(text);
    pt::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [name, sub] : root) {
    if (!kSections.count(name)) throw ConfigError("unknown config section [" + name + "]");
    if (sub.empty() && !sub.data().empty()) throw ConfigError("config key '" + name + "' outside any section");
  }
  auto section = [&](const std::string& name) {
    const auto it = root.find(name);
    return Section(name, it == root.not_found() ? nullptr : &it->second);
  };

  ExperimentConfig cfg;

  Section ex = section("experiment");
  ex.text("name", cfg.name);
  if (auto v = ex.raw("seeds")) {
    cfg.seeds = parse_list<std::uint64_t>(ex.where("seeds"), *v);
    if (cfg.seeds.empty()) throw ConfigError("[experiment] seeds: at least one seed required");
  }
  ex.number("eval_interval", cfg.train.eval_interval);
  ex.text("output_dir", cfg.output_dir);
  ex.number("threads", cfg.train.threads);
  ex.boolean("checkpoint", cfg.save_checkpoint);
  ex.reject_unknown();

  Section data = section("data");
  std::string source = "synthetic";
  data.text("source", source);
  if (source == "synthetic") {
    cfg.data.source = DataSource::kSynthetic;
    auto& s = cfg.data.synthetic;
    data.number("num_clients", s.num_clients);
    data.number("samples_per_client", s.samples_per_client);
    data.number("input_dim", s.input_dim);
    data.number("cluster_spread", s.cluster_spread);
    data.number("inter_cluster_scale", s.inter_cluster_scale);
    data.number("seed", s.seed);
    try {
      s.validate();
    } catch (const InvalidSpec& e) {
      throw ConfigError(std::string("[data] ") + e.what());
    }
  } else if (source == "csv") {
    cfg.data.source = DataSource::kCsv;
    data.text("csv_path", cfg.data.csv_path);
    if (cfg.data.csv_path.empty()) throw ConfigError("[data] csv_path is required when source = csv");
    data.text("class_column", cfg.data.class_column);
    if (auto v = data.raw("feature_columns")) cfg.data.feature_columns = split(*v, ',');
  } else {
    throw ConfigError("[data] source must be 'synthetic' or 'csv', got '" + source + "'");
  }
  data.reject_unknown();

  Section model = section("model");
  if (auto v = model.raw("hidden")) cfg.train.hidden = parse_list<int>(model.where("hidden"), *v);
  model.number("embed_dim", cfg.train.embed_dim);
  if (auto v = model.raw("activation")) {
    try {
      cfg.train.activation = activation_from_string(trim(*v));
    } catch (const InvalidArchitecture& e) {
      throw ConfigError(std::string("[model] activation: ") + e.what());
    }
  }
  model.reject_unknown();

  Section train = section("train");
  train.number("clients_per_round", cfg.train.clients_per_round);
  train.number("local_iters", cfg.train.local_iters);
  train.number("lr", cfg.train.lr);
  train.number("lambda", cfg.train.lambda);
  train.number("batch_size", cfg.train.batch_size);
  train.number("rounds", cfg.train.rounds);
  if (auto v = train.raw("selection")) cfg.train.selection = selection_from_string(trim(*v));
  train.reject_unknown();

  Section proxy = section("proxy");
  std::string method = "fedaws";
  proxy.text("method", method);
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (proxy.has(k)) throw ConfigError("[proxy] " + std::string(k) + " is not a parameter of method '" + method + "'");
  };
  if (method == "fedaws") {
    forbid({"alpha", "k", "sigma", "cos_theta"});
    cfg.train.proxy = FedAwS{};
  } else if (method == "fedhide") {
    forbid({"sigma", "cos_theta"});
    FedHide m;
    proxy.number("alpha", m.alpha);
    proxy.number("k", m.k);
    cfg.train.proxy = m;
  } else if (method == "fedgn") {
    forbid({"alpha", "k", "cos_theta"});
    FedGN m;
    proxy.number("sigma", m.sigma);
    cfg.train.proxy = m;
  } else if (method == "fedcs") {
    forbid({"alpha", "k", "sigma"});
    FedCS m;
    proxy.number("cos_theta", m.cos_theta);
    cfg.train.proxy = m;
  } else {
    throw ConfigError("[proxy] method must be one of fedhide, fedgn, fedcs, fedaws; got '" + method + "'");
  }
  proxy.number("cold_start_sigma", cfg.train.cold_start_sigma);
  if (auto v = proxy.raw("similarity")) {
    if (trim(*v) != "cosine") throw ConfigError("[proxy] similarity: only 'cosine' is supported");
  }
  proxy.reject_unknown();

  Section trace = section("trace");
  trace.boolean("enabled", cfg.trace);
  trace.number("client", cfg.trace_client);
  trace.number("redraws", cfg.trace_redraws);
  trace.reject_unknown();
  if (cfg.trace_redraws < 1) throw ConfigError("[trace] redraws must be >= 1");

  // num_clients is only known here for synthetic data; CSV fills it at load.
  if (cfg.data.source == DataSource::kSynthetic) cfg.train.num_clients = cfg.data.synthetic.num_clients;
  TrainConfig probe = cfg.train;
  if (cfg.data.source == DataSource::kCsv) probe.num_clients = std::max(probe.num_clients, probe.clients_per_round);
  probe.validate();
  if (cfg.trace && (cfg.trace_client < 0 || cfg.trace_client >= probe.num_clients) &&
      cfg.data.source == DataSource::kSynthetic) {
    throw ConfigError("[trace] client is out of range");
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[experiment]\n"
     << "name = " << c.name << '\n'
     << "seeds = " << join(c.seeds) << '\n'
     << "eval_interval = " << c.train.eval_interval << '\n'
     << "output_dir = " << c.output_dir << '\n'
     << "threads = " << c.train.threads << '\n'
     << "checkpoint = " << (c.save_checkpoint ? "true" : "false") << "\n\n";

  os << "[data]\n";
  if (c.data.source == DataSource::kSynthetic) {
    const auto& s = c.data.synthetic;
    os << "source = synthetic\n"
       << "num_clients = " << s.num_clients << '\n'
       << "samples_per_client = " << s.samples_per_client << '\n'
       << "input_dim = " << s.input_dim << '\n'
       << "cluster_spread = " << fmt(s.cluster_spread) << '\n'
       << "inter_cluster_scale = " << fmt(s.inter_cluster_scale) << '\n'
       << "seed = " << s.seed << '\n';
  } else {
    os << "source = csv\n"
       << "csv_path = " << c.data.csv_path << '\n'
       << "class_column = " << c.data.class_column << '\n';
    if (!c.data.feature_columns.empty()) {
      os << "feature_columns = ";
      for (std::size_t i = 0; i < c.data.feature_columns.size(); ++i)
        os << (i ? "," : "") << c.data.feature_columns[i];
      os << '\n';
    }
  }
  os << '\n';

  os << "[model]\n"
     << "hidden = " << join(c.train.hidden) << '\n'
     << "embed_dim = " << c.train.embed_dim << '\n'
     << "activation = " << to_string(c.train.activation) << "\n\n";

  os << "[train]\n"
     << "clients_per_round = " << c.train.clients_per_round << '\n'
     << "local_iters = " << c.train.local_iters << '\n'
     << "lr = " << fmt(c.train.lr) << '\n'
     << "lambda = " << fmt(c.train.lambda) << '\n'
     << "batch_size = " << c.train.batch_size << '\n'
     << "rounds = " << c.train.rounds << '\n'
     << "selection = " << to_string(c.train.selection) << "\n\n";

  os << "[proxy]\n"
     << "method = " << method_name(c.train.proxy) << '\n';
  if (const auto* h = std::get_if<FedHide>(&c.train.proxy)) {
    os << "alpha = " << fmt(h->alpha) << "\nk = " << h->k << '\n';
  } else if (const auto* g = std::get_if<FedGN>(&c.train.proxy)) {
    os << "sigma = " << fmt(g->sigma) << '\n';
  } else if (const auto* cs = std::get_if<FedCS>(&c.train.proxy)) {
    os << "cos_theta = " << fmt(cs->cos_theta) << '\n';
  }
  os << "cold_start_sigma = " << fmt(c.train.cold_start_sigma) << "\n\n";

  os << "[trace]\n"
     << "enabled = " << (c.trace ? "true" : "false") << '\n'
     << "client = " << c.trace_client << '\n'
     << "redraws = " << c.trace_redraws << '\n';
  return os.str();
}

std::vector<ClientDataset> load_datasets(const ExperimentConfig& config, const fs::path& base_dir) {
  if (config.data.source == DataSource::kSynthetic) return generate_synthetic(config.data.synthetic);
  fs::path p = config.data.csv_path;
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  if (!fs::exists(p)) throw ConfigError("dataset file not found: " + p.string());
  try {
    return load_csv(p, CsvSchema{config.data.class_column, config.data.feature_columns});
  } catch (const ParseError& e) {
    throw ConfigError(std::string("dataset: ") + e.what());
  } catch (const InconsistentDimension& e) {
    throw ConfigError(std::string("dataset: ") + e.what());
  } catch (const EmptyClass& e) {
    throw ConfigError(std::string("dataset: ") + e.what());
  }
}

fs::path resolve_output_dir(const ExperimentConfig& config, const std::optional<std::string>& requested) {
  fs::path out = requested ? fs::path(*requested) : fs::path(config.output_dir);
  if (out.is_relative()) {
    if (const char* root = std::getenv("FEDHIDE_OUTPUT_ROOT"); root != nullptr && *root != '\0') {
      out = fs::path(root) / out;
    }
  }
  return out;
}

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd r;
  r.n = values.size();
  if (values.empty()) return r;
  double s = 0.0;
  for (double v : values) s += v;
  r.mean = s / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return r;
}

ExperimentSummary summarize(const std::vector<SeedOutcome>& seeds) {
  std::vector<double> leak, acc, eer, sim_avg, sim_std, loss;
  for (const auto& s : seeds) {
    if (s.history.empty()) continue;
    const RoundMetrics& m = s.history.back();
    leak.push_back(m.leakage);
    if (m.accuracy) acc.push_back(*m.accuracy);
    if (m.eer) eer.push_back(*m.eer);
    sim_avg.push_back(m.proxy_similarity_avg);
    sim_std.push_back(m.proxy_similarity_std);
    loss.push_back(m.mean_total_loss);
  }
  return {mean_std(leak), mean_std(acc), mean_std(eer), mean_std(sim_avg), mean_std(sim_std), mean_std(loss)};
}

namespace {

json summary_json(const ExperimentSummary& s) {
  auto ms = [](const MeanStd& m) { return json{{"mean", m.mean}, {"std", m.std}, {"n", m.n}}; };
  return json{{"leakage", ms(s.leakage)},
              {"accuracy", ms(s.accuracy)},
              {"eer", ms(s.eer)},
              {"proxy_similarity_avg", ms(s.proxy_similarity_avg)},
              {"proxy_similarity_std", ms(s.proxy_similarity_std)},
              {"mean_total_loss", ms(s.mean_total_loss)}};
}

json proxy_json(const ProxyMethod& m) {
  json j = json::object();
  if (const auto* h = std::get_if<FedHide>(&m)) {
    j["alpha"] = h->alpha;
    j["k"] = h->k;
  } else if (const auto* g = std::get_if<FedGN>(&m)) {
    j["sigma"] = g->sigma;
  } else if (const auto* c = std::get_if<FedCS>(&m)) {
    j["cos_theta"] = c->cos_theta;
  }
  return j;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config, const std::vector<ClientDataset>& datasets,
                                 const fs::path& out_dir) {
  if (config.seeds.empty()) throw ConfigError("at least one seed is required");
  fs::create_directories(out_dir);

  json run{{"format", "fedhide-run/1"},
           {"name", config.name},
           {"method", method_name(config.train.proxy)},
           {"params", proxy_json(config.train.proxy)},
           {"seeds", config.seeds},
           {"config", serialize_config(config)}};
  write_json(out_dir / "run.json", run);

  ExperimentOutcome outcome;
  outcome.out_dir = out_dir;
  for (std::uint64_t seed : config.seeds) {
    TrainConfig tc = config.train;
    tc.seed = seed;
    tc.num_clients = static_cast<int>(datasets.size());

    const fs::path seed_dir = out_dir / ("seed_" + std::to_string(seed));
    fs::create_directories(seed_dir);
    std::ofstream metrics(seed_dir / "metrics.jsonl", std::ios::trunc);
    if (!metrics) throw Error("cannot write " + (seed_dir / "metrics.jsonl").string());

    TrainingOptions opts;
    opts.on_metrics = [&](const RoundMetrics& m) { metrics << to_json(m).dump() << '\n' << std::flush; };
    if (config.trace) opts.trace = TraceOptions{config.trace_client, config.trace_redraws};

    TrainingResult res = run_training(tc, datasets, opts);
    SeedOutcome so{seed, std::move(res.history), std::nullopt};
    if (config.save_checkpoint) save_checkpoint(seed_dir / "checkpoint.json", res.federation);
    if (config.trace) {
      write_trace(seed_dir / "trace.jsonl", res.trace);
      if (res.trace.size() >= 2) so.constants = estimate_constants(res.trace);
    }
    outcome.seeds.push_back(std::move(so));
  }
  outcome.summary = summarize(outcome.seeds);

  json summary{{"name", config.name},
               {"method", method_name(config.train.proxy)},
               {"params", proxy_json(config.train.proxy)},
               {"seeds", config.seeds},
               {"final", summary_json(outcome.summary)}};
  json constants = json::array();
  for (const auto& s : outcome.seeds) {
    if (!s.constants) continue;
    const auto& k = s.constants->constants;
    constants.push_back(json{{"seed", s.seed},
                             {"L1", k.L1},
                             {"L2", k.L2},
                             {"sigma_g", k.sigma_g},
                             {"G1", k.G1},
                             {"G2", k.G2},
                             {"smoothness_pairs", s.constants->smoothness_pairs},
                             {"note", ConstantEstimate::kCaveat}});
  }
  if (!constants.empty()) summary["assumption_constants"] = constants;
  write_json(out_dir / "summary.json", summary);
  return outcome;
}

std::vector<GridPoint> parse_grid(const std::string& spec) {
  std::vector<GridPoint> points;
  for (const auto& group : split(spec, ';')) {
    std::string method = group;
    std::vector<std::pair<std::string, std::vector<double>>> axes;
    const auto open = group.find('(');
    if (open != std::string::npos) {
      if (group.back() != ')') throw ConfigError("grid: missing ')' in '" + group + "'");
      method = trim(group.substr(0, open));
      const std::string body = group.substr(open + 1, group.size() - open - 2);
      for (const auto& assignment : split(body, ',')) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos) throw ConfigError("grid: expected key=v1|v2 in '" + assignment + "'");
        const std::string key = trim(assignment.substr(0, eq));
        std::vector<double> values;
        for (const auto& v : split(assignment.substr(eq + 1), '|'))
          values.push_back(parse_number<double>("grid " + key, v));
        if (values.empty()) throw ConfigError("grid: no values for '" + key + "'");
        axes.emplace_back(key, std::move(values));
      }
    }
    method = trim(method);
    std::set<std::string> allowed;
    if (method == "fedhide") allowed = {"alpha", "k"};
    else if (method == "fedgn") allowed = {"sigma"};
    else if (method == "fedcs") allowed = {"cos_theta"};
    else if (method != "fedaws") throw ConfigError("grid: unknown method '" + method + "'");
    for (const auto& [key, values] : axes) {
      if (!allowed.count(key)) throw ConfigError("grid: '" + key + "' is not a parameter of " + method);
    }

    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
      std::map<std::string, double> chosen;
      for (std::size_t a = 0; a < axes.size(); ++a) chosen[axes[a].first] = axes[a].second[idx[a]];
      auto get = [&](const char* key, double fallback) {
        const auto it = chosen.find(key);
        return it == chosen.end() ? fallback : it->second;
      };
      ProxyMethod m;
      if (method == "fedaws") m = FedAwS{};
      else if (method == "fedhide") m = FedHide{get("alpha", FedHide{}.alpha), static_cast<int>(get("k", FedHide{}.k))};
      else if (method == "fedgn") m = FedGN{get("sigma", FedGN{}.sigma)};
      else m = FedCS{get("cos_theta", FedCS{}.cos_theta)};
      try {
        validate(m);
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
      }
      std::string label = method_name(m);
      std::string params = method_params(m);
      std::replace(params.begin(), params.end(), ',', '_');
      if (!params.empty()) label += "_" + params;
      points.push_back({m, label});

      std::size_t a = 0;
      for (; a < axes.size(); ++a) {
        if (++idx[a] < axes[a].second.size()) break;
        idx[a] = 0;
      }
      if (a == axes.size()) break;
    }
  }
  return points;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const std::vector<ClientDataset>& datasets,
                                const std::vector<GridPoint>& grid, const fs::path& out_dir, int jobs) {
  std::vector<SweepRow> rows(grid.size());
  auto run_point = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.method = method_name(grid[i].method);
    row.params = method_params(grid[i].method);
    try {
      ExperimentConfig cfg = base;
      cfg.train.proxy = grid[i].method;
      cfg.name = base.name + "/" + grid[i].label;
      row.summary = run_experiment(cfg, datasets, out_dir / grid[i].label).summary;
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1,
                                                      std::max<std::size_t>(grid.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_point(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < grid.size(); i += workers) run_point(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  if (!grid.empty() || fs::exists(out_dir)) {
    fs::create_directories(out_dir);
    std::ofstream tsv(out_dir / "sweep.tsv");
    tsv << "method\tparams\tstatus\taccuracy\teer\tleakage\tsimilarity_avg\tsimilarity_std\n";
    for (const auto& r : rows) {
      tsv << r.method << '\t' << r.params << '\t' << (r.failed ? "failed" : "ok") << '\t';
      if (r.failed) {
        tsv << "\t\t\t\t\n";
        continue;
      }
      tsv << fmt(r.summary.accuracy.mean) << '\t' << fmt(r.summary.eer.mean) << '\t' << fmt(r.summary.leakage.mean)
          << '\t' << fmt(r.summary.proxy_similarity_avg.mean) << '\t' << fmt(r.summary.proxy_similarity_std.mean)
          << '\n';
    }
  }
  return rows;
}

namespace {

std::string pct(const MeanStd& m) {
  if (m.n == 0) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f +- %.2f", 100.0 * m.mean, 100.0 * m.std);
  return buf;
}

}  // namespace

std::string render_sweep_table(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %-18s %-16s %-16s %-16s %-8s %-8s\n", "method", "params", "ACC [%]",
                "EER [%]", "PL [%]", "SIM AVG", "SIM STD");
  os << line;
  for (const auto& r : rows) {
    if (r.failed) {
      std::snprintf(line, sizeof line, "%-8s %-18s FAILED: ", r.method.c_str(), r.params.c_str());
      os << line << r.error << '\n';
      continue;
    }
    std::snprintf(line, sizeof line, "%-8s %-18s %-16s %-16s %-16s %-8.2f %-8.2f\n", r.method.c_str(),
                  r.params.c_str(), pct(r.summary.accuracy).c_str(), pct(r.summary.eer).c_str(),
                  pct(r.summary.leakage).c_str(), r.summary.proxy_similarity_avg.mean,
                  r.summary.proxy_similarity_std.mean);
    os << line;
  }
  return os.str();
}

}  // namespace fedhide
