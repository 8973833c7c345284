#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "fedhide/checkpoint.hpp"
#include "fedhide/errors.hpp"
#include "fedhide/experiment.hpp"

namespace fedhide {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ProxyMethod method_from_json(const std::string& name, const json& params) {
  auto num = [&](const char* key, double fallback) {
    return params.contains(key) ? params.at(key).get<double>() : fallback;
  };
  if (name == "fedaws") return FedAwS{};
  if (name == "fedhide") return FedHide{num("alpha", FedHide{}.alpha), static_cast<int>(num("k", FedHide{}.k))};
  if (name == "fedgn") return FedGN{num("sigma", FedGN{}.sigma)};
  if (name == "fedcs") return FedCS{num("cos_theta", FedCS{}.cos_theta)};
  throw Error("unknown method '" + name + "'");
}

// Method order follows the variant; parameters compare numerically.
auto sort_key(const ProxyMethod& m) {
  std::vector<double> params;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FedHide>) params = {v.alpha, static_cast<double>(v.k)};
        if constexpr (std::is_same_v<T, FedGN>) params = {v.sigma};
        if constexpr (std::is_same_v<T, FedCS>) params = {v.cos_theta};
      },
      m);
  return std::make_tuple(method_name(m), params);
}

// Returns the last complete record of a metrics file, counting unparseable lines.
std::optional<RoundMetrics> last_record(const fs::path& path, std::size_t& skipped) {
  std::ifstream in(path);
  std::optional<RoundMetrics> last;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      last = round_metrics_from_json(json::parse(line));
    } catch (const std::exception&) {
      ++skipped;
    }
  }
  return last;
}

std::string cell(const MeanStd& m, double scale, int digits) {
  if (m.n == 0) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f +- %.*f", digits, scale * m.mean, digits, scale * m.std);
  return buf;
}

std::string label(const ProxyMethod& m) {
  const std::string params = method_params(m);
  return params.empty() ? method_name(m) : method_name(m) + "(" + params + ")";
}

}  // namespace

Report build_report(const fs::path& metrics_dir) {
  if (!fs::is_directory(metrics_dir)) throw NoMetricsFound("not a directory: " + metrics_dir.string());

  std::vector<fs::path> runs;
  for (const auto& entry : fs::recursive_directory_iterator(metrics_dir)) {
    if (entry.is_regular_file() && entry.path().filename() == "run.json") runs.push_back(entry.path().parent_path());
  }
  std::sort(runs.begin(), runs.end());

  Report report;
  for (const auto& dir : runs) {
    json run;
    try {
      std::ifstream in(dir / "run.json");
      run = json::parse(in);
    } catch (const std::exception&) {
      continue;
    }
    ReportRow row;
    try {
      row.method = method_from_json(run.at("method").get<std::string>(), run.value("params", json::object()));
    } catch (const std::exception&) {
      continue;
    }
    row.run_dir = fs::relative(dir, metrics_dir).generic_string();
    std::vector<SeedOutcome> seeds;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const fs::path metrics = entry.path() / "metrics.jsonl";
      if (!entry.is_directory() || !fs::exists(metrics)) continue;
      if (auto rec = last_record(metrics, report.skipped_lines)) seeds.push_back({0, {*rec}, std::nullopt});
    }
    if (seeds.empty()) continue;
    row.seeds = seeds.size();
    row.summary = summarize(seeds);
    report.rows.push_back(std::move(row));
  }
  if (report.rows.empty()) throw NoMetricsFound("no metrics found under " + metrics_dir.string());

  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return sort_key(a.method) < sort_key(b.method); });

  std::ostringstream os;
  char line[256];
  os << "Prototype/proxy similarity (final round, mean over seeds)\n";
  std::snprintf(line, sizeof line, "%-28s %8s %8s\n", "method", "AVG", "STD");
  os << line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-28s %8.2f %8.2f\n", label(r.method).c_str(),
                  r.summary.proxy_similarity_avg.mean, r.summary.proxy_similarity_std.mean);
    os << line;
  }
  os << "\nResults (final round, mean +- std over seeds)\n";
  std::snprintf(line, sizeof line, "%-28s %5s %16s %16s %16s\n", "method", "seeds", "ACC [%]", "EER [%]", "PL [%]");
  os << line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-28s %5zu %16s %16s %16s\n", label(r.method).c_str(), r.seeds,
                  cell(r.summary.accuracy, 100.0, 2).c_str(), cell(r.summary.eer, 100.0, 2).c_str(),
                  cell(r.summary.leakage, 100.0, 2).c_str());
    os << line;
  }
  os << "\n" << report.rows.size() << " run(s)";
  if (report.skipped_lines > 0) os << "; warning: skipped " << report.skipped_lines << " corrupt record line(s)";
  os << '\n';
  report.text = os.str();
  return report;
}

}  // namespace fedhide
