#include "fedhide/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "fedhide/errors.hpp"

namespace fedhide {

int ClientDataset::input_dim() const {
  if (!train.empty()) return static_cast<int>(train.front().size());
  if (!test.empty()) return static_cast<int>(test.front().size());
  return 0;
}

void SyntheticSpec::validate() const {
  if (num_clients < 2) throw InvalidSpec("num_clients must be >= 2");
  if (samples_per_client < 1) throw InvalidSpec("samples_per_client must be >= 1");
  if (input_dim < 2) throw InvalidSpec("input_dim must be >= 2");
  if (!(cluster_spread >= 0.0)) throw InvalidSpec("cluster_spread must be >= 0");
  if (!(inter_cluster_scale > 0.0)) throw InvalidSpec("inter_cluster_scale must be > 0");
}

std::size_t test_count_for(std::size_t n) {
  if (n <= 1) return 0;
  return std::clamp<std::size_t>(n / 5, 1, n - 1);
}

namespace {

void split_into(ClientDataset& ds, std::vector<Vec> samples) {
  const std::size_t n_test = test_count_for(samples.size());
  const std::size_t n_train = samples.size() - n_test;
  ds.train.assign(std::make_move_iterator(samples.begin()),
                  std::make_move_iterator(samples.begin() + static_cast<std::ptrdiff_t>(n_train)));
  ds.test.assign(std::make_move_iterator(samples.begin() + static_cast<std::ptrdiff_t>(n_train)),
                 std::make_move_iterator(samples.end()));
}

}  // namespace

std::vector<Vec> synthetic_centers(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<Vec> centers;
  centers.reserve(spec.num_clients);
  for (int c = 0; c < spec.num_clients; ++c) {
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(c), Purpose::kData);
    centers.push_back(spec.inter_cluster_scale * sample_unit_sphere(spec.input_dim, rng).values());
  }
  return centers;
}

std::vector<ClientDataset> generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<ClientDataset> out;
  out.reserve(spec.num_clients);
  for (int c = 0; c < spec.num_clients; ++c) {
    // the center is the first draw on this client's stream, matching synthetic_centers()
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(c), Purpose::kData);
    const Vec center = spec.inter_cluster_scale * sample_unit_sphere(spec.input_dim, rng).values();

    std::vector<Vec> samples;
    samples.reserve(spec.samples_per_client);
    for (int i = 0; i < spec.samples_per_client; ++i) {
      Vec x = center;
      if (spec.cluster_spread > 0.0) {
        for (int j = 0; j < spec.input_dim; ++j) x[j] += spec.cluster_spread * rng.normal();
      }
      samples.push_back(std::move(x));
    }
    ClientDataset ds;
    ds.client_id = c;
    ds.class_id = c;
    ds.label = "class_" + std::to_string(c);
    split_into(ds, std::move(samples));
    out.push_back(std::move(ds));
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  for (auto& c : cells) {
    const auto b = c.find_first_not_of(" \t\r");
    const auto e = c.find_last_not_of(" \t\r");
    c = (b == std::string::npos) ? std::string() : c.substr(b, e - b + 1);
  }
  return cells;
}

double parse_double(const std::string& cell, std::size_t line_no, const std::string& column) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    throw ParseError("row " + std::to_string(line_no) + ", column '" + column +
                     "': not a number: '" + cell + "'");
  }
  return value;
}

}  // namespace

std::vector<ClientDataset> load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open CSV file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_csv_line(line);

  auto column_index = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError(path.string() + ": no column named '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t class_col = column_index(schema.class_column);
  std::vector<std::size_t> feature_cols;
  if (schema.feature_columns.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (i != class_col) feature_cols.push_back(i);
  } else {
    for (const auto& name : schema.feature_columns) feature_cols.push_back(column_index(name));
  }
  if (feature_cols.empty()) throw ParseError(path.string() + ": no feature columns");

  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> label_index;
  std::vector<std::vector<Vec>> rows_by_class;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw InconsistentDimension("row " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " +
                                  std::to_string(cells.size()));
    }
    const std::string& label = cells[class_col];
    if (label.empty()) {
      throw ParseError("row " + std::to_string(line_no) + ", column '" + schema.class_column +
                       "': empty class label");
    }
    Vec x(static_cast<Eigen::Index>(feature_cols.size()));
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      x[static_cast<Eigen::Index>(j)] =
          parse_double(cells[feature_cols[j]], line_no, header[feature_cols[j]]);
    }
    auto [it, inserted] = label_index.try_emplace(label, labels.size());
    if (inserted) {
      labels.push_back(label);
      rows_by_class.emplace_back();
    }
    rows_by_class[it->second].push_back(std::move(x));
  }
  if (labels.empty()) throw EmptyClass(path.string() + ": no data rows, every class is empty");

  std::vector<ClientDataset> out;
  out.reserve(labels.size());
  for (std::size_t c = 0; c < labels.size(); ++c) {
    if (rows_by_class[c].empty()) throw EmptyClass("class '" + labels[c] + "' has no samples");
    ClientDataset ds;
    ds.client_id = static_cast<int>(c);
    ds.class_id = static_cast<int>(c);
    ds.label = labels[c];
    split_into(ds, std::move(rows_by_class[c]));
    out.push_back(std::move(ds));
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<ClientDataset>& clients,
               const std::string& class_column) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write CSV file: " + path.string());
  const int d = clients.empty() ? 0 : clients.front().input_dim();
  out << class_column;
  for (int j = 0; j < d; ++j) out << ",x" << j;
  out << '\n';
  out.precision(17);
  auto emit = [&](const std::string& label, const Vec& x) {
    if (x.size() != d) throw InconsistentDimension("write_csv: mixed sample dimensions");
    out << label;
    for (int j = 0; j < d; ++j) out << ',' << x[j];
    out << '\n';
  };
  for (const auto& ds : clients) {
    for (const auto& x : ds.train) emit(ds.label, x);
    for (const auto& x : ds.test) emit(ds.label, x);
  }
}

}  // namespace fedhide
