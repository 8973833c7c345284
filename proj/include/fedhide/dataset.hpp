#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fedhide/vecmath.hpp"

namespace fedhide {

// One client's local data. Every client holds exactly one class.
struct ClientDataset {
  int client_id = 0;
  int class_id = 0;
  std::string label;
  std::vector<Vec> train;
  std::vector<Vec> test;

  int input_dim() const;
  std::size_t size() const { return train.size() + test.size(); }
};

struct SyntheticSpec {
  int num_clients = 20;
  int samples_per_client = 50;
  int input_dim = 32;
  double cluster_spread = 0.1;
  double inter_cluster_scale = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

// Number of held-out samples for a client with n samples: 20% (floored),
// at least one, but never the whole client.
std::size_t test_count_for(std::size_t n);

// Client c draws center_c = scale * (uniform sphere point) and samples
// center_c + N(0, spread^2 I). Deterministic in spec.seed.
std::vector<ClientDataset> generate_synthetic(const SyntheticSpec& spec);

// Cluster centers used by generate_synthetic for the same spec.
std::vector<Vec> synthetic_centers(const SyntheticSpec& spec);

struct CsvSchema {
  std::string class_column = "label";
  // Empty means "every column except the class column".
  std::vector<std::string> feature_columns;
};

// One client per distinct label, ids in first-appearance order, row order
// kept within a client. Split into train/test with test_count_for().
std::vector<ClientDataset> load_csv(const std::filesystem::path& path, const CsvSchema& schema);

// Writes train then test rows of every client under header
// "<class_column>,x0,...,x{d-1}" with round-trip precision.
void write_csv(const std::filesystem::path& path, const std::vector<ClientDataset>& clients,
               const std::string& class_column = "label");

}  // namespace fedhide
