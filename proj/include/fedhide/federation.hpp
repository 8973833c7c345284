#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedhide/convergence.hpp"
#include "fedhide/dataset.hpp"
#include "fedhide/metrics.hpp"
#include "fedhide/model.hpp"
#include "fedhide/objective.hpp"
#include "fedhide/proxy.hpp"
#include "fedhide/rng.hpp"

namespace fedhide {

enum class SelectionPolicy { kRoundRobin, kUniformRandom };

std::string to_string(SelectionPolicy p);
SelectionPolicy selection_from_string(const std::string& name);

struct TrainConfig {
  int num_clients = 20;        // C
  int clients_per_round = 2;   // M
  int local_iters = 1;         // E
  double lr = 0.1;             // eta
  double lambda = 10.0;
  int batch_size = 16;
  int rounds = 2000;           // T
  ProxyMethod proxy = FedAwS{};
  SelectionPolicy selection = SelectionPolicy::kRoundRobin;
  std::uint64_t seed = 0;
  int eval_interval = 100;
  int threads = 1;
  std::vector<int> hidden = {64, 64};
  int embed_dim = 16;
  Activation activation = Activation::kTanh;
  double cold_start_sigma = 0.5;

  void validate() const;
  Architecture architecture(int input_dim) const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct ClientState {
  int client_id = 0;
  ModelParams params;  // local replica, overwritten by each broadcast
  UnitVector prototype;
  std::shared_ptr<const ClientDataset> dataset;
  Rng batch_rng;
  Rng proxy_rng;
};

// Everything the server holds. Client prototypes are deliberately absent.
struct FederationState {
  int round = 0;
  ModelParams global;
  std::vector<UnitVector> proxy_table;  // indexed by client id
  int cursor = 0;
  Rng selection_rng;
  TrainConfig config;
};

// What a client sends back after local training.
struct ClientUpload {
  int client_id;
  ModelParams params;
  UnitVector proxy;
  LossBreakdown loss;  // mean over the local steps
};

struct Federation {
  FederationState state;
  std::vector<ClientState> clients;
};

Federation init_federation(const TrainConfig& config, std::span<const ClientDataset> datasets);

std::vector<int> select_clients(FederationState& state, SelectionPolicy policy);

// Other clients' current proxies as seen by `client_id`.
std::vector<Neighbor> proxy_view_for(const FederationState& state, int client_id);

// One SGD step on the client's parameters and prototype; w is re-projected
// to the sphere afterwards.
LossBreakdown local_step(ClientState& client, std::span<const UnitVector> proxies, const TrainConfig& config);

// Starts from `global_params`, runs E local steps, then generates the proxy.
ClientUpload client_update(ClientState& client, const ModelParams& global_params,
                           std::span<const Neighbor> proxy_view, const TrainConfig& config);

// Coordinate-wise mean.
ModelParams aggregate_models(std::span<const ModelParams> local_params);

// Optional convergence-trace capture for one client.
struct TraceOptions {
  int client_id = 0;
  int redraws = 8;
};

struct TraceSink {
  TraceOptions options;
  std::vector<TraceStep> steps;
};

// One round of the server loop. Fills the loss, leakage and similarity
// fields of the returned metrics; accuracy/EER are left empty.
RoundMetrics run_round(FederationState& state, std::vector<ClientState>& clients, TraceSink* trace = nullptr);

struct EvalContext {
  std::vector<ClientDataset> datasets;
  VerificationPairs pairs;
  bool compute_accuracy = true;
  bool compute_eer = true;
};

EvalContext make_eval_context(std::span<const ClientDataset> datasets, std::uint64_t seed);

void evaluate(const FederationState& state, const std::vector<ClientState>& clients, const EvalContext& ctx,
              RoundMetrics& metrics);

std::vector<UnitVector> prototypes_of(const std::vector<ClientState>& clients);

struct TrainingResult {
  Federation federation;
  std::vector<RoundMetrics> history;
  std::vector<TraceStep> trace;
};

using MetricsCallback = std::function<void(const RoundMetrics&)>;

// Rounds whose metrics are reported: every multiple of eval_interval plus
// the final round.
bool is_eval_round(int round, int total_rounds, int eval_interval);

struct TrainingOptions {
  MetricsCallback on_metrics;
  std::optional<TraceOptions> trace;
};

TrainingResult run_training(const TrainConfig& config, std::span<const ClientDataset> datasets,
                            const TrainingOptions& options = {});

// Continues an existing federation until state.round == config.rounds.
TrainingResult resume_training(Federation federation, std::span<const ClientDataset> datasets,
                               const TrainingOptions& options = {});

}  // namespace fedhide
