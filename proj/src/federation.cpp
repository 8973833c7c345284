#include "fedhide/federation.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <thread>

#include "fedhide/errors.hpp"

namespace fedhide {

std::string to_string(SelectionPolicy p) {
  return p == SelectionPolicy::kRoundRobin ? "round_robin" : "uniform_random";
}

SelectionPolicy selection_from_string(const std::string& name) {
  if (name == "round_robin") return SelectionPolicy::kRoundRobin;
  if (name == "uniform_random") return SelectionPolicy::kUniformRandom;
  throw ConfigError("unknown selection policy '" + name + "'");
}

void TrainConfig::validate() const {
  if (num_clients < 2) throw ConfigError("num_clients must be >= 2");
  if (clients_per_round < 1 || clients_per_round > num_clients)
    throw ConfigError("clients_per_round must lie in [1, num_clients]");
  if (local_iters < 1) throw ConfigError("local_iters must be >= 1");
  if (!(lr > 0.0)) throw ConfigError("lr must be > 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (rounds < 0) throw ConfigError("rounds must be >= 0");
  if (eval_interval < 1) throw ConfigError("eval_interval must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (embed_dim < 2) throw ConfigError("embed_dim must be >= 2");
  for (int h : hidden)
    if (h < 1) throw ConfigError("hidden widths must be >= 1");
  if (!(cold_start_sigma >= 0.0)) throw ConfigError("cold_start_sigma must be >= 0");
  try {
    fedhide::validate(proxy);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

Architecture TrainConfig::architecture(int input_dim) const {
  return Architecture{input_dim, hidden, embed_dim, activation};
}

Federation init_federation(const TrainConfig& config, std::span<const ClientDataset> datasets) {
  config.validate();
  if (datasets.size() != static_cast<std::size_t>(config.num_clients)) {
    throw ConfigError("num_clients is " + std::to_string(config.num_clients) + " but " +
                      std::to_string(datasets.size()) + " client datasets were given");
  }
  const int input_dim = datasets.front().input_dim();
  for (const auto& ds : datasets) {
    if (ds.train.empty()) throw ConfigError("client " + std::to_string(ds.client_id) + " has no training data");
    if (ds.input_dim() != input_dim) throw ConfigError("clients have differing input dimensions");
  }
  for (std::size_t c = 0; c < datasets.size(); ++c) {
    if (datasets[c].client_id != static_cast<int>(c)) throw ConfigError("client ids must be 0..C-1 in order");
  }

  const Architecture arch = config.architecture(input_dim);
  try {
    arch.validate();
  } catch (const InvalidArchitecture& e) {
    throw ConfigError(e.what());
  }
  ModelParams global = init_params(arch, config.seed);

  Federation fed{FederationState{0, global, {}, 0, Rng::stream(config.seed, kServerStream, Purpose::kSelection),
                                 config},
                 {}};
  Rng proxy_init = Rng::stream(config.seed, kServerStream, Purpose::kProxyInit);
  fed.state.proxy_table.reserve(datasets.size());
  fed.clients.reserve(datasets.size());
  for (std::size_t c = 0; c < datasets.size(); ++c) {
    const auto id = static_cast<std::uint64_t>(c);
    Rng proto_rng = Rng::stream(config.seed, id, Purpose::kPrototypeInit);
    fed.clients.push_back(ClientState{static_cast<int>(c), global,
                                      sample_unit_sphere(config.embed_dim, proto_rng),
                                      std::make_shared<const ClientDataset>(datasets[c]),
                                      Rng::stream(config.seed, id, Purpose::kBatch),
                                      Rng::stream(config.seed, id, Purpose::kProxy)});
    fed.state.proxy_table.push_back(sample_unit_sphere(config.embed_dim, proxy_init));
  }
  return fed;
}

std::vector<int> select_clients(FederationState& state, SelectionPolicy policy) {
  const int C = static_cast<int>(state.proxy_table.size());
  const int M = state.config.clients_per_round;
  std::vector<int> ids;
  ids.reserve(M);
  if (policy == SelectionPolicy::kRoundRobin) {
    for (int i = 0; i < M; ++i) ids.push_back((state.cursor + i) % C);
    state.cursor = (state.cursor + M) % C;
  } else {
    std::vector<int> all(C);
    std::iota(all.begin(), all.end(), 0);
    for (int i = 0; i < M; ++i) {
      const auto j = i + static_cast<int>(state.selection_rng.below(static_cast<std::uint64_t>(C - i)));
      std::swap(all[i], all[j]);
      ids.push_back(all[i]);
    }
  }
  return ids;
}

std::vector<Neighbor> proxy_view_for(const FederationState& state, int client_id) {
  std::vector<Neighbor> view;
  view.reserve(state.proxy_table.size() - 1);
  for (std::size_t c = 0; c < state.proxy_table.size(); ++c)
    if (static_cast<int>(c) != client_id) view.push_back({static_cast<int>(c), state.proxy_table[c]});
  return view;
}

namespace {

std::vector<Vec> sample_batch(const ClientDataset& ds, int batch_size, Rng& rng) {
  const std::size_t n = ds.train.size();
  const auto b = static_cast<std::size_t>(batch_size);
  std::vector<Vec> batch;
  batch.reserve(b);
  if (b > n) {
    for (std::size_t i = 0; i < b; ++i) batch.push_back(ds.train[rng.below(n)]);
  } else {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < b; ++i) {
      std::swap(idx[i], idx[i + rng.below(n - i)]);
      batch.push_back(ds.train[idx[i]]);
    }
  }
  return batch;
}

std::vector<UnitVector> proxies_of(std::span<const Neighbor> view) {
  std::vector<UnitVector> out;
  out.reserve(view.size());
  for (const auto& n : view) out.push_back(n.proxy);
  return out;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

LossBreakdown local_step(ClientState& client, std::span<const UnitVector> proxies, const TrainConfig& config) {
  const std::vector<Vec> batch = sample_batch(*client.dataset, config.batch_size, client.batch_rng);
  ObjectiveResult res = loss_and_gradients(client.params, client.prototype, batch, proxies, config.lambda);
  client.params.add_scaled(res.grad_theta, -config.lr);
  client.prototype = normalize(client.prototype.values() - config.lr * res.grad_w);
  return res.loss;
}

ClientUpload client_update(ClientState& client, const ModelParams& global_params,
                           std::span<const Neighbor> proxy_view, const TrainConfig& config) {
  for (const auto& n : proxy_view) {
    if (n.client_id == client.client_id) throw InvalidArgument("proxy view must exclude the client's own entry");
  }
  client.params = global_params;
  const std::vector<UnitVector> proxies = proxies_of(proxy_view);
  LossBreakdown mean{};
  mean.lambda = config.lambda;
  for (int e = 0; e < config.local_iters; ++e) {
    const LossBreakdown lb = local_step(client, proxies, config);
    mean.positive += lb.positive;
    mean.negative += lb.negative;
    mean.total += lb.total;
  }
  const double inv_e = 1.0 / static_cast<double>(config.local_iters);
  mean.positive *= inv_e;
  mean.negative *= inv_e;
  mean.total *= inv_e;
  UnitVector proxy =
      generate_proxy(config.proxy, client.prototype, proxy_view, client.proxy_rng, config.cold_start_sigma);
  return ClientUpload{client.client_id, client.params, std::move(proxy), mean};
}

ModelParams aggregate_models(std::span<const ModelParams> local_params) {
  if (local_params.empty()) throw InvalidArgument("aggregate_models needs at least one model");
  ModelParams sum = ModelParams::zeros(local_params.front().architecture());
  for (const auto& p : local_params) {
    if (!p.same_shape(sum)) throw ShapeMismatch("cannot average models with different shapes");
    sum.add_scaled(p, 1.0);
  }
  sum.scale(1.0 / static_cast<double>(local_params.size()));
  return sum;
}

std::vector<UnitVector> prototypes_of(const std::vector<ClientState>& clients) {
  std::vector<UnitVector> out;
  out.reserve(clients.size());
  for (const auto& c : clients) out.push_back(c.prototype);
  return out;
}

namespace {

void record_trace_before(const FederationState& state, const ClientState& client,
                         std::span<const Neighbor> view, TraceSink& sink, Rng& trace_rng, TraceStep& step) {
  const TrainConfig& cfg = state.config;
  const std::vector<UnitVector> proxies = proxies_of(view);
  const ClientDataset& ds = *client.dataset;
  step.phi = concat(state.global.flatten(), client.prototype.values());
  ObjectiveResult full = loss_and_gradients(state.global, client.prototype, ds.train, proxies, cfg.lambda);
  step.full_gradient = concat(full.grad_theta.flatten(), full.grad_w);
  for (int r = 0; r < sink.options.redraws; ++r) {
    const std::vector<Vec> batch = sample_batch(ds, cfg.batch_size, trace_rng);
    ObjectiveResult g = loss_and_gradients(state.global, client.prototype, batch, proxies, cfg.lambda);
    step.stochastic_gradients.push_back(concat(g.grad_theta.flatten(), g.grad_w));
  }
  step.probe_embedding = embed(state.global, ds.train.front()).values();
}

struct RoundWork {
  int client_id;
  std::vector<Neighbor> view;
  std::optional<ClientUpload> upload;
  std::exception_ptr error;
};

}  // namespace

RoundMetrics run_round(FederationState& state, std::vector<ClientState>& clients, TraceSink* trace) {
  const TrainConfig& cfg = state.config;
  const int round = state.round + 1;
  std::vector<int> selected = select_clients(state, cfg.selection);

  // Every selected client sees the proxy table as it was at round start.
  std::vector<RoundWork> work;
  work.reserve(selected.size());
  for (int id : selected) work.push_back({id, proxy_view_for(state, id), std::nullopt, nullptr});

  std::optional<TraceStep> pending_trace;
  if (trace != nullptr) {
    for (const auto& w : work) {
      if (w.client_id != trace->options.client_id) continue;
      pending_trace.emplace();
      // a fresh stream per round keyed by the round number keeps the trace
      // reproducible without persisting extra RNG state
      Rng trace_rng = Rng::stream(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(round)),
                                  static_cast<std::uint64_t>(w.client_id), Purpose::kTrace);
      record_trace_before(state, clients[w.client_id], w.view, *trace, trace_rng, *pending_trace);
    }
  }

  auto process = [&](RoundWork& w) {
    try {
      w.upload = client_update(clients[w.client_id], state.global, w.view, cfg);
    } catch (...) {
      w.error = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), work.size());
  if (workers <= 1) {
    for (auto& w : work) process(w);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < work.size(); i += workers) process(work[i]);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& w : work) {
    if (!w.error) continue;
    try {
      std::rethrow_exception(w.error);
    } catch (const std::exception& e) {
      throw Error("round " + std::to_string(round) + ", client " + std::to_string(w.client_id) + ": " + e.what());
    }
  }

  // Reduce in client-id order so the result is independent of scheduling.
  std::sort(work.begin(), work.end(), [](const RoundWork& a, const RoundWork& b) { return a.client_id < b.client_id; });
  std::vector<ModelParams> locals;
  locals.reserve(work.size());
  RoundMetrics m;
  m.round = round;
  for (const auto& w : work) {
    locals.push_back(w.upload->params);
    m.mean_total_loss += w.upload->loss.total;
    m.mean_positive_loss += w.upload->loss.positive;
    m.mean_negative_loss += w.upload->loss.negative;
  }
  const double inv_m = 1.0 / static_cast<double>(work.size());
  m.mean_total_loss *= inv_m;
  m.mean_positive_loss *= inv_m;
  m.mean_negative_loss *= inv_m;

  state.global = aggregate_models(locals);
  for (auto& w : work) state.proxy_table[w.client_id] = w.upload->proxy;
  state.round = round;

  if (pending_trace) {
    const int id = trace->options.client_id;
    pending_trace->prototype = clients[id].prototype.values();
    pending_trace->proxy = state.proxy_table[id].values();
    trace->steps.push_back(std::move(*pending_trace));
  }

  const std::vector<UnitVector> protos = prototypes_of(clients);
  m.leakage = prototype_leakage(protos, state.proxy_table);
  const SimilarityStats sim = proxy_similarity_stats(protos, state.proxy_table);
  m.proxy_similarity_avg = sim.avg;
  m.proxy_similarity_std = sim.std;
  return m;
}

EvalContext make_eval_context(std::span<const ClientDataset> datasets, std::uint64_t seed) {
  EvalContext ctx;
  ctx.datasets.assign(datasets.begin(), datasets.end());
  ctx.pairs = build_verification_pairs(datasets, seed);
  const bool has_tests =
      std::any_of(datasets.begin(), datasets.end(), [](const ClientDataset& d) { return !d.test.empty(); });
  ctx.compute_accuracy = has_tests;
  ctx.compute_eer = !ctx.pairs.genuine.empty() && !ctx.pairs.impostor.empty();
  return ctx;
}

void evaluate(const FederationState& state, const std::vector<ClientState>& clients, const EvalContext& ctx,
              RoundMetrics& metrics) {
  if (ctx.compute_accuracy) {
    metrics.accuracy = nearest_prototype_accuracy(state.global, ctx.datasets, prototypes_of(clients));
  }
  if (ctx.compute_eer) metrics.eer = verification_eer(state.global, ctx.datasets, ctx.pairs);
}

bool is_eval_round(int round, int total_rounds, int eval_interval) {
  return round > 0 && (round % eval_interval == 0 || round == total_rounds);
}

TrainingResult resume_training(Federation federation, std::span<const ClientDataset> datasets,
                               const TrainingOptions& options) {
  const TrainConfig cfg = federation.state.config;
  cfg.validate();
  const EvalContext ctx = make_eval_context(datasets, cfg.seed);
  std::optional<TraceSink> sink;
  if (options.trace) sink.emplace(TraceSink{*options.trace, {}});

  TrainingResult result{std::move(federation), {}, {}};
  auto& fed = result.federation;
  while (fed.state.round < cfg.rounds) {
    RoundMetrics m = run_round(fed.state, fed.clients, sink ? &*sink : nullptr);
    if (!is_eval_round(m.round, cfg.rounds, cfg.eval_interval)) continue;
    evaluate(fed.state, fed.clients, ctx, m);
    if (options.on_metrics) options.on_metrics(m);
    result.history.push_back(std::move(m));
  }
  if (sink) result.trace = std::move(sink->steps);
  return result;
}

TrainingResult run_training(const TrainConfig& config, std::span<const ClientDataset> datasets,
                            const TrainingOptions& options) {
  return resume_training(init_federation(config, datasets), datasets, options);
}

}  // namespace fedhide
