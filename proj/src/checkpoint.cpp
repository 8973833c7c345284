#include "fedhide/checkpoint.hpp"

#include <fstream>

#include "fedhide/errors.hpp"

namespace fedhide {

using nlohmann::json;

namespace {

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec json_vec(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json proxy_json(const ProxyMethod& m) {
  json j;
  j["method"] = method_name(m);
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

ProxyMethod proxy_from_json(const json& j) {
  const std::string name = j.at("method").get<std::string>();
  if (name == "fedaws") return FedAwS{};
  if (name == "fedhide") return FedHide{j.at("alpha").get<double>(), j.at("k").get<int>()};
  if (name == "fedgn") return FedGN{j.at("sigma").get<double>()};
  if (name == "fedcs") return FedCS{j.at("cos_theta").get<double>()};
  throw ConfigError("unknown proxy method '" + name + "'");
}

}  // namespace

json to_json(const TrainConfig& c) {
  return json{{"num_clients", c.num_clients},
              {"clients_per_round", c.clients_per_round},
              {"local_iters", c.local_iters},
              {"lr", c.lr},
              {"lambda", c.lambda},
              {"batch_size", c.batch_size},
              {"rounds", c.rounds},
              {"proxy", proxy_json(c.proxy)},
              {"selection", to_string(c.selection)},
              {"seed", c.seed},
              {"eval_interval", c.eval_interval},
              {"threads", c.threads},
              {"hidden", c.hidden},
              {"embed_dim", c.embed_dim},
              {"activation", to_string(c.activation)},
              {"cold_start_sigma", c.cold_start_sigma}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig c;
  c.num_clients = j.at("num_clients").get<int>();
  c.clients_per_round = j.at("clients_per_round").get<int>();
  c.local_iters = j.at("local_iters").get<int>();
  c.lr = j.at("lr").get<double>();
  c.lambda = j.at("lambda").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.rounds = j.at("rounds").get<int>();
  c.proxy = proxy_from_json(j.at("proxy"));
  c.selection = selection_from_string(j.at("selection").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.eval_interval = j.at("eval_interval").get<int>();
  c.threads = j.at("threads").get<int>();
  c.hidden = j.at("hidden").get<std::vector<int>>();
  c.embed_dim = j.at("embed_dim").get<int>();
  c.activation = activation_from_string(j.at("activation").get<std::string>());
  c.cold_start_sigma = j.at("cold_start_sigma").get<double>();
  return c;
}

json to_json(const RoundMetrics& m) {
  json j{{"round", m.round},
         {"mean_total_loss", m.mean_total_loss},
         {"mean_positive_loss", m.mean_positive_loss},
         {"mean_negative_loss", m.mean_negative_loss},
         {"leakage", m.leakage},
         {"accuracy", nullptr},
         {"eer", nullptr},
         {"proxy_similarity_avg", m.proxy_similarity_avg},
         {"proxy_similarity_std", m.proxy_similarity_std}};
  if (m.accuracy) j["accuracy"] = *m.accuracy;
  if (m.eer) j["eer"] = *m.eer;
  return j;
}

RoundMetrics round_metrics_from_json(const json& j) {
  RoundMetrics m;
  m.round = j.at("round").get<int>();
  m.mean_total_loss = j.at("mean_total_loss").get<double>();
  m.mean_positive_loss = j.at("mean_positive_loss").get<double>();
  m.mean_negative_loss = j.at("mean_negative_loss").get<double>();
  m.leakage = j.at("leakage").get<double>();
  if (j.contains("accuracy") && !j["accuracy"].is_null()) m.accuracy = j["accuracy"].get<double>();
  if (j.contains("eer") && !j["eer"].is_null()) m.eer = j["eer"].get<double>();
  m.proxy_similarity_avg = j.at("proxy_similarity_avg").get<double>();
  m.proxy_similarity_std = j.at("proxy_similarity_std").get<double>();
  return m;
}

json checkpoint_json(const Federation& fed) {
  const auto& s = fed.state;
  json j;
  j["format"] = "fedhide-checkpoint/1";
  j["round"] = s.round;
  j["cursor"] = s.cursor;
  j["config"] = to_json(s.config);
  j["input_dim"] = s.global.architecture().input_dim;
  j["global_params"] = vec_json(s.global.flatten());
  j["selection_rng"] = s.selection_rng.state();
  j["proxy_table"] = json::array();
  for (const auto& p : s.proxy_table) j["proxy_table"].push_back(vec_json(p.values()));
  j["clients"] = json::array();
  for (const auto& c : fed.clients) {
    j["clients"].push_back(json{{"client_id", c.client_id},
                                {"prototype", vec_json(c.prototype.values())},
                                {"batch_rng", c.batch_rng.state()},
                                {"proxy_rng", c.proxy_rng.state()}});
  }
  return j;
}

Federation federation_from_checkpoint(const json& j, std::span<const ClientDataset> datasets) {
  try {
    if (j.at("format").get<std::string>() != "fedhide-checkpoint/1") throw CheckpointError("unknown checkpoint format");
    const TrainConfig cfg = train_config_from_json(j.at("config"));
    Federation fed = init_federation(cfg, datasets);
    if (j.at("input_dim").get<int>() != fed.state.global.architecture().input_dim)
      throw CheckpointError("checkpoint input_dim does not match the datasets");
    auto& s = fed.state;
    s.round = j.at("round").get<int>();
    s.cursor = j.at("cursor").get<int>();
    s.global = ModelParams::unflatten(s.global.architecture(), json_vec(j.at("global_params")));
    s.selection_rng.restore(j.at("selection_rng").get<std::string>());
    const auto& table = j.at("proxy_table");
    const auto& clients = j.at("clients");
    if (table.size() != s.proxy_table.size() || clients.size() != fed.clients.size())
      throw CheckpointError("checkpoint client count does not match the datasets");
    for (std::size_t c = 0; c < table.size(); ++c) s.proxy_table[c] = UnitVector::from_unit(json_vec(table[c]));
    for (std::size_t c = 0; c < clients.size(); ++c) {
      auto& cs = fed.clients[c];
      if (clients[c].at("client_id").get<int>() != cs.client_id) throw CheckpointError("client order mismatch");
      cs.prototype = UnitVector::from_unit(json_vec(clients[c].at("prototype")));
      cs.batch_rng.restore(clients[c].at("batch_rng").get<std::string>());
      cs.proxy_rng.restore(clients[c].at("proxy_rng").get<std::string>());
      cs.params = s.global;
    }
    return fed;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Federation& federation) {
  std::ofstream out(path);
  if (!out) throw CheckpointError("cannot write checkpoint: " + path.string());
  out << checkpoint_json(federation).dump() << '\n';
}

Federation load_checkpoint(const std::filesystem::path& path, std::span<const ClientDataset> datasets) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
  return federation_from_checkpoint(j, datasets);
}

}  // namespace fedhide
