#include "fedhide/proxy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fedhide/errors.hpp"

namespace fedhide {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void validate(const ProxyMethod& method) {
  std::visit(overloaded{
                 [](const FedAwS&) {},
                 [](const FedHide& m) {
                   if (!(m.alpha >= 0.0 && m.alpha <= 1.0))
                     throw InvalidArgument("fedhide alpha must lie in [0, 1]");
                   if (m.k < 1) throw InvalidArgument("fedhide k must be >= 1");
                 },
                 [](const FedGN& m) {
                   if (!(m.sigma >= 0.0)) throw InvalidArgument("fedgn sigma must be >= 0");
                 },
                 [](const FedCS& m) {
                   if (!(m.cos_theta > -1.0 && m.cos_theta <= 1.0))
                     throw InvalidArgument("fedcs cos_theta must lie in (-1, 1]");
                 },
             },
             method);
}

std::string method_name(const ProxyMethod& method) {
  return std::visit(overloaded{
                        [](const FedAwS&) { return std::string("fedaws"); },
                        [](const FedHide&) { return std::string("fedhide"); },
                        [](const FedGN&) { return std::string("fedgn"); },
                        [](const FedCS&) { return std::string("fedcs"); },
                    },
                    method);
}

std::string method_params(const ProxyMethod& method) {
  return std::visit(overloaded{
                        [](const FedAwS&) { return std::string(); },
                        [](const FedHide& m) { return "alpha=" + fmt_double(m.alpha) + ",k=" + std::to_string(m.k); },
                        [](const FedGN& m) { return "sigma=" + fmt_double(m.sigma); },
                        [](const FedCS& m) { return "cos_theta=" + fmt_double(m.cos_theta); },
                    },
                    method);
}

std::vector<std::size_t> nearest_neighbors(const UnitVector& w, std::span<const Neighbor> pool, int k) {
  std::vector<double> sim(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) sim[i] = cosine_similarity(w, pool[i].proxy);
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)), pool.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (sim[a] != sim[b]) return sim[a] > sim[b];
                      return pool[a].client_id < pool[b].client_id;
                    });
  order.resize(take);
  return order;
}

UnitVector gen_fedhide(const UnitVector& w, std::span<const Neighbor> pool, double alpha, int k) {
  validate(FedHide{alpha, k});
  if (pool.empty()) throw EmptyNeighborPool("fedhide needs at least one neighbor proxy");
  if (alpha == 1.0) return w;

  Vec sum = Vec::Zero(w.dim());
  for (std::size_t idx : nearest_neighbors(w, pool, k)) {
    if (pool[idx].proxy.dim() != w.dim()) throw DimensionMismatch("neighbor proxy dimension mismatch");
    sum += pool[idx].proxy.values();
  }
  const UnitVector delegate = normalize(sum);
  return normalize(alpha * w.values() + (1.0 - alpha) * delegate.values());
}

UnitVector gen_fedhide(const UnitVector& w, std::span<const UnitVector> proxies, double alpha, int k) {
  std::vector<Neighbor> pool;
  pool.reserve(proxies.size());
  for (std::size_t i = 0; i < proxies.size(); ++i) pool.push_back({static_cast<int>(i), proxies[i]});
  return gen_fedhide(w, std::span<const Neighbor>(pool), alpha, k);
}

UnitVector gen_fedgn(const UnitVector& w, double sigma, Rng& rng) {
  validate(FedGN{sigma});
  if (sigma == 0.0) return w;
  Vec v(w.dim());
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = w[i] + sigma * rng.normal();
    if (v.norm() > kNormEpsilon) return normalize(v);
  }
  throw DegenerateVector("fedgn: perturbed prototype underflowed repeatedly");
}

UnitVector gen_fedcs(const UnitVector& w, double cos_theta, Rng& rng) {
  validate(FedCS{cos_theta});
  return sample_on_cone(w, cos_theta, rng);
}

UnitVector generate_proxy(const ProxyMethod& method, const UnitVector& w, std::span<const Neighbor> pool,
                          Rng& rng, double cold_start_sigma) {
  return std::visit(overloaded{
                        [&](const FedAwS&) { return w; },
                        [&](const FedHide& m) {
                          if (m.alpha == 1.0) return w;
                          if (pool.empty()) return gen_fedgn(w, cold_start_sigma, rng);
                          return gen_fedhide(w, pool, m.alpha, m.k);
                        },
                        [&](const FedGN& m) { return gen_fedgn(w, m.sigma, rng); },
                        [&](const FedCS& m) { return gen_fedcs(w, m.cos_theta, rng); },
                    },
                    method);
}

}  // namespace fedhide
