#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fedhide/rng.hpp"
#include "fedhide/vecmath.hpp"

namespace fedhide {

// Share the true prototype (proxy == prototype).
struct FedAwS {
  friend bool operator==(const FedAwS&, const FedAwS&) = default;
};

// Mix the prototype with the normalized sum of its k nearest neighbor proxies.
struct FedHide {
  double alpha = 0.1;
  int k = 3;
  friend bool operator==(const FedHide&, const FedHide&) = default;
};

// Gaussian perturbation, then renormalize.
struct FedGN {
  double sigma = 0.1;
  friend bool operator==(const FedGN&, const FedGN&) = default;
};

// Uniform on the cone of fixed cosine similarity to the prototype.
struct FedCS {
  double cos_theta = 0.5;
  friend bool operator==(const FedCS&, const FedCS&) = default;
};

using ProxyMethod = std::variant<FedAwS, FedHide, FedGN, FedCS>;

void validate(const ProxyMethod& method);
std::string method_name(const ProxyMethod& method);
// "sigma=0.1", "alpha=0.1,k=3", "" for FedAwS
std::string method_params(const ProxyMethod& method);

struct Neighbor {
  int client_id;
  UnitVector proxy;
};

UnitVector gen_fedhide(const UnitVector& w, std::span<const Neighbor> pool, double alpha, int k);
// Convenience form; the position in `proxies` stands in for the client id.
UnitVector gen_fedhide(const UnitVector& w, std::span<const UnitVector> proxies, double alpha, int k);
UnitVector gen_fedgn(const UnitVector& w, double sigma, Rng& rng);
UnitVector gen_fedcs(const UnitVector& w, double cos_theta, Rng& rng);

// Dispatches on the method. FedHide with an empty pool falls back to FedGN
// with `cold_start_sigma`.
UnitVector generate_proxy(const ProxyMethod& method, const UnitVector& w, std::span<const Neighbor> pool,
                          Rng& rng, double cold_start_sigma = 0.5);

// Indices into `pool` of the top-k entries by cosine similarity to w,
// ties resolved toward the lowest client id.
std::vector<std::size_t> nearest_neighbors(const UnitVector& w, std::span<const Neighbor> pool, int k);

}  // namespace fedhide
