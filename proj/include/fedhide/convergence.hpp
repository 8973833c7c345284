#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fedhide/vecmath.hpp"

namespace fedhide {

// Constants of the smoothness / noise / boundedness assumptions behind the
// per-round decrease bound and the round-count formula.
struct AssumptionConstants {
  double L1 = 0.0;       // smoothness of the local objective
  double L2 = 0.0;       // Lipschitz constant of the embedding map
  double sigma_g = 0.0;  // stochastic gradient noise std
  double G1 = 0.0;       // stochastic gradient norm bound
  double G2 = 0.0;       // prototype / proxy gap bound

  friend bool operator==(const AssumptionConstants&, const AssumptionConstants&) = default;
};

struct BoundInputs {
  double eta = 0.01;
  double lambda = 0.0;
  int E = 1;
  int C = 2;
  double epsilon = 1.0;
  double Delta = 0.0;  // L_0 - L*
  AssumptionConstants constants;

  void validate() const;
};

// Expected change of the loss over one communication round (right-hand
// side of the bound minus the starting loss). `grad_sq_norms` holds the E
// squared gradient norms along the local trajectory.
double theorem1_decrease_bound(const BoundInputs& in, std::span<const double> grad_sq_norms);

// E eps (2 eta - L1 eta^2) - E eta^2 (L1 sigma^2 + 2 (L2^2 + lambda/(C-1)) G1^2)
//   - 8 lambda/(C-1) G2^2
double theorem2_denominator(const BoundInputs& in);

// ceil(2 Delta / denominator); throws NonPositiveDenominator when the
// denominator is <= 0.
std::int64_t theorem2_rounds(const BoundInputs& in);

// One observation along a client's optimization path.
struct TraceStep {
  Vec phi;                                // flattened (theta, w)
  Vec full_gradient;                      // gradient over the whole local set at phi
  std::vector<Vec> stochastic_gradients;  // minibatch gradients at phi
  Vec probe_embedding;                    // f(phi) on a fixed probe input
  Vec prototype;                          // w after the local update
  Vec proxy;                              // proxy generated from that w
};

struct ConstantEstimate {
  AssumptionConstants constants;
  std::size_t smoothness_pairs = 0;  // consecutive pairs with phi_t1 != phi_t2
  // Finite traces only bound the true constants from below.
  static constexpr const char* kCaveat =
      "empirical lower bounds from a finite trace; not certified suprema";
};

ConstantEstimate estimate_constants(std::span<const TraceStep> trace);

void write_trace(const std::filesystem::path& path, std::span<const TraceStep> trace);
std::vector<TraceStep> read_trace(const std::filesystem::path& path);

}  // namespace fedhide
