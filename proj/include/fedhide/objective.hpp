#pragma once

#include <span>
#include <vector>

#include "fedhide/model.hpp"
#include "fedhide/vecmath.hpp"

namespace fedhide {

struct LossBreakdown {
  double positive = 0.0;
  double negative = 0.0;
  double total = 0.0;
  double lambda = 0.0;

  friend bool operator==(const LossBreakdown&, const LossBreakdown&) = default;
};

// (1 - w.f)^2
double positive_loss(const UnitVector& embedding, const UnitVector& w);

// mean over proxies of (1 + w.p)^2
double negative_loss(const UnitVector& w, std::span<const UnitVector> proxies);

struct ObjectiveResult {
  LossBreakdown loss;
  ModelGradient grad_theta;
  Vec grad_w;
};

// Batch-mean positive loss plus lambda times the negative loss, with
// gradients w.r.t. the network parameters and w. `w` is taken as a free
// vector in R^d; the caller owns any projection back to the sphere. Proxies
// are constants.
ObjectiveResult loss_and_gradients(const ModelParams& params, const Vec& w, std::span<const Vec> batch,
                                   std::span<const UnitVector> proxies, double lambda);

inline ObjectiveResult loss_and_gradients(const ModelParams& params, const UnitVector& w,
                                          std::span<const Vec> batch, std::span<const UnitVector> proxies,
                                          double lambda) {
  return loss_and_gradients(params, w.values(), batch, proxies, lambda);
}

// Loss only, same conventions; used by finite-difference checks and traces.
LossBreakdown evaluate_loss(const ModelParams& params, const Vec& w, std::span<const Vec> batch,
                            std::span<const UnitVector> proxies, double lambda);

}  // namespace fedhide
