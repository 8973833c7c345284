#include "fedhide/objective.hpp"

#include "fedhide/errors.hpp"

namespace fedhide {

namespace {

void check_dims(const Vec& w, std::span<const UnitVector> proxies) {
  for (const auto& p : proxies) {
    if (p.dim() != w.size()) {
      throw DimensionMismatch("proxy dimension " + std::to_string(p.dim()) + " != prototype dimension " +
                              std::to_string(w.size()));
    }
  }
}

double negative_term(const Vec& w, std::span<const UnitVector> proxies) {
  if (proxies.empty()) throw EmptyProxySet("negative loss needs at least one proxy prototype");
  check_dims(w, proxies);
  double s = 0.0;
  for (const auto& p : proxies) {
    const double m = 1.0 + w.dot(p.values());
    s += m * m;
  }
  return s / static_cast<double>(proxies.size());
}

}  // namespace

double positive_loss(const UnitVector& embedding, const UnitVector& w) {
  const double r = 1.0 - w.dot(embedding);
  return r * r;
}

double negative_loss(const UnitVector& w, std::span<const UnitVector> proxies) {
  return negative_term(w.values(), proxies);
}

LossBreakdown evaluate_loss(const ModelParams& params, const Vec& w, std::span<const Vec> batch,
                            std::span<const UnitVector> proxies, double lambda) {
  if (batch.empty()) throw InvalidArgument("loss needs a nonempty batch");
  if (w.size() != params.architecture().embed_dim) throw DimensionMismatch("prototype dimension != embed_dim");
  LossBreakdown lb;
  lb.lambda = lambda;
  for (const auto& x : batch) {
    const double r = 1.0 - w.dot(embed(params, x).values());
    lb.positive += r * r;
  }
  lb.positive /= static_cast<double>(batch.size());
  lb.negative = negative_term(w, proxies);
  lb.total = lb.positive + lambda * lb.negative;
  return lb;
}

ObjectiveResult loss_and_gradients(const ModelParams& params, const Vec& w, std::span<const Vec> batch,
                                   std::span<const UnitVector> proxies, double lambda) {
  if (batch.empty()) throw InvalidArgument("loss needs a nonempty batch");
  if (w.size() != params.architecture().embed_dim) throw DimensionMismatch("prototype dimension != embed_dim");
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");

  ObjectiveResult res{LossBreakdown{}, ModelParams::zeros(params.architecture()), Vec::Zero(w.size())};
  res.loss.lambda = lambda;
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  for (const auto& x : batch) {
    const ForwardResult fr = forward(params, x);
    const Vec& f = fr.embedding.values();
    const double r = 1.0 - w.dot(f);
    res.loss.positive += r * r;
    // dL/df = -2 r w, dL/dw = -2 r f
    backward_accumulate(params, fr.trace, -2.0 * r * w, inv_b, res.grad_theta);
    res.grad_w.noalias() += (-2.0 * r * inv_b) * f;
  }
  res.loss.positive *= inv_b;

  res.loss.negative = negative_term(w, proxies);
  const double coeff = lambda / static_cast<double>(proxies.size());
  for (const auto& p : proxies) {
    res.grad_w.noalias() += (coeff * 2.0 * (1.0 + w.dot(p.values()))) * p.values();
  }
  res.loss.total = res.loss.positive + lambda * res.loss.negative;
  return res;
}

}  // namespace fedhide
