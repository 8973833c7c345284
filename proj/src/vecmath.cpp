#include "fedhide/vecmath.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedhide/errors.hpp"

namespace fedhide {

namespace {

constexpr int kMaxResamples = 64;

void require_dim(Eigen::Index d) {
  if (d < 2) {
    throw InvalidArgument("unit vectors need dimension >= 2, got " + std::to_string(d));
  }
}

}  // namespace

UnitVector UnitVector::from_unit(Vec v, double tol) {
  require_dim(v.size());
  const double n = v.norm();
  if (!(std::abs(n - 1.0) <= tol)) {
    throw InvalidArgument("vector is not unit norm (norm = " + std::to_string(n) + ")");
  }
  return UnitVector(std::move(v));
}

double UnitVector::dot(const UnitVector& other) const {
  if (other.dim() != dim()) {
    throw DimensionMismatch("dimension mismatch: " + std::to_string(dim()) + " vs " +
                            std::to_string(other.dim()));
  }
  return v_.dot(other.v_);
}

UnitVector normalize(const Vec& v) {
  require_dim(v.size());
  const double n = v.norm();
  if (!(n > kNormEpsilon)) {
    throw DegenerateVector("cannot normalize vector with norm " + std::to_string(n));
  }
  return UnitVector(v / n);
}

double cosine_similarity(const UnitVector& u, const UnitVector& v) {
  return std::clamp(u.dot(v), -1.0, 1.0);
}

UnitVector sample_unit_sphere(int d, Rng& rng) {
  require_dim(d);
  Vec g(d);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    for (int i = 0; i < d; ++i) g[i] = rng.normal();
    if (g.norm() > kNormEpsilon) return normalize(g);
  }
  throw DegenerateVector("sphere sampling underflowed repeatedly");
}

UnitVector sample_on_cone(const UnitVector& w, double cos_theta, Rng& rng) {
  if (!(cos_theta > -1.0 && cos_theta <= 1.0)) {
    throw InvalidArgument("cos_theta must lie in (-1, 1], got " + std::to_string(cos_theta));
  }
  if (cos_theta == 1.0) return w;

  const Eigen::Index d = w.dim();
  const Vec& axis = w.values();
  const double sin_theta = std::sqrt(1.0 - cos_theta * cos_theta);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const UnitVector u = sample_unit_sphere(static_cast<int>(d), rng);
    Vec tangent = u.values() - u.values().dot(axis) * axis;
    if (tangent.norm() <= kNormEpsilon) continue;
    tangent.normalize();
    // second pass removes the residual component left by rounding
    tangent -= tangent.dot(axis) * axis;
    tangent.normalize();
    return normalize(cos_theta * axis + sin_theta * tangent);
  }
  throw DegenerateVector("cone sampling: orthogonalized sample underflowed repeatedly");
}

}  // namespace fedhide
