#pragma once

#include <Eigen/Core>

#include "fedhide/rng.hpp"

namespace fedhide {

using Vec = Eigen::VectorXd;

// Inputs with L2 norm at or below this are treated as directionless.
inline constexpr double kNormEpsilon = 1e-12;
// Tolerance used when checking that a vector already lies on the sphere.
inline constexpr double kUnitTolerance = 1e-9;

// A point on the unit hypersphere in R^d, d >= 2. Only constructible through
// normalize() or from_unit(), so the norm invariant always holds.
class UnitVector {
 public:
  // Wraps v without rescaling; throws InvalidArgument if |norm(v) - 1| > tol.
  static UnitVector from_unit(Vec v, double tol = kUnitTolerance);

  const Vec& values() const noexcept { return v_; }
  Eigen::Index dim() const noexcept { return v_.size(); }
  double operator[](Eigen::Index i) const { return v_[i]; }
  double dot(const UnitVector& other) const;

  UnitVector operator-() const { return UnitVector(-v_); }

  friend bool operator==(const UnitVector& a, const UnitVector& b) { return a.v_ == b.v_; }

 private:
  explicit UnitVector(Vec v) : v_(std::move(v)) {}
  friend UnitVector normalize(const Vec& v);

  Vec v_;
};

UnitVector normalize(const Vec& v);

// Dot product of two unit vectors clamped to [-1, 1].
double cosine_similarity(const UnitVector& u, const UnitVector& v);

// Uniform on the (d-1)-sphere via Gaussian-then-normalize.
UnitVector sample_unit_sphere(int d, Rng& rng);

// Uniform among unit vectors u with u.w == cos_theta. cos_theta == 1 returns
// w itself.
UnitVector sample_on_cone(const UnitVector& w, double cos_theta, Rng& rng);

}  // namespace fedhide
