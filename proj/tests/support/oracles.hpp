#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "fedhide/model.hpp"
#include "fedhide/objective.hpp"
#include "fedhide/rng.hpp"
#include "fedhide/vecmath.hpp"

// Reference computations used only by tests. They are written for clarity,
// not speed, and share no code with the library paths they check.
namespace fedhide {

// Readable gtest failure output for unit vectors.
inline void PrintTo(const UnitVector& u, std::ostream* os) { *os << "[" << u.values().transpose() << "]"; }

}  // namespace fedhide

namespace fedhide::oracle {

// Central differences of f at x with step h.
Vec central_difference(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-5);

// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor)
double max_relative_error(const Vec& a, const Vec& b, double floor = 1e-4);

struct ObjectiveFd {
  Vec grad_theta;
  Vec grad_w;
};

// Finite-difference gradients of the batch loss w.r.t. flattened parameters
// and the raw prototype.
ObjectiveFd objective_gradients_fd(const ModelParams& params, const Vec& w, std::span<const Vec> batch,
                                   std::span<const UnitVector> proxies, double lambda, double h = 1e-5);

// Finite-difference gradient of g . embedding(x) w.r.t. flattened parameters.
Vec embedding_gradient_fd(const ModelParams& params, const Vec& x, const Vec& g, double h = 1e-5);

// Walks every threshold (below all scores, every midpoint between adjacent
// distinct scores, above all scores), counting FAR = #impostor >= t and
// FRR = #genuine < t directly, and interpolates at the first sign change of
// FAR - FRR.
double brute_force_eer(std::span<const double> genuine, std::span<const double> impostor);

// Builds the full similarity matrix and takes argmax row by row.
double brute_force_leakage(std::span<const UnitVector> prototypes, std::span<const UnitVector> proxies);

Vec random_vec(int d, Rng& rng, double scale = 1.0);
std::vector<UnitVector> random_units(int n, int d, Rng& rng);

// Random orthogonal matrix (QR of a Gaussian matrix with sign fix).
Eigen::MatrixXd random_rotation(int d, Rng& rng);
UnitVector rotate(const Eigen::MatrixXd& q, const UnitVector& u);

}  // namespace fedhide::oracle
