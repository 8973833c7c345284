#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fedhide/vecmath.hpp"

namespace fedhide {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Activation { kTanh, kRelu, kIdentity };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

// Fully connected network input_dim -> hidden... -> embed_dim. Hidden layers
// use `hidden_activation`; the output layer is linear and followed by L2
// normalization.
struct Architecture {
  int input_dim = 0;
  std::vector<int> hidden;
  int embed_dim = 0;
  Activation hidden_activation = Activation::kTanh;

  std::vector<int> widths() const;
  std::size_t num_layers() const { return hidden.size() + 1; }
  std::size_t num_params() const;
  void validate() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

struct DenseLayer {
  RowMatrix weight;  // out x in
  Vec bias;          // out
};

// Network parameters. Flattening order: layer-major, then weights (row
// major), then bias.
class ModelParams {
 public:
  ModelParams(Architecture arch, std::vector<DenseLayer> layers);

  static ModelParams zeros(const Architecture& arch);
  static ModelParams unflatten(const Architecture& arch, const Vec& flat);

  const Architecture& architecture() const noexcept { return arch_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& mutable_layers() noexcept { return layers_; }

  std::size_t size() const { return arch_.num_params(); }
  Vec flatten() const;
  bool same_shape(const ModelParams& other) const { return arch_ == other.arch_; }

  // this += scale * other
  void add_scaled(const ModelParams& other, double scale);
  void scale(double factor);
  void set_zero();
  double squared_norm() const;

  friend bool operator==(const ModelParams& a, const ModelParams& b);

 private:
  Architecture arch_;
  std::vector<DenseLayer> layers_;
};

// Gradients share the parameter layout.
using ModelGradient = ModelParams;

// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
ModelParams init_params(const Architecture& arch, std::uint64_t seed);

// Everything backward() needs: layer inputs, hidden pre-activations and the
// raw output before normalization.
struct ForwardTrace {
  std::vector<Vec> layer_inputs;     // input of layer i (x for i = 0)
  std::vector<Vec> pre_activations;  // z_i = W_i a_i + b_i for every layer
  Vec output;                        // y, the last pre-activation
  double output_norm = 0.0;
  Vec embedding;                     // y / |y|
};

struct ForwardResult {
  UnitVector embedding;
  ForwardTrace trace;
};

ForwardResult forward(const ModelParams& params, const Vec& x);

// forward() without keeping the trace.
UnitVector embed(const ModelParams& params, const Vec& x);

// dL/dtheta given dL/d(embedding). Uses the exact normalization Jacobian
// (I - e e^T) / |y|.
ModelGradient backward(const ModelParams& params, const ForwardTrace& trace, const Vec& grad_embedding);

// Same as backward() but accumulates `scale * dL/dtheta` into `out`.
void backward_accumulate(const ModelParams& params, const ForwardTrace& trace,
                         const Vec& grad_embedding, double scale, ModelGradient& out);

}  // namespace fedhide
