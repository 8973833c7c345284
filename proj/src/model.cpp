#include "fedhide/model.hpp"

#include <cmath>

#include "fedhide/errors.hpp"

namespace fedhide {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
    case Activation::kIdentity: return "identity";
  }
  return "unknown";
}

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  if (name == "identity" || name == "linear") return Activation::kIdentity;
  throw InvalidArchitecture("unknown activation '" + name + "'");
}

std::vector<int> Architecture::widths() const {
  std::vector<int> w;
  w.reserve(hidden.size() + 2);
  w.push_back(input_dim);
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(embed_dim);
  return w;
}

std::size_t Architecture::num_params() const {
  const auto w = widths();
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    n += static_cast<std::size_t>(w[i]) * w[i + 1] + static_cast<std::size_t>(w[i + 1]);
  return n;
}

void Architecture::validate() const {
  if (input_dim < 1) throw InvalidArchitecture("input_dim must be >= 1");
  for (int h : hidden)
    if (h < 1) throw InvalidArchitecture("hidden widths must be >= 1");
  if (embed_dim < 2) throw InvalidArchitecture("embed_dim must be >= 2");
}

ModelParams::ModelParams(Architecture arch, std::vector<DenseLayer> layers)
    : arch_(std::move(arch)), layers_(std::move(layers)) {
  arch_.validate();
  const auto w = arch_.widths();
  if (layers_.size() != w.size() - 1) throw InvalidArchitecture("layer count does not match architecture");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.weight.rows() != w[i + 1] || l.weight.cols() != w[i] || l.bias.size() != w[i + 1]) {
      throw InvalidArchitecture("layer " + std::to_string(i) + " shape does not chain");
    }
  }
}

ModelParams ModelParams::zeros(const Architecture& arch) {
  arch.validate();
  const auto w = arch.widths();
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    layers.push_back({RowMatrix::Zero(w[i + 1], w[i]), Vec::Zero(w[i + 1])});
  return ModelParams(arch, std::move(layers));
}

ModelParams ModelParams::unflatten(const Architecture& arch, const Vec& flat) {
  ModelParams p = zeros(arch);
  if (static_cast<std::size_t>(flat.size()) != p.size()) {
    throw ShapeMismatch("unflatten: expected " + std::to_string(p.size()) + " values, got " +
                        std::to_string(flat.size()));
  }
  Eigen::Index off = 0;
  for (auto& l : p.layers_) {
    const Eigen::Index nw = l.weight.size();
    std::copy(flat.data() + off, flat.data() + off + nw, l.weight.data());
    off += nw;
    l.bias = flat.segment(off, l.bias.size());
    off += l.bias.size();
  }
  return p;
}

Vec ModelParams::flatten() const {
  Vec flat(static_cast<Eigen::Index>(size()));
  Eigen::Index off = 0;
  for (const auto& l : layers_) {
    std::copy(l.weight.data(), l.weight.data() + l.weight.size(), flat.data() + off);
    off += l.weight.size();
    flat.segment(off, l.bias.size()) = l.bias;
    off += l.bias.size();
  }
  return flat;
}

void ModelParams::add_scaled(const ModelParams& other, double scale) {
  if (!same_shape(other)) throw ShapeMismatch("parameter shapes differ");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].weight.noalias() += scale * other.layers_[i].weight;
    layers_[i].bias.noalias() += scale * other.layers_[i].bias;
  }
}

void ModelParams::scale(double factor) {
  for (auto& l : layers_) {
    l.weight *= factor;
    l.bias *= factor;
  }
}

void ModelParams::set_zero() {
  for (auto& l : layers_) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

double ModelParams::squared_norm() const {
  double s = 0.0;
  for (const auto& l : layers_) s += l.weight.squaredNorm() + l.bias.squaredNorm();
  return s;
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  if (!a.same_shape(b)) return false;
  for (std::size_t i = 0; i < a.layers_.size(); ++i) {
    if (a.layers_[i].weight != b.layers_[i].weight || a.layers_[i].bias != b.layers_[i].bias) return false;
  }
  return true;
}

ModelParams init_params(const Architecture& arch, std::uint64_t seed) {
  arch.validate();
  Rng rng = Rng::stream(seed, kServerStream, Purpose::kModelInit);
  ModelParams p = ModelParams::zeros(arch);
  for (auto& l : p.mutable_layers()) {
    const double fan_in = static_cast<double>(l.weight.cols());
    const double fan_out = static_cast<double>(l.weight.rows());
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (Eigen::Index i = 0; i < l.weight.size(); ++i)
      l.weight.data()[i] = limit * (2.0 * rng.uniform() - 1.0);
  }
  return p;
}

namespace {

void apply_activation(Activation a, Vec& v) {
  switch (a) {
    case Activation::kTanh: v = v.array().tanh(); break;
    case Activation::kRelu: v = v.cwiseMax(0.0); break;
    case Activation::kIdentity: break;
  }
}

// derivative expressed through the pre-activation z
Vec activation_derivative(Activation a, const Vec& z) {
  switch (a) {
    case Activation::kTanh: return 1.0 - z.array().tanh().square();
    case Activation::kRelu: return (z.array() > 0.0).cast<double>();
    case Activation::kIdentity: return Vec::Ones(z.size());
  }
  return Vec::Ones(z.size());
}

}  // namespace

ForwardResult forward(const ModelParams& params, const Vec& x) {
  const auto& arch = params.architecture();
  if (x.size() != arch.input_dim) {
    throw DimensionMismatch("forward: input has dimension " + std::to_string(x.size()) +
                            ", network expects " + std::to_string(arch.input_dim));
  }
  ForwardTrace trace;
  const auto& layers = params.layers();
  trace.layer_inputs.reserve(layers.size());
  trace.pre_activations.reserve(layers.size());
  Vec a = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Vec z = layers[i].bias;
    z.noalias() += layers[i].weight * a;
    trace.layer_inputs.push_back(std::move(a));
    trace.pre_activations.push_back(z);
    a = std::move(z);
    if (i + 1 < layers.size()) apply_activation(arch.hidden_activation, a);
  }
  trace.output = std::move(a);
  trace.output_norm = trace.output.norm();
  UnitVector e = normalize(trace.output);
  trace.embedding = e.values();
  return {std::move(e), std::move(trace)};
}

UnitVector embed(const ModelParams& params, const Vec& x) {
  return forward(params, x).embedding;
}

void backward_accumulate(const ModelParams& params, const ForwardTrace& trace,
                         const Vec& grad_embedding, double scale, ModelGradient& out) {
  const auto& layers = params.layers();
  if (trace.layer_inputs.size() != layers.size() || trace.pre_activations.size() != layers.size() ||
      trace.output.size() != params.architecture().embed_dim ||
      trace.layer_inputs.front().size() != params.architecture().input_dim) {
    throw TraceMismatch("forward trace does not match the parameter shapes");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (trace.layer_inputs[i].size() != layers[i].weight.cols() ||
        trace.pre_activations[i].size() != layers[i].weight.rows()) {
      throw TraceMismatch("forward trace layer " + std::to_string(i) + " has the wrong shape");
    }
  }
  if (grad_embedding.size() != trace.embedding.size()) {
    throw DimensionMismatch("grad_embedding dimension does not match the embedding");
  }
  if (!out.same_shape(params)) throw ShapeMismatch("gradient buffer shape differs from params");

  const Vec& e = trace.embedding;
  // dL/dy = (I - e e^T) g / |y|
  Vec delta = (grad_embedding - e.dot(grad_embedding) * e) / trace.output_norm;

  auto& grads = out.mutable_layers();
  const Activation act = params.architecture().hidden_activation;
  for (std::size_t ii = layers.size(); ii-- > 0;) {
    grads[ii].weight.noalias() += scale * delta * trace.layer_inputs[ii].transpose();
    grads[ii].bias.noalias() += scale * delta;
    if (ii == 0) break;
    Vec upstream = layers[ii].weight.transpose() * delta;
    delta = upstream.cwiseProduct(activation_derivative(act, trace.pre_activations[ii - 1]));
  }
}

ModelGradient backward(const ModelParams& params, const ForwardTrace& trace, const Vec& grad_embedding) {
  ModelGradient g = ModelParams::zeros(params.architecture());
  backward_accumulate(params, trace, grad_embedding, 1.0, g);
  return g;
}

}  // namespace fedhide
