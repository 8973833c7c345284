#include "fedhide/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "fedhide/errors.hpp"

namespace fedhide {

void BoundInputs::validate() const {
  if (!(eta > 0.0)) throw InvalidInputs("eta must be > 0");
  if (!(lambda >= 0.0)) throw InvalidInputs("lambda must be >= 0");
  if (E < 1) throw InvalidInputs("E must be >= 1");
  if (C < 2) throw InvalidInputs("C must be >= 2");
  if (!(epsilon > 0.0)) throw InvalidInputs("epsilon must be > 0");
  if (!(Delta >= 0.0)) throw InvalidInputs("Delta must be >= 0");
  const auto& k = constants;
  if (!(k.L1 >= 0.0 && k.L2 >= 0.0 && k.sigma_g >= 0.0 && k.G1 >= 0.0 && k.G2 >= 0.0)) {
    throw InvalidInputs("assumption constants must be non-negative");
  }
}

double theorem1_decrease_bound(const BoundInputs& in, std::span<const double> grad_sq_norms) {
  in.validate();
  if (grad_sq_norms.size() != static_cast<std::size_t>(in.E)) {
    throw InvalidInputs("expected " + std::to_string(in.E) + " squared gradient norms, got " +
                        std::to_string(grad_sq_norms.size()));
  }
  const auto& k = in.constants;
  const double eta = in.eta;
  const double E = in.E;
  const double neg_share = in.lambda / static_cast<double>(in.C - 1);
  double grad_sum = 0.0;
  for (double g : grad_sq_norms) {
    if (!(g >= 0.0)) throw InvalidInputs("squared gradient norms must be non-negative");
    grad_sum += g;
  }
  return -(eta - k.L1 * eta * eta / 2.0) * grad_sum + (k.L1 * E * eta * eta / 2.0) * k.sigma_g * k.sigma_g +
         (k.L2 * k.L2 + neg_share) * eta * eta * E * k.G1 * k.G1 + 4.0 * neg_share * k.G2 * k.G2;
}

double theorem2_denominator(const BoundInputs& in) {
  in.validate();
  const auto& k = in.constants;
  const double eta = in.eta;
  const double E = in.E;
  const double neg_share = in.lambda / static_cast<double>(in.C - 1);
  return E * in.epsilon * (2.0 * eta - k.L1 * eta * eta) -
         E * eta * eta * (k.L1 * k.sigma_g * k.sigma_g + 2.0 * (k.L2 * k.L2 + neg_share) * k.G1 * k.G1) -
         8.0 * neg_share * k.G2 * k.G2;
}

std::int64_t theorem2_rounds(const BoundInputs& in) {
  const double denom = theorem2_denominator(in);
  if (!(denom > 0.0)) throw NonPositiveDenominator(denom);
  return static_cast<std::int64_t>(std::ceil(2.0 * in.Delta / denom));
}

ConstantEstimate estimate_constants(std::span<const TraceStep> trace) {
  if (trace.size() < 2) throw InsufficientTrace("need at least two trace steps");
  ConstantEstimate est;
  auto& k = est.constants;
  for (std::size_t t = 0; t + 1 < trace.size(); ++t) {
    const TraceStep& a = trace[t];
    const TraceStep& b = trace[t + 1];
    if (a.phi.size() != b.phi.size()) throw InsufficientTrace("trace steps have differing dimensions");
    const double dphi = (a.phi - b.phi).norm();
    if (dphi == 0.0) continue;
    ++est.smoothness_pairs;
    if (a.full_gradient.size() == b.full_gradient.size() && a.full_gradient.size() > 0)
      k.L1 = std::max(k.L1, (a.full_gradient - b.full_gradient).norm() / dphi);
    if (a.probe_embedding.size() == b.probe_embedding.size() && a.probe_embedding.size() > 0)
      k.L2 = std::max(k.L2, (a.probe_embedding - b.probe_embedding).norm() / dphi);
  }
  double max_var = 0.0;
  for (const TraceStep& s : trace) {
    if (!s.stochastic_gradients.empty()) {
      double var = 0.0;
      for (const Vec& g : s.stochastic_gradients) {
        k.G1 = std::max(k.G1, g.norm());
        if (g.size() == s.full_gradient.size()) var += (g - s.full_gradient).squaredNorm();
      }
      max_var = std::max(max_var, var / static_cast<double>(s.stochastic_gradients.size()));
    } else if (s.full_gradient.size() > 0) {
      k.G1 = std::max(k.G1, s.full_gradient.norm());
    }
    if (s.prototype.size() > 0 && s.prototype.size() == s.proxy.size())
      k.G2 = std::max(k.G2, (s.prototype - s.proxy).norm());
  }
  k.sigma_g = std::sqrt(max_var);
  return est;
}

namespace {

nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec json_vec(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

void write_trace(const std::filesystem::path& path, std::span<const TraceStep> trace) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write trace file: " + path.string());
  for (const auto& s : trace) {
    nlohmann::json j;
    j["phi"] = vec_json(s.phi);
    j["full_gradient"] = vec_json(s.full_gradient);
    j["stochastic_gradients"] = nlohmann::json::array();
    for (const auto& g : s.stochastic_gradients) j["stochastic_gradients"].push_back(vec_json(g));
    j["probe_embedding"] = vec_json(s.probe_embedding);
    j["prototype"] = vec_json(s.prototype);
    j["proxy"] = vec_json(s.proxy);
    out << j.dump() << '\n';
  }
}

std::vector<TraceStep> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InsufficientTrace("cannot open trace file: " + path.string());
  std::vector<TraceStep> steps;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TraceStep s;
      s.phi = json_vec(j.at("phi"));
      s.full_gradient = json_vec(j.at("full_gradient"));
      for (const auto& g : j.at("stochastic_gradients")) s.stochastic_gradients.push_back(json_vec(g));
      s.probe_embedding = json_vec(j.at("probe_embedding"));
      s.prototype = json_vec(j.at("prototype"));
      s.proxy = json_vec(j.at("proxy"));
      steps.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw InsufficientTrace(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return steps;
}

}  // namespace fedhide
