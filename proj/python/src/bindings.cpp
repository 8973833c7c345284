#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fedhide/cli.hpp"
#include "fedhide/convergence.hpp"
#include "fedhide/errors.hpp"
#include "fedhide/experiment.hpp"
#include "fedhide/metrics.hpp"
#include "fedhide/proxy.hpp"
#include "fedhide/vecmath.hpp"

namespace py = pybind11;
using namespace fedhide;

namespace {

std::vector<UnitVector> to_units(const std::vector<Vec>& vs) {
  std::vector<UnitVector> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(normalize(v));
  return out;
}

py::dict mean_std_dict(const MeanStd& m) {
  py::dict d;
  d["mean"] = m.mean;
  d["std"] = m.std;
  d["n"] = m.n;
  return d;
}

py::dict summary_dict(const ExperimentSummary& s) {
  py::dict d;
  d["leakage"] = mean_std_dict(s.leakage);
  d["accuracy"] = mean_std_dict(s.accuracy);
  d["eer"] = mean_std_dict(s.eer);
  d["proxy_similarity_avg"] = mean_std_dict(s.proxy_similarity_avg);
  d["proxy_similarity_std"] = mean_std_dict(s.proxy_similarity_std);
  d["mean_total_loss"] = mean_std_dict(s.mean_total_loss);
  return d;
}

py::dict metrics_dict(const RoundMetrics& m) {
  py::dict d;
  d["round"] = m.round;
  d["mean_total_loss"] = m.mean_total_loss;
  d["mean_positive_loss"] = m.mean_positive_loss;
  d["mean_negative_loss"] = m.mean_negative_loss;
  d["leakage"] = m.leakage;
  d["accuracy"] = m.accuracy ? py::cast(*m.accuracy) : py::none();
  d["eer"] = m.eer ? py::cast(*m.eer) : py::none();
  d["proxy_similarity_avg"] = m.proxy_similarity_avg;
  d["proxy_similarity_std"] = m.proxy_similarity_std;
  return d;
}

BoundInputs bound_inputs(double eta, double lambda, int E, int C, double epsilon, double Delta, double L1, double L2,
                         double sigma_g, double G1, double G2) {
  BoundInputs in;
  in.eta = eta;
  in.lambda = lambda;
  in.E = E;
  in.C = C;
  in.epsilon = epsilon;
  in.Delta = Delta;
  in.constants = {L1, L2, sigma_g, G1, G2};
  return in;
}

}  // namespace

PYBIND11_MODULE(_fedhide, m) {
  m.doc() = "Federated prototype learning with proxy prototypes";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<NonPositiveDenominator>(m, "NonPositiveDenominator", base.ptr());
  py::register_exception<DegenerateVector>(m, "DegenerateVector", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<NoMetricsFound>(m, "NoMetricsFound", base.ptr());

  m.def("normalize", [](const Vec& v) { return normalize(v).values(); }, py::arg("v"));
  m.def(
      "sample_unit_sphere",
      [](int d, std::uint64_t seed) {
        Rng rng(seed);
        return sample_unit_sphere(d, rng).values();
      },
      py::arg("d"), py::arg("seed"));

  m.def(
      "fedhide_proxy", [](const Vec& w, const std::vector<Vec>& proxies, double alpha, int k) {
        return gen_fedhide(normalize(w), to_units(proxies), alpha, k).values();
      },
      py::arg("w"), py::arg("neighbor_proxies"), py::arg("alpha"), py::arg("k"));
  m.def(
      "fedgn_proxy",
      [](const Vec& w, double sigma, std::uint64_t seed) {
        Rng rng(seed);
        return gen_fedgn(normalize(w), sigma, rng).values();
      },
      py::arg("w"), py::arg("sigma"), py::arg("seed"));
  m.def(
      "fedcs_proxy",
      [](const Vec& w, double cos_theta, std::uint64_t seed) {
        Rng rng(seed);
        return gen_fedcs(normalize(w), cos_theta, rng).values();
      },
      py::arg("w"), py::arg("cos_theta"), py::arg("seed"));

  m.def(
      "prototype_leakage",
      [](const std::vector<Vec>& prototypes, const std::vector<Vec>& proxies) {
        return prototype_leakage(to_units(prototypes), to_units(proxies));
      },
      py::arg("prototypes"), py::arg("proxies"));
  m.def(
      "proxy_similarity_stats",
      [](const std::vector<Vec>& prototypes, const std::vector<Vec>& proxies) {
        const auto s = proxy_similarity_stats(to_units(prototypes), to_units(proxies));
        return py::make_tuple(s.avg, s.std);
      },
      py::arg("prototypes"), py::arg("proxies"));
  m.def(
      "equal_error_rate",
      [](const std::vector<double>& genuine, const std::vector<double>& impostor) {
        return equal_error_rate(genuine, impostor);
      },
      py::arg("genuine"), py::arg("impostor"));

  m.def(
      "theorem2_rounds",
      [](double eta, double lambda_, int E, int C, double epsilon, double Delta, double L1, double L2, double sigma_g,
         double G1, double G2) {
        return theorem2_rounds(bound_inputs(eta, lambda_, E, C, epsilon, Delta, L1, L2, sigma_g, G1, G2));
      },
      py::kw_only(), py::arg("eta"), py::arg("lambda_"), py::arg("E"), py::arg("C"), py::arg("epsilon"),
      py::arg("Delta"), py::arg("L1"), py::arg("L2"), py::arg("sigma_g"), py::arg("G1"), py::arg("G2"));
  m.def(
      "theorem1_decrease_bound",
      [](const std::vector<double>& grad_sq_norms, double eta, double lambda_, int E, int C, double L1, double L2,
         double sigma_g, double G1, double G2) {
        return theorem1_decrease_bound(bound_inputs(eta, lambda_, E, C, 1.0, 0.0, L1, L2, sigma_g, G1, G2),
                                       grad_sq_norms);
      },
      py::arg("grad_sq_norms"), py::kw_only(), py::arg("eta"), py::arg("lambda_"), py::arg("E"), py::arg("C"),
      py::arg("L1"), py::arg("L2"), py::arg("sigma_g"), py::arg("G1"), py::arg("G2"));

  m.def(
      "run_config",
      [](const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
         std::optional<std::vector<std::uint64_t>> seeds, std::optional<int> rounds) {
        ExperimentConfig cfg = load_config(config_path);
        if (seeds) cfg.seeds = *seeds;
        if (rounds) cfg.train.rounds = *rounds;
        const auto data = load_datasets(cfg, config_path.parent_path());
        ExperimentOutcome outcome;
        {
          py::gil_scoped_release release;
          outcome = run_experiment(cfg, data, out_dir);
        }
        py::list histories;
        for (const auto& s : outcome.seeds) {
          py::list h;
          for (const auto& r : s.history) h.append(metrics_dict(r));
          histories.append(h);
        }
        py::dict result;
        result["summary"] = summary_dict(outcome.summary);
        result["histories"] = histories;
        return result;
      },
      py::arg("config_path"), py::arg("out_dir"), py::arg("seeds") = py::none(), py::arg("rounds") = py::none(),
      "Train a config file over its seeds, writing the usual run directory.");
  m.def(
      "parse_grid",
      [](const std::string& spec) {
        std::vector<std::string> labels;
        for (const auto& p : parse_grid(spec)) labels.push_back(p.label);
        return labels;
      },
      py::arg("spec"));
  m.def("report", [](const std::filesystem::path& dir) { return build_report(dir).text; }, py::arg("metrics_dir"));
  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "fedhide");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return cli_main(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Run the command-line interface in-process; returns the exit code.");
}
