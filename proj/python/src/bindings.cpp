#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "stein/cli.hpp"
#include "stein/errors.hpp"
#include "stein/estimators.hpp"
#include "stein/gain.hpp"
#include "stein/optimizer.hpp"
#include "stein/phi.hpp"
#include "stein/selftest.hpp"

namespace py = pybind11;
using namespace stein;

namespace {

using Points = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointPattern to_pattern(const Points& pts, double radius) {
  if (pts.ndim() == 1) {
    return PointPattern(BallWindow(1, radius), std::vector<double>(pts.data(), pts.data() + pts.size()));
  }
  if (pts.ndim() != 2) throw ValidationError("points must be a 1-d or 2-d array");
  const int d = static_cast<int>(pts.shape(1));
  if (d < 1) throw ValidationError("points must have at least one column");
  return PointPattern(BallWindow(d, radius), std::vector<double>(pts.data(), pts.data() + pts.size()));
}

py::array_t<double> to_array(const PointPattern& p) {
  const auto n = static_cast<py::ssize_t>(p.size());
  const auto d = static_cast<py::ssize_t>(p.window().dimension());
  py::array_t<double> out({n, d});
  auto c = p.coordinates();
  std::copy(c.begin(), c.end(), out.mutable_data());
  return out;
}

py::dict as_dict(const GainEstimate& g) {
  py::dict r;
  r["value"] = g.value;
  r["std_error"] = g.std_error;
  r["n_samples"] = g.n_samples;
  return r;
}

PhiFamily family(const std::string& name, double gamma, double kappa) {
  if (name == "exponential") return ExponentialPhi(gamma, kappa);
  if (name == "mollified") return MollifiedLinearPhi(kappa, gamma);
  throw ValidationError("unknown family '" + name + "' (exponential or mollified)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stein-type intensity estimators for Poisson point patterns on balls";

  py::register_exception<DegenerateDenominator>(m, "DegenerateDenominator", PyExc_RuntimeError);
  py::register_exception<InvalidInterval>(m, "InvalidInterval", PyExc_RuntimeError);

  m.def("window_volume", py::overload_cast<int, double>(&window_volume), py::arg("d"), py::arg("radius") = 1.0);

  m.def(
      "sample_pattern",
      [](int d, double theta, std::uint64_t seed, double radius) {
        Stream s = make_stream(seed);
        return to_array(sample_pattern(BallWindow(d, radius), theta, s));
      },
      py::arg("d"), py::arg("theta"), py::arg("seed"), py::arg("radius") = 1.0);

  m.def(
      "y_statistic", [](const Points& pts, int k) { return y_statistic(to_pattern(pts, 1.0), k); }, py::arg("points"),
      py::arg("k"));

  m.def(
      "mle", [](const Points& pts, double radius) { return mle(to_pattern(pts, radius)); }, py::arg("points"),
      py::arg("radius") = 1.0);

  m.def(
      "stein_estimate",
      [](const Points& pts, int k, double gamma, double kappa, double radius) {
        return stein_estimate_rescaled(to_pattern(pts, radius), SteinParams{k, gamma, kappa});
      },
      py::arg("points"), py::arg("k"), py::arg("gamma"), py::arg("kappa"), py::arg("radius") = 1.0);

  m.def(
      "pr_estimate",
      [](const std::vector<double>& pts, double kappa) { return pr_estimate(std::span<const double>(pts), kappa); },
      py::arg("points"), py::arg("kappa"));

  m.def(
      "phi",
      [](double t, double gamma, double kappa, const std::string& name) {
        const auto v = phi_eval(family(name, gamma, kappa), t);
        return py::make_tuple(v.value, v.d1, v.d2);
      },
      py::arg("t"), py::arg("gamma"), py::arg("kappa"), py::arg("family") = "exponential");

  m.def(
      "gain_kernel",
      [](double t, double gamma, double kappa, const std::string& name) {
        return gain_kernel(family(name, gamma, kappa), t);
      },
      py::arg("t"), py::arg("gamma"), py::arg("kappa"), py::arg("family") = "exponential");

  m.def(
      "expected_gain",
      [](double theta, int d, int k, double gamma, double kappa, std::size_t samples, std::uint64_t seed,
         unsigned threads) {
        Stream s = make_stream(seed);
        GainEstimate g;
        {
          py::gil_scoped_release nogil;
          g = expected_gain(k, ExponentialPhi(gamma, kappa), theta, BallWindow(d), samples, s, threads);
        }
        return as_dict(g);
      },
      py::arg("theta"), py::arg("d"), py::arg("k"), py::arg("gamma"), py::arg("kappa"), py::arg("samples") = 50000,
      py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "gamma_star",
      [](double theta, int d, int k, double kappa, std::size_t samples, std::uint64_t seed) {
        Stream s = make_stream(seed);
        const auto g = gamma_star(k, kappa, theta, BallWindow(d), samples, s);
        py::dict r;
        r["gamma"] = g.gamma;
        r["numerator"] = g.numerator;
        r["denominator"] = g.denominator;
        r["degenerate"] = g.degenerate;
        return r;
      },
      py::arg("theta"), py::arg("d"), py::arg("k"), py::arg("kappa"), py::arg("samples") = 50000, py::arg("seed") = 1);

  m.def(
      "optimize",
      [](double theta, int d, std::optional<double> rho, std::size_t samples, std::uint64_t seed, unsigned threads,
         int refine_top) {
        Stream s = make_stream(seed);
        OptimizerOptions opts;
        opts.threads = threads;
        opts.refine_top = refine_top;
        OptimizationResult res;
        {
          py::gil_scoped_release nogil;
          res = rho ? optimize_datadriven(theta, *rho, BallWindow(d), samples, KappaGrid{}, s, opts)
                    : optimize_at_theta(theta, BallWindow(d), samples, KappaGrid{}, s, opts);
        }
        py::dict r;
        r["k"] = res.params.k;
        r["gamma"] = res.params.gamma;
        r["kappa"] = res.params.kappa;
        r["objective"] = as_dict(res.objective);
        r["k_lo"] = res.k_lo;
        r["k_hi"] = res.k_hi;
        r["evaluations"] = res.evaluations;
        r["skipped_k"] = res.skipped_k;
        return r;
      },
      py::arg("theta"), py::arg("d"), py::arg("rho") = py::none(), py::arg("samples") = 50000, py::arg("seed") = 1,
      py::arg("threads") = 1, py::arg("refine_top") = 0);

  m.def(
      "selftest",
      [](std::uint64_t seed) {
        py::list out;
        for (const auto& c : run_selftest(seed)) out.append(py::make_tuple(c.name, c.ok, c.detail));
        return out;
      },
      py::arg("seed") = 1);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "stein");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return run(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"));
}
