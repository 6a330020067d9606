#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "kglab/decomposition.hpp"
#include "kglab/manifold.hpp"
#include "kglab/spectral.hpp"
#include "kglab/virial.hpp"

namespace py = pybind11;
using namespace kglab;

namespace {
ModelParams params(double alpha, double x_max, int n_points) {
  ModelParams p;
  p.alpha = alpha;
  p.domain_half_length = x_max;
  p.n_points = n_points;
  p.validate();
  return p;
}

OperatorKind kind_from(const std::string& s) {
  if (s == "L") return OperatorKind::L;
  if (s == "L-") return OperatorKind::Lminus;
  if (s == "L0") return OperatorKind::Lzero;
  throw py::value_error("operator must be one of L, L-, L0");
}

std::vector<double> nodes(const Grid& g) {
  std::vector<double> x(static_cast<size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) x[static_cast<size_t>(i)] = g.x(i);
  return x;
}
}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical lab for the 1D Klein-Gordon soliton";

  m.def(
      "spectrum",
      [](double alpha, double x_max, int n_points, int k, const std::string& op, bool extrapolate) {
        const ModelParams p = params(alpha, x_max, n_points);
        const Grid g(p);
        std::vector<double> out;
        if (extrapolate) {
          for (const auto& e : extrapolated_even_eigenvalues(kind_from(op), p, g, k)) out.push_back(e.extrapolated);
        } else {
          for (const auto& e : even_spectrum(build_operator(kind_from(op), p, g), k)) out.push_back(e.eigenvalue);
        }
        return out;
      },
      py::arg("alpha"), py::arg("x_max") = 40.0, py::arg("n_points") = 4001, py::arg("k") = 2,
      py::arg("operator") = "L", py::arg("extrapolate") = true, "Lowest k even eigenvalues of L, L- or L0.");

  m.def(
      "soliton",
      [](double alpha, double x_max, int n_points) {
        const SpectralData s = make_spectral_data(params(alpha, x_max, n_points));
        py::dict d;
        d["x"] = nodes(s.grid);
        d["q"] = s.q.values;
        d["q_closed"] = s.q_closed.values;
        d["y0"] = s.y0.values;
        d["lambda0"] = s.lambda0;
        d["nu0"] = s.nu0;
        d["residual"] = s.soliton_residual;
        return d;
      },
      py::arg("alpha"), py::arg("x_max") = 40.0, py::arg("n_points") = 4001);

  m.def(
      "linear_rates",
      [](double alpha, double x_max, int n_points) {
        const LinearModeFit f = linear_mode_rates(make_spectral_data(params(alpha, x_max, n_points)));
        py::dict d;
        d["nu0"] = f.nu0;
        d["growth_rate"] = f.growth_rate;
        d["decay_rate"] = f.decay_rate;
        return d;
      },
      py::arg("alpha"), py::arg("x_max") = 40.0, py::arg("n_points") = 4001);

  m.def(
      "intertwining",
      [](double alpha, double x_max, int n_points, double width) {
        const ModelParams p = params(alpha, x_max, n_points);
        const Grid g(p);
        const Field probe = sample(g, [width](double x) { return std::exp(-x * x / (width * width)); });
        const IntertwiningResidual r = intertwining_residual(p, g, probe);
        return py::make_tuple(r.ul, r.sul);
      },
      py::arg("alpha"), py::arg("x_max") = 40.0, py::arg("n_points") = 4001, py::arg("width") = 1.0,
      "Relative residuals of U L - L- U and S U L - L0 S U on a Gaussian probe.");

  m.def(
      "positivity_scan",
      [](double alpha, const std::vector<double>& Bs, double x_max, int n_points) {
        const ModelParams p = params(alpha, x_max, n_points);
        const PositivityScan s = positivity_threshold(p, Grid(p), Bs);
        py::dict d;
        d["B"] = s.B;
        d["min_gap"] = s.min_gap;
        d["min_v0"] = s.min_v0;
        d["B0"] = s.B0 > 0 ? py::object(py::float_(s.B0)) : py::object(py::none());
        d["degenerate"] = s.degenerate;
        return d;
      },
      py::arg("alpha"), py::arg("Bs"), py::arg("x_max") = 40.0, py::arg("n_points") = 4001);

  m.def(
      "shoot",
      [](double alpha, std::uint64_t seed, double size, double t_max, double x_max, int n_points) {
        const SpectralData s = make_spectral_data(params(alpha, x_max, n_points));
        ShootingConfig cfg;
        cfg.delta0 = size > 0.0 ? size : cfg.delta0;
        cfg.t_max = t_max;
        cfg.validate();
        ShootingResult r;
        {
          py::gil_scoped_release nogil;
          r = shoot(random_admissible(seed, size, s), cfg, s);
        }
        py::dict d;
        d["h"] = r.b_plus_0;
        d["verdict"] = to_string(r.verdict);
        d["iterations"] = r.iterations;
        d["bracket"] = cfg.effective_bracket();
        d["t"] = r.times;
        d["b_plus"] = r.b_plus;
        d["b_minus"] = r.b_minus;
        d["tube_distance"] = r.tube_distance;
        return d;
      },
      py::arg("alpha"), py::arg("seed") = 1, py::arg("size") = 1e-3, py::arg("t_max") = 10.0, py::arg("x_max") = 40.0,
      py::arg("n_points") = 2001, "Bisect the unstable coordinate of a random admissible perturbation.");
}
