#include "kglab/domain_model.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "kglab/errors.hpp"
#include "kglab/tridiag.hpp"

namespace kglab {

namespace {
bool near_integer(double v, int& k) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-12 || r < 0 || r > 64) return false;
  k = static_cast<int>(r);
  return true;
}

inline double ipow(double b, int k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}
}  // namespace

AbsPower::AbsPower(double p) : path_(Path::general), p_(p) {
  if (near_integer(p, k_))
    path_ = Path::integer;
  else if (near_integer(4.0 * p, k_))
    path_ = Path::quarter;
}

double AbsPower::operator()(double q) const {
  const double a = std::abs(q);
  switch (path_) {
    case Path::integer:
      return ipow(a, k_);
    case Path::quarter:
      return ipow(std::sqrt(std::sqrt(a)), k_);
    default:
      return std::pow(a, p_);
  }
}

double soliton_value(double x, double alpha) {
  return std::pow(alpha + 1.0, 0.5 / alpha) * std::pow(1.0 / std::cosh(alpha * x), 1.0 / alpha);
}

Field soliton_profile(const ModelParams& params, const Grid& grid) {
  params.validate();
  return sample(grid, [a = params.alpha](double x) { return soliton_value(x, a); });
}

double soliton_log_derivative(double x, double alpha) { return -std::tanh(alpha * x); }

double ground_state_log_derivative(double x, double alpha) { return -(alpha + 1.0) * std::tanh(alpha * x); }

double nonlinearity(double phi, const ModelParams& p) { return std::pow(std::abs(phi), 2.0 * p.alpha) * phi; }

double antiderivative(double phi, const ModelParams& p) {
  return std::pow(std::abs(phi), 2.0 * p.alpha + 2.0) / (2.0 * p.alpha + 2.0);
}

double nonlinearity_d1(double phi, const ModelParams& p) {
  return (2.0 * p.alpha + 1.0) * std::pow(std::abs(phi), 2.0 * p.alpha);
}

double nonlinearity_d2(double phi, const ModelParams& p) {
  if (phi == 0.0) return 0.0;
  const double s = phi > 0 ? 1.0 : -1.0;
  return (2.0 * p.alpha + 1.0) * 2.0 * p.alpha * std::pow(std::abs(phi), 2.0 * p.alpha - 1.0) * s;
}

EnergyBreakdown energy(const FieldPair& state, const ModelParams& params, const Grid& grid) {
  EnergyBreakdown e;
  e.kinetic = inner(grid, state.phi2, state.phi2);
  e.gradient = grad_sq(grid, state.phi1);
  e.mass = inner(grid, state.phi1, state.phi1);
  const AbsPower pw(2.0 * params.alpha + 2.0);
  std::vector<double> F(static_cast<size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) F[static_cast<size_t>(i)] = pw(state.phi1[i]) / (2.0 * params.alpha + 2.0);
  e.potential = integrate(grid, F);
  e.total = 0.5 * (e.kinetic + e.gradient + e.mass - 2.0 * e.potential);
  return e;
}

double soliton_residual(const ModelParams& params, const Grid& grid) {
  const Field q = soliton_profile(params, grid);
  const Field q2 = d2(grid, q);
  const AbsPower pw(2.0 * params.alpha);
  double m = 0.0;
  for (int i = 0; i < grid.size() - 1; ++i) m = std::max(m, std::abs(q2[i] - q[i] + pw(q[i]) * q[i]));
  return m;
}

DiscreteSoliton discrete_soliton(const ModelParams& params, const Grid& grid) {
  params.validate();
  const int n = grid.size();
  const int m = n - 1;
  const double ih2 = 1.0 / (grid.h() * grid.h());
  const AbsPower pw(2.0 * params.alpha);
  const double c1 = 2.0 * params.alpha + 1.0;

  DiscreteSoliton out;
  out.q = soliton_profile(params, grid);
  out.q[n - 1] = 0.0;

  auto residual = [&](const Field& q, std::vector<double>& g) {
    const Field q2 = d2(grid, q);
    double r = 0.0;
    for (int i = 0; i < m; ++i) {
      g[static_cast<size_t>(i)] = q2[i] - q[i] + pw(q[i]) * q[i];
      r = std::max(r, std::abs(g[static_cast<size_t>(i)]));
    }
    return r;
  };

  std::vector<double> g(static_cast<size_t>(m));
  double r = residual(out.q, g);
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 30; ++it) {
    if (r < 1e-13 || r >= 0.5 * prev) break;
    // Jacobian D2 - 1 + f'(q); mirror row doubles the coupling to node 1.
    std::vector<double> sub(static_cast<size_t>(m), ih2), sup(static_cast<size_t>(m), ih2), diag(static_cast<size_t>(m));
    sup[0] = 2.0 * ih2;
    for (int i = 0; i < m; ++i) diag[static_cast<size_t>(i)] = -2.0 * ih2 - 1.0 + c1 * pw(out.q[i]);
    std::vector<double> rhs(g);
    for (double& v : rhs) v = -v;
    const std::vector<double> dq = tridiag::solve(sub, diag, sup, rhs);
    for (int i = 0; i < m; ++i) out.q[i] += dq[static_cast<size_t>(i)];
    prev = r;
    r = residual(out.q, g);
    ++out.newton_iterations;
  }
  out.residual = r;
  if (r > 1e-9) throw NonConvergence("discrete soliton Newton stalled at residual " + std::to_string(r));
  return out;
}

}  // namespace kglab
