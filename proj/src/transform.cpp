#include "kglab/transform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kglab/errors.hpp"
#include "kglab/tridiag.hpp"

namespace kglab {

namespace {
// On the transition s = |x| - 1 in (0,1): chi = 1/(1 + e^psi), psi = 1/(1-s) - 1/s.
struct Transition {
  double chi, d1, d2;  // derivatives in s
};

Transition transition(double s) {
  const double psi = 1.0 / (1.0 - s) - 1.0 / s;
  const double psi1 = 1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s));
  const double psi2 = 2.0 / ((1.0 - s) * (1.0 - s) * (1.0 - s)) - 2.0 / (s * s * s);
  const double c = std::cosh(0.5 * psi);
  const double p = std::isfinite(c) ? 1.0 / (4.0 * c * c) : 0.0;  // chi (1 - chi)
  const double chi = psi > 0 ? std::exp(-psi) / (1.0 + std::exp(-psi)) : 1.0 / (1.0 + std::exp(psi));
  const double d1 = -p * psi1;
  const double d2 = -(d1 * (1.0 - 2.0 * chi) * psi1 + p * psi2);
  return {chi, d1, d2};
}
}  // namespace

double chi(double x) {
  const double a = std::abs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  return transition(a - 1.0).chi;
}

double chi_d1(double x) {
  const double a = std::abs(x);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  return (x > 0 ? 1.0 : -1.0) * transition(a - 1.0).d1;
}

double chi_d2(double x) {
  const double a = std::abs(x);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  return transition(a - 1.0).d2;
}

double zeta(double x, double scale) { return std::exp(-(1.0 - chi(x)) * std::abs(x) / scale); }

double log_zeta_d1(double x, double scale) {
  const double s = x >= 0 ? 1.0 : -1.0;
  return (chi_d1(x) * std::abs(x) - s * (1.0 - chi(x))) / scale;
}

double log_zeta_d2(double x, double scale) {
  const double s = x >= 0 ? 1.0 : -1.0;
  return (chi_d2(x) * std::abs(x) + 2.0 * chi_d1(x) * s) / scale;
}

namespace {
Field cumulative_square(const Field& z, const Grid& g) {
  Field r(g.size(), Parity::odd);
  for (int i = 1; i < g.size(); ++i) r[i] = r[i - 1] + 0.5 * g.h() * (z[i - 1] * z[i - 1] + z[i] * z[i]);
  return r;
}
}  // namespace

WeightFamily make_weights(double A, double B, double gamma, const Grid& g) {
  if (!(B >= 2.0)) throw std::invalid_argument("weight scale B must be >= 2, got " + std::to_string(B));
  if (!(A >= B * B)) throw ScaleOrderViolation("weight scales need A >= B^2, got A=" + std::to_string(A) +
                                               " B^2=" + std::to_string(B * B));
  if (!(gamma > 0.0 && gamma <= 0.5)) throw std::invalid_argument("gamma must lie in (0, 1/2]");
  WeightFamily w;
  w.A = A;
  w.B = B;
  w.gamma = gamma;
  const double B2 = B * B;
  w.chi = sample(g, [](double x) { return chi(x); });
  w.zeta_A = sample(g, [A](double x) { return zeta(x, A); });
  w.log_bracket_A = sample(g, [A](double x) { return log_zeta_d2(x, A); });
  w.phi_A = cumulative_square(w.zeta_A, g);
  w.zeta_B = sample(g, [B](double x) { return zeta(x, B); });
  w.log_bracket_B = sample(g, [B](double x) { return log_zeta_d2(x, B); });
  w.phi_B = cumulative_square(w.zeta_B, g);
  w.chi_B = sample(g, [B2](double x) { return chi(x / B2); });
  w.psi_B = Field(g.size(), Parity::odd);
  w.psi_B_d1 = Field(g.size(), Parity::even);
  for (int i = 0; i < g.size(); ++i) {
    const double c = w.chi_B[i];
    const double c1 = chi_d1(g.x(i) / B2) / B2;
    w.psi_B[i] = c * c * w.phi_B[i];
    w.psi_B_d1[i] = 2.0 * c * c1 * w.phi_B[i] + c * c * w.zeta_B[i] * w.zeta_B[i];
  }
  w.rho = sample(g, [](double x) { return 1.0 / std::cosh(x / 10.0); });
  return w;
}

WeightFamily weights_for_delta(double delta, double gamma, const Grid& grid) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  return make_weights(1.0 / delta, std::pow(delta, -0.25), gamma, grid);
}

Field smoothing_inverse(const Field& f, double gamma, const Grid& g) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const int n = g.size();
  const double c = gamma / (g.h() * g.h());
  Field out(n, f.parity);
  // Unknowns: even 0..n-2, odd 1..n-2 (node 0 vanishes).
  const int first = f.parity == Parity::even ? 0 : 1;
  const int m = n - 1 - first;
  std::vector<double> sub(static_cast<size_t>(m), -c), sup(static_cast<size_t>(m), -c),
      diag(static_cast<size_t>(m), 1.0 + 2.0 * c), rhs(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) rhs[static_cast<size_t>(k)] = f[first + k];
  if (first == 0) sup[0] = -2.0 * c;
  const auto x = tridiag::solve(sub, diag, sup, rhs);
  for (int k = 0; k < m; ++k) out[first + k] = x[static_cast<size_t>(k)];
  return out;
}

Field smoothing_forward(const Field& g, double gamma, const Grid& grid) {
  Field r = g - gamma * d2(grid, g);
  r[r.size() - 1] = 0.0;
  if (r.parity == Parity::odd) r[0] = 0.0;
  return r;
}

TransformedState transformed_state(const ModalState& m, const WeightFamily& w, const SpectralData& spec) {
  const Grid& g = spec.grid;
  TransformedState t;
  t.w = hadamard(w.zeta_A, m.u1);
  t.v1 = smoothing_inverse(composite_su(hadamard(w.chi_B, m.u1), spec.params, g), w.gamma, g);
  t.v2 = smoothing_inverse(composite_su(hadamard(w.chi_B, m.u2), spec.params, g), w.gamma, g);
  t.z = hadamard(hadamard(w.chi_B, w.zeta_B), t.v1);
  return t;
}

double local_norm(const Field& f, const Grid& g) {
  std::vector<double> rf(static_cast<size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) rf[static_cast<size_t>(i)] = f[i] * f[i] / std::cosh(g.x(i) / 10.0);
  return std::sqrt(grad_sq(g, f) + integrate(g, rf));
}

double loc_pair_norm(const FieldPair& d, const Grid& g, double half_width) {
  const int last = std::min(g.size() - 1, static_cast<int>(std::floor(half_width / g.h() + 1e-9)));
  const double h = g.h();
  double s = 0.0;
  for (int i = 0; i < last; ++i) {
    const double dd = d.phi1[i + 1] - d.phi1[i];
    s += dd * dd / h;
  }
  for (int i = 0; i <= last; ++i) {
    const double w = (i == 0 || i == last) ? 0.5 * h : h;
    s += w * (d.phi1[i] * d.phi1[i] + d.phi2[i] * d.phi2[i]);
  }
  return std::sqrt(2.0 * s);
}

}  // namespace kglab
