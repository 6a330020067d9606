#include "kglab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kglab/errors.hpp"

namespace kglab {

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::L:
      return "L";
    case OperatorKind::Lminus:
      return "Lminus";
    case OperatorKind::Lzero:
      return "Lzero";
  }
  return "?";
}

Field SchrodingerOperator::apply(const Field& f) const {
  Field r = d2(grid, f);
  for (int i = 0; i < r.size(); ++i) r[i] = -r[i] + potential[i] * f[i];
  r[r.size() - 1] = 0.0;
  return r;
}

tridiag::SymTridiag SchrodingerOperator::even_matrix() const {
  const int m = grid.size() - 1;
  const double ih2 = 1.0 / (grid.h() * grid.h());
  tridiag::SymTridiag t;
  t.d.resize(static_cast<size_t>(m));
  t.e.assign(static_cast<size_t>(m - 1), -ih2);
  for (int i = 0; i < m; ++i) t.d[static_cast<size_t>(i)] = 2.0 * ih2 + potential[i];
  t.e[0] = -std::sqrt(2.0) * ih2;
  return t;
}

double closed_form_potential(OperatorKind kind, double x, double alpha) {
  const double c = std::cosh(alpha * x);
  const double s2 = 1.0 / (c * c);
  switch (kind) {
    case OperatorKind::L:
      return 1.0 - (2.0 * alpha + 1.0) * (alpha + 1.0) * s2;
    case OperatorKind::Lminus:
      return 1.0 - (alpha + 1.0) * s2;
    case OperatorKind::Lzero:
      return 1.0 + (alpha - 1.0) * s2;
  }
  return 0.0;
}

SchrodingerOperator build_operator(OperatorKind kind, const ModelParams& params, const Grid& grid) {
  params.validate();
  return {kind, sample(grid, [&](double x) { return closed_form_potential(kind, x, params.alpha); }), grid};
}

SchrodingerOperator operator_from_potential(OperatorKind kind, Field potential, const Grid& grid) {
  if (potential.size() != grid.size()) throw std::invalid_argument("potential size mismatch");
  return {kind, std::move(potential), grid};
}

namespace {
double matrix_scale(const tridiag::SymTridiag& t) {
  double s = 0.0;
  for (size_t i = 0; i < t.d.size(); ++i) s = std::max(s, std::abs(t.d[i]) + 2.0 * std::abs(t.e[std::min(i, t.e.size() - 1)]));
  return s;
}

Field unsymmetrize(const std::vector<double>& y, const Grid& g) {
  Field u(g.size());
  for (size_t i = 0; i < y.size(); ++i) u[static_cast<int>(i)] = y[i] / std::sqrt(g.weight(static_cast<int>(i)));
  return u;
}
}  // namespace

std::vector<EigenPair> even_spectrum(const SchrodingerOperator& op, int k) {
  if (k < 1) throw std::invalid_argument("even_spectrum needs k >= 1");
  const tridiag::SymTridiag t = op.even_matrix();
  const double scale = matrix_scale(t);
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = 64.0 * eps * scale * std::sqrt(static_cast<double>(t.size())) + 1e-10;
  std::vector<EigenPair> out;
  for (int j = 0; j < k; ++j) {
    const double lam = tridiag::kth_eigenvalue(t, j, 4.0 * eps * scale);
    tridiag::EigenVector ev = tridiag::inverse_iteration(t, lam, tol);
    if (ev.y[0] < 0.0)
      for (double& v : ev.y) v = -v;
    out.push_back({lam, unsymmetrize(ev.y, op.grid), ev.residual});
  }
  return out;
}

int count_even_eigenvalues(const SchrodingerOperator& op, double lo, double hi) {
  const tridiag::SymTridiag t = op.even_matrix();
  return tridiag::sturm_count(t, hi) - tridiag::sturm_count(t, lo);
}

std::vector<ExtrapolatedEigenvalue> extrapolated_even_eigenvalues(OperatorKind kind, const ModelParams& params,
                                                                  const Grid& grid, int k) {
  const auto fine = build_operator(kind, params, grid).even_matrix();
  const auto coarse = build_operator(kind, params, grid.coarsened()).even_matrix();
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<ExtrapolatedEigenvalue> out;
  for (int j = 0; j < k; ++j) {
    ExtrapolatedEigenvalue e;
    e.fine = tridiag::kth_eigenvalue(fine, j, 4.0 * eps * matrix_scale(fine));
    e.coarse = tridiag::kth_eigenvalue(coarse, j, 4.0 * eps * matrix_scale(coarse));
    e.extrapolated = (4.0 * e.fine - e.coarse) / 3.0;
    out.push_back(e);
  }
  return out;
}

double rayleigh_quotient(const SchrodingerOperator& op, const Field& f) {
  return inner(op.grid, op.apply(f), f) / inner(op.grid, f, f);
}

double constrained_min_rayleigh(const SchrodingerOperator& op, const Field& y) {
  const tridiag::SymTridiag t = op.even_matrix();
  const int m = t.size();
  const double scale = matrix_scale(t);
  const double eps = std::numeric_limits<double>::epsilon();
  const double l0 = tridiag::kth_eigenvalue(t, 0, 4.0 * eps * scale);
  const double l1 = tridiag::kth_eigenvalue(t, 1, 4.0 * eps * scale);
  std::vector<double> ys(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) ys[static_cast<size_t>(i)] = y[i] * std::sqrt(op.grid.weight(i));

  // g(mu) = y^T (T - mu)^{-1} y increases on (l0, l1); its root is the constrained minimum.
  auto g = [&](double mu) {
    std::vector<double> sub(static_cast<size_t>(m), 0.0), sup(static_cast<size_t>(m), 0.0), diag(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      diag[static_cast<size_t>(i)] = t.d[static_cast<size_t>(i)] - mu;
      if (i > 0) sub[static_cast<size_t>(i)] = t.e[static_cast<size_t>(i - 1)];
      if (i + 1 < m) sup[static_cast<size_t>(i)] = t.e[static_cast<size_t>(i)];
    }
    const auto x = tridiag::solve(sub, diag, sup, ys);
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += x[static_cast<size_t>(i)] * ys[static_cast<size_t>(i)];
    return s;
  };
  const double gap = l1 - l0;
  double lo = l0 + 1e-10 * gap;
  double hi = l1 - 1e-10 * gap;
  if (g(hi) <= 0.0) return l1;
  if (g(lo) >= 0.0) return l0;
  for (int it = 0; it < 200 && hi - lo > 4.0 * eps * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

FirstOrderFactor make_factor(FactorKind kind, const ModelParams& params, const Grid& grid) {
  params.validate();
  const double a = params.alpha;
  FirstOrderFactor f;
  f.kind = kind;
  const bool ground = kind == FactorKind::U || kind == FactorKind::Ustar;
  if (ground) {
    f.weight = sample(grid, [a](double x) { return std::pow(std::cosh(a * x), -(1.0 + 1.0 / a)); });
    f.weight = (1.0 / l2_norm(grid, f.weight)) * f.weight;
    f.log_derivative = sample(grid, [a](double x) { return ground_state_log_derivative(x, a); }, Parity::odd);
  } else {
    f.weight = soliton_profile(params, grid);
    f.log_derivative = sample(grid, [a](double x) { return soliton_log_derivative(x, a); }, Parity::odd);
  }
  return f;
}

Field apply_factor(const FirstOrderFactor& factor, const Field& f, const Grid& grid) {
  Field r = d1(grid, f);
  const double sign = factor.adjoint() ? -1.0 : 1.0;
  for (int i = 0; i < r.size(); ++i) r[i] = sign * r[i] - factor.log_derivative[i] * f[i];
  if (r.parity == Parity::odd) r[0] = 0.0;
  return r;
}

IntertwiningResidual intertwining_residual(const ModelParams& params, const Grid& grid, const Field& probe) {
  const auto L = build_operator(OperatorKind::L, params, grid);
  const auto Lm = build_operator(OperatorKind::Lminus, params, grid);
  const auto L0 = build_operator(OperatorKind::Lzero, params, grid);
  const auto U = make_factor(FactorKind::U, params, grid);
  const auto S = make_factor(FactorKind::S, params, grid);
  const double nf = l2_norm(grid, probe);

  const Field Lf = L.apply(probe);
  const Field ULf = apply_factor(U, Lf, grid);
  const Field Uf = apply_factor(U, probe, grid);
  const Field LmUf = Lm.apply(Uf);
  const Field SULf = apply_factor(S, ULf, grid);
  const Field L0SUf = L0.apply(apply_factor(S, Uf, grid));

  // The last nodes carry one-sided stencils; the probe is supported far from them.
  auto trimmed_norm = [&](Field d) {
    for (int i = grid.size() - 3; i < grid.size(); ++i) d[i] = 0.0;
    return l2_norm(grid, d);
  };
  return {trimmed_norm(ULf - LmUf) / nf, trimmed_norm(SULf - L0SUf) / nf};
}

Field composite_su(const Field& f, const ModelParams& params, const Grid& grid) {
  const double a = params.alpha;
  const Field f1 = d1(grid, f);
  const Field f2 = d2(grid, f);
  Field r(grid.size(), f.parity);
  for (int i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    const double c = std::cosh(a * x);
    r[i] = f2[i] + (a + 2.0) * std::tanh(a * x) * f1[i] + (a + 1.0) * (1.0 + (a - 1.0) / (c * c)) * f[i];
  }
  return r;
}

ModeVectors mode_vectors(const Field& y0, double nu0) {
  ModeVectors m;
  m.y_plus = {y0, nu0 * y0};
  m.y_minus = {y0, -nu0 * y0};
  m.z_plus = {y0, (1.0 / nu0) * y0};
  m.z_minus = {y0, (-1.0 / nu0) * y0};
  return m;
}

SpectralData make_spectral_data(const ModelParams& params) {
  params.validate();
  SpectralData s;
  s.params = params;
  s.grid = Grid(params);
  const DiscreteSoliton ds = discrete_soliton(params, s.grid);
  s.q = ds.q;
  s.soliton_residual = ds.residual;
  s.q_closed = soliton_profile(params, s.grid);
  const AbsPower pw(2.0 * params.alpha);
  Field pot(s.grid.size());
  for (int i = 0; i < s.grid.size(); ++i) pot[i] = 1.0 - (2.0 * params.alpha + 1.0) * pw(s.q[i]);
  s.L = operator_from_potential(OperatorKind::L, std::move(pot), s.grid);
  const auto ground = even_spectrum(s.L, 1);
  s.lambda0 = ground[0].eigenvalue;
  if (!(s.lambda0 < 0.0)) throw NonConvergence("linearized operator has no negative even eigenvalue");
  s.nu0 = std::sqrt(-s.lambda0);
  s.y0 = ground[0].eigenfunction;
  s.modes = mode_vectors(s.y0, s.nu0);
  return s;
}

}  // namespace kglab
