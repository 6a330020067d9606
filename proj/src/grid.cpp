#include "kglab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kglab {

void ModelParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be a positive real, got " + std::to_string(alpha));
  if (!(domain_half_length > 0.0))
    throw std::invalid_argument("domain_half_length must be positive");
  if (n_points < 16)
    throw std::invalid_argument("n_points must be >= 16, got " + std::to_string(n_points));
}

Grid::Grid(double x_max, int n_points) : x_max_(x_max), n_(n_points) {
  if (n_points < 16) throw std::invalid_argument("grid needs at least 16 nodes");
  if (!(x_max > 0.0)) throw std::invalid_argument("grid length must be positive");
  h_ = x_max / (n_points - 1);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) xs[static_cast<size_t>(i)] = x(i);
  return xs;
}

Grid Grid::coarsened() const {
  if (!can_coarsen()) throw std::invalid_argument("grid cannot be coarsened: n-1 must be even");
  return Grid(x_max_, (n_ - 1) / 2 + 1);
}

Grid Grid::refined() const { return Grid(x_max_, 2 * (n_ - 1) + 1); }

Field sample(const Grid& g, const std::function<double(double)>& fn, Parity p) {
  Field f(g.size(), p);
  for (int i = 0; i < g.size(); ++i) f[i] = fn(g.x(i));
  if (p == Parity::odd) f[0] = 0.0;
  return f;
}

namespace {
void check_same(const Field& a, const Field& b) {
  if (a.size() != b.size()) throw std::invalid_argument("field size mismatch");
}
}  // namespace

Field operator+(const Field& a, const Field& b) {
  check_same(a, b);
  Field r = a;
  for (int i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Field operator-(const Field& a, const Field& b) {
  check_same(a, b);
  Field r = a;
  for (int i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Field operator*(double s, const Field& a) {
  Field r = a;
  for (double& v : r.values) v *= s;
  return r;
}

Field hadamard(const Field& a, const Field& b) {
  check_same(a, b);
  Field r(a.size(), a.parity == b.parity ? Parity::even : Parity::odd);
  for (int i = 0; i < r.size(); ++i) r[i] = a[i] * b[i];
  return r;
}

void axpy(double s, const Field& x, Field& y) {
  check_same(x, y);
  for (int i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

FieldPair operator+(const FieldPair& a, const FieldPair& b) { return {a.phi1 + b.phi1, a.phi2 + b.phi2}; }
FieldPair operator-(const FieldPair& a, const FieldPair& b) { return {a.phi1 - b.phi1, a.phi2 - b.phi2}; }
FieldPair operator*(double s, const FieldPair& a) { return {s * a.phi1, s * a.phi2}; }

double integrate(const Grid& g, const std::vector<double>& f) {
  const int n = g.size();
  if (static_cast<int>(f.size()) != n) throw std::invalid_argument("integrand size mismatch");
  double s = 0.5 * (f[0] + f[static_cast<size_t>(n - 1)]);
  for (int i = 1; i < n - 1; ++i) s += f[static_cast<size_t>(i)];
  return 2.0 * g.h() * s;
}

double inner(const Grid& g, const Field& a, const Field& b) {
  check_same(a, b);
  if (a.parity != b.parity) return 0.0;
  const int n = g.size();
  double s = 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
  for (int i = 1; i < n - 1; ++i) s += a[i] * b[i];
  return 2.0 * g.h() * s;
}

double inner(const Grid& g, const FieldPair& a, const FieldPair& b) {
  return inner(g, a.phi1, b.phi1) + inner(g, a.phi2, b.phi2);
}

double l2_norm(const Grid& g, const Field& a) { return std::sqrt(inner(g, a, a)); }

double sup_norm(const Field& a) {
  double m = 0.0;
  for (double v : a.values) m = std::max(m, std::abs(v));
  return m;
}

Field d1(const Grid& g, const Field& f) {
  const int n = g.size();
  const double inv2h = 0.5 / g.h();
  Field r(n, flip(f.parity));
  // Even f has f'(0)=0; odd f has ghost f(-h) = -f(h).
  r[0] = f.parity == Parity::even ? 0.0 : 2.0 * f[1] * inv2h;
  for (int i = 1; i < n - 1; ++i) r[i] = (f[i + 1] - f[i - 1]) * inv2h;
  r[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
  return r;
}

Field d2(const Grid& g, const Field& f) {
  const int n = g.size();
  const double ih2 = 1.0 / (g.h() * g.h());
  Field r(n, f.parity);
  r[0] = f.parity == Parity::even ? 2.0 * (f[1] - f[0]) * ih2 : 0.0;
  for (int i = 1; i < n - 1; ++i) r[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * ih2;
  r[n - 1] = (f[n - 2] - 2.0 * f[n - 1]) * ih2;
  return r;
}

double grad_sq(const Grid& g, const Field& f) {
  const int n = g.size();
  double s = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    const double d = f[i + 1] - f[i];
    s += d * d;
  }
  return 2.0 * s / g.h();
}

double grad_sq(const Grid& g, const Field& f, const std::function<double(double)>& w) {
  const int n = g.size();
  const double h = g.h();
  double s = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    const double d = f[i + 1] - f[i];
    s += w((i + 0.5) * h) * d * d;
  }
  return 2.0 * s / h;
}

double h1_norm(const Grid& g, const Field& f) { return std::sqrt(grad_sq(g, f) + inner(g, f, f)); }

double energy_norm(const Grid& g, const FieldPair& p) {
  return std::sqrt(grad_sq(g, p.phi1) + inner(g, p.phi1, p.phi1) + inner(g, p.phi2, p.phi2));
}

}  // namespace kglab
