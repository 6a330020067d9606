#include "kglab/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kglab/errors.hpp"

namespace kglab::tridiag {

std::vector<double> solve(std::vector<double> sub, std::vector<double> d, std::vector<double> sup,
                          std::vector<double> b) {
  const size_t n = d.size();
  if (sub.size() != n || sup.size() != n || b.size() != n) throw std::invalid_argument("tridiagonal size mismatch");
  // LAPACK dgtsv layout: dl[i] is the (i+1, i) entry and doubles as the second
  // superdiagonal after a row interchange.
  std::vector<double> dl(sub.begin() + 1, sub.end());
  std::vector<double>& du = sup;
  for (size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) throw std::runtime_error("singular tridiagonal system");
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
      dl[i] = 0.0;
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        dl[i] = du[i + 1];
        du[i + 1] = -fact * dl[i];
      } else {
        dl[i] = 0.0;
      }
      du[i] = temp;
      const double bt = b[i];
      b[i] = b[i + 1];
      b[i + 1] = bt - fact * b[i + 1];
    }
  }
  if (d[n - 1] == 0.0) throw std::runtime_error("singular tridiagonal system");
  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
  return b;
}

std::vector<double> SymTridiag::apply(const std::vector<double>& y) const {
  const size_t m = d.size();
  std::vector<double> r(m);
  for (size_t i = 0; i < m; ++i) {
    double s = d[i] * y[i];
    if (i > 0) s += e[i - 1] * y[i - 1];
    if (i + 1 < m) s += e[i] * y[i + 1];
    r[i] = s;
  }
  return r;
}

int sturm_count(const SymTridiag& t, double x) {
  const size_t m = t.d.size();
  const double tiny = std::numeric_limits<double>::min() * 1e4;
  int count = 0;
  double q = t.d[0] - x;
  if (q == 0.0) q = -tiny;
  if (q < 0.0) ++count;
  for (size_t i = 1; i < m; ++i) {
    q = t.d[i] - x - t.e[i - 1] * t.e[i - 1] / q;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double kth_eigenvalue(const SymTridiag& t, int k, double abs_tol) {
  const size_t m = t.d.size();
  if (k < 0 || static_cast<size_t>(k) >= m) throw std::invalid_argument("eigenvalue index out of range");
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (size_t i = 0; i < m; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.e[i - 1]);
    if (i + 1 < m) r += std::abs(t.e[i]);
    lo = std::min(lo, t.d[i] - r);
    hi = std::max(hi, t.d[i] + r);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= abs_tol + 2.0 * eps * std::max(std::abs(lo), std::abs(hi))) break;
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

EigenVector inverse_iteration(const SymTridiag& t, double lambda, double tol, int max_restarts) {
  const size_t m = t.d.size();
  std::vector<double> sub(m, 0.0), sup(m, 0.0), diag(m);
  for (size_t i = 0; i < m; ++i) {
    diag[i] = t.d[i] - lambda;
    if (i > 0) sub[i] = t.e[i - 1];
    if (i + 1 < m) sup[i] = t.e[i];
  }
  auto residual_of = [&](const std::vector<double>& y) {
    const std::vector<double> ty = t.apply(y);
    double s = 0.0;
    for (size_t i = 0; i < m; ++i) s += (ty[i] - lambda * y[i]) * (ty[i] - lambda * y[i]);
    return std::sqrt(s);
  };
  auto normalize = [](std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    s = std::sqrt(s);
    if (!(s > 0.0) || !std::isfinite(s)) return false;
    for (double& v : y) v /= s;
    return true;
  };

  EigenVector best{{}, std::numeric_limits<double>::infinity()};
  for (int restart = 0; restart <= max_restarts; ++restart) {
    std::vector<double> y(m);
    for (size_t i = 0; i < m; ++i) y[i] = 1.0 + 0.1 * std::sin(0.37 * static_cast<double>(i) * (restart + 1));
    normalize(y);
    for (int it = 0; it < 6; ++it) {
      std::vector<double> z;
      try {
        z = solve(sub, diag, sup, y);
      } catch (const std::runtime_error&) {
        // Exactly singular shift: nudge it.
        for (double& v : diag) v -= 1e-14 * std::max(1.0, std::abs(lambda));
        continue;
      }
      if (!normalize(z)) break;
      y = std::move(z);
      const double res = residual_of(y);
      if (res < best.residual) best = {y, res};
      if (res <= tol && it >= 1) return best;
    }
  }
  if (best.residual > tol)
    throw NonConvergence("inverse iteration residual " + std::to_string(best.residual) + " above tolerance " +
                         std::to_string(tol));
  return best;
}

}  // namespace kglab::tridiag
