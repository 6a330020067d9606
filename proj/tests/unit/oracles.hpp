#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "kglab/grid.hpp"

namespace oracle {

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Dense full-line operator -d2 + V on nodes -X+h .. X-h with Dirichlet ends.
inline Eigen::VectorXd full_line_spectrum(const std::function<double(double)>& V, double X, int half_nodes) {
  const double h = X / (half_nodes - 1);
  const int m = 2 * (half_nodes - 1) - 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const double x = -X + (i + 1) * h;
    A(i, i) = 2.0 / (h * h) + V(x);
    if (i > 0) A(i, i - 1) = A(i - 1, i) = -1.0 / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double q_closed(double x, double a) { return std::pow(a + 1.0, 0.5 / a) * std::pow(1.0 / std::cosh(a * x), 1.0 / a); }

}  // namespace oracle
