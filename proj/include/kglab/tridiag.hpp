#pragma once

#include <vector>

namespace kglab::tridiag {

// General tridiagonal system: sub[i] couples row i to i-1 (sub[0] unused),
// sup[i] couples row i to i+1 (sup[n-1] unused). Partial pivoting, as in LAPACK gtsv.
std::vector<double> solve(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                          std::vector<double> rhs);

// Symmetric tridiagonal matrix with diagonal d (size m) and off-diagonal e (size m-1).
struct SymTridiag {
  std::vector<double> d;
  std::vector<double> e;
  int size() const { return static_cast<int>(d.size()); }
  std::vector<double> apply(const std::vector<double>& y) const;
};

// Number of eigenvalues strictly below x (Sturm sequence via LDL^T pivots).
int sturm_count(const SymTridiag& t, double x);

// k-th smallest eigenvalue (k = 0, 1, ...) by bisection on the Sturm count.
double kth_eigenvalue(const SymTridiag& t, int k, double abs_tol);

struct EigenVector {
  std::vector<double> y;
  double residual;
};

// Inverse iteration at a converged eigenvalue; y has unit Euclidean norm.
// Throws NonConvergence if the residual stays above tol after the restarts.
EigenVector inverse_iteration(const SymTridiag& t, double lambda, double tol, int max_restarts = 3);

}  // namespace kglab::tridiag
