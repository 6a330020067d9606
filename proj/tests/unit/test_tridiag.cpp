#include <doctest.h>

#include <random>

#include "kglab/errors.hpp"
#include "kglab/tridiag.hpp"
#include "oracles.hpp"

using namespace kglab;

namespace {
tridiag::SymTridiag random_sym(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  tridiag::SymTridiag t;
  for (int i = 0; i < n; ++i) t.d.push_back(4 * u(rng));
  for (int i = 0; i + 1 < n; ++i) t.e.push_back(u(rng));
  return t;
}

Eigen::MatrixXd dense(const tridiag::SymTridiag& t) {
  const int n = t.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = t.d[static_cast<size_t>(i)];
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = A(i + 1, i) = t.e[static_cast<size_t>(i)];
  return A;
}
}  // namespace

TEST_SUITE("tridiag") {
  TEST_CASE("pivoted solve matches a dense LU") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 40;
      std::vector<double> sub(n), diag(n), sup(n), rhs(n);
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
      Eigen::VectorXd b(n);
      for (int i = 0; i < n; ++i) {
        sub[i] = u(rng), diag[i] = u(rng), sup[i] = u(rng), rhs[i] = u(rng);
        A(i, i) = diag[i];
        if (i > 0) A(i, i - 1) = sub[i];
        if (i + 1 < n) A(i, i + 1) = sup[i];
        b(i) = rhs[i];
      }
      const Eigen::VectorXd want = A.fullPivLu().solve(b);
      const auto got = tridiag::solve(sub, diag, sup, rhs);
      for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(want(i)).epsilon(1e-8));
    }
  }

  TEST_CASE("Sturm bisection reproduces the dense spectrum") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto t = random_sym(60, seed);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(t));
      for (int k : {0, 1, 10, 59}) CHECK(tridiag::kth_eigenvalue(t, k, 1e-13) == doctest::Approx(es.eigenvalues()(k)).epsilon(1e-10));
      CHECK(tridiag::sturm_count(t, es.eigenvalues()(5) + 1e-9) == 6);
    }
  }

  TEST_CASE("inverse iteration returns a unit eigenvector") {
    const auto t = random_sym(50, 9);
    const double lam = tridiag::kth_eigenvalue(t, 0, 1e-14);
    const auto v = tridiag::inverse_iteration(t, lam, 1e-9);
    const auto Av = t.apply(v.y);
    double nrm = 0, res = 0;
    for (size_t i = 0; i < v.y.size(); ++i) {
      nrm += v.y[i] * v.y[i];
      res = std::max(res, std::abs(Av[i] - lam * v.y[i]));
    }
    CHECK(nrm == doctest::Approx(1.0));
    CHECK(res < 1e-9);
  }
}
