#include <doctest.h>

#include <cmath>
#include <random>

#include "kglab/grid.hpp"
#include "kglab/parallel.hpp"
#include "oracles.hpp"

using namespace kglab;

TEST_SUITE("grid") {
  TEST_CASE("mirrored trapezoid integrates a Gaussian over the full line") {
    const Grid g(20.0, 2001);
    const Field f = sample(g, [](double x) { return std::exp(-x * x); });
    CHECK(inner(g, f, Field(std::vector<double>(g.size(), 1.0))) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  }

  TEST_CASE("opposite parity products vanish") {
    const Grid g(10.0, 101);
    const Field e = sample(g, [](double x) { return std::cos(x); });
    const Field o = sample(g, [](double x) { return std::sin(x); }, Parity::odd);
    CHECK(inner(g, e, o) == 0.0);
    CHECK(hadamard(e, o).parity == Parity::odd);
  }

  TEST_CASE("d1 and d2 converge at second order") {
    auto err = [](int n) {
      const Grid g(10.0, n);
      const Field f = sample(g, [](double x) { return std::exp(-x * x); });
      const Field e1 = d1(g, f), e2 = d2(g, f);
      double m1 = 0.0, m2 = 0.0;
      for (int i = 0; i < g.size() - 1; ++i) {
        const double x = g.x(i);
        m1 = std::max(m1, std::abs(e1[i] + 2.0 * x * std::exp(-x * x)));
        m2 = std::max(m2, std::abs(e2[i] - (4.0 * x * x - 2.0) * std::exp(-x * x)));
      }
      return std::pair{m1, m2};
    };
    const auto c = err(501), f = err(1001);
    CHECK(c.first / f.first == doctest::Approx(4.0).epsilon(0.05));
    CHECK(c.second / f.second == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("odd derivative uses the antisymmetric ghost") {
    const Grid g(5.0, 501);
    const Field s = sample(g, [](double x) { return std::sin(x); }, Parity::odd);
    const Field ds = d1(g, s);
    CHECK(ds.parity == Parity::even);
    CHECK(ds[0] == doctest::Approx(1.0).epsilon(1e-4));
  }

  TEST_CASE("grad_sq equals <f, -d2 f> for Dirichlet fields") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n01;
    const Grid g(3.0, 64);
    for (int trial = 0; trial < 20; ++trial) {
      Field f(g.size());
      for (int i = 0; i < g.size() - 1; ++i) f[i] = n01(rng);
      const double lhs = grad_sq(g, f);
      const double rhs = -inner(g, f, d2(g, f));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }

  TEST_CASE("weighted grad_sq against a fine quadrature") {
    const Grid g(20.0, 4001);
    const Field f = sample(g, [](double x) { return std::exp(-x * x / 2); });
    const double got = grad_sq(g, f, [](double x) { return 1.0 / std::cosh(x); });
    const double want = 2.0 * oracle::simpson([](double x) { return x * x * std::exp(-x * x) / std::cosh(x); }, 0, 20, 20000);
    CHECK(got == doctest::Approx(want).epsilon(1e-4));
  }

  TEST_CASE("coarsen and refine") {
    const Grid g(40.0, 4001);
    CHECK(g.coarsened().size() == 2001);
    CHECK(g.refined().h() == doctest::Approx(0.005));
    CHECK_THROWS_AS(Grid(40.0, 4000).coarsened(), std::invalid_argument);
    CHECK_THROWS_AS(Grid(1.0, 8), std::invalid_argument);
  }

  TEST_CASE("field arithmetic checks sizes") {
    CHECK_THROWS_AS(Field(5) + Field(6), std::invalid_argument);
    const Field a(std::vector<double>{1, 2, 3}), b(std::vector<double>{4, 5, 6});
    CHECK((2.0 * a - b).values == std::vector<double>{-2, -1, 0});
  }

  TEST_CASE("model params validation") {
    ModelParams p;
    p.alpha = -1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.alpha = 2;
    p.n_points = 3;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }

  TEST_CASE("parallel_map keeps index order and rethrows") {
    const auto v = parallel_map<int>(50, [](int i) { return i * i; });
    for (int i = 0; i < 50; ++i) CHECK(v[static_cast<size_t>(i)] == i * i);
    CHECK_THROWS_AS(parallel_for(10, [](int i) { if (i == 3) throw std::runtime_error("boom"); }), std::runtime_error);
  }
}
