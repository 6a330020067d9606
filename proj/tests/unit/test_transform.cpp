#include <doctest.h>

#include <cmath>
#include <random>

#include "kglab/errors.hpp"
#include "kglab/transform.hpp"
#include "oracles.hpp"

using namespace kglab;

TEST_SUITE("transform") {
  TEST_CASE("cutoff shape") {
    for (double x : {0.0, 0.5, 1.0, -1.0}) CHECK(chi(x) == 1.0);
    for (double x : {2.0, 3.0, -2.5}) CHECK(chi(x) == 0.0);
    double prev = 1.0;
    for (int i = 1; i < 100; ++i) {
      const double c = chi(1.0 + 0.01 * i);
      CHECK(c <= prev);
      CHECK(c == doctest::Approx(1.0 - chi(2.0 - 0.01 * i)).epsilon(1e-12));
      prev = c;
    }
  }

  TEST_CASE("cutoff and log-weight derivatives against finite differences") {
    const double e = 1e-5;
    for (double x : {1.1, 1.37, 1.5, 1.8, -1.3}) {
      CHECK(chi_d1(x) == doctest::Approx((chi(x + e) - chi(x - e)) / (2 * e)).epsilon(1e-6));
      CHECK(chi_d2(x) == doctest::Approx((chi_d1(x + e) - chi_d1(x - e)) / (2 * e)).epsilon(1e-5));
      for (double s : {3.0, 50.0}) {
        auto lz = [s](double y) { return std::log(zeta(y, s)); };
        CHECK(log_zeta_d1(x, s) == doctest::Approx((lz(x + e) - lz(x - e)) / (2 * e)).epsilon(1e-6));
        CHECK(log_zeta_d2(x, s) == doctest::Approx((log_zeta_d1(x + e, s) - log_zeta_d1(x - e, s)) / (2 * e)).epsilon(1e-5));
      }
    }
    CHECK(zeta(0.5, 10.0) == 1.0);
    CHECK(zeta(30.0, 10.0) == doctest::Approx(std::exp(-3.0)));
  }

  TEST_CASE("weight family bookkeeping") {
    const Grid g(60.0, 6001);
    const WeightFamily w = weights_for_delta(1e-3, 0.05, g);
    CHECK(w.A == doctest::Approx(1000.0));
    CHECK(w.B == doctest::Approx(std::pow(1e-3, -0.25)));
    const Field dphi = d1(g, w.phi_A);
    for (int i = 1; i < g.size() - 1; i += 97) CHECK(dphi[i] == doctest::Approx(w.zeta_A[i] * w.zeta_A[i]).epsilon(1e-4));
    const Field dpsi = d1(g, w.psi_B);
    for (int i = 1; i < g.size() - 1; i += 97) CHECK(dpsi[i] == doctest::Approx(w.psi_B_d1[i]).epsilon(1e-3).scale(1.0));
    CHECK_THROWS_AS(make_weights(10.0, 5.0, 0.05, g), ScaleOrderViolation);
    CHECK_THROWS_AS(make_weights(100.0, 1.0, 0.05, g), std::invalid_argument);
    CHECK_THROWS_AS(weights_for_delta(1.5, 0.05, g), std::invalid_argument);
  }

  TEST_CASE("smoothing operator round trip") {
    const Grid g(20.0, 2001);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    for (Parity p : {Parity::even, Parity::odd}) {
      Field f(g.size(), p);
      for (int i = 0; i < g.size() - 1; ++i) f[i] = n01(rng);
      if (p == Parity::odd) f[0] = 0.0;
      const Field back = smoothing_forward(smoothing_inverse(f, 0.05, g), 0.05, g);
      double err = 0.0;
      for (int i = 0; i < g.size() - 1; ++i) err = std::max(err, std::abs(back[i] - f[i]));
      CHECK(err < 1e-10);
    }
    CHECK_THROWS_AS(smoothing_inverse(Field(g.size()), 0.0, g), std::invalid_argument);
  }

  TEST_CASE("local norm against quadrature") {
    const Grid g(40.0, 8001);
    const Field f = sample(g, [](double x) { return std::exp(-x * x / 4); });
    const double want = 2.0 * oracle::simpson(
                                  [](double x) {
                                    const double v = std::exp(-x * x / 4), dv = -x / 2 * v;
                                    return dv * dv + v * v / std::cosh(x / 10);
                                  },
                                  0.0, 40.0, 40000);
    CHECK(local_norm(f, g) == doctest::Approx(std::sqrt(want)).epsilon(1e-5));
  }

  TEST_CASE("windowed pair norm of constants") {
    const Grid g(20.0, 2001);
    const Field one(std::vector<double>(static_cast<size_t>(g.size()), 1.0));
    CHECK(loc_pair_norm({one, Field(g.size())}, g, 5.0) == doctest::Approx(std::sqrt(10.0)));
    CHECK(loc_pair_norm({one, one}, g, 5.0) == doctest::Approx(std::sqrt(20.0)));
  }
}
