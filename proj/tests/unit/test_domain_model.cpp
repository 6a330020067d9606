#include <doctest.h>

#include <cmath>
#include <random>

#include "kglab/decomposition.hpp"
#include "kglab/domain_model.hpp"
#include "kglab/spectral.hpp"
#include "oracles.hpp"

using namespace kglab;

namespace {
ModelParams params(double a, double X = 40.0, int n = 4001) {
  ModelParams p;
  p.alpha = a;
  p.domain_half_length = X;
  p.n_points = n;
  return p;
}
}  // namespace

TEST_SUITE("domain_model") {
  TEST_CASE("AbsPower fast paths agree with pow") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3, 3);
    for (double p : {2.0, 3.0, 4.5, 5.0, 6.25, 2.5, 3.7, 8.0}) {
      const AbsPower pw(p);
      for (int k = 0; k < 200; ++k) {
        const double q = u(rng);
        CHECK(pw(q) == doctest::Approx(std::pow(std::abs(q), p)).epsilon(1e-13));
      }
      CHECK(pw(0.0) == 0.0);
    }
  }

  TEST_CASE("closed-form soliton solves the profile equation to O(h^2)") {
    for (double a : {1.25, 2.0, 3.0}) {
      const double rc = soliton_residual(params(a, 40, 2001), Grid(40, 2001));
      const double rf = soliton_residual(params(a, 40, 4001), Grid(40, 4001));
      CHECK(rc / rf == doctest::Approx(4.0).epsilon(0.05));
    }
  }

  TEST_CASE("soliton peak value") {
    for (double a : {0.5, 1.0, 2.0, 3.0}) CHECK(soliton_value(0.0, a) == doctest::Approx(std::pow(a + 1.0, 0.5 / a)));
  }

  TEST_CASE("discrete soliton is a Newton fixed point close to the closed form") {
    const ModelParams p = params(2.0);
    const Grid g(p);
    const DiscreteSoliton ds = discrete_soliton(p, g);
    CHECK(ds.residual < 1e-10);
    CHECK(ds.newton_iterations <= 6);
    CHECK(sup_norm(ds.q - soliton_profile(p, g)) < 1e-4);
  }

  TEST_CASE("energy of the soliton against an independent quadrature") {
    for (double a : {1.5, 2.0}) {
      const ModelParams p = params(a, 40, 8001);
      const Grid g(p);
      const Field q = soliton_profile(p, g);
      const double E = energy({q, Field(g.size())}, p, g).total;
      const double want = 2.0 * oracle::simpson(
                                    [a](double x) {
                                      const double Q = oracle::q_closed(x, a);
                                      const double Qp = -std::tanh(a * x) * Q;
                                      return 0.5 * Qp * Qp + 0.5 * Q * Q - std::pow(Q, 2 * a + 2) / (2 * a + 2);
                                    },
                                    0.0, 40.0, 200000);
      CHECK(E == doctest::Approx(want).epsilon(1e-5));
    }
  }

  TEST_CASE("nonlinearity derivatives against finite differences") {
    const ModelParams p = params(1.5);
    for (double phi : {-1.3, -0.2, 0.4, 1.1}) {
      const double h = 1e-6;
      CHECK(nonlinearity_d1(phi, p) == doctest::Approx((nonlinearity(phi + h, p) - nonlinearity(phi - h, p)) / (2 * h)).epsilon(1e-7));
      CHECK(nonlinearity_d2(phi, p) == doctest::Approx((nonlinearity_d1(phi + h, p) - nonlinearity_d1(phi - h, p)) / (2 * h)).epsilon(1e-6));
      CHECK(nonlinearity(phi, p) == doctest::Approx((antiderivative(phi + h, p) - antiderivative(phi - h, p)) / (2 * h)).epsilon(1e-7));
    }
  }

  TEST_CASE("quadratic energy expansion matches the energy to third order") {
    const SpectralData spec = make_spectral_data(params(2.0));
    const Grid& g = spec.grid;
    const Field bump = sample(g, [](double x) { return std::exp(-x * x); });
    const double E0 = energy({spec.q, Field(g.size())}, spec.params, g).total;
    double prev = 0.0;
    for (double s : {1e-2, 5e-3}) {
      const FieldPair st{spec.q + s * bump, s * bump};
      const ModalState m = decompose(st, spec);
      const double lhs = 2.0 * (energy(st, spec.params, g).total - E0);
      const double err = std::abs(lhs - quadratic_energy_expansion(m, spec));
      if (prev > 0.0) CHECK(prev / err == doctest::Approx(8.0).epsilon(0.1));
      prev = err;
    }
  }
}
