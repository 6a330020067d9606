#include <doctest.h>

#include <cmath>
#include <random>

#include "kglab/decomposition.hpp"
#include "kglab/dynamics.hpp"
#include "kglab/errors.hpp"

using namespace kglab;

namespace {
const SpectralData& spec2() {
  static const SpectralData s = [] {
    ModelParams p;
    p.alpha = 2.0;
    p.domain_half_length = 40.0;
    p.n_points = 4001;
    return make_spectral_data(p);
  }();
  return s;
}

FieldPair random_state(std::uint64_t seed, double size) {
  const SpectralData& s = spec2();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(0, 5), w(0.5, 2), a(-1, 1);
  const double c1 = c(rng), w1 = w(rng), a1 = a(rng), c2 = c(rng), w2 = w(rng), a2 = a(rng);
  auto bump = [](double cc, double ww, double aa) {
    return [=](double x) { return aa * (std::exp(-std::pow((x - cc) / ww, 2)) + std::exp(-std::pow((x + cc) / ww, 2))); };
  };
  Field p1 = sample(s.grid, bump(c1, w1, a1)), p2 = sample(s.grid, bump(c2, w2, a2));
  p1[s.grid.size() - 1] = p2[s.grid.size() - 1] = 0.0;
  return {s.q + size * p1, size * p2};
}
}  // namespace

TEST_SUITE("decomposition") {
  TEST_CASE("decompose and reconstruct are inverse; remainders are orthogonal to Y0") {
    const SpectralData& s = spec2();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const FieldPair st = random_state(seed, 1e-2);
      const ModalState m = decompose(st, s, 1.5);
      const FieldPair back = reconstruct(m, s);
      CHECK(sup_norm(back.phi1 - st.phi1) < 1e-15);
      CHECK(sup_norm(back.phi2 - st.phi2) < 1e-15);
      CHECK(std::abs(inner(s.grid, m.u1, s.y0)) < 1e-15);
      CHECK(std::abs(inner(s.grid, m.u2, s.y0)) < 1e-15);
      CHECK(unstable_coordinate(st, s) == doctest::Approx(m.b_plus).epsilon(1e-12));
      CHECK(m.t == 1.5);
    }
  }

  TEST_CASE("mode vectors decompose onto a single coordinate") {
    const SpectralData& s = spec2();
    const double eps = 1e-4;
    const ModalState mp = decompose({s.q + eps * s.modes.y_plus.phi1, eps * s.modes.y_plus.phi2}, s);
    CHECK(mp.b_plus == doctest::Approx(eps));
    CHECK(std::abs(mp.b_minus) < 1e-13 * eps);
    const ModalState mm = decompose({s.q + eps * s.modes.y_minus.phi1, eps * s.modes.y_minus.phi2}, s);
    CHECK(mm.b_minus == doctest::Approx(eps));
    CHECK(std::abs(mm.b_plus) < 1e-13 * eps);
    CHECK(quadratic_energy_expansion(mp, s) == doctest::Approx(0.0));
  }

  TEST_CASE("remainder is quadratic along Y0") {
    const SpectralData& s = spec2();
    std::vector<double> ratios;
    for (double a : {1e-2, 1e-3, 1e-4}) {
      ModalState m;
      m.a1 = a;
      m.u1 = Field(s.grid.size());
      m.u2 = Field(s.grid.size());
      ratios.push_back(sup_norm(remainder_terms(m, s).n_field) / (a * a));
    }
    CHECK(ratios[1] == doctest::Approx(ratios[2]).epsilon(0.02));
    CHECK(ratios[0] == doctest::Approx(ratios[2]).epsilon(0.1));
  }

  TEST_CASE("modal ODE residual shrinks at second order in the record spacing") {
    const SpectralData& s = spec2();
    auto worst = [&](int stride) {
      IntegratorConfig c;
      c.dt = 1e-3;
      c.t_max = 1.0;
      c.record_stride = stride;
      const Trajectory tr = evolve(random_state(4, 1e-3), c, s.params, s.grid);
      std::vector<ModalState> ms;
      for (size_t i = 0; i < tr.states.size(); ++i) ms.push_back(decompose(tr.states[i], s, tr.times[i]));
      double w = 0.0;
      for (const auto& r : modal_ode_residual(ms, s)) w = std::max({w, std::abs(r.a1), std::abs(r.a2)});
      return w;
    };
    CHECK(worst(20) / worst(10) == doctest::Approx(4.0).epsilon(0.15));
    CHECK_THROWS_AS(modal_ode_residual(std::vector<ModalState>(2), s), InsufficientSamples);
  }

  TEST_CASE("log-linear rate fit") {
    std::vector<double> t, y;
    for (int i = 0; i < 20; ++i) {
      t.push_back(0.1 * i);
      y.push_back(-3.0 * std::exp(-1.7 * 0.1 * i));
    }
    CHECK(log_linear_rate(t, y) == doctest::Approx(-1.7));
    CHECK_THROWS_AS(log_linear_rate({0.0}, {1.0}), InsufficientSamples);
  }

  TEST_CASE("linearized mode rates recover +-nu0") {
    const LinearModeFit fit = linear_mode_rates(spec2());
    CHECK(fit.growth_rate == doctest::Approx(spec2().nu0).epsilon(0.02));
    CHECK(fit.decay_rate == doctest::Approx(-spec2().nu0).epsilon(0.02));
  }

  TEST_CASE("equilibrium energy drift with the unstable component removed") {
    const EquilibriumDrift d = equilibrium_energy_drift(spec2(), 20.0, 1e-3, 100);
    CHECK(d.max_relative_drift < 1e-8);
    CHECK(d.raw_departure_time > 0.0);
    CHECK(d.raw_departure_time < 20.0);
  }
}
