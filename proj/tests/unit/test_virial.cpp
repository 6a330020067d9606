#include <doctest.h>

#include <cmath>

#include "kglab/decomposition.hpp"
#include "kglab/errors.hpp"
#include "kglab/manifold.hpp"
#include "kglab/virial.hpp"
#include "oracles.hpp"

using namespace kglab;

namespace {
ModelParams params(double alpha, double X, int n) {
  ModelParams p;
  p.alpha = alpha;
  p.domain_half_length = X;
  p.n_points = n;
  return p;
}

std::vector<VirialRecord> linear_series(double slope_H, double slope_B) {
  std::vector<VirialRecord> rs(50);
  for (size_t i = 0; i < rs.size(); ++i) {
    VirialRecord& r = rs[i];
    r.t = 0.1 * static_cast<double>(i);
    r.w_loc = 1.0;
    r.a2 = 1.0;
    r.H_val = slope_H * r.t;
    r.B_val = slope_B * r.t;
  }
  differentiate_series(rs);
  return rs;
}
}  // namespace

TEST_SUITE("virial") {
  TEST_CASE("integration-by-parts identity closes at second order") {
    double err[2];
    int k = 0;
    for (int n : {2001, 4001}) {
      const Grid g(40.0, n);
      const WeightFamily w = make_weights(4.0, 2.0, 0.05, g);
      Field u = bump_field(g, random_bumps(11));
      u[g.size() - 1] = 0.0;
      err[k++] = check_virial_identity(u, w, g) / h1_norm(g, u);
    }
    CHECK(err[1] < 1e-3);
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.15));
  }

  TEST_CASE("nonlinear weighted bound: lhs against quadrature, bound holds") {
    const ModelParams p = params(2.0, 40.0, 8001);
    const Grid g(p);
    const Field u = sample(g, [](double x) { return 0.1 * std::exp(-x * x); });
    const NonlinearBound nb = nonlinear_weighted_bound(u, 20.0, p, g);
    const double want = 2.0 * oracle::simpson(
                                  [](double x) {
                                    const double z = zeta(x, 20.0), v = 0.1 * std::exp(-x * x);
                                    return z * z * std::pow(v, 6);
                                  },
                                  0.0, 40.0, 40000);
    CHECK(nb.lhs == doctest::Approx(want).epsilon(1e-6));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Field r = 1e-2 * bump_field(g, random_bumps(seed));
      r[g.size() - 1] = 0.0;
      for (double A : {20.0, 1000.0}) CHECK(nonlinear_weighted_bound(r, A, p, g).holds());
    }
  }

  TEST_CASE("repulsive potential at alpha = 1 reduces to the weight term") {
    const ModelParams p = params(1.0, 40.0, 4001);
    const Grid g(p);
    const RepulsivePotential rp = repulsive_potential(8.0, p, g);
    for (int i = 0; i < g.size(); i += 37) {
      CHECK(rp.V0[i] == 0.0);
      CHECK(rp.V[i] == doctest::Approx(0.5 * log_zeta_d2(g.x(i), 8.0)));
    }
    const PositivityScan s = positivity_threshold(p, g, {2.0, 64.0, 1024.0});
    CHECK(s.degenerate);
    CHECK(s.B0 == -1.0);
  }

  TEST_CASE("repulsive potential at alpha = 2") {
    const ModelParams p = params(2.0, 40.0, 4001);
    const Grid g(p);
    const RepulsivePotential rp = repulsive_potential(16.0, p, g);
    const int i = 100;  // x = 1
    const double x = g.x(i), q = oracle::q_closed(x, 2.0), qp = -std::tanh(2.0 * x) * q;
    CHECK(rp.V0[i] == doctest::Approx(0.5 * (2.0 / 3.0) * std::abs(x * qp) * std::pow(q, 3.0)));
    for (int j = 0; j < g.size(); ++j) {
      CHECK(rp.V0[j] >= 0.0);
      if (g.x(j) < 1.0 || g.x(j) > 2.0) CHECK(rp.V[j] >= 0.0);
    }
    std::vector<double> Bs;
    for (double B = 2.0; B <= 1024.0; B *= 2.0) Bs.push_back(B);
    const PositivityScan s = positivity_threshold(p, g, Bs);
    CHECK_FALSE(s.degenerate);
    CHECK(s.min_gap.front() < 0.0);
    CHECK(s.B0 == 256.0);
  }

  TEST_CASE("series differentiation") {
    std::vector<VirialRecord> rs(6);
    for (size_t i = 0; i < rs.size(); ++i) {
      rs[i].t = 0.5 * static_cast<double>(i);
      rs[i].H_val = rs[i].t * rs[i].t;
      rs[i].G_val = 3.0 * rs[i].t;
    }
    differentiate_series(rs);
    CHECK_FALSE(rs.front().has_derivatives);
    CHECK_FALSE(rs.back().has_derivatives);
    for (size_t i = 1; i + 1 < rs.size(); ++i) {
      CHECK(rs[i].dH == doctest::Approx(2.0 * rs[i].t));
      CHECK(rs[i].dG == doctest::Approx(3.0));
    }
    std::vector<VirialRecord> few(2);
    CHECK_THROWS_AS(differentiate_series(few), InsufficientSamples);
  }

  TEST_CASE("inequality probes on synthetic series") {
    const double nu0 = std::sqrt(8.0);
    const InequalityReport good = check_inequalities(linear_series(-0.7, nu0), nu0, 1e-3);
    CHECK(good.find("virial_H")->passed);
    CHECK(good.find("virial_H")->fitted_constant == doctest::Approx(0.7));
    CHECK(good.find("modal_B")->passed);
    CHECK(good.find("modal_B")->violation_count == 0);

    const InequalityReport bad = check_inequalities(linear_series(0.7, 0.25 * nu0), nu0, 1e-3);
    CHECK_FALSE(bad.find("virial_H")->passed);
    CHECK(bad.find("virial_H")->violation_count == 48);
    CHECK(bad.find("modal_B")->fitted_constant == doctest::Approx(0.25 * nu0));
    CHECK(bad.find("nonexistent") == nullptr);
  }

  TEST_CASE("trapezoid integral with tail share") {
    std::vector<double> t, y;
    for (int i = 0; i <= 10; ++i) {
      t.push_back(i);
      y.push_back(1.0);
    }
    const auto [total, tail] = integral_with_tail(t, y, 5.0);
    CHECK(total == doctest::Approx(10.0));
    CHECK(tail == doctest::Approx(0.5));
    CHECK(integral_with_tail(t, std::vector<double>(11, 0.0), 5.0).second == 0.0);
  }

  TEST_CASE("endgame diagnostics on an exponential tail") {
    std::vector<VirialRecord> rs(201);
    for (size_t i = 0; i < rs.size(); ++i) {
      rs[i].t = 0.1 * static_cast<double>(i);
      rs[i].w_loc = std::exp(-0.5 * rs[i].t);
      rs[i].G_val = std::exp(-rs[i].t);
      rs[i].a1 = 1e-3 * std::exp(-rs[i].t);
    }
    differentiate_series(rs);
    const EndgameReport e = endgame_diagnostics(rs);
    CHECK(e.decay_integral == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(e.decay_tail_fraction < 1e-4);
    CHECK(e.g_decay_ratio == doctest::Approx(std::exp(-18.0)).epsilon(1e-9));
    CHECK(e.modal_decay_ratio == doctest::Approx(std::exp(-18.0)).epsilon(1e-9));
    CHECK(e.g_derivative_constant == doctest::Approx(1.0).epsilon(1e-2));
    CHECK_FALSE(e.diverged);
    CHECK_THROWS_AS(endgame_diagnostics(std::vector<VirialRecord>(2)), InsufficientSamples);
  }

  TEST_CASE("functionals vanish at the soliton") {
    const SpectralData spec = make_spectral_data(params(2.0, 40.0, 4001));
    const WeightFamily w = weights_for_delta(1e-3, 0.05, spec.grid);
    const ModalState m = decompose({spec.q, Field(spec.grid.size())}, spec);
    const VirialRecord r = evaluate_functionals(m, transformed_state(m, w, spec), w, spec, 1e-3);
    for (double v : {r.I_val, r.J_val, r.H_val, r.B_val, r.K_val, r.G_val, r.w_loc, r.z_loc})
      CHECK(std::abs(v) < 1e-20);
  }
}
