#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "kglab/decomposition.hpp"
#include "kglab/manifold.hpp"

using namespace kglab;

namespace {
const SpectralData& spec2() {
  static const SpectralData s = [] {
    ModelParams p;
    p.alpha = 2.0;
    p.domain_half_length = 40.0;
    p.n_points = 2001;
    return make_spectral_data(p);
  }();
  return s;
}

ShootingConfig short_config() {
  ShootingConfig c;
  c.t_max = 5.0;
  c.exit_lookahead = 10.0;
  return c;
}
}  // namespace

TEST_SUITE("manifold") {
  TEST_CASE("admissible projection removes the unstable coordinate") {
    const SpectralData& s = spec2();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const AdmissiblePerturbation e = random_admissible(seed, 1e-3, s);
      CHECK(e.norm == doctest::Approx(1e-3).epsilon(1e-12));
      CHECK(std::abs(inner(s.grid, e.pair(), s.modes.z_plus)) < 1e-15);
      const ModalState m = decompose({s.q + e.eps1, e.eps2}, s);
      CHECK(std::abs(m.b_plus) < 1e-15);
      CHECK(m.b_minus == doctest::Approx(e.b_minus).epsilon(1e-9));
      CHECK(e.eps1[s.grid.size() - 1] == 0.0);
    }
    const AdmissiblePerturbation z = admissible_with_size(Field(s.grid.size()), Field(s.grid.size()), 1e-3, s);
    CHECK(z.is_zero());
    CHECK(z.norm == 0.0);
    CHECK_THROWS_AS(admissible_from_raw(Field(s.grid.size(), Parity::odd), Field(s.grid.size()), s), std::invalid_argument);
  }

  TEST_CASE("random bumps are deterministic and in range") {
    const auto a = random_bumps(7, 6), b = random_bumps(7, 6), c = random_bumps(8, 6);
    REQUIRE(a.size() == 6);
    bool differs = false;
    for (size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].center == b[k].center);
      CHECK(a[k].weight == b[k].weight);
      CHECK(a[k].center >= 0.0);
      CHECK(a[k].center <= 6.0);
      CHECK(a[k].width >= 0.5);
      CHECK(a[k].width <= 2.0);
      CHECK(std::abs(a[k].weight) <= 1.0);
      differs |= a[k].center != c[k].center;
    }
    CHECK(differs);
    const Grid g(20.0, 2001);
    const Field f = bump_field(g, a);
    CHECK(f.parity == Parity::even);
    CHECK(f[g.size() - 1] == 0.0);
    const double want = [&] {
      double v = 0.0;
      for (const Bump& bb : a) v += 2.0 * bb.weight * std::exp(-std::pow(bb.center / bb.width, 2));
      return v;
    }();
    CHECK(f[0] == doctest::Approx(want));
  }

  TEST_CASE("shooting configuration defaults") {
    ShootingConfig c;
    CHECK(c.effective_bracket() == doctest::Approx(1.024e-3));
    CHECK(c.effective_tol() == doctest::Approx(4e-12 * 1.024e-3));
    c.bracket = 2e-3;
    CHECK(c.effective_bracket() == 2e-3);
    CHECK_NOTHROW(c.validate());
    c.bisection_tol = 3e-3;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    ShootingConfig d;
    d.K = 0.5;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  }

  TEST_CASE("zero perturbation shoots to the soliton") {
    const SpectralData& s = spec2();
    const AdmissiblePerturbation z = admissible_with_size(Field(s.grid.size()), Field(s.grid.size()), 0.0, s);
    const ShootingResult r = shoot(z, short_config(), s);
    CHECK(r.b_plus_0 == 0.0);
    CHECK(r.verdict == Verdict::trapped_to_t_max);
    CHECK(r.tube_max_distance < 1e-12);
  }

  TEST_CASE("shooting a small perturbation stays trapped and its controls leave") {
    const SpectralData& s = spec2();
    const ShootingConfig cfg = short_config();
    const AdmissiblePerturbation e = random_admissible(3, 1e-3, s);
    const ShootingResult r = shoot(e, cfg, s);
    CHECK(r.verdict == Verdict::trapped_to_t_max);
    CHECK(std::abs(r.b_plus_0) <= cfg.effective_bracket());
    CHECK(r.final_width <= cfg.effective_tol());
    CHECK(r.times.size() == r.b_plus.size());
    CHECK(r.times.back() == doctest::Approx(cfg.t_max));
    const ControlRun up = control_run(e, r.b_plus_0 + 0.5 * cfg.effective_bracket(), cfg, s);
    const ControlRun down = control_run(e, r.b_plus_0 - 0.5 * cfg.effective_bracket(), cfg, s);
    CHECK(up.verdict == Verdict::exited_plus);
    CHECK(down.verdict == Verdict::exited_minus);
    CHECK(up.growth_rate == doctest::Approx(s.nu0).epsilon(0.05));
  }

  TEST_CASE("lipschitz pair construction") {
    const SpectralData& s = spec2();
    const auto pairs = lipschitz_pairs(10, 4, 1e-2, s);
    REQUIRE(pairs.size() == 4);
    for (const auto& [a, b] : pairs) {
      CHECK(a.norm == doctest::Approx(1e-2).epsilon(1e-12));
      CHECK(b.norm == doctest::Approx(1e-2).epsilon(1e-12));
    }
    const auto& last = pairs.back();
    CHECK(sup_norm(last.first.eps1 + last.second.eps1) == 0.0);
    CHECK(last.first.b_minus == -last.second.b_minus);
    CHECK_THROWS_AS(lipschitz_pairs(1, 0, 1e-2, s), std::invalid_argument);
  }

  TEST_CASE("verdict names") {
    CHECK(to_string(Verdict::trapped_to_t_max) != to_string(Verdict::exited_plus));
    CHECK(to_string(Verdict::exited_minus) != to_string(Verdict::boundary_contaminated));
  }
}
