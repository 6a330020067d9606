import math

import pytest

import kglab


def test_ground_state_matches_closed_form():
    for alpha in (1.5, 2.0, 3.0):
        (lam,) = kglab.spectrum(alpha, k=1)
        assert lam == pytest.approx(-alpha * (alpha + 2), abs=1e-5)


def test_factored_operators_are_nonnegative():
    assert kglab.spectrum(2.0, k=1, operator="L-")[0] > 0
    assert kglab.spectrum(2.0, k=1, operator="L0")[0] > 0
    with pytest.raises(ValueError):
        kglab.spectrum(2.0, operator="M")


def test_soliton_profile():
    s = kglab.soliton(2.0)
    assert len(s["x"]) == len(s["q"]) == 4001
    assert s["q"][0] == pytest.approx(3 ** 0.25, rel=1e-3)
    assert s["nu0"] == pytest.approx(math.sqrt(8.0), rel=1e-4)
    assert max(abs(a - b) for a, b in zip(s["q"], s["q_closed"])) < 1e-3


def test_intertwining_residual_is_second_order():
    coarse = kglab.intertwining(2.0, n_points=2001)
    fine = kglab.intertwining(2.0, n_points=4001)
    for c, f in zip(coarse, fine):
        assert 3.5 < c / f < 4.5


def test_linear_rates_track_nu0():
    r = kglab.linear_rates(2.0)
    assert r["growth_rate"] == pytest.approx(r["nu0"], rel=0.02)
    assert r["decay_rate"] == pytest.approx(-r["nu0"], rel=0.02)


def test_positivity_scan_flags_cubic_case():
    s = kglab.positivity_scan(1.0, [2.0, 64.0])
    assert s["degenerate"] and s["B0"] is None
    s = kglab.positivity_scan(2.0, [2.0 ** k for k in range(1, 11)])
    assert s["B0"] == 256.0


def test_shoot_short_horizon():
    r = kglab.shoot(2.0, seed=3, t_max=5.0)
    assert r["verdict"] == "trapped_to_t_max"
    assert abs(r["h"]) <= r["bracket"]
    assert len(r["t"]) == len(r["b_plus"])
