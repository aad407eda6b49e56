"""Commensurate-order stability analysis: order rationalization,
characteristic polynomial construction, root finding, and the angular
sector verdict."""
from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracadrc import (
    CharPoly,
    bandwidth_gains,
    build_char_poly,
    critical_gain,
    ifeso_gain_check,
    poly_roots,
    rationalize_order,
    sector_test,
)

REF = dict(b=1.0, b_o=1.0, a_o=10.0, K=150.0, omega_o=400.0, p=4, q_den=5)


def ref_poly(**overrides):
    kw = dict(REF)
    kw.update(overrides)
    g = bandwidth_gains(kw.pop("omega_o"))
    return build_char_poly(beta1=g.beta1, beta2=g.beta2, **kw)


# ---------------------------------------------------------------------------
# Order rationalization
# ---------------------------------------------------------------------------


def test_rationalize_examples():
    assert rationalize_order(0.8) == (4, 5)
    assert rationalize_order(0.5) == (1, 2)
    assert rationalize_order(0.6) == (3, 5)
    assert rationalize_order(0.95) == (19, 20)
    assert rationalize_order(1.0 / 3.0) == (1, 3)


def test_rationalize_validation():
    for bad in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            rationalize_order(bad)
    with pytest.raises(ValueError, match="within"):
        rationalize_order(0.1234567891)
    # A looser tolerance finds a small-denominator stand-in.
    p, q = rationalize_order(0.1234567891, tol=1e-3)
    assert q <= 100
    assert abs(p / q - 0.1234567891) <= 1e-3


@given(p=st.integers(min_value=1, max_value=99), q=st.integers(min_value=2, max_value=100))
def test_rationalize_round_trips_exact_fractions(p, q):
    g = math.gcd(p, q)
    p, q = p // g, q // g
    if p >= q:
        return
    assert rationalize_order(p / q) == (p, q)


# ---------------------------------------------------------------------------
# Characteristic polynomial
# ---------------------------------------------------------------------------


def test_reference_polynomial_exact_coefficients():
    cp = ref_poly()
    assert cp.lam == pytest.approx(0.2)
    assert cp.coeffs.size == 15  # degree 14, ascending storage
    expected = {0: 2.4e7, 5: 289500.0, 9: 150.0, 10: 810.0, 14: 1.0}
    for power, value in expected.items():
        assert cp.coeffs[power] == pytest.approx(value, rel=1e-12)
    others = [k for k in range(15) if k not in expected]
    assert all(cp.coeffs[k] == 0.0 for k in others)


@given(
    a_o=st.floats(min_value=-50.0, max_value=50.0),
    K=st.floats(min_value=1.0, max_value=500.0),
    omega_o=st.floats(min_value=10.0, max_value=2000.0),
    b=st.floats(min_value=0.2, max_value=3.0),
    p=st.integers(min_value=1, max_value=6),
    q_den=st.integers(min_value=2, max_value=8),
)
def test_matched_gain_polynomial_structure(a_o, K, omega_o, b, p, q_den):
    # With b == b_o the closed-loop polynomial has exactly five terms whose
    # placement and values follow from expanding the loop by hand:
    #   w^(p+2q) + (beta1+a_o) w^(2q) + K w^(p+q)
    #     + (a_o*beta1 + beta2 + K*(beta1+a_o)) w^q + K*beta2,
    # all scaled by the common drive gain b.
    if p >= q_den or math.gcd(p, q_den) != 1:
        return
    g = bandwidth_gains(omega_o)
    cp = build_char_poly(
        b=b, b_o=b, a_o=a_o, K=K, beta1=g.beta1, beta2=g.beta2, p=p, q_den=q_den
    )
    deg = p + 2 * q_den
    expected = np.zeros(deg + 1)
    expected[p + 2 * q_den] += 1.0
    expected[2 * q_den] += g.beta1 + a_o
    expected[p + q_den] += K
    expected[q_den] += a_o * g.beta1 + g.beta2 + K * (g.beta1 + a_o)
    expected[0] += K * g.beta2
    expected *= b
    np.testing.assert_allclose(cp.coeffs, expected, rtol=1e-9, atol=1e-6)
    assert cp.p == p and cp.q_den == q_den
    assert cp.lam == pytest.approx(1.0 / q_den)


def test_polynomial_records_parameters():
    cp = ref_poly()
    assert cp.params["K"] == 150.0
    assert cp.params["a_o"] == 10.0


# ---------------------------------------------------------------------------
# Roots
# ---------------------------------------------------------------------------


def test_reference_roots_satisfy_polynomial():
    cp = ref_poly()
    roots = poly_roots(cp)
    assert roots.size == 14
    # ascending coefficients: evaluate sum c_k w^k directly
    for w in roots:
        val = sum(c * w**k for k, c in enumerate(cp.coeffs))
        assert abs(val) / np.max(np.abs(cp.coeffs)) < 1e-8


def test_roots_close_under_conjugation():
    roots = poly_roots(ref_poly())
    conj = np.conj(roots)
    for r in roots:
        assert np.min(np.abs(conj - r)) < 1e-6


# ---------------------------------------------------------------------------
# Sector verdict
# ---------------------------------------------------------------------------


def test_reference_configuration_is_stable():
    rep = sector_test(ref_poly())
    assert rep.stable
    assert not rep.marginal
    assert rep.degree == 14
    assert rep.lam == pytest.approx(0.2)
    assert rep.margin == pytest.approx(0.3028, abs=1e-3)
    assert np.max(rep.residuals) < 1e-8
    assert np.all(np.abs(rep.args) > rep.lam * math.pi / 2.0)


def test_flipped_gain_is_unstable_by_a_real_root():
    rep = sector_test(ref_poly(b_o=-1.0))
    assert not rep.stable
    # A positive real root has zero argument: the margin is exactly the
    # negative sector half-angle.
    assert rep.margin == pytest.approx(-0.2 * math.pi / 2.0, rel=1e-9)


def test_boundary_roots_flag_marginal():
    ang = 0.1 * math.pi  # exactly on the lam = 0.2 sector edge
    coeffs = np.array([1.0, -2.0 * math.cos(ang), 1.0])
    cp = CharPoly(coeffs=coeffs, p=0, q_den=5, lam=0.2, params={})
    rep = sector_test(cp)
    assert rep.marginal
    assert not rep.stable
    assert abs(rep.margin) < 1e-9


@given(scale=st.floats(min_value=0.1, max_value=10.0))
def test_margin_invariant_under_coefficient_scaling(scale):
    cp = ref_poly()
    scaled = CharPoly(
        coeffs=cp.coeffs * scale, p=cp.p, q_den=cp.q_den, lam=cp.lam, params={}
    )
    assert sector_test(scaled).margin == pytest.approx(
        sector_test(cp).margin, abs=1e-9
    )


# ---------------------------------------------------------------------------
# Gain sweeps and auxiliary checks
# ---------------------------------------------------------------------------


def test_matched_loop_never_destabilizes_with_gain():
    assert critical_gain(1.0, 1.0, 10.0, 0.8, 400.0) is None


def test_everywhere_unstable_loop_fails_at_sweep_floor():
    k = critical_gain(1.0, 1.0, -2000.0, 0.8, 400.0, k_low=0.01)
    assert k == pytest.approx(0.01)


def test_observer_gain_condition():
    assert ifeso_gain_check(800.0, 160000.0)
    assert not ifeso_gain_check(0.0, 1.0)
    assert not ifeso_gain_check(1.0, 0.0)
    assert not ifeso_gain_check(-1.0, 5.0)
