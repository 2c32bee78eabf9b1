import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import load_fixture
from sp4cyclic import liealg as la
from sp4cyclic.higgs import (FLAGGED, FRAME_PERMUTATION, STABLE, HiggsData, build_sl4,
                             cayley_partner, gauge_action, graded_to_bundle_matrix,
                             hitchin_invariants, normal_form, stability_flag,
                             to_graded_element, zeta4_fixed_point_check)

cnum = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
nonzero = st.complex_numbers(min_magnitude=0.05, max_magnitude=10, allow_nan=False, allow_infinity=False)


def tr4_polynomial():
    fx = load_fixture("trace_polynomials")
    syms = sympy.symbols(fx["variables"])
    return sympy.lambdify(syms, sympy.sympify(fx["tr_phi4"]), "numpy")


def test_degree_bounds():
    HiggsData(genus=3, d=2)
    HiggsData(genus=3, d=6)
    with pytest.raises(ValueError):
        HiggsData(genus=3, d=1)
    with pytest.raises(ValueError):
        HiggsData(genus=3, d=7)
    with pytest.raises(ValueError):
        HiggsData(genus=1, d=0)


@given(cnum, cnum, cnum)
def test_trace_identities(mu, nu, q2):
    t2, t4 = hitchin_invariants(build_sl4(HiggsData(mu, nu, q2)))
    assert t2 == 4 * q2
    assert abs(t4 - tr4_polynomial()(mu, nu, q2)) <= 1e-12 * max(1.0, abs(t4))


def test_fields_broadcast():
    h = HiggsData(np.ones((3, 4)), 0.5, 0)
    assert build_sl4(h).phi.shape == (3, 4, 4, 4)


def test_build_sl4_in_sp4_after_frame_change():
    phi = build_sl4(HiggsData(1.2, -0.3j, 0.4)).phi
    assert la.in_sp4(FRAME_PERMUTATION @ phi @ FRAME_PERMUTATION.T)


@given(cnum, cnum, cnum)
def test_graded_element_matches_matrix(mu, nu, q2):
    h = HiggsData(mu, nu, q2)
    assert np.allclose(graded_to_bundle_matrix(to_graded_element(h)), build_sl4(h).phi)


@given(cnum, cnum)
def test_cayley_partner(mu, nu):
    psi = cayley_partner(HiggsData(mu, nu, 0.25)).psi
    assert np.allclose(psi, [[0.25, mu], [nu, 0.25]])


@given(nonzero, nonzero, cnum)
def test_gauge_group_law(l1, l2, mu):
    h = HiggsData(mu, 0.7, 0.1)
    a = gauge_action(l1, gauge_action(l2, h))
    b = gauge_action(l1 * l2, h)
    for x, y in zip(a.fields(), b.fields()):
        assert abs(x - y) <= 1e-13 * max(1.0, abs(x), abs(y))


@pytest.mark.parametrize("lam", [2.0, -1.0, 1j, 0.5j, -4.0])
def test_gauge_group_law_exact_on_dyadic_units(lam):
    h = HiggsData(3 + 1j, 0.75, 0.5)
    a = gauge_action(lam, gauge_action(1j, h))
    b = gauge_action(lam * 1j, h)
    assert all(np.array_equal(x, y) for x, y in zip(a.fields(), b.fields()))


def test_gauge_rejects_zero():
    with pytest.raises(ValueError):
        gauge_action(0, HiggsData())


@given(nonzero, cnum, cnum)
def test_gauge_preserves_invariants(lam, mu, nu):
    h = HiggsData(mu, nu, 0.3)
    a, b = hitchin_invariants(build_sl4(h)), hitchin_invariants(build_sl4(gauge_action(lam, h)))
    assert np.allclose(a, b, atol=1e-9 * max(1.0, abs(mu * nu)))


def test_normal_form():
    h, lam = normal_form(HiggsData(np.array([0.5, -4.0, 2j]), 1.0))
    assert np.max(np.abs(h.mu)) == 1.0 and h.mu[1] == 1.0
    h0, lam0 = normal_form(HiggsData(0.0, 1.0))
    assert lam0 == 1.0 and h0.mu == 0.0


@given(cnum, cnum)
def test_zeta4(mu, nu):
    assert zeta4_fixed_point_check(HiggsData(mu, nu))


def test_zeta4_needs_q2_zero():
    with pytest.raises(ValueError):
        zeta4_fixed_point_check(HiggsData(1, 1, 0.1))


def test_stability():
    assert stability_flag(HiggsData(1, 0, 0, 2, 2)).flag == STABLE
    assert stability_flag(HiggsData(0, 1, 0, 2, 2)).flag == FLAGGED
    s = stability_flag(HiggsData(1, 0, 0, 3, 2))
    assert s.flag == FLAGGED and "g-1" in s.note


@given(cnum, cnum, cnum)
def test_odd_traces_and_symplectic(mu, nu, q2):
    phi = build_sl4(HiggsData(mu, nu, q2)).phi
    assert np.trace(phi) == 0 and abs(np.trace(phi @ phi @ phi)) == 0
    assert la.in_sp4(phi)


def test_cayley_examples_and_symmetry():
    from sp4cyclic.higgs import Q_W
    assert np.array_equal(cayley_partner(HiggsData(1, 0, 0)).psi, [[0, 1], [0, 0]])
    psi = cayley_partner(HiggsData(0.3j, 2.0, -1.1)).psi
    assert np.array_equal(psi.T @ Q_W, Q_W @ psi)


def test_hitchin_section_block():
    # beta = [[q4, q2], [q2, 1]] means mu = 1, nu = q4
    phi = build_sl4(HiggsData(1.0, 0.7, 0.2)).phi
    assert np.array_equal(phi[:2, 2:], [[0.7, 0.2], [0.2, 1.0]])
    assert np.array_equal(phi[2:, :2], [[0, 1], [1, 0]])


def test_gauge_examples():
    h = HiggsData(1.5, 0.5, 0.25)
    assert gauge_action(1, h).fields() == h.fields()
    g = gauge_action(1j, h)
    assert g.mu == -1.5 and g.nu == -0.5 and g.q2 == 0.25


def test_normal_form_idempotent():
    h, _ = normal_form(HiggsData(np.array([0.5j, -3.0]), 0.2))
    h2, lam = normal_form(h)
    assert np.allclose(h2.mu, h.mu) and abs(lam - 1) < 1e-15


@given(cnum)
def test_graded_element_q2_zero_lies_in_degree_minus_one(mu):
    w = to_graded_element(HiggsData(mu, 2.0))
    assert set(w.dz.as_dict(0.0)) <= set(la.hat_labels(-1))
