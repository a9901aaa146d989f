import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import airy, sph_harm_y
from sympy import S
from sympy.physics.quantum.cg import CG

from qmbench.specfun import (
    AngularMomentum,
    OscillatorState,
    airy_ai,
    airy_zeros,
    cg,
    clebsch_gordan,
    gaunt,
    lande_g,
    oscillator_wf,
    ylm,
)


def airy_maclaurin_oracle(x, terms=40):
    """Ai from the two Maclaurin solutions in 50-digit arithmetic."""
    with mpmath.workdps(50):
        x = mpmath.mpf(x)
        f = g = mpmath.mpf(0)
        tf, tg = mpmath.mpf(1), x
        for k in range(terms):
            f += tf
            g += tg
            tf *= x**3 / ((3 * k + 2) * (3 * k + 3))
            tg *= x**3 / ((3 * k + 3) * (3 * k + 4))
        c1 = 1 / (mpmath.mpf(3) ** (mpmath.mpf(2) / 3) * mpmath.gamma(mpmath.mpf(2) / 3))
        c2 = 1 / (mpmath.mpf(3) ** (mpmath.mpf(1) / 3) * mpmath.gamma(mpmath.mpf(1) / 3))
        return float(c1 * f - c2 * g)


def sympy_cg(j1, m1, j2, m2, j, m):
    return float(CG(S(j1), S(m1), S(j2), S(m2), S(j), S(m)).doit())


def sphere_quadrature(order=40):
    x, w = np.polynomial.legendre.leggauss(order)
    n_phi = 2 * order
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    theta = np.arccos(x)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    ww = np.outer(w, np.full(n_phi, 2 * np.pi / n_phi))
    return tt, pp, ww


# --- Airy -------------------------------------------------------------------


def test_airy_at_origin_matches_series_oracle():
    assert airy_ai(0.0) == pytest.approx(airy_maclaurin_oracle(0.0), abs=1e-15)
    assert airy_ai(0.0) == pytest.approx(0.3550280539, abs=1e-10)


def test_airy_first_zero():
    assert abs(airy_ai(-2.3381074)) < 1e-7
    oracle_root = mpmath.findroot(lambda t: airy_maclaurin_oracle(float(t)), -2.338)
    assert airy_zeros(1)[0] == pytest.approx(float(oracle_root), abs=1e-10)


def test_airy_decays_monotonically_for_positive_x():
    a4, a5 = airy_ai(4.0), airy_ai(5.0)
    assert a4 > 0 and a5 > 0 and a5 / a4 < 1


@pytest.mark.parametrize("x", [-6.5, -3.0, -1.0, 0.7, 2.5, 5.5])
def test_airy_inside_series_window_matches_oracle(x):
    assert airy_ai(x) == pytest.approx(airy_maclaurin_oracle(x, terms=80), abs=1e-12)


def test_airy_absolute_error_on_wide_range():
    x = np.linspace(-30, 30, 6001)
    ref = np.array([float(mpmath.airyai(v)) for v in x[::10]])
    assert np.max(np.abs(airy_ai(x[::10]) - ref)) < 1e-10
    assert np.max(np.abs(airy_ai(x) - airy(x)[0])) < 1e-10


def test_airy_ode_residual_is_second_order():
    x = np.linspace(-10, 10, 201)

    def residual(h):
        d2 = (airy_ai(x + h) - 2 * airy_ai(x) + airy_ai(x - h)) / h**2
        return np.max(np.abs(d2 - x * airy_ai(x)))

    r1, r2 = residual(1e-2), residual(5e-3)
    # truncation estimate h^2/12 * max|Ai''''| with Ai'''' = 2 Ai' + x^2 Ai
    assert r1 < 1e-4 / 12 * 50
    assert 3.0 < r1 / r2 < 5.0


def test_airy_rejects_non_finite():
    with pytest.raises(ValueError):
        airy_ai(float("nan"))
    with pytest.raises(ValueError):
        airy_ai(np.array([0.0, np.inf]))


# --- oscillator ---------------------------------------------------------------


def test_oscillator_odd_state_vanishes_at_origin():
    assert oscillator_wf(OscillatorState(1), 0.0) == 0.0


def test_oscillator_orthonormality_under_gauss_hermite():
    # weight exp(-y^2) is divided out: chi_m chi_n exp(y^2) is a polynomial
    y, w = np.polynomial.hermite.hermgauss(60)
    vals = np.array([oscillator_wf(OscillatorState(n), y) for n in range(21)])
    gram = (vals * np.exp(y * y)) @ np.diag(w) @ vals.T
    assert np.max(np.abs(gram - np.eye(21))) < 1e-8
    assert abs(gram[0, 0] - 1) < 1e-10
    assert abs(gram[2, 0]) < 1e-10


def test_oscillator_length_scale_normalization():
    x = np.linspace(-40, 40, 40001)
    chi = oscillator_wf(OscillatorState(3, 2.5), x)
    assert np.trapezoid(chi**2, x) == pytest.approx(1.0, abs=1e-10)


def test_oscillator_matches_explicit_hermite_formula():
    from scipy.special import eval_hermite

    y = np.linspace(-5, 5, 41)
    for n in (0, 4, 11):
        ref = eval_hermite(n, y) * np.exp(-y * y / 2) / math.sqrt(2**n * math.factorial(n) * math.sqrt(math.pi))
        assert np.max(np.abs(oscillator_wf(OscillatorState(n), y) - ref)) < 1e-12


def test_oscillator_range_guard():
    OscillatorState(200)
    with pytest.raises(ValueError):
        OscillatorState(201)
    with pytest.raises(ValueError):
        OscillatorState(-1)


@given(st.integers(0, 40), st.floats(-6, 6))
def test_oscillator_parity(n, x):
    s = OscillatorState(n)
    assert oscillator_wf(s, -x) == pytest.approx((-1) ** n * oscillator_wf(s, x), abs=1e-13)


# --- Clebsch-Gordan -----------------------------------------------------------


def test_cg_documented_values():
    assert clebsch_gordan(1, 0, 1, 0, 2, 0) == pytest.approx(math.sqrt(2 / 3), abs=1e-14)
    assert clebsch_gordan(1, 0, 1, 0, 1, 0) == 0.0
    assert clebsch_gordan(2.5, -1.5, 0, 0, 2.5, -1.5) == pytest.approx(1.0, abs=1e-15)


def test_cg_quadrupole_pair_coupling():
    # <2 0 | 1 m, 1 -m>: m = 0 gives sqrt(2/3) and m = +-1 gives 1/sqrt(6)
    assert clebsch_gordan(1, 1, 1, -1, 2, 0) == pytest.approx(1 / math.sqrt(6), abs=1e-14)
    assert clebsch_gordan(1, -1, 1, 1, 2, 0) == pytest.approx(1 / math.sqrt(6), abs=1e-14)
    assert clebsch_gordan(1, 1, 1, -1, 2, 0) == pytest.approx(sympy_cg(1, 1, 1, -1, 2, 0), abs=1e-15)


def test_cg_out_of_domain_is_zero():
    assert clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0  # triangle
    assert clebsch_gordan(1, 1, 1, 0, 2, 0) == 0.0  # projection
    assert clebsch_gordan(1, 2, 1, -2, 2, 0) == 0.0  # |m| > j
    assert clebsch_gordan(0.3, 0, 1, 0, 1, 0) == 0.0  # not a half-integer


def test_cg_dataclass_interface():
    j1 = AngularMomentum.from_values(0.5, 0.5)
    j2 = AngularMomentum.from_values(0.5, -0.5)
    assert cg(j1, j2, AngularMomentum(2, 0)) == pytest.approx(math.sqrt(0.5), abs=1e-15)
    assert cg(j1, j2, AngularMomentum(0, 0)) == pytest.approx(math.sqrt(0.5), abs=1e-15)
    with pytest.raises(ValueError):
        AngularMomentum(2, 1)
    with pytest.raises(ValueError):
        AngularMomentum(1, 3)


half_integers = st.integers(0, 8).map(lambda t: t / 2)


@st.composite
def cg_arguments(draw):
    j1, j2 = draw(half_integers), draw(half_integers)
    twice_lo, twice_hi = int(abs(2 * j1 - 2 * j2)), int(2 * (j1 + j2))
    j = draw(st.sampled_from(range(twice_lo, twice_hi + 1, 2))) / 2
    m1 = draw(st.integers(0, int(2 * j1)).map(lambda k: -j1 + k))
    m2 = draw(st.integers(0, int(2 * j2)).map(lambda k: -j2 + k))
    return j1, m1, j2, m2, j, m1 + m2


@given(cg_arguments())
def test_cg_matches_sympy(args):
    assert clebsch_gordan(*args) == pytest.approx(sympy_cg(*args), abs=1e-12)


@pytest.mark.parametrize("twice_j1,twice_j2", [(a, b) for a in range(0, 13, 3) for b in range(0, 13, 4)])
def test_cg_orthogonality(twice_j1, twice_j2):
    j1, j2 = twice_j1 / 2, twice_j2 / 2
    totals = [t / 2 for t in range(abs(twice_j1 - twice_j2), twice_j1 + twice_j2 + 1, 2)]
    for M2 in range(-(twice_j1 + twice_j2), twice_j1 + twice_j2 + 1, 2):
        M = M2 / 2
        pairs = [(m1, M - m1) for m1 in (k - j1 for k in range(twice_j1 + 1)) if abs(M - m1) <= j2]
        ok = [J for J in totals if abs(M) <= J]
        mat = np.array([[clebsch_gordan(j1, a, j2, b, J, M) for a, b in pairs] for J in ok])
        if mat.size:
            assert np.max(np.abs(mat @ mat.T - np.eye(len(ok)))) < 1e-10


def test_cg_cap():
    with pytest.raises(ValueError):
        clebsch_gordan(60, 0, 1, 0, 60, 0)


# --- Gaunt ------------------------------------------------------------------


def test_gaunt_monopole_of_dipole_pair_against_quadrature():
    tt, pp, ww = sphere_quadrature()
    for m in (-1, 0, 1):
        integrand = np.conj(ylm(0, 0, tt, pp)) * ylm(1, m, tt, pp) * ylm(1, -m, tt, pp)
        numeric = np.sum(ww * integrand)
        assert gaunt(0, 0, 1, m, 1, -m) == pytest.approx(numeric.real, abs=1e-12)
    assert abs(gaunt(0, 0, 1, 1, 1, -1)) == pytest.approx(1 / math.sqrt(4 * math.pi), abs=1e-14)


def test_gaunt_selection_zeros():
    assert gaunt(1, 0, 1, 0, 1, 0) == 0.0  # odd l-sum
    assert gaunt(2, 1, 1, 0, 1, 0) == 0.0  # M != m1 + m2


@given(st.integers(0, 4), st.integers(0, 3), st.integers(0, 3), st.data())
def test_gaunt_against_quadrature_and_symmetric(L, l1, l2, data):
    m1 = data.draw(st.integers(-l1, l1))
    m2 = data.draw(st.integers(-l2, l2))
    M = m1 + m2
    if abs(M) > L:
        assert gaunt(L, M, l1, m1, l2, m2) == 0.0
        return
    tt, pp, ww = sphere_quadrature(20)
    numeric = np.sum(ww * np.conj(ylm(L, M, tt, pp)) * ylm(l1, m1, tt, pp) * ylm(l2, m2, tt, pp))
    value = gaunt(L, M, l1, m1, l2, m2)
    assert value == pytest.approx(numeric.real, abs=1e-12)
    assert value == gaunt(L, M, l2, m2, l1, m1)


# --- Lande ------------------------------------------------------------------


def test_lande_limits():
    assert lande_g(2, 2, 0) == 1.0
    assert lande_g(0.5, 0, 0.5) == 2.0
    assert lande_g(0.5, 1, 0.5) == pytest.approx(2 / 3, abs=1e-15)


def test_lande_errors():
    with pytest.raises(ValueError):
        lande_g(0, 1, 1)
    with pytest.raises(ValueError):
        lande_g(3, 1, 0.5)


# --- spherical harmonics ------------------------------------------------------


def test_y00_constant():
    th = np.linspace(0, np.pi, 7)
    assert np.allclose(ylm(0, 0, th, 2 * th), 1 / math.sqrt(4 * math.pi), atol=1e-15, rtol=0)


@given(st.integers(0, 12), st.data(), st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_ylm_parity_and_scipy(l, data, theta, phi):
    m = data.draw(st.integers(-l, l))
    y = ylm(l, m, theta, phi)
    assert ylm(l, m, math.pi - theta, phi + math.pi) == pytest.approx((-1) ** l * y, abs=1e-12)
    assert y == pytest.approx(complex(sph_harm_y(l, m, theta, phi)), abs=1e-12)


def test_y21_normalized():
    tt, pp, ww = sphere_quadrature()
    assert np.sum(ww * np.abs(ylm(2, 1, tt, pp)) ** 2) == pytest.approx(1.0, abs=1e-9)


def test_ylm_rejects_bad_order():
    with pytest.raises(ValueError):
        ylm(1, 2, 0.1, 0.2)
