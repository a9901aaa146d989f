import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar
from scipy.stats import poisson

from qmbench.fieldstates import (
    CoherentState,
    NumberState,
    ThermalMode,
    _ladder,
    alpha_from_phase_space,
    classical_trajectory,
    coherent_amplitudes,
    coherent_evolve,
    field_moments,
    overlap,
    overlap_series,
    phase_space_means,
    phase_space_point,
    planck_density,
    state_vector,
    thermal_occupation,
    thermal_weights,
    truncation_for,
    uncertainties,
    wien_peak,
)

amplitudes = st.complex_numbers(max_magnitude=6.0, allow_nan=False, allow_infinity=False)
frequencies = st.floats(0.2, 5.0)


# --- coherent amplitudes ----------------------------------------------------------


def test_vacuum_amplitudes():
    c = coherent_amplitudes(CoherentState(0.0))
    assert c[0] == 1.0
    assert np.all(c[1:] == 0.0)


@given(amplitudes)
def test_normalization_and_poisson_weights(alpha):
    c = coherent_amplitudes(CoherentState(alpha))
    w = np.abs(c) ** 2
    assert 1 - 1e-10 <= math.fsum(w) <= 1 + 1e-12
    n = np.arange(c.size)
    assert np.allclose(w, poisson.pmf(n, abs(alpha) ** 2), rtol=1e-10, atol=1e-300)
    assert math.fsum(n * w) == pytest.approx(abs(alpha) ** 2, abs=1e-10)


def test_phase_convention_c0_real_positive():
    c = coherent_amplitudes(CoherentState(2.0 - 1.5j))
    assert c[0].imag == 0.0 and c[0].real > 0


def test_annihilation_eigenvalue():
    alpha = 1.3 + 0.4j
    psi = state_vector(CoherentState(alpha))
    a, _ = _ladder(psi.size - 1)
    residual = a @ psi - alpha * psi
    # the top component is lost to truncation; its size bounds the residual
    assert np.linalg.norm(residual) < 1e-10


def test_insufficient_truncation_raises():
    with pytest.raises(ValueError):
        coherent_amplitudes(CoherentState(4.0, n_max=10))
    assert truncation_for(3.0) == 53


# --- evolution -------------------------------------------------------------------


def test_full_period_returns_alpha():
    s = CoherentState(1.1 - 0.7j, omega=2.5)
    back = coherent_evolve(s, 2 * math.pi / s.omega)
    assert abs(back.alpha - s.alpha) < 1e-14


def test_quarter_period_rotates_phase_space():
    omega = 1.7
    s = CoherentState(0.8 + 0.3j, omega=omega)
    q0, p0 = phase_space_point(s)
    q1, p1 = phase_space_point(coherent_evolve(s, math.pi / (2 * omega)))
    # scaled coordinates (sqrt(omega) q, p/sqrt(omega)) rotate clockwise by 90 degrees
    assert (math.sqrt(omega) * q1, p1 / math.sqrt(omega)) == pytest.approx(
        (p0 / math.sqrt(omega), -math.sqrt(omega) * q0), abs=1e-14
    )


@given(amplitudes, frequencies, st.floats(-20, 20))
def test_evolution_follows_classical_oscillator(alpha, omega, t):
    s = CoherentState(alpha, omega)
    q0, p0 = phase_space_point(s)
    qt, pt = phase_space_point(coherent_evolve(s, t))
    qc, pc = classical_trajectory(q0, p0, omega, t)
    scale = max(1.0, abs(q0), abs(p0)) * max(omega, 1 / omega)
    assert abs(qt - qc) < 1e-12 * scale and abs(pt - pc) < 1e-12 * scale
    assert abs(coherent_evolve(s, t).alpha) == pytest.approx(abs(alpha), rel=1e-14, abs=1e-15)


@given(amplitudes, frequencies)
def test_alpha_roundtrip_through_phase_space(alpha, omega):
    q0, p0 = phase_space_point(CoherentState(alpha, omega))
    assert abs(alpha_from_phase_space(q0, p0, omega) - alpha) < 1e-12 * max(1.0, abs(alpha))


def test_fock_space_means_match_phase_space_point():
    s = CoherentState(1.2 - 0.9j, omega=0.7)
    assert phase_space_means(s) == pytest.approx(phase_space_point(s), abs=1e-10)


# --- uncertainties ---------------------------------------------------------------


@given(st.complex_numbers(max_magnitude=4.0, allow_nan=False, allow_infinity=False), frequencies)
def test_coherent_minimum_uncertainty(alpha, omega):
    dq, dp, prod = uncertainties(CoherentState(alpha, omega))
    assert dq == pytest.approx(math.sqrt(1 / (2 * omega)), rel=1e-9)
    assert dp == pytest.approx(math.sqrt(omega / 2), rel=1e-9)
    assert prod == pytest.approx(0.5, abs=1e-9)


@given(st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False), st.floats(0, 30))
def test_evolution_keeps_minimum_uncertainty(alpha, t):
    assert uncertainties(coherent_evolve(CoherentState(alpha, 1.3), t))[2] == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("n", [0, 1, 3, 7])
def test_number_state_uncertainty(n):
    # <N|q^2|N> = (2N+1)/(2 omega), <N|p^2|N> = (2N+1) omega / 2 by hand
    dq, dp, prod = uncertainties(NumberState(n, 2.0))
    assert dq == pytest.approx(math.sqrt((2 * n + 1) / 4.0), rel=1e-14)
    assert dp == pytest.approx(math.sqrt(2 * n + 1), rel=1e-14)
    assert prod == pytest.approx((2 * n + 1) / 2, rel=1e-14)


def test_state_errors():
    with pytest.raises(ValueError):
        NumberState(-1)
    with pytest.raises(ValueError):
        CoherentState(1.0, omega=0.0)
    with pytest.raises(TypeError):
        state_vector(ThermalMode(1.0, 1.0))


# --- overlaps --------------------------------------------------------------------


def test_overlap_examples():
    assert overlap(0.4 + 1j, 0.4 + 1j) == pytest.approx(1.0, abs=1e-15)
    assert abs(overlap(0, 1)) ** 2 == pytest.approx(math.exp(-1), rel=1e-15)


@given(amplitudes, amplitudes)
def test_overlap_modulus_and_series(alpha, beta):
    closed = overlap(alpha, beta)
    assert abs(closed) ** 2 == pytest.approx(math.exp(-abs(alpha - beta) ** 2), rel=1e-12, abs=1e-300)
    assert abs(overlap_series(alpha, beta) - closed) < 1e-10


def test_overlap_phase():
    alpha, beta = 0.5 + 0.2j, -0.3 + 0.9j
    expected = cmath.exp(1j * (alpha.conjugate() * beta).imag)
    assert overlap(alpha, beta) / abs(overlap(alpha, beta)) == pytest.approx(expected, abs=1e-15)


# --- field moments ---------------------------------------------------------------


def test_vacuum_field_moments():
    mean, delta = field_moments(NumberState(0, 2.0), k=1.3, r=0.2, t=0.5)
    assert mean == 0.0
    assert delta == pytest.approx(math.sqrt(2.0 / 2), rel=1e-14)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_number_state_field_fluctuation(n):
    base = field_moments(NumberState(0))[1]
    mean, delta = field_moments(NumberState(n), r=0.7)
    assert mean == 0.0
    assert delta == pytest.approx(base * math.sqrt(2 * n + 1), rel=1e-14)


def test_coherent_fluctuation_independent_of_amplitude():
    d10 = field_moments(CoherentState(10.0), r=0.3, t=0.1)[1]
    d1 = field_moments(CoherentState(1.0), r=0.3, t=0.1)[1]
    assert abs(d10 - d1) < 1e-12
    assert d1 == pytest.approx(field_moments(NumberState(0))[1], abs=1e-12)


def test_coherent_mean_field_is_classical_wave():
    alpha = 1.7 * cmath.exp(0.6j)
    omega, k, r = 1.4, 2.0, 0.35
    e0 = math.sqrt(omega / 2)
    t = np.linspace(0, 2 * math.pi / omega, 401)
    means = np.array([field_moments(CoherentState(alpha, omega), k, r, ti)[0] for ti in t])
    wave = 2 * abs(alpha) * e0 * np.sin(omega * t - k * r - cmath.phase(alpha))
    assert np.max(np.abs(means - wave)) < 1e-10
    assert means.max() == pytest.approx(2 * abs(alpha) * e0, rel=1e-4)


# --- thermal ---------------------------------------------------------------------


def test_thermal_occupation_examples():
    assert thermal_occupation(ThermalMode(math.log(2), 1.0)) == pytest.approx(1.0, rel=1e-15)
    assert thermal_occupation(ThermalMode(1.0, 1e-3)) == 0.0
    assert thermal_occupation(ThermalMode(1.0, 0.05)) < 1e-8
    rj = thermal_occupation(ThermalMode(0.01, 1.0))
    assert rj == pytest.approx(1 / 0.01, rel=0.01)
    with pytest.raises(ValueError):
        ThermalMode(1.0, 0.0)


@given(st.floats(0.05, 20), st.floats(0.05, 20))
def test_thermal_weights_normalize_and_give_mean(omega, temperature):
    mode = ThermalMode(omega, temperature)
    x = omega / temperature
    n_max = int(math.ceil(40 / x)) + 10
    w = thermal_weights(mode, n_max)
    assert math.fsum(w) == pytest.approx(1.0, abs=1e-12)
    assert math.fsum(np.arange(n_max + 1) * w) == pytest.approx(thermal_occupation(mode), rel=1e-9, abs=1e-15)


def test_planck_density_shape():
    T = 0.8
    nu = np.linspace(0.01, 2.0, 50)
    u = planck_density(nu, T)
    x = 2 * math.pi * nu / T
    assert np.allclose(u, 8 * math.pi * 2 * math.pi * nu**3 / np.expm1(x), rtol=1e-14)
    assert planck_density(0.0, T) == 0.0
    with pytest.raises(ValueError):
        planck_density(1.0, 0.0)


def test_wien_peak_against_direct_maximisation():
    res = minimize_scalar(lambda x: -(x**3) / math.expm1(x), bounds=(1, 5), method="bounded", options={"xatol": 1e-10})
    assert wien_peak() == pytest.approx(res.x, abs=1e-6)
    assert wien_peak() == pytest.approx(2.821, abs=5e-4)
    # peak of the Planck curve sits at h nu / T = x*
    T = 1.3
    nu = np.linspace(0.05, 1.5, 20001)
    nu_peak = nu[np.argmax(planck_density(nu, T))]
    assert 2 * math.pi * nu_peak / T == pytest.approx(wien_peak(), abs=1e-3)
