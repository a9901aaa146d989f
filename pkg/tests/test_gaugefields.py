import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import ai_zeros

from qmbench.gaugefields import (
    EdgeProblem,
    LandauConfig,
    RingConfig,
    ab_ring_spectrum,
    ab_sector_spectrum,
    ab_sector_spectrum_grid,
    edge_current,
    edge_dispersion,
    edge_spectrum,
    gauge_current_check,
    gauge_current_grid,
    guiding_centers,
    landau_current_profile,
    landau_energy,
    landau_wf,
    linear_potential_nodes,
    linear_potential_wf,
    richardson,
    soft_wall,
    two_slit_shift,
)


def free_problem(b, step, half_width=12.0, levels=4, offset=0.0):
    ell = 1 / math.sqrt(b)
    x = np.arange(-half_width * ell, half_width * ell + 0.5 * step * ell, step * ell)
    return EdgeProblem(x, np.full_like(x, offset), 0.0, levels)


def strip(b=1.0, wall=6.0, x0=0.0, levels=3, step=0.05):
    half = wall + 8 / math.sqrt(b)
    x = np.arange(-half, half + 0.5 * step, step)
    return EdgeProblem(x, soft_wall(x, -wall, wall), x0, levels)


# --- Landau levels --------------------------------------------------------------


def test_landau_energy_values():
    cfg = LandauConfig(1.0)
    assert landau_energy(cfg, 0) == 0.5
    assert landau_energy(cfg, 2) == 2.5
    assert landau_energy(LandauConfig(2.0), 2) == 2 * landau_energy(cfg, 2)
    assert landau_energy(cfg, 1, k_z=2.0) == 3.5
    with pytest.raises(ValueError):
        landau_energy(cfg, -1)


def test_landau_config_validation():
    with pytest.raises(ValueError):
        LandauConfig(0.0)
    with pytest.raises(ValueError):
        LandauConfig(1.0, charge_sign=2)
    cfg = LandauConfig(4.0, l_y=3.0)
    assert cfg.magnetic_length == 0.5
    assert cfg.x0_spacing == pytest.approx(2 * math.pi * 0.25 / 3.0)


def test_landau_wf_peak_and_width():
    cfg = LandauConfig(2.0)
    x0 = 0.7
    x = np.linspace(x0 - 15, x0 + 15, 30001)
    phi0 = landau_wf(cfg, 0, x0, x)
    assert x[np.argmax(phi0)] == pytest.approx(x0, abs=1e-3)
    for n in range(5):
        rho = landau_wf(cfg, n, x0, x) ** 2
        rms = math.sqrt(np.trapezoid((x - x0) ** 2 * rho, x))
        assert rms == pytest.approx(cfg.magnetic_length * math.sqrt(n + 0.5), abs=1e-8)


@given(st.integers(0, 8), st.floats(0.2, 5.0), st.floats(-3, 3), st.floats(0, 4))
def test_landau_wf_parity_about_guiding_center(n, b, x0, u):
    cfg = LandauConfig(b)
    left = landau_wf(cfg, n, x0, x0 - u)
    right = landau_wf(cfg, n, x0, x0 + u)
    assert left == pytest.approx((-1) ** n * right, abs=1e-12)


def test_current_profile_unperturbed():
    cfg = LandauConfig(1.5, l_y=3.0, l_z=2.0)
    x0 = 0.4
    grid = np.linspace(x0 - 12, x0 + 12, 4801)
    dx = grid[1] - grid[0]
    for n in range(4):
        j_y, j_z = landau_current_profile(cfg, n, x0, grid, k_z=0.8)
        mid = np.argmin(np.abs(grid - x0))
        assert j_y[mid] == pytest.approx(0.0, abs=1e-15)
        assert abs(np.sum(j_y) * dx) < 1e-9
        # antisymmetric about x0
        assert np.max(np.abs(j_y + j_y[::-1])) < 1e-14
        assert np.sum(j_z) * dx * cfg.l_y * cfg.l_z == pytest.approx(0.8, abs=1e-9)
    neg = LandauConfig(1.5, l_y=3.0, l_z=2.0, charge_sign=-1)
    j_y_neg, j_z_neg = landau_current_profile(neg, 1, x0, grid, k_z=0.8)
    j_y_pos, j_z_pos = landau_current_profile(cfg, 1, x0, grid, k_z=0.8)
    assert np.array_equal(j_y_neg, j_y_pos)
    assert np.array_equal(j_z_neg, -j_z_pos)


def test_current_profile_rejects_unnormalized():
    cfg = LandauConfig(1.0)
    grid = np.linspace(-8, 8, 801)
    with pytest.raises(ValueError):
        landau_current_profile(cfg, 0, 0.0, grid, phi=2 * landau_wf(cfg, 0, 0.0, grid))


def test_guiding_center_count_is_flux_in_quanta():
    for b, l_x, l_y in [(1.0, 20.0, 2 * math.pi), (2.5, 7.3, 4.1), (0.3, 33.0, 9.0)]:
        cfg = LandauConfig(b, l_y=l_y)
        count = guiding_centers(cfg, l_x).size
        assert abs(count - b * l_x * l_y / (2 * math.pi)) <= 1


# --- edge problems --------------------------------------------------------------


def test_free_grid_solve_richardson():
    b = 1.3
    cfg = LandauConfig(b)
    coarse = edge_spectrum(cfg, free_problem(b, 0.02)).energies
    fine = edge_spectrum(cfg, free_problem(b, 0.01)).energies
    exact = np.array([landau_energy(cfg, n) for n in range(4)])
    # O(h^2): halving h cuts the error by four
    ratio = (coarse - exact) / (fine - exact)
    assert np.all(np.abs(ratio - 4) < 0.01)
    extrap = np.array([richardson(c, f) for c, f in zip(coarse, fine)])
    assert np.max(np.abs(extrap - exact)) < 1e-6


def test_constant_potential_shifts_spectrum():
    cfg = LandauConfig(1.0)
    base = edge_spectrum(cfg, free_problem(1.0, 0.05)).energies
    shifted = edge_spectrum(cfg, free_problem(1.0, 0.05, offset=0.37)).energies
    assert np.max(np.abs(shifted - base - 0.37)) < 1e-12


def test_edge_grid_rules():
    cfg = LandauConfig(100.0)  # magnetic length 0.1
    with pytest.raises(ValueError):
        edge_spectrum(cfg, free_problem(1.0, 0.05))
    with pytest.raises(ValueError):
        EdgeProblem(np.array([0.0, 0.1, 0.3]), np.zeros(3))


def test_feynman_hellmann_slope_matches_profile_moment():
    cfg = LandauConfig(1.0)
    prob = strip(x0=5.5, step=0.02)
    spec = edge_spectrum(cfg, prob)
    phi = spec.states[:, 0]
    dx = prob.spacing
    moment = cfg.cyclotron_frequency**2 * np.sum((prob.x0 - prob.x) * phi**2) * dx
    slope = np.gradient(edge_dispersion(cfg, prob, [5.5 - 1e-3, 5.5, 5.5 + 1e-3])[:, 0], 1e-3)[1]
    assert slope == pytest.approx(moment, abs=1e-4)
    # energy grows as the orbit is pressed into the right wall
    assert slope > 0
    assert edge_dispersion(cfg, prob, [6.5])[0, 0] > edge_dispersion(cfg, prob, [5.5])[0, 0]


def test_edge_currents_on_opposite_walls_and_bulk():
    cfg = LandauConfig(1.0)
    right = edge_current(cfg, strip(x0=6.0))
    left = edge_current(cfg, strip(x0=-6.0))
    bulk = edge_current(cfg, strip(x0=0.0))
    for cur in (right, left):
        assert cur.profile == pytest.approx(cur.spectral, rel=0.01)
    assert right.profile * left.profile < 0
    assert right.profile == pytest.approx(-left.profile, rel=1e-6)
    assert abs(bulk.profile) < 1e-6 * abs(right.profile)


def test_edge_levels_follow_local_potential_when_smooth():
    # slowly varying wall: eps_n(x0) ~ omega_c (n + 1/2) + V(x0)
    cfg = LandauConfig(4.0)
    x = np.arange(-10, 10.0005, 0.01)
    pot = 0.02 * x**2 / 2
    prob = EdgeProblem(x, pot, 0.0, 2)
    eps = edge_dispersion(cfg, prob, [-2.0, 0.0, 3.0])
    for row, x0 in zip(eps, [-2.0, 0.0, 3.0]):
        guess = np.array([4.0 * (n + 0.5) for n in range(2)]) + 0.01 * x0**2
        assert np.max(np.abs(row - guess)) < 0.02


# --- Aharonov-Bohm ----------------------------------------------------------------


def test_ring_zero_flux():
    rows = ab_ring_spectrum(RingConfig(2.0, 0.0, 4))
    for m, e in rows:
        assert e == m * m / 8.0
    assert [m for m, _ in rows][:3] == [0, -1, 1]


@given(st.floats(-3, 3), st.integers(-3, 3), st.floats(0.3, 3.0))
def test_ring_flux_periodicity(flux, shift, radius):
    window = 8
    a = sorted(e for _, e in ab_ring_spectrum(RingConfig(radius, flux, window + 4)))[:window]
    b = sorted(e for _, e in ab_ring_spectrum(RingConfig(radius, flux + shift, window + 4)))[:window]
    assert np.max(np.abs(np.subtract(a, b))) <= 1e-12 * max(1.0, max(a))


def test_ring_half_flux_degeneracy():
    energies = dict(ab_ring_spectrum(RingConfig(1.0, 0.5, 6)))
    for m in range(-6, 6):
        if -6 <= -m - 1 <= 6:
            assert energies[m] == energies[-m - 1]


def test_sector_values_and_flux_independence():
    e1 = ab_sector_spectrum(RingConfig(1.0, 0.0), math.pi, 4)
    e2 = ab_sector_spectrum(RingConfig(1.0, 0.77), math.pi, 4)
    assert np.array_equal(e1, e2)
    assert e1[0] == pytest.approx(0.5, abs=1e-15)
    assert np.allclose(e1 / e1[0], [1, 4, 9, 16], rtol=1e-14, atol=0)
    with pytest.raises(ValueError):
        ab_sector_spectrum(RingConfig(1.0), 2 * math.pi)


def test_sector_grid_flux_enters_only_as_a_gauge():
    g0 = ab_sector_spectrum_grid(RingConfig(1.3, 0.0), 2.0, 4, 300)
    g1 = ab_sector_spectrum_grid(RingConfig(1.3, 0.41), 2.0, 4, 300)
    assert np.max(np.abs(g1 - g0)) < 1e-10 * g0[-1]
    exact = ab_sector_spectrum(RingConfig(1.3), 2.0, 4)
    assert np.max(np.abs(g0 - exact) / exact) < 1e-3


def test_two_slit_shift():
    assert two_slit_shift(2.0, 3.0, 0.5, 0.0) == 0.0
    assert two_slit_shift(2.0, 3.0, 0.5, 1.0) == pytest.approx(2 * math.pi * 2.0 / (3.0 * 0.5))
    assert two_slit_shift(2.0, 3.0, 1.0, 0.3) == pytest.approx(0.5 * two_slit_shift(2.0, 3.0, 0.5, 0.3))
    with pytest.raises(ValueError):
        two_slit_shift(-1.0, 1.0, 1.0, 0.1)


# --- uniform electric field -------------------------------------------------------


def test_gauge_currents_simple_cases():
    c = gauge_current_check(1.3, 0.4, 0.0)
    assert c.static_convective == c.timedep_convective
    assert c.static_diamagnetic == c.timedep_diamagnetic == 0.0
    c = gauge_current_check(0.0, 0.4, 5.0)
    assert c.static_diamagnetic == c.timedep_diamagnetic == 0.0


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(0, 20), st.sampled_from([1.0, -1.0]), st.floats(0.5, 3))
def test_gauge_currents_agree(e, k, t, q, m):
    c = gauge_current_check(e, k, t, q, m)
    assert abs(c.static_total - c.timedep_total) <= 1e-14 * max(1.0, abs(c.static_total))


def test_gauge_currents_on_a_grid():
    x = np.linspace(0, 10, 4001)
    for e, k, t in [(0.3, 1.0, 2.0), (-1.1, 0.2, 0.7)]:
        j_s, j_t = gauge_current_grid(e, k, t, x)
        closed = gauge_current_check(e, k, t).static_total
        assert np.max(np.abs(j_s - j_t)) < 1e-9
        assert np.max(np.abs(j_s - closed)) < 1e-9


# --- linear potential ---------------------------------------------------------------


def test_linear_potential_turning_point():
    eps, f = 0.8, 2.0
    alpha = (2 * f) ** (1 / 3)
    assert linear_potential_wf(eps, f, -eps / f) == pytest.approx(alpha / math.sqrt(f) * 0.3550280538878172, abs=1e-14)


def test_linear_potential_forbidden_region_asymptotics():
    eps, f, m = 0.5, 1.5, 1.0
    for x in (-eps / f - 6.0, -eps / f - 10.0):
        p0 = math.sqrt(2 * m * f * abs(x + eps / f))
        wkb = 0.5 * math.sqrt(2 * m / (math.pi * p0)) * math.exp(-(p0**3) / (3 * f * m))
        assert linear_potential_wf(eps, f, x) == pytest.approx(wkb, rel=0.05)


def test_linear_potential_nodes_are_airy_zeros():
    eps, f = 0.3, 0.7
    nodes = linear_potential_nodes(eps, f, 6)
    alpha = (2 * f) ** (1 / 3)
    assert np.allclose(nodes, -ai_zeros(6)[0] / alpha - eps / f, atol=1e-10, rtol=0)
    assert np.max(np.abs(linear_potential_wf(eps, f, nodes))) < 1e-10
