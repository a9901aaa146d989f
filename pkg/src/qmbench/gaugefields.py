"""Single-particle problems in uniform fields and Aharonov-Bohm geometries.

Units: hbar = e = m = 1, so the cyclotron frequency equals the field
strength and the magnetic length is ``1/sqrt(B)``. The Landau gauge
``A = (0, B x, 0)`` is used, so ``k_y`` labels the guiding center
``x0 = k_y / (q B)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal

from .specfun import OscillatorState, airy_ai, airy_zeros, oscillator_wf

__all__ = [
    "LandauConfig",
    "RingConfig",
    "EdgeProblem",
    "EdgeSpectrum",
    "EdgeCurrent",
    "GaugeCurrents",
    "landau_energy",
    "landau_wf",
    "landau_current_profile",
    "guiding_centers",
    "edge_spectrum",
    "edge_dispersion",
    "edge_current",
    "soft_wall",
    "richardson",
    "ab_ring_spectrum",
    "ab_sector_spectrum",
    "ab_sector_spectrum_grid",
    "two_slit_shift",
    "gauge_current_check",
    "gauge_current_grid",
    "linear_potential_wf",
    "linear_potential_nodes",
]


@dataclass(frozen=True)
class LandauConfig:
    """Uniform magnetic field along z in a box periodic in y and z.

    Parameters
    ----------
    b_field : float
        Field strength; equals the cyclotron frequency in natural units.
    l_y, l_z : float
        Periodic box lengths.
    charge_sign : int
        +1 or -1.
    """

    b_field: float
    l_y: float = 2 * math.pi
    l_z: float = 1.0
    charge_sign: int = 1

    def __post_init__(self):
        if not self.b_field > 0:
            raise ValueError("b_field must be positive")
        if not (self.l_y > 0 and self.l_z > 0):
            raise ValueError("box lengths must be positive")
        if self.charge_sign not in (1, -1):
            raise ValueError("charge_sign must be +1 or -1")

    @property
    def magnetic_length(self) -> float:
        return 1.0 / math.sqrt(self.b_field)

    @property
    def cyclotron_frequency(self) -> float:
        return self.b_field

    @property
    def x0_spacing(self) -> float:
        """Distance between neighbouring allowed guiding centers."""
        return 2 * math.pi * self.magnetic_length**2 / self.l_y


@dataclass(frozen=True)
class RingConfig:
    """Thin ring of radius ``radius`` threaded by flux ``flux_ratio`` (in flux quanta)."""

    radius: float
    flux_ratio: float = 0.0
    m_range: int = 5

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.m_range < 1:
            raise ValueError("m_range must be >= 1")


@dataclass
class EdgeProblem:
    """Landau problem in the x direction with an added confining potential.

    Parameters
    ----------
    x : ndarray
        Uniform grid; its ends act as hard (Dirichlet) walls.
    potential : ndarray
        ``V(x)`` tabulated on ``x``.
    x0 : float
        Guiding center.
    n_levels : int
        Number of lowest levels to return.
    """

    x: np.ndarray
    potential: np.ndarray
    x0: float = 0.0
    n_levels: int = 3

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.potential = np.asarray(self.potential, dtype=float)
        if self.x.ndim != 1 or self.x.shape != self.potential.shape:
            raise ValueError("x and potential must be 1-D arrays of equal length")
        if self.x.size < 3:
            raise ValueError("grid needs at least 3 points")
        dx = np.diff(self.x)
        if np.any(dx <= 0) or np.ptp(dx) > 1e-9 * dx.mean():
            raise ValueError("grid must be uniform and increasing")
        if not np.all(np.isfinite(self.potential)):
            raise ValueError("potential must be finite")
        if self.n_levels < 1 or self.n_levels > self.x.size:
            raise ValueError("n_levels out of range")

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0])

    @classmethod
    def from_function(cls, func, x, x0=0.0, n_levels=3) -> "EdgeProblem":
        x = np.asarray(x, dtype=float)
        return cls(x, np.asarray(func(x), dtype=float), x0, n_levels)

    def potential_at(self, xq):
        """Linear interpolation of the tabulated potential."""
        return np.interp(xq, self.x, self.potential)

    def with_x0(self, x0: float) -> "EdgeProblem":
        return EdgeProblem(self.x, self.potential, x0, self.n_levels)


@dataclass
class EdgeSpectrum:
    x0: float
    energies: np.ndarray
    states: np.ndarray  # columns normalized so that sum(phi**2) * dx = 1
    x: np.ndarray


@dataclass
class EdgeCurrent:
    x0: float
    level: int
    profile: float  # integral of j_y over x (times l_z)
    spectral: float  # from d(epsilon)/d(x0)


@dataclass
class GaugeCurrents:
    static_convective: float
    static_diamagnetic: float
    timedep_convective: float
    timedep_diamagnetic: float

    @property
    def static_total(self) -> float:
        return self.static_convective + self.static_diamagnetic

    @property
    def timedep_total(self) -> float:
        return self.timedep_convective + self.timedep_diamagnetic


# ---------------------------------------------------------------------------
# Landau levels


def landau_energy(cfg: LandauConfig, n: int, k_z: float = 0.0) -> float:
    """Landau level energy ``omega_c (n + 1/2) + k_z**2 / 2``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return cfg.cyclotron_frequency * (n + 0.5) + 0.5 * k_z * k_z


def landau_wf(cfg: LandauConfig, n: int, x0: float, x):
    """x-dependence of the Landau state, an oscillator function centred on ``x0``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return oscillator_wf(OscillatorState(n, cfg.magnetic_length), np.asarray(x, dtype=float) - x0)


def guiding_centers(cfg: LandauConfig, l_x: float) -> np.ndarray:
    """Allowed guiding centers ``x0 = k_y/(qB)`` lying in ``[0, l_x]``."""
    step = cfg.x0_spacing
    j = np.arange(0, int(math.floor(l_x / step)) + 1)
    return j * step


def landau_current_profile(cfg: LandauConfig, n: int, x0: float, grid, k_z: float = 0.0, phi=None):
    """Current density components ``(j_y, j_z)`` sampled on ``grid``.

    Parameters
    ----------
    cfg : LandauConfig
    n : int
        Level index, used when ``phi`` is not supplied.
    x0 : float
        Guiding center.
    grid : ndarray
        Uniform sample points.
    k_z : float
        Momentum along the field.
    phi : ndarray, optional
        Real wavefunction samples to use instead of the unperturbed state.
        Must be normalized on ``grid``.

    Returns
    -------
    j_y, j_z : ndarray
    """
    grid = np.asarray(grid, dtype=float)
    if phi is None:
        phi = landau_wf(cfg, n, x0, grid)
    phi = np.asarray(phi, dtype=float)
    dx = grid[1] - grid[0]
    norm = np.sum(phi * phi) * dx
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"wavefunction not normalized on grid (norm = {norm:.8g})")
    rho = phi * phi / (cfg.l_y * cfg.l_z)
    # q**2 = 1, so the y-current does not depend on the charge sign
    j_y = cfg.cyclotron_frequency * (x0 - grid) * rho
    j_z = cfg.charge_sign * k_z * rho
    return j_y, j_z


# ---------------------------------------------------------------------------
# Edge states


def soft_wall(x, left: float, right: float, height: float = 10.0, width: float = 0.5):
    """Exponential walls rising beyond ``left`` and ``right``, capped at ``height``."""
    x = np.asarray(x, dtype=float)
    v = np.exp((left - x) / width) + np.exp((x - right) / width)
    return height * np.minimum(v, 1.0)


def _edge_eigs(cfg: LandauConfig, prob: EdgeProblem, x0: float, vectors: bool):
    h = prob.spacing
    if h >= cfg.magnetic_length / 10:
        raise ValueError(
            f"grid spacing {h:.3g} does not resolve the magnetic length {cfg.magnetic_length:.3g}"
        )
    w = cfg.cyclotron_frequency
    diag = 1.0 / h**2 + 0.5 * w * w * (prob.x - x0) ** 2 + prob.potential
    off = np.full(prob.x.size - 1, -0.5 / h**2)
    sel = (0, prob.n_levels - 1)
    if vectors:
        e, v = eigh_tridiagonal(diag, off, select="i", select_range=sel)
        v = v / math.sqrt(h)
        # fix the sign so the largest lobe is positive
        idx = np.argmax(np.abs(v), axis=0)
        v = v * np.sign(v[idx, np.arange(v.shape[1])])
        return e, v
    return eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=sel), None


def edge_spectrum(cfg: LandauConfig, prob: EdgeProblem) -> EdgeSpectrum:
    """Lowest levels of ``p**2/2 + omega_c**2 (x-x0)**2/2 + V(x)`` by finite differences."""
    e, v = _edge_eigs(cfg, prob, prob.x0, vectors=True)
    return EdgeSpectrum(prob.x0, e, v, prob.x)


def edge_dispersion(cfg: LandauConfig, prob: EdgeProblem, x0_values) -> np.ndarray:
    """Energies ``eps_n(x0)`` with shape ``(len(x0_values), n_levels)``."""
    x0_values = np.asarray(x0_values, dtype=float)
    return np.array([_edge_eigs(cfg, prob, x0, vectors=False)[0] for x0 in x0_values])


def edge_current(cfg: LandauConfig, prob: EdgeProblem, level: int = 0, dx0: float = 1e-3) -> EdgeCurrent:
    """Total y-current of an edge state computed in two independent ways.

    ``profile`` integrates the current density of the eigenvector. ``spectral``
    uses ``d eps / d x0 = omega_c L_y I_y`` with a central difference in ``x0``.
    """
    if not 0 <= level < prob.n_levels:
        raise ValueError("level out of range")
    spec = edge_spectrum(cfg, prob)
    phi = spec.states[:, level]
    j_y, _ = landau_current_profile(cfg, level, prob.x0, prob.x, phi=phi)
    profile = float(np.sum(j_y) * prob.spacing * cfg.l_z)
    ep = _edge_eigs(cfg, prob, prob.x0 + dx0, vectors=False)[0][level]
    em = _edge_eigs(cfg, prob, prob.x0 - dx0, vectors=False)[0][level]
    slope = (ep - em) / (2 * dx0)
    spectral = slope / (cfg.cyclotron_frequency * cfg.l_y)
    return EdgeCurrent(prob.x0, level, profile, float(spectral))


def richardson(coarse: float, fine: float, ratio: float = 2.0, order: int = 2) -> float:
    """Richardson extrapolation of two estimates whose error scales as ``h**order``."""
    f = ratio**order
    return (f * fine - coarse) / (f - 1)


# ---------------------------------------------------------------------------
# Aharonov-Bohm


def ab_ring_spectrum(cfg: RingConfig) -> list[tuple[int, float]]:
    """Ring levels ``(M, E_M)`` with ``E_M = (M + flux)**2 / (2 a**2)``.

    Sorted by energy, ties broken by ``M``.
    """
    a2 = cfg.radius**2
    rows = [(m, (m + cfg.flux_ratio) ** 2 / (2 * a2)) for m in range(-cfg.m_range, cfg.m_range + 1)]
    rows.sort(key=lambda r: (r[1], r[0]))
    return rows


def ab_sector_spectrum(cfg: RingConfig, opening: float, n_levels: int = 5) -> np.ndarray:
    """Levels ``pi**2 n**2 / (2 a**2 opening**2)`` of a ring segment of angular width ``opening``.

    The enclosed flux can be removed by a gauge transformation on a
    simply connected segment, so it does not enter.
    """
    if not 0 < opening < 2 * math.pi:
        raise ValueError("opening must lie in (0, 2 pi)")
    n = np.arange(1, n_levels + 1)
    return math.pi**2 * n**2 / (2 * cfg.radius**2 * opening**2)


def ab_sector_spectrum_grid(cfg: RingConfig, opening: float, n_levels: int = 5, points: int = 400):
    """Sector levels from a finite-difference Hamiltonian with the flux kept in the hopping phases."""
    if not 0 < opening < 2 * math.pi:
        raise ValueError("opening must lie in (0, 2 pi)")
    h = opening / (points + 1)
    t = 1.0 / (2 * cfg.radius**2 * h**2)
    # (−i d/dphi + f)^2 discretized with a Peierls phase exp(-i f h) on each bond
    ham = np.zeros((points, points), dtype=complex)
    idx = np.arange(points)
    ham[idx, idx] = 2 * t
    hop = -t * np.exp(-1j * cfg.flux_ratio * h)
    ham[idx[:-1], idx[1:]] = hop
    ham[idx[1:], idx[:-1]] = np.conj(hop)
    return eigh(ham, eigvals_only=True, subset_by_index=(0, n_levels - 1))


def two_slit_shift(b: float, k: float, d: float, flux_ratio: float) -> float:
    """Shift of the two-slit fringe pattern, ``(2 pi b / (k d)) * flux_ratio``."""
    if b <= 0 or k <= 0 or d <= 0:
        raise ValueError("geometry parameters must be positive")
    return 2 * math.pi * b / (k * d) * flux_ratio


# ---------------------------------------------------------------------------
# Uniform electric field


def gauge_current_check(e_field: float, k: float, t: float, charge: float = 1.0, mass: float = 1.0) -> GaugeCurrents:
    """Plane-wave currents in the static (scalar potential) and time-dependent
    (vector potential ``A = -E t``) gauges.
    """
    q, m = charge, mass
    return GaugeCurrents(
        static_convective=q * (k + q * e_field * t) / m,
        static_diamagnetic=0.0,
        timedep_convective=q * k / m,
        timedep_diamagnetic=q * q * e_field * t / m,
    )


def _d4(f, h):
    # fourth-order central first derivative on the interior
    return (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)


def gauge_current_grid(e_field, k, t, x, charge=1.0, mass=1.0):
    """Total current of the sampled plane wave in each gauge.

    Returns the static-gauge and time-dependent-gauge current densities on the
    interior of ``x`` (two points trimmed at each end).
    """
    q, m = charge, mass
    x = np.asarray(x, dtype=float)
    h = x[1] - x[0]
    psi_s = np.exp(1j * (k + q * e_field * t) * x)
    psi_t = np.exp(1j * k * x)
    a_t = -e_field * t
    j_s = q / m * np.imag(np.conj(psi_s[2:-2]) * _d4(psi_s, h))
    j_t = q / m * np.imag(np.conj(psi_t[2:-2]) * _d4(psi_t, h)) - q * q / m * a_t * np.abs(psi_t[2:-2]) ** 2
    return j_s, j_t


def linear_potential_wf(eps: float, f_slope: float, x, mass: float = 1.0):
    """Energy-normalized eigenfunction for the potential ``-F x``.

    ``phi = (alpha / sqrt(F)) Ai(-alpha (x + eps/F))`` with ``alpha = (2 m F)**(1/3)``,
    normalized to ``delta(eps - eps')``.
    """
    if not f_slope > 0:
        raise ValueError("f_slope must be positive")
    alpha = (2 * mass * f_slope) ** (1.0 / 3.0)
    arg = -alpha * (np.asarray(x, dtype=float) + eps / f_slope)
    return alpha / math.sqrt(f_slope) * airy_ai(arg)


def linear_potential_nodes(eps: float, f_slope: float, count: int, mass: float = 1.0) -> np.ndarray:
    """Positions of the first ``count`` nodes right of the turning point."""
    alpha = (2 * mass * f_slope) ** (1.0 / 3.0)
    return -airy_zeros(count) / alpha - eps / f_slope
