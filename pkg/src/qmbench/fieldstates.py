"""Number, coherent and thermal states of a single field mode.

Units: hbar = 1. Mode coordinates are ``q = (a + a^dagger)/sqrt(2 omega)``
and ``p = i sqrt(omega/2) (a^dagger - a)``. The single-mode field operator
``E(r) = i e0 (a exp(ikr) - a^dagger exp(-ikr))`` uses the vacuum amplitude
``e0 = sqrt(omega/2)`` (unit mode volume and vacuum permittivity).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .fockspace import enumerate_basis, ladder_matrix

__all__ = [
    "CoherentState",
    "NumberState",
    "ThermalMode",
    "truncation_for",
    "coherent_amplitudes",
    "state_vector",
    "coherent_evolve",
    "phase_space_point",
    "alpha_from_phase_space",
    "classical_trajectory",
    "uncertainties",
    "phase_space_means",
    "overlap",
    "overlap_series",
    "field_moments",
    "thermal_occupation",
    "thermal_weights",
    "planck_density",
    "wien_peak",
]

NORM_TOLERANCE = 1e-10


def truncation_for(alpha: complex) -> int:
    """Default Fock cutoff ``ceil(|alpha|**2 + 8 |alpha| + 20)``."""
    a = abs(alpha)
    return int(math.ceil(a * a + 8 * a + 20))


@dataclass(frozen=True)
class CoherentState:
    """Eigenstate of ``a`` with eigenvalue ``alpha``, truncated at ``n_max`` quanta."""

    alpha: complex
    omega: float = 1.0
    n_max: int | None = None

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.n_max is None:
            object.__setattr__(self, "n_max", truncation_for(self.alpha))
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")


@dataclass(frozen=True)
class NumberState:
    """Fock state with ``n`` quanta."""

    n: int
    omega: float = 1.0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not self.omega > 0:
            raise ValueError("omega must be positive")

    @property
    def n_max(self) -> int:
        return self.n + 2


@dataclass(frozen=True)
class ThermalMode:
    """Mode of frequency ``omega`` in equilibrium at ``temperature`` (k_B = 1)."""

    omega: float
    temperature: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if not self.temperature > 0:
            raise ValueError("temperature must be positive")

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature


# ---------------------------------------------------------------------------
# coherent states


def coherent_amplitudes(state: CoherentState) -> np.ndarray:
    """Fock amplitudes ``c_n = exp(-|alpha|**2/2) alpha**n / sqrt(n!)`` for ``n <= n_max``.

    Raises
    ------
    ValueError
        If the retained weight falls short of ``1 - 1e-10``.
    """
    a = complex(state.alpha)
    n = np.arange(state.n_max + 1)
    if a == 0:
        c = np.zeros(n.size, dtype=complex)
        c[0] = 1.0
        return c
    # log-space keeps large |alpha| from underflowing c_0
    log_mod = -0.5 * abs(a) ** 2 + n * math.log(abs(a)) - 0.5 * np.array([math.lgamma(k + 1) for k in n])
    c = np.exp(log_mod) * np.exp(1j * n * np.angle(a))
    weight = math.fsum(np.abs(c) ** 2)
    if weight < 1 - NORM_TOLERANCE:
        raise ValueError(f"truncation n_max={state.n_max} keeps only {weight:.12f} of the norm")
    return c


def state_vector(state, n_max: int | None = None) -> np.ndarray:
    """Amplitude vector of a number or coherent state on ``0..n_max``."""
    if isinstance(state, CoherentState):
        c = coherent_amplitudes(state)
        if n_max is not None:
            c = np.concatenate([c, np.zeros(max(0, n_max + 1 - c.size))])[: n_max + 1]
        return c
    if isinstance(state, NumberState):
        size = (state.n_max if n_max is None else n_max) + 1
        if state.n >= size:
            raise ValueError("n_max below the number state")
        v = np.zeros(size, dtype=complex)
        v[state.n] = 1.0
        return v
    raise TypeError("expected CoherentState or NumberState")


def coherent_evolve(state: CoherentState, t: float) -> CoherentState:
    """Free evolution: ``alpha -> alpha exp(-i omega t)``."""
    return CoherentState(complex(state.alpha) * np.exp(-1j * state.omega * t), state.omega, state.n_max)


def phase_space_point(state: CoherentState):
    """Classical coordinates ``(q0, p0)`` carried by ``alpha``."""
    a = complex(state.alpha)
    return math.sqrt(2.0 / state.omega) * a.real, math.sqrt(2.0 * state.omega) * a.imag


def alpha_from_phase_space(q0: float, p0: float, omega: float) -> complex:
    """``alpha = sqrt(omega/2) q0 + i p0 / sqrt(2 omega)``."""
    return complex(math.sqrt(omega / 2.0) * q0, p0 / math.sqrt(2.0 * omega))


def classical_trajectory(q0: float, p0: float, omega: float, t):
    """Harmonic-oscillator solution with initial data ``(q0, p0)``."""
    t = np.asarray(t, dtype=float)
    c, s = np.cos(omega * t), np.sin(omega * t)
    return q0 * c + p0 / omega * s, p0 * c - omega * q0 * s


def _ladder(n_max: int):
    basis = enumerate_basis("boson", 1, max_particles=n_max, cap=n_max)
    a = ladder_matrix(basis, 0, "annihilate").matrix
    return a, a.conj().T


def uncertainties(state):
    """Standard deviations ``(dq, dp, dq*dp)`` from Fock-space moments.

    Central moments are evaluated as norms of ``(q - <q>) psi`` so that a large
    displacement does not cost precision.
    """
    psi = state_vector(state)
    n_max = psi.size - 1
    a, ad = _ladder(n_max)
    w = state.omega
    q = (a + ad) / math.sqrt(2 * w)
    p = 1j * math.sqrt(w / 2) * (ad - a)
    out = []
    for op in (q, p):
        v = op @ psi
        mean = np.vdot(psi, v).real
        out.append(math.sqrt(np.vdot(v - mean * psi, v - mean * psi).real))
    return out[0], out[1], out[0] * out[1]


def phase_space_means(state):
    """Expectation values ``(<q>, <p>)`` evaluated in the truncated Fock space."""
    psi = state_vector(state)
    a, ad = _ladder(psi.size - 1)
    w = state.omega
    q = (a + ad) / math.sqrt(2 * w)
    p = 1j * math.sqrt(w / 2) * (ad - a)
    return float(np.vdot(psi, q @ psi).real), float(np.vdot(psi, p @ psi).real)


def overlap(alpha: complex, beta: complex) -> complex:
    """``<alpha|beta> = exp(-|alpha|**2/2 - |beta|**2/2 + conj(alpha) beta)``."""
    alpha, beta = complex(alpha), complex(beta)
    return np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * abs(beta) ** 2 + alpha.conjugate() * beta)


def overlap_series(alpha: complex, beta: complex, n_max: int | None = None) -> complex:
    """Overlap from truncated Fock expansions of both states."""
    if n_max is None:
        n_max = max(truncation_for(alpha), truncation_for(beta))
    ca = coherent_amplitudes(CoherentState(alpha, n_max=n_max))
    cb = coherent_amplitudes(CoherentState(beta, n_max=n_max))
    return complex(np.vdot(ca, cb))


def field_moments(state, k: float = 1.0, r: float = 0.0, t: float = 0.0):
    """Mean and standard deviation of the single-mode field at ``(r, t)``.

    The state is evolved to time ``t`` and the moments of
    ``E(r) = i e0 (a exp(ikr) - a^dagger exp(-ikr))`` are taken in the
    truncated Fock space.

    Returns
    -------
    mean, delta : float
    """
    if isinstance(state, CoherentState):
        state = coherent_evolve(state, t)
    psi = state_vector(state)
    a, ad = _ladder(psi.size - 1)
    e0 = math.sqrt(state.omega / 2)
    field = 1j * e0 * (a * np.exp(1j * k * r) - ad * np.exp(-1j * k * r))
    v = field @ psi
    mean = np.vdot(psi, v).real
    dv = v - mean * psi
    return float(mean), math.sqrt(np.vdot(dv, dv).real)


# ---------------------------------------------------------------------------
# thermal states


def thermal_occupation(mode: ThermalMode) -> float:
    """Bose-Einstein mean occupation ``1/(exp(omega/T) - 1)``."""
    x = mode.omega / mode.temperature
    if x > 700:
        return 0.0
    return 1.0 / math.expm1(x)


def thermal_weights(mode: ThermalMode, n_max: int) -> np.ndarray:
    """Boltzmann probabilities ``(1 - exp(-x)) exp(-x N)`` for ``N = 0..n_max``."""
    x = mode.omega / mode.temperature
    n = np.arange(n_max + 1)
    return -math.expm1(-x) * np.exp(-x * n)


def planck_density(nu, temperature: float, h: float = 2 * math.pi, c: float = 1.0):
    """Black-body spectral energy density per unit frequency.

    ``u(nu) = (8 pi h nu**3 / c**3) / (exp(h nu / T) - 1)``. With hbar = 1 the
    default ``h`` is ``2 pi``.
    """
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    nu = np.asarray(nu, dtype=float)
    x = h * nu / temperature
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        u = 8 * math.pi * h * nu**3 / c**3 / np.expm1(x)
    u = np.where(nu == 0, 0.0, u)
    return float(u) if u.ndim == 0 else u


def wien_peak() -> float:
    """Location ``x* = h nu / T`` of the maximum of ``x**3 / (exp(x) - 1)``."""
    return brentq(lambda x: 3 * -math.expm1(-x) - x, 1.0, 5.0, xtol=1e-15)
