"""A discrete level coupled to a discretized continuum.

The Hamiltonian is the bordered matrix

    [[E0,  V_1, ..., V_M],
     [V_1*, e_1,        0],
     [ ...       ...     ],
     [V_M*, 0,   ...,  e_M]]

with no coupling inside the continuum. Everything follows from its exact
eigendecomposition; golden-rule, memory-kernel and line-shape estimates are
computed independently and compared against it. hbar = 1.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import OptimizeWarning, curve_fit

__all__ = [
    "DecayProblem",
    "DecayResult",
    "GoldenRule",
    "flat_band",
    "gaussian_band",
    "build",
    "spectrum",
    "survival_amplitude",
    "golden_rule",
    "golden_rule_details",
    "memory_kernel",
    "kernel_range",
    "markov_rate",
    "strength_function",
    "line_shape",
    "lorentzian",
    "fit_lorentzian",
    "fit_decay_rate",
    "revival_time",
    "simulate",
]


@dataclass(eq=False)
class DecayProblem:
    """Discrete level ``e0`` coupled by ``couplings`` to levels ``energies``.

    Parameters
    ----------
    e0 : float
    energies : ndarray
        Strictly increasing continuum energies.
    couplings : ndarray
        Complex couplings ``V_{0 mu}``.
    include_continuum_coupling : bool
        Must be False; continuum levels do not couple to each other.
    """

    e0: float
    energies: np.ndarray
    couplings: np.ndarray
    include_continuum_coupling: bool = False
    _eig: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.include_continuum_coupling:
            raise ValueError("continuum-continuum coupling is not part of this model")
        self.energies = np.asarray(self.energies, dtype=float).ravel()
        self.couplings = np.asarray(self.couplings, dtype=complex).ravel()
        if self.energies.shape != self.couplings.shape:
            raise ValueError("energies and couplings differ in length")
        if np.any(np.diff(self.energies) <= 0):
            raise ValueError("continuum energies must be strictly increasing (no duplicates)")
        if not (np.all(np.isfinite(self.energies)) and np.all(np.isfinite(self.couplings)) and math.isfinite(self.e0)):
            raise ValueError("energies and couplings must be finite")

    @property
    def n_levels(self) -> int:
        return self.energies.size

    @property
    def spacing(self) -> float | None:
        """Uniform level spacing, or ``None`` for a non-uniform grid."""
        if self.n_levels < 2:
            return None
        d = np.diff(self.energies)
        if np.ptp(d) > 1e-9 * abs(d.mean()):
            return None
        return float((self.energies[-1] - self.energies[0]) / (self.n_levels - 1))

    @property
    def density(self) -> float | None:
        s = self.spacing
        return None if s is None else 1.0 / s

    @property
    def bandwidth(self) -> float:
        if self.n_levels == 0:
            return 0.0
        s = self.spacing if self.spacing is not None else 0.0
        return float(self.energies[-1] - self.energies[0] + s)


@dataclass
class GoldenRule:
    gamma: float
    delta_e: float
    excluded: int | None  # index of a continuum level coinciding with e0


@dataclass
class DecayResult:
    gamma_fit: float
    gamma_golden: float
    delta_e: float
    times: np.ndarray
    survival: np.ndarray
    energies: np.ndarray
    weights: np.ndarray
    lorentz_center: float
    lorentz_fwhm: float
    fit_window: tuple


# ---------------------------------------------------------------------------
# problem factories


def flat_band(e0: float, n_levels: int, bandwidth: float, coupling: complex, center: float | None = None) -> DecayProblem:
    """Uniform grid of ``n_levels`` cells covering ``center +- bandwidth/2``, constant coupling.

    Levels sit at cell midpoints, so a centred ``e0`` falls halfway between
    the two middle levels.
    """
    if n_levels < 1 or not bandwidth > 0:
        raise ValueError("need n_levels >= 1 and positive bandwidth")
    c = e0 if center is None else center
    delta = bandwidth / n_levels
    eps = c - 0.5 * bandwidth + (np.arange(n_levels) + 0.5) * delta
    return DecayProblem(e0, eps, np.full(n_levels, coupling, dtype=complex))


def gaussian_band(e0: float, n_levels: int, bandwidth: float, coupling: float, sigma: float,
                  center: float | None = None) -> DecayProblem:
    """Uniform grid with coupling ``coupling * exp(-(e - center)**2 / (2 sigma**2))``."""
    p = flat_band(e0, n_levels, bandwidth, coupling, center)
    c = e0 if center is None else center
    p.couplings = coupling * np.exp(-((p.energies - c) ** 2) / (2 * sigma * sigma)) + 0j
    return p


# ---------------------------------------------------------------------------
# exact solution


def build(problem: DecayProblem) -> np.ndarray:
    """Dense bordered Hamiltonian of size ``(M+1, M+1)``."""
    m = problem.n_levels
    h = np.zeros((m + 1, m + 1), dtype=complex)
    h[0, 0] = problem.e0
    h[0, 1:] = problem.couplings
    h[1:, 0] = np.conj(problem.couplings)
    h[np.arange(1, m + 1), np.arange(1, m + 1)] = problem.energies
    return h


def spectrum(problem: DecayProblem):
    """Exact eigenvalues ``E_chi`` and weights ``|<psi0|Psi_chi>|**2``."""
    if problem._eig is None:
        h = build(problem)
        if np.all(problem.couplings.imag == 0):
            h = h.real
        e, v = eigh(h)
        problem._eig = (e, np.abs(v[0, :]) ** 2)
    return problem._eig


def survival_amplitude(problem: DecayProblem, times) -> np.ndarray:
    """``<psi0| exp(-iHt) |psi0>`` on ``times``."""
    e, w = spectrum(problem)
    t = np.asarray(times, dtype=float)
    out = np.empty(t.shape, dtype=complex)
    flat = t.ravel()
    chunk = max(1, 4_000_000 // max(e.size, 1))
    res = out.ravel()
    for s in range(0, flat.size, chunk):
        res[s:s + chunk] = np.exp(-1j * np.outer(flat[s:s + chunk], e)) @ w
    return res.reshape(t.shape)


# ---------------------------------------------------------------------------
# perturbative estimates


def _on_shell_coupling(problem: DecayProblem):
    """Interpolated ``|V(E0)|**2``, local density of states, and band edges."""
    eps = problem.energies
    v2 = np.abs(problem.couplings) ** 2
    if problem.n_levels < 2:
        return 0.0, 0.0, None, None
    local = np.gradient(eps)
    lo = eps[0] - 0.5 * local[0]
    hi = eps[-1] + 0.5 * local[-1]
    if not lo < problem.e0 < hi:
        return 0.0, 0.0, lo, hi
    v2_0 = float(np.interp(problem.e0, eps, v2))
    rho_0 = float(np.interp(problem.e0, eps, 1.0 / local))
    return v2_0, rho_0, lo, hi


def golden_rule_details(problem: DecayProblem) -> GoldenRule:
    """Golden-rule width and principal-value shift.

    Inside the band the on-shell coupling is subtracted from every term and
    its principal-value integral over the band is added back analytically;
    the remaining summand is smooth. A level exactly at ``e0`` contributes
    a 0/0 term and is excluded (reported in ``excluded``). Outside the band
    the sum is taken directly and the width is zero.
    """
    eps = problem.energies
    v2 = np.abs(problem.couplings) ** 2
    v2_0, rho_0, lo, hi = _on_shell_coupling(problem)
    gamma = 2 * math.pi * v2_0 * rho_0
    den = problem.e0 - eps
    excluded = None
    if problem.n_levels:
        k = int(np.argmin(np.abs(den)))
        step = problem.spacing or float(np.min(np.abs(np.diff(eps)))) if problem.n_levels > 1 else 1.0
        if abs(den[k]) <= 1e-12 * step:
            excluded = k
    mask = np.ones(eps.size, dtype=bool)
    if excluded is not None:
        mask[excluded] = False
    if rho_0 > 0:
        terms = list((v2[mask] - v2_0) / den[mask])
        terms.append(v2_0 * rho_0 * math.log((problem.e0 - lo) / (hi - problem.e0)))
    else:
        terms = list(v2[mask] / den[mask])
    return GoldenRule(gamma, math.fsum(terms), excluded)


def golden_rule(problem: DecayProblem):
    """``(Gamma, Delta_E)`` with ``Gamma = 2 pi |V(E0)|**2 rho(E0)``."""
    g = golden_rule_details(problem)
    return g.gamma, g.delta_e


def memory_kernel(problem: DecayProblem, times) -> np.ndarray:
    """``K(t) = -sum_mu |V_mu|**2 exp(i (E0 - e_mu) t)``."""
    t = np.asarray(times, dtype=float)
    v2 = np.abs(problem.couplings) ** 2
    return -(np.exp(1j * np.outer(t, problem.e0 - problem.energies)) @ v2).reshape(t.shape)


def kernel_range(kernel, times, fraction: float = 0.05) -> float:
    """First time at which ``|K|`` falls below ``fraction * |K(0)|``."""
    kernel = np.asarray(kernel)
    below = np.flatnonzero(np.abs(kernel) < fraction * abs(kernel[0]))
    if below.size == 0:
        raise ValueError("kernel does not decay within the sampled window")
    return float(np.asarray(times)[below[0]])


def markov_rate(kernel, times, window: float | None = None, min_window: float | None = None):
    """Half-width and negative shift from the time integral of the memory kernel.

    The integral ``int_0^inf K dt = -Gamma/2 - i Delta_E`` is evaluated with a
    Gaussian window ``exp(-t**2 / (2 window**2))`` which damps the slowly
    decaying band-edge oscillations.

    Parameters
    ----------
    kernel, times : ndarray
        Samples on a uniform grid starting at ``t = 0``.
    window : float, optional
        Gaussian width; defaults to ``times[-1] / 6``.
    min_window : float, optional
        Smallest acceptable window, typically a few kernel ranges.

    Returns
    -------
    half_gamma, minus_delta_e : float
    """
    times = np.asarray(times, dtype=float)
    kernel = np.asarray(kernel, dtype=complex)
    if times[0] != 0:
        raise ValueError("times must start at 0")
    if window is None:
        window = times[-1] / 6
    if min_window is not None and window < min_window:
        raise ValueError("integration window shorter than the kernel range")
    if times[-1] < 6 * window:
        raise ValueError("sampled times do not cover the integration window")
    dt = times[1] - times[0]
    if dt > window / 20:
        raise ValueError("time step too coarse for the window")
    integrand = kernel * np.exp(-0.5 * (times / window) ** 2)
    total = np.trapezoid(integrand, times) if hasattr(np, "trapezoid") else np.trapz(integrand, times)
    return float(-total.real), float(total.imag)


# ---------------------------------------------------------------------------
# line shape


def strength_function(problem: DecayProblem):
    """Exact eigen-energies and strength density ``w_chi / (local eigenvalue spacing)``."""
    e, w = spectrum(problem)
    if e.size < 3:
        raise ValueError("need at least two continuum levels")
    local = np.gradient(e)
    return e, w / local


def line_shape(problem: DecayProblem, e_grid, width: float | None = None) -> np.ndarray:
    """Gaussian-smoothed strength ``sum_chi w_chi g(E - E_chi)``.

    ``width`` defaults to twice the level spacing. The band must resolve the
    line: the golden-rule width has to exceed four spacings.
    """
    spacing = problem.spacing
    if spacing is None:
        spacing = float(np.mean(np.diff(problem.energies)))
    gamma, _ = golden_rule(problem)
    if gamma < 4 * spacing:
        raise ValueError("band under-resolved: width below four level spacings")
    sigma = 2 * spacing if width is None else width
    e, w = spectrum(problem)
    grid = np.asarray(e_grid, dtype=float)
    g = np.exp(-0.5 * ((grid[:, None] - e[None, :]) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
    return g @ w


def lorentzian(e, center, fwhm, area=1.0):
    """Normalized Breit-Wigner profile times ``area``."""
    return area * (fwhm / (2 * math.pi)) / ((e - center) ** 2 + 0.25 * fwhm * fwhm)


def fit_lorentzian(energies, density, center_guess: float, fwhm_guess: float, span: float = 5.0):
    """Least-squares Lorentzian fit within ``center_guess +- span * fwhm_guess``.

    Returns
    -------
    center, fwhm, area : float
    """
    energies = np.asarray(energies, dtype=float)
    density = np.asarray(density, dtype=float)
    sel = np.abs(energies - center_guess) <= span * fwhm_guess
    if sel.sum() < 5:
        raise ValueError("too few points in the fit window")
    with warnings.catch_warnings():
        # an exactly symmetric profile leaves the covariance of the centre undefined
        warnings.simplefilter("ignore", OptimizeWarning)
        popt, _ = curve_fit(lorentzian, energies[sel], density[sel], p0=(center_guess, fwhm_guess, 1.0))
    return float(popt[0]), float(abs(popt[1])), float(popt[2])


# ---------------------------------------------------------------------------
# dynamics summaries


def revival_time(problem: DecayProblem) -> float:
    """``2 pi / delta`` for a uniform grid."""
    s = problem.spacing
    if s is None:
        raise ValueError("revival time needs a uniform continuum grid")
    return 2 * math.pi / s


def fit_decay_rate(times, probability, gamma_guess: float, t_revival: float | None = None):
    """Fit ``log |c0|**2 = log b0 - Gamma t`` on ``[0.5, 3] / gamma_guess``.

    The window is cut at half the revival time when given. Returns
    ``(gamma, b0, (t_lo, t_hi))``.
    """
    t = np.asarray(times, dtype=float)
    p = np.asarray(probability, dtype=float)
    lo, hi = 0.5 / gamma_guess, 3.0 / gamma_guess
    if t_revival is not None:
        hi = min(hi, 0.5 * t_revival)
    sel = (t >= lo) & (t <= hi) & (p > 0)
    if sel.sum() < 3:
        raise ValueError("fit window contains fewer than 3 samples")
    slope, intercept = np.polyfit(t[sel], np.log(p[sel]), 1)
    return float(-slope), float(math.exp(intercept)), (lo, hi)


def simulate(problem: DecayProblem, times=None, min_ratio: float = 20.0) -> DecayResult:
    """Exact evolution plus golden-rule, exponential-fit and line-shape summaries.

    ``min_ratio`` enforces ``bandwidth / Gamma >= min_ratio`` so that the
    Markov regime actually applies.
    """
    gr = golden_rule_details(problem)
    if gr.gamma <= 0:
        raise ValueError("level lies outside the band; there is no decay to fit")
    if problem.bandwidth / gr.gamma < min_ratio:
        raise ValueError(f"bandwidth/Gamma = {problem.bandwidth / gr.gamma:.3g} below {min_ratio}")
    t_rev = revival_time(problem)
    if times is None:
        times = np.linspace(0.0, min(4.0 / gr.gamma, 0.5 * t_rev), 801)
    times = np.asarray(times, dtype=float)
    amp = survival_amplitude(problem, times)
    gamma_fit, _, window = fit_decay_rate(times, np.abs(amp) ** 2, gr.gamma, t_rev)
    e, w = spectrum(problem)
    ee, dens = strength_function(problem)
    center, fwhm, _ = fit_lorentzian(ee, dens, problem.e0 + gr.delta_e, gr.gamma)
    return DecayResult(gamma_fit, gr.gamma, gr.delta_e, times, amp, e, w, center, fwhm, window)
