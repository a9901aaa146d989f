"""Special functions and angular-momentum coefficients.

Natural units throughout. Half-integer angular momenta are carried as
doubled integers so that ``j = 3/2`` is stored as ``twice_j = 3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "AngularMomentum",
    "OscillatorState",
    "airy_ai",
    "airy_zeros",
    "oscillator_wf",
    "clebsch_gordan",
    "cg",
    "gaunt",
    "lande_g",
    "ylm",
    "MAX_TWICE_J",
    "MAX_OSCILLATOR_N",
]

MAX_TWICE_J = 100  # j <= 50
MAX_OSCILLATOR_N = 200

# Ai(0) and -Ai'(0)
_AI0 = 0.355028053887817239260063186004
_AIP0 = 0.258819403792806798405183560189

# switch points between the Maclaurin pair and the asymptotic forms
_SERIES_MAX_POS = 6.0
_SERIES_MAX_NEG = 7.0


def _twice(x) -> int:
    """Return ``2*x`` as an int, rejecting values that are not half-integers."""
    t = 2 * x
    ti = int(round(t))
    if abs(t - ti) > 1e-9:
        raise ValueError(f"{x!r} is not an integer or half-integer")
    return ti


@dataclass(frozen=True)
class AngularMomentum:
    """Angular momentum quantum numbers ``(j, m)`` stored as doubled integers."""

    twice_j: int
    twice_m: int

    def __post_init__(self):
        if self.twice_j < 0:
            raise ValueError("2j must be non-negative")
        if abs(self.twice_m) > self.twice_j:
            raise ValueError("|m| must not exceed j")
        if (self.twice_j - self.twice_m) % 2:
            raise ValueError("j and m must both be integer or both half-integer")

    @classmethod
    def from_values(cls, j, m) -> "AngularMomentum":
        return cls(_twice(j), _twice(m))

    @property
    def j(self) -> float:
        return self.twice_j / 2

    @property
    def m(self) -> float:
        return self.twice_m / 2


@dataclass(frozen=True)
class OscillatorState:
    """Harmonic-oscillator eigenstate ``n`` with oscillator length ``length_scale``."""

    n: int
    length_scale: float = 1.0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.n > MAX_OSCILLATOR_N:
            raise ValueError(f"n > {MAX_OSCILLATOR_N} is outside the stable recurrence range")
        if not self.length_scale > 0:
            raise ValueError("length_scale must be positive")


# ---------------------------------------------------------------------------
# Airy function


def _airy_series(x: float) -> float:
    # Ai = Ai(0) f - (-Ai'(0)) g with f, g the two Maclaurin solutions
    x3 = x * x * x
    f_term, g_term = 1.0, x
    f_sum, g_sum = [1.0], [x]
    k = 1
    while True:
        f_term *= x3 / ((3 * k - 1) * (3 * k))
        g_term *= x3 / ((3 * k) * (3 * k + 1))
        f_sum.append(f_term)
        g_sum.append(g_term)
        if abs(f_term) < 1e-18 * max(1.0, abs(f_sum[0])) and abs(g_term) < 1e-18 and k > 3:
            break
        k += 1
        if k > 400:  # pragma: no cover - cannot happen for |x| <= 7
            break
    return _AI0 * math.fsum(f_sum) - _AIP0 * math.fsum(g_sum)


def _asymptotic_terms(zeta: float, kmax: int = 60) -> list[float]:
    """Return ``u_k / zeta**k`` until the terms stop decreasing."""
    out = [1.0]
    u = 1.0
    for k in range(1, kmax):
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        term = u / zeta**k
        if term > out[-1] or term < 1e-18:
            break
        out.append(term)
    return out


def _airy_asymptotic_pos(x: float) -> float:
    zeta = 2.0 / 3.0 * x**1.5
    terms = _asymptotic_terms(zeta)
    s = math.fsum((-1) ** k * t for k, t in enumerate(terms))
    return math.exp(-zeta) / (2.0 * math.sqrt(math.pi) * x**0.25) * s


def _airy_asymptotic_neg(x: float) -> float:
    # x is the magnitude of a negative argument
    zeta = 2.0 / 3.0 * x**1.5
    terms = _asymptotic_terms(zeta)
    even = math.fsum((-1) ** (k // 2) * t for k, t in enumerate(terms) if k % 2 == 0)
    odd = math.fsum((-1) ** (k // 2) * t for k, t in enumerate(terms) if k % 2 == 1)
    phase = zeta + math.pi / 4
    return (math.sin(phase) * even - math.cos(phase) * odd) / (math.sqrt(math.pi) * x**0.25)


def _airy_scalar(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError("airy_ai requires a finite argument")
    if -_SERIES_MAX_NEG <= x <= _SERIES_MAX_POS:
        return _airy_series(x)
    if x > 0:
        if x > 105.0:  # exp(-zeta) underflows
            return 0.0
        return _airy_asymptotic_pos(x)
    return _airy_asymptotic_neg(-x)


def airy_ai(x):
    """Airy function of the first kind.

    Parameters
    ----------
    x : float or array_like
        Finite real argument(s).

    Returns
    -------
    float or ndarray
        ``Ai(x)``. Absolute error is below ``1e-10`` for ``|x| <= 30``.

    Notes
    -----
    The Maclaurin pair is summed for ``-7 <= x <= 6``; outside that window the
    standard asymptotic expansions are truncated at their smallest term.
    """
    if np.ndim(x) == 0:
        return _airy_scalar(float(x))
    arr = np.asarray(x, dtype=float)
    return np.array([_airy_scalar(v) for v in arr.ravel()]).reshape(arr.shape)


def airy_zeros(count: int) -> np.ndarray:
    """Return the first ``count`` zeros of ``Ai`` (all negative), bracketed and refined."""
    from scipy.optimize import brentq

    zeros = []
    for k in range(1, count + 1):
        # asymptotic estimate, then bracket
        t = 3 * math.pi * (4 * k - 1) / 8
        guess = -(t ** (2.0 / 3.0)) * (1 + 5 / (48 * t * t))
        lo, hi = guess - 0.3, guess + 0.3
        zeros.append(brentq(_airy_scalar, lo, hi, xtol=1e-14, rtol=1e-15))
    return np.array(zeros)


# ---------------------------------------------------------------------------
# Oscillator eigenfunctions


def oscillator_wf(state: OscillatorState, x):
    """Normalized oscillator eigenfunction ``chi_n`` evaluated at ``x``.

    Uses the three-term recurrence for Hermite functions, which keeps the
    Gaussian factor attached and therefore never overflows for ``n <= 200``.

    Parameters
    ----------
    state : OscillatorState
    x : float or array_like

    Returns
    -------
    float or ndarray
    """
    ell = state.length_scale
    y = np.asarray(x, dtype=float) / ell
    prev = np.zeros_like(y)
    cur = np.pi**-0.25 * np.exp(-0.5 * y * y)
    for k in range(state.n):
        nxt = math.sqrt(2.0 / (k + 1)) * y * cur - math.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt
    out = cur / math.sqrt(ell)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Clebsch-Gordan and friends


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return math.factorial(n)


@lru_cache(maxsize=200_000)
def _cg_twice(j1: int, m1: int, j2: int, m2: int, j: int, m: int) -> float:
    # all arguments doubled
    if m1 + m2 != m:
        return 0.0
    if j1 < 0 or j2 < 0 or j < 0:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m) > j:
        return 0.0
    if (j1 - m1) % 2 or (j2 - m2) % 2 or (j - m) % 2:
        return 0.0
    if j > j1 + j2 or j < abs(j1 - j2) or (j1 + j2 - j) % 2:
        return 0.0
    if max(j1, j2, j) > MAX_TWICE_J:
        raise ValueError("angular momentum above the supported cap j = 50")

    a = (j1 + j2 - j) // 2
    b = (j1 - m1) // 2
    c = (j2 + m2) // 2
    d = (j - j2 + m1) // 2
    e = (j - j1 - m2) // 2
    kmin = max(0, -d, -e)
    kmax = min(a, b, c)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = _fact(k) * _fact(a - k) * _fact(b - k) * _fact(c - k) * _fact(d + k) * _fact(e + k)
        total += Fraction((-1) ** k, den)
    if total == 0:
        return 0.0
    pref = Fraction(
        (j + 1)
        * _fact((j + j1 - j2) // 2)
        * _fact((j - j1 + j2) // 2)
        * _fact((j1 + j2 - j) // 2)
        * _fact((j + m) // 2)
        * _fact((j - m) // 2)
        * _fact((j1 - m1) // 2)
        * _fact((j1 + m1) // 2)
        * _fact((j2 - m2) // 2)
        * _fact((j2 + m2) // 2),
        _fact((j1 + j2 + j) // 2 + 1),
    )
    sq = pref * total * total
    # sq <= 1 is exact; only the final float conversion and sqrt round
    value = math.sqrt(float(sq))
    return value if total > 0 else -value


def clebsch_gordan(j1, m1, j2, m2, j, m) -> float:
    """Clebsch-Gordan coefficient ``<j m | j1 m1, j2 m2>``, Condon-Shortley phase.

    Arguments are integers or half-integers. Combinations outside the triangle
    or projection constraints give ``0.0``. The Racah sum is accumulated in
    exact rational arithmetic, so forbidden and accidentally vanishing
    coefficients come out as exact zeros.

    Examples
    --------
    >>> round(clebsch_gordan(1, 0, 1, 0, 2, 0) ** 2, 12)
    0.666666666667
    >>> clebsch_gordan(1, 0, 1, 0, 1, 0)
    0.0
    """
    try:
        args = tuple(_twice(v) for v in (j1, m1, j2, m2, j, m))
    except ValueError:
        return 0.0
    return _cg_twice(*args)


def cg(first: AngularMomentum, second: AngularMomentum, total: AngularMomentum) -> float:
    """Clebsch-Gordan coefficient from :class:`AngularMomentum` triples."""
    return _cg_twice(
        first.twice_j, first.twice_m, second.twice_j, second.twice_m, total.twice_j, total.twice_m
    )


def gaunt(L: int, M: int, l1: int, m1: int, l2: int, m2: int) -> float:
    """Integral of ``conj(Y_LM) Y_l1m1 Y_l2m2`` over the unit sphere.

    Returns exactly ``0.0`` whenever a selection rule forbids the integral.
    """
    if M != m1 + m2 or (l1 + l2 + L) % 2:
        return 0.0
    c0 = clebsch_gordan(l1, 0, l2, 0, L, 0)
    if c0 == 0.0:
        return 0.0
    cm = clebsch_gordan(l1, m1, l2, m2, L, M)
    if cm == 0.0:
        return 0.0
    norm = math.sqrt((2 * l1 + 1) * (2 * l2 + 1) / (4 * math.pi * (2 * L + 1)))
    return norm * c0 * cm


def lande_g(J, L, S) -> float:
    """Lande g-factor of a level with total ``J``, orbital ``L`` and spin ``S``."""
    tj, tl, ts = _twice(J), _twice(L), _twice(S)
    if tj == 0:
        raise ValueError("g-factor undefined for J = 0")
    if tj > tl + ts or tj < abs(tl - ts) or (tl + ts - tj) % 2:
        raise ValueError("J must lie in the triangle |L-S| <= J <= L+S")
    jj = J * (J + 1)
    return 1.0 + (jj - L * (L + 1) + S * (S + 1)) / (2.0 * jj)


# ---------------------------------------------------------------------------
# Spherical harmonics


def _legendre_normalized(l: int, m: int, x):
    """Normalized associated Legendre factor with the Condon-Shortley phase, m >= 0."""
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    fac = 1.0
    for i in range(1, m + 1):
        fac *= (2 * i - 1) / (2 * i)
    qmm = (-1) ** m * math.sqrt((2 * m + 1) / (4 * math.pi) * fac) * s**m
    if l == m:
        return qmm
    qm1 = x * math.sqrt(2 * m + 3) * qmm
    if l == m + 1:
        return qm1
    q2, q1 = qmm, qm1
    for ll in range(m + 2, l + 1):
        a = math.sqrt((4 * ll * ll - 1) / (ll * ll - m * m))
        b = math.sqrt(((ll - 1) ** 2 - m * m) / (4 * (ll - 1) ** 2 - 1))
        q2, q1 = q1, a * (x * q1 - b * q2)
    return q1


def ylm(l: int, m: int, theta, phi):
    """Orthonormal spherical harmonic ``Y_lm(theta, phi)`` (Condon-Shortley phase).

    Parameters
    ----------
    l, m : int
        Degree and order, ``|m| <= l``.
    theta, phi : float or array_like
        Polar and azimuthal angles in radians.
    """
    if l < 0 or abs(m) > l:
        raise ValueError("need l >= 0 and |m| <= l")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    q = _legendre_normalized(l, abs(m), np.cos(theta))
    val = q * np.exp(1j * abs(m) * phi)
    if m < 0:
        val = (-1) ** m * np.conj(val)
    return complex(val) if np.ndim(val) == 0 else val
