"""Photon emission by a bound system: multipole rates, selection rules, hydrogen matrix elements.

Units: hbar = c = 1 with Heaviside-Lorentz charges (``e**2 = 4 pi alpha``).
The differential rate for emitting a photon of polarization ``lambda`` into
solid angle ``dOmega`` around ``k`` is written as

    dN/dOmega = (omega / (8 pi**2)) |J(k, lambda)|**2

where ``J`` is the transition current projected on the photon. For the
leading multipoles this gives

* E1: ``omega**3 / (8 pi**2) |d . lambda|**2``
* M1: ``omega**3 / (8 pi**2) |(k_hat x lambda) . M|**2``
* E2: ``omega**5 / (288 pi**2) |k_hat_l lambda_s Q_ls|**2``

with ``Q_ls = <0| sum (3 x_l x_s - r**2 delta_ls) |n>``. Directions use
spherical angles ``(theta, phi)`` of ``k``. Spherical vector components are
``v_{+-1} = -+(v_x +- i v_y)/sqrt(2)``, ``v_0 = v_z``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .specfun import clebsch_gordan, gaunt, ylm

__all__ = [
    "E1",
    "E2",
    "M1",
    "EmissionSpec",
    "PolarizationBasis",
    "SelectionResult",
    "RATE_PREFACTOR",
    "polarization_basis",
    "spherical_components",
    "dipole_rate",
    "quadrupole_rate",
    "magnetic_dipole_rate",
    "emission_rate",
    "polarization_summed_rate",
    "angular_map",
    "angular_integral",
    "quadrupole_channel_tensor",
    "selection_rules",
    "wigner_eckart_expand",
    "reduced_from_element",
    "hydrogen_radial",
    "radial_integral",
    "hydrogen_multipole_me",
    "hydrogen_dipole_me",
    "induced_and_absorption",
    "recoil_ratio",
    "multipole_amplitude",
]

E1, E2, M1 = "E1", "E2", "M1"
MULTIPOLES = (E1, E2, M1)
RATE_PREFACTOR = 1.0 / (8.0 * math.pi**2)
TENSOR_TOLERANCE = 1e-12
MAX_HYDROGEN_N = 4

_SQRT2 = math.sqrt(2.0)
# rows: spherical component m = +1, 0, -1; columns: x, y, z
_CART_TO_SPH = np.array(
    [[-1 / _SQRT2, -1j / _SQRT2, 0.0], [0.0, 0.0, 1.0], [1 / _SQRT2, -1j / _SQRT2, 0.0]]
)
_SPH_ROW = {1: 0, 0: 1, -1: 2}


@dataclass(frozen=True)
class EmissionSpec:
    """A radiative transition ``n -> 0`` of frequency ``omega``.

    Parameters
    ----------
    omega : float
        Transition frequency, equal to the level difference.
    multipole : {"E1", "E2", "M1"}
    me_vector : array_like of complex, shape (3,), optional
        ``<0|d|n>`` for E1 or ``<0|M|n>`` for M1.
    me_tensor : array_like of complex, shape (3, 3), optional
        ``<0|Q|n>`` for E2; must be symmetric and traceless.
    """

    omega: float
    multipole: str
    me_vector: np.ndarray | None = field(default=None, compare=False)
    me_tensor: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if not (np.isfinite(self.omega) and self.omega > 0):
            raise ValueError("omega must be positive")
        if self.multipole not in MULTIPOLES:
            raise ValueError(f"multipole must be one of {MULTIPOLES}")
        if self.multipole == E2:
            if self.me_tensor is None:
                raise ValueError("E2 needs me_tensor")
            q = np.asarray(self.me_tensor, dtype=complex)
            if q.shape != (3, 3):
                raise ValueError("me_tensor must be 3x3")
            if np.max(np.abs(q - q.T)) > TENSOR_TOLERANCE:
                raise ValueError("me_tensor must be symmetric")
            if abs(np.trace(q)) > TENSOR_TOLERANCE:
                raise ValueError("me_tensor must be traceless")
            object.__setattr__(self, "me_tensor", q)
        else:
            if self.me_vector is None:
                raise ValueError(f"{self.multipole} needs me_vector")
            v = np.asarray(self.me_vector, dtype=complex)
            if v.shape != (3,):
                raise ValueError("me_vector must have 3 components")
            object.__setattr__(self, "me_vector", v)

    @classmethod
    def from_levels(cls, e_upper: float, e_lower: float, multipole: str, **elements):
        """Build a transition whose frequency is the level difference."""
        return cls(e_upper - e_lower, multipole, **elements)


@dataclass(frozen=True)
class PolarizationBasis:
    """Photon direction and two real transverse polarization vectors.

    ``lambda1`` points along the polar unit vector and ``lambda2`` along the
    azimuthal one, so ``(lambda1, lambda2, k_hat)`` is right-handed.
    """

    theta: float
    phi: float
    lambda1: np.ndarray
    lambda2: np.ndarray

    @property
    def k_hat(self) -> np.ndarray:
        return np.cross(self.lambda1, self.lambda2)

    def vector(self, alpha: int) -> np.ndarray:
        if alpha == 1:
            return self.lambda1
        if alpha == 2:
            return self.lambda2
        raise ValueError("polarization index must be 1 or 2")


@dataclass(frozen=True)
class SelectionResult:
    allowed: bool
    reason: str

    def __bool__(self):
        return self.allowed


# ---------------------------------------------------------------------------
# geometry


def _check_angles(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(phi))):
        raise ValueError("angles must be finite")
    if np.any(theta < 0) or np.any(theta > math.pi):
        raise ValueError("theta must lie in [0, pi]")
    return theta, phi


def _frame(theta, phi):
    """k_hat, lambda1, lambda2 with a trailing axis of length 3 (broadcasts)."""
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    k_hat = np.stack(np.broadcast_arrays(st * cp, st * sp, ct), axis=-1)
    lam1 = np.stack(np.broadcast_arrays(ct * cp, ct * sp, -st), axis=-1)
    lam2 = np.stack(np.broadcast_arrays(-sp, cp, np.zeros_like(ct * cp)), axis=-1)
    return k_hat, lam1, lam2


def polarization_basis(theta: float, phi: float) -> PolarizationBasis:
    """Linear polarization pair for a photon moving along ``(theta, phi)``."""
    theta, phi = _check_angles(theta, phi)
    if theta.ndim or phi.ndim:
        raise ValueError("polarization_basis takes scalar angles")
    _, lam1, lam2 = _frame(float(theta), float(phi))
    return PolarizationBasis(float(theta), float(phi), lam1, lam2)


def spherical_components(v) -> dict:
    """Spherical components ``{+1, 0, -1}`` of a Cartesian 3-vector."""
    s = _CART_TO_SPH @ np.asarray(v, dtype=complex)
    return {1: s[0], 0: s[1], -1: s[2]}


# ---------------------------------------------------------------------------
# rates


def _require(spec: EmissionSpec, multipole: str):
    if not isinstance(spec, EmissionSpec):
        raise TypeError("expected an EmissionSpec")
    if spec.multipole != multipole:
        raise ValueError(f"expected a {multipole} transition, got {spec.multipole}")


def _polarization(theta, phi, alpha):
    theta, phi = _check_angles(theta, phi)
    k_hat, lam1, lam2 = _frame(theta, phi)
    if alpha == 1:
        return k_hat, lam1
    if alpha == 2:
        return k_hat, lam2
    raise ValueError("polarization index must be 1 or 2")


def _as_output(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def dipole_rate(spec: EmissionSpec, theta, phi, alpha: int):
    """Electric-dipole rate ``omega**3/(8 pi**2) |d . lambda_alpha|**2`` per solid angle."""
    _require(spec, E1)
    _, lam = _polarization(theta, phi, alpha)
    amp = lam @ spec.me_vector
    return _as_output(RATE_PREFACTOR * spec.omega**3 * np.abs(amp) ** 2)


def magnetic_dipole_rate(spec: EmissionSpec, theta, phi, alpha: int):
    """Magnetic-dipole rate with ``k_hat x lambda_alpha`` in place of ``lambda_alpha``."""
    _require(spec, M1)
    k_hat, lam = _polarization(theta, phi, alpha)
    amp = np.cross(k_hat, lam) @ spec.me_vector
    return _as_output(RATE_PREFACTOR * spec.omega**3 * np.abs(amp) ** 2)


def quadrupole_rate(spec: EmissionSpec, theta, phi, alpha: int):
    """Electric-quadrupole rate ``omega**5/(288 pi**2) |k_hat . Q . lambda_alpha|**2``."""
    _require(spec, E2)
    k_hat, lam = _polarization(theta, phi, alpha)
    amp = np.einsum("...l,ls,...s->...", k_hat, spec.me_tensor, lam)
    # the current matrix element is (omega/6) k_l lambda_s Q_ls with |k| = omega
    return _as_output(RATE_PREFACTOR * spec.omega**3 * (spec.omega / 6.0) ** 2 * np.abs(amp) ** 2)


_RATE_BY_MULTIPOLE = {E1: dipole_rate, E2: quadrupole_rate, M1: magnetic_dipole_rate}


def emission_rate(spec: EmissionSpec, theta, phi, alpha: int):
    """Dispatch to the rate of ``spec.multipole``."""
    return _RATE_BY_MULTIPOLE[spec.multipole](spec, theta, phi, alpha)


def polarization_summed_rate(spec: EmissionSpec, theta, phi):
    """Rate summed over both polarizations."""
    return _as_output(emission_rate(spec, theta, phi, 1) + np.asarray(emission_rate(spec, theta, phi, 2)))


def angular_map(spec: EmissionSpec, n_theta: int = 19, n_phi: int = 1):
    """Rates on a regular ``(theta, phi)`` grid.

    Returns
    -------
    ndarray, shape (n_theta * n_phi, 4)
        Columns ``theta, phi, rate_lambda1, rate_lambda2``.
    """
    if n_theta < 2 or n_phi < 1:
        raise ValueError("need n_theta >= 2 and n_phi >= 1")
    theta = np.linspace(0.0, math.pi, n_theta)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    tt, pp = (a.ravel() for a in np.meshgrid(theta, phi, indexing="ij"))
    r1 = np.atleast_1d(emission_rate(spec, tt, pp, 1))
    r2 = np.atleast_1d(emission_rate(spec, tt, pp, 2))
    return np.column_stack([tt, pp, r1, r2])


def angular_integral(spec: EmissionSpec, order: int = 32):
    """Polarization-summed rate integrated over all photon directions.

    Gauss-Legendre in ``cos(theta)`` times the trapezoid rule in ``phi``; both
    are exact for the low-degree polynomials produced by E1, M1 and E2.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    n_phi = 2 * order
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    theta = np.arccos(x)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    rate = np.asarray(polarization_summed_rate(spec, tt, pp))
    return float(np.sum(w[:, None] * rate) * 2 * math.pi / n_phi)


def quadrupole_channel_tensor(mu: int) -> np.ndarray:
    """Cartesian tensor of the spherical channel ``Q_{2 mu}``.

    Built so that ``a . T . b = sum <2 mu | 1 m, 1 m'> conj(a_m) conj(b_m')``
    for real ``a``, ``b``. The ``mu = 0`` member is ``diag(-1, -1, 2)/sqrt(6)``.
    """
    if mu not in (-2, -1, 0, 1, 2):
        raise ValueError("mu must be in -2..2")
    t = np.zeros((3, 3), dtype=complex)
    for m in (1, 0, -1):
        for mp in (1, 0, -1):
            c = clebsch_gordan(1, m, 1, mp, 2, mu)
            if c:
                t += c * np.outer(_CART_TO_SPH[_SPH_ROW[m]].conj(), _CART_TO_SPH[_SPH_ROW[mp]].conj())
    return t


# ---------------------------------------------------------------------------
# selection rules and Wigner-Eckart


def _rank_and_parity(multipole: str):
    if len(multipole) != 2 or multipole[0] not in "EM" or not multipole[1].isdigit():
        raise ValueError(f"unrecognised multipole {multipole!r}")
    rank = int(multipole[1])
    change = (-1) ** rank if multipole[0] == "E" else (-1) ** (rank + 1)
    return rank, change


def selection_rules(multipole: str, l, m, parity_i=None, l_final=None, m_final=None, parity_f=None) -> SelectionResult:
    """Whether a multipole photon can connect ``(l, m, P_i)`` to ``(l', m', P_f)``.

    Parities default to the orbital value ``(-1)**l``. Rules are tested in
    the order: monopole, angular-momentum triangle, projection, parity.
    """
    if l_final is None or m_final is None:
        raise ValueError("final l and m are required")
    rank, change = _rank_and_parity(multipole)
    tl, tm, tlf, tmf = (int(round(2 * v)) for v in (l, m, l_final, m_final))
    if tl < 0 or tlf < 0 or abs(tm) > tl or abs(tmf) > tlf or (tl - tm) % 2 or (tlf - tmf) % 2:
        raise ValueError("invalid angular-momentum quantum numbers")
    p_i = parity_i if parity_i is not None else (-1) ** int(l)
    p_f = parity_f if parity_f is not None else (-1) ** int(l_final)
    if rank == 0:
        return SelectionResult(False, "no monopole photon: the L=0 amplitude vanishes by transversality")
    if not (abs(tl - 2 * rank) <= tlf <= tl + 2 * rank) or (tl + tlf) % 2:
        return SelectionResult(False, f"angular momentum: l'={l_final} outside the triangle of l={l} and L={rank}")
    if abs(tmf - tm) > 2 * rank:
        return SelectionResult(False, f"projection: |m'-m| = {abs(tmf - tm) / 2:g} exceeds L={rank}")
    if p_f != p_i * change:
        need = "flip" if change == -1 else "be conserved"
        return SelectionResult(False, f"parity: must {need} for {multipole}")
    return SelectionResult(True, "allowed")


def _projections(j):
    tj = int(round(2 * j))
    return [(tm) / 2 for tm in range(-tj, tj + 1, 2)]


def _triangle(j, jp, rank) -> bool:
    a, b, c = (int(round(2 * v)) for v in (j, jp, rank))
    return abs(a - c) <= b <= a + c and (a + b + c) % 2 == 0


def wigner_eckart_expand(reduced_me: complex, j, j_final, rank: int) -> dict:
    """Table ``{(m, m', mu): <j' m'| T_{rank mu} |j m>}``.

    Convention: ``<j' m'|T_{k mu}|j m> = <j m, k mu | j' m'> * reduced_me``.
    Entries with ``m' != m + mu`` are present and exactly zero.
    """
    if not _triangle(j, j_final, rank):
        raise ValueError(f"triangle rule fails for j={j}, j'={j_final}, rank={rank}")
    table = {}
    for m in _projections(j):
        for mp in _projections(j_final):
            for mu in range(-rank, rank + 1):
                c = clebsch_gordan(j, m, rank, mu, j_final, mp)
                table[(m, mp, mu)] = c * reduced_me if c else 0.0
    return table


def reduced_from_element(element: complex, j, m, j_final, m_final, rank: int, mu: int) -> complex:
    """Invert the Wigner-Eckart relation for one measured element."""
    c = clebsch_gordan(j, m, rank, mu, j_final, m_final)
    if c == 0.0:
        raise ValueError("this element carries no information: its Clebsch-Gordan factor is zero")
    return element / c


# ---------------------------------------------------------------------------
# hydrogen


def _radial_poly(n: int, l: int, r):
    # R_nl(r) in Bohr units, closed forms
    if n == 1:
        return 2 * np.exp(-r)
    if n == 2:
        e = np.exp(-r / 2)
        if l == 0:
            return (1 - r / 2) * e / _SQRT2
        return r * e / (2 * math.sqrt(6))
    if n == 3:
        e = np.exp(-r / 3)
        if l == 0:
            return 2 / (3 * math.sqrt(3)) * (1 - 2 * r / 3 + 2 * r**2 / 27) * e
        if l == 1:
            return 8 / (27 * math.sqrt(6)) * r * (1 - r / 6) * e
        return 4 / (81 * math.sqrt(30)) * r**2 * e
    e = np.exp(-r / 4)
    if l == 0:
        return 0.25 * (1 - 3 * r / 4 + r**2 / 8 - r**3 / 192) * e
    if l == 1:
        return math.sqrt(5) / (16 * math.sqrt(3)) * r * (1 - r / 4 + r**2 / 80) * e
    if l == 2:
        return 1 / (64 * math.sqrt(5)) * r**2 * (1 - r / 12) * e
    return 1 / (768 * math.sqrt(35)) * r**3 * e


def _check_level(n: int, l: int, m: int | None = None):
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= MAX_HYDROGEN_N):
        raise ValueError(f"hydrogen radial functions are tabulated for 1 <= n <= {MAX_HYDROGEN_N}")
    if not 0 <= l < n:
        raise ValueError("need 0 <= l < n")
    if m is not None and abs(m) > l:
        raise ValueError("need |m| <= l")


def hydrogen_radial(n: int, l: int, r):
    """Bound-state radial function ``R_nl(r)`` (Bohr radius 1)."""
    _check_level(n, l)
    r = np.asarray(r, dtype=float)
    out = _radial_poly(n, l, r)
    return float(out) if out.ndim == 0 else out


def radial_integral(n: int, l: int, n_final: int, l_final: int, power: int = 1) -> float:
    """``int_0^inf r**(2+power) R_{n'l'} R_{nl} dr`` by adaptive quadrature."""
    _check_level(n, l)
    _check_level(n_final, l_final)
    val, _ = quad(
        lambda r: r ** (2 + power) * _radial_poly(n_final, l_final, r) * _radial_poly(n, l, r),
        0.0,
        np.inf,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=200,
    )
    return val


_COMPONENTS = ("x", "y", "z")


def hydrogen_multipole_me(initial, final, multipole: str = E1, mu: int = 0, charge: float = 1.0) -> float:
    """Spherical component ``mu`` of a multipole operator between hydrogen states.

    ``initial`` and ``final`` are ``(n, l, m)``. The operators are
    ``charge * r * sqrt(4 pi/3) Y_1mu`` (E1), ``charge * r**2 * sqrt(4 pi/5) Y_2mu``
    (E2) and the orbital magnetic moment ``(charge/2) L_mu`` (M1). Forbidden
    elements are exactly ``0.0``.
    """
    n, l, m = initial
    nf, lf, mf = final
    _check_level(n, l, m)
    _check_level(nf, lf, mf)
    if multipole == M1:
        if (n, l) != (nf, lf) or l == 0:
            return 0.0
        c = clebsch_gordan(l, m, 1, mu, l, mf)
        return 0.5 * charge * math.sqrt(l * (l + 1)) * c if c else 0.0
    rank = {E1: 1, E2: 2}.get(multipole)
    if rank is None:
        raise ValueError(f"multipole must be one of {MULTIPOLES}")
    angular = gaunt(lf, mf, rank, mu, l, m)
    if angular == 0.0:
        return 0.0
    radial = radial_integral(n, l, nf, lf, power=rank)
    return charge * radial * math.sqrt(4 * math.pi / (2 * rank + 1)) * angular


def hydrogen_dipole_me(initial, final, component="z", charge: float = 1.0) -> complex:
    """Dipole matrix element ``<n' l' m'| charge * r_c |n l m>``.

    ``component`` is ``"x"``, ``"y"``, ``"z"`` or a spherical index ``-1, 0, 1``.
    """
    if component in (-1, 0, 1):
        return complex(hydrogen_multipole_me(initial, final, E1, component, charge))
    if component not in _COMPONENTS:
        raise ValueError("component must be x, y, z or a spherical index -1, 0, 1")
    if component == "z":
        return complex(hydrogen_multipole_me(initial, final, E1, 0, charge))
    lower = hydrogen_multipole_me(initial, final, E1, -1, charge)
    upper = hydrogen_multipole_me(initial, final, E1, 1, charge)
    if component == "x":
        return complex((lower - upper) / _SQRT2)
    return 1j * (lower + upper) / _SQRT2


# ---------------------------------------------------------------------------
# photon bookkeeping


def induced_and_absorption(rate_spontaneous: float, n_photons: float):
    """Induced emission, total emission and absorption rates for ``N`` photons in the mode.

    Returns
    -------
    induced, total, absorption : float
        ``N * rate``, ``(N + 1) * rate`` and ``N * rate``.
    """
    if n_photons < 0:
        raise ValueError("photon number must be non-negative")
    if rate_spontaneous < 0:
        raise ValueError("rate must be non-negative")
    induced = n_photons * rate_spontaneous
    return induced, (n_photons + 1) * rate_spontaneous, induced


def recoil_ratio(photon_energy: float, rest_energy: float):
    """Recoil of the emitter.

    Returns
    -------
    energy_ratio : float
        Recoil kinetic energy over photon energy, ``E / (2 M)``.
    velocity_ratio : float
        Recoil speed in units of ``c``, ``E / M``.
    """
    if not rest_energy > 0:
        raise ValueError("rest energy must be positive")
    if photon_energy < 0:
        raise ValueError("photon energy must be non-negative")
    v = photon_energy / rest_energy
    return 0.5 * v, v


def multipole_amplitude(L: int, M: int, l: int, theta, phi, alpha: int, k: float = 1.0) -> complex:
    """Photon factor ``sum_{m,q} <l m, 1 q | L M> k**l Y_lm(k_hat) lambda_q``.

    Only ``L = 0, 1`` are provided. ``L = 0`` vanishes identically because
    the photon is transverse; ``L = 1, l = 0`` is proportional to ``lambda_M``
    and ``L = 1, l = 1`` to ``(k_hat x lambda)_M``.
    """
    if L not in (0, 1):
        raise ValueError("only L = 0 and L = 1 are supported")
    if abs(M) > L:
        raise ValueError("need |M| <= L")
    if l < 0 or abs(l - L) > 1:
        raise ValueError("need l in {L-1, L, L+1} and l >= 0")
    basis = polarization_basis(theta, phi)
    lam = spherical_components(basis.vector(alpha))
    total = 0j
    for q in (-1, 0, 1):
        m = M - q
        if abs(m) > l:
            continue
        c = clebsch_gordan(l, m, 1, q, L, M)
        if c:
            total += c * k**l * ylm(l, m, basis.theta, basis.phi) * lam[q]
    return complex(total)
