"""Truncated Fock spaces for bosons and fermions.

Basis states are occupation tuples ``(n_0, ..., n_{M-1})`` in lexicographic
order. Fermion sign convention: modes are ordered by index and
``a_i^dagger`` picks up ``(-1)**(number of occupied j < i)``, i.e. a basis
state is ``prod_i (a_i^dagger)^{n_i} |0>`` with the lowest mode leftmost.

A first-quantized implementation working on dense (anti)symmetrized
amplitude tensors is included as an independent check of the second-quantized
operators.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

__all__ = [
    "BOSON",
    "FERMION",
    "OccupationBasis",
    "SparseOperator",
    "ModeSet",
    "FirstQuantizedState",
    "enumerate_basis",
    "ladder_matrix",
    "commutator_check",
    "one_body_operator",
    "two_body_operator",
    "number_operator",
    "noninteracting_hamiltonian",
    "u1_phase_check",
    "number_commutator",
    "first_quantized_oracle",
    "first_quantized_matrix",
]

BOSON = "boson"
FERMION = "fermion"
_ORACLE_MAX_PARTICLES = 4
_ORACLE_MAX_MODES = 6


# ---------------------------------------------------------------------------
# basis


def _compositions(n_modes: int, cap: int, total: int | None, max_total: int):
    """Occupation tuples in lexicographic order.

    ``total`` fixes the particle number; otherwise every state with at most
    ``max_total`` particles is produced.
    """
    out = []
    state = [0] * n_modes

    def rec(pos, used):
        if pos == n_modes:
            if total is None or used == total:
                out.append(tuple(state))
            return
        remaining_modes = n_modes - pos - 1
        budget = (total if total is not None else max_total) - used
        for n in range(0, min(cap, budget) + 1):
            if total is not None and total - used - n > remaining_modes * cap:
                continue
            state[pos] = n
            rec(pos + 1, used + n)
        state[pos] = 0

    rec(0, 0)
    return out


@dataclass(frozen=True, eq=False)
class OccupationBasis:
    """Enumerated many-body basis.

    Attributes
    ----------
    statistics : {"boson", "fermion"}
    n_modes : int
    n_particles : int or None
        Fixed particle number, or ``None`` for every sector up to ``max_particles``.
    max_particles : int
    cap : int
        Largest occupation of a single mode (1 for fermions).
    states : tuple of tuple of int
    """

    statistics: str
    n_modes: int
    n_particles: int | None
    max_particles: int
    cap: int
    states: tuple
    index_of: dict

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def is_fermion(self) -> bool:
        return self.statistics == FERMION

    @property
    def sector(self) -> str:
        return "all" if self.n_particles is None else "fixed"

    @property
    def particle_numbers(self) -> np.ndarray:
        return np.array([sum(s) for s in self.states], dtype=np.int64)

    def occupations(self) -> np.ndarray:
        return np.array(self.states, dtype=np.int64).reshape(self.dim, self.n_modes)

    def bitmasks(self) -> np.ndarray:
        """Fermion states as integers with bit ``i`` set when mode ``i`` is occupied."""
        if not self.is_fermion:
            raise ValueError("bit sets only describe fermion states")
        return np.array([sum(1 << i for i, n in enumerate(s) if n) for s in self.states], dtype=np.int64)

    def _key(self):
        return (self.statistics, self.n_modes, self.cap, self.states)

    def __eq__(self, other):
        return isinstance(other, OccupationBasis) and self._key() == other._key()

    def __hash__(self):
        return hash((self.statistics, self.n_modes, self.cap, self.n_particles, self.max_particles, self.dim))

    def __repr__(self):
        sector = f"N={self.n_particles}" if self.n_particles is not None else f"N<={self.max_particles}"
        return f"OccupationBasis({self.statistics}, modes={self.n_modes}, {sector}, cap={self.cap}, dim={self.dim})"


def enumerate_basis(statistics: str, n_modes: int, n_particles: int | None = None,
                    max_particles: int | None = None, cap: int | None = None) -> OccupationBasis:
    """Build an occupation-number basis.

    Parameters
    ----------
    statistics : {"boson", "fermion"}
    n_modes : int
    n_particles : int, optional
        Fix the particle number. Leave as ``None`` for a basis spanning all
        sectors with at most ``max_particles`` particles.
    max_particles : int, optional
        Upper particle number for the all-sector basis. Defaults to
        ``n_modes`` for fermions and ``n_modes * cap`` for bosons.
    cap : int, optional
        Per-mode occupation cap for bosons. Defaults to the largest particle
        number the sector allows. Ignored for fermions.

    Examples
    --------
    >>> enumerate_basis("fermion", 4, n_particles=2).dim
    6
    >>> enumerate_basis("boson", 2, n_particles=3).dim
    4
    """
    if statistics not in (BOSON, FERMION):
        raise ValueError("statistics must be 'boson' or 'fermion'")
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    if n_particles is not None and n_particles < 0:
        raise ValueError("n_particles must be non-negative")
    if statistics == FERMION:
        cap = 1
    elif cap is None:
        if n_particles is not None:
            cap = max(n_particles, 1)
        elif max_particles is not None:
            cap = max(max_particles, 1)
        else:
            raise ValueError("bosonic all-sector basis needs cap or max_particles")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    limit = n_modes * cap
    if n_particles is not None:
        if n_particles > limit:
            raise ValueError(f"sector N={n_particles} infeasible with {n_modes} modes and cap {cap}")
        max_particles = n_particles
    else:
        max_particles = limit if max_particles is None else min(max_particles, limit)
        if max_particles < 0:
            raise ValueError("max_particles must be non-negative")
    states = tuple(_compositions(n_modes, cap, n_particles, max_particles))
    index = {s: k for k, s in enumerate(states)}
    return OccupationBasis(statistics, n_modes, n_particles, max_particles, cap, states, index)


# ---------------------------------------------------------------------------
# sparse operator container


class SparseOperator:
    """Complex CSR matrix whose rows and columns are labelled by occupation bases."""

    def __init__(self, matrix, row_basis: OccupationBasis, col_basis: OccupationBasis):
        m = sp.csr_matrix(matrix, dtype=np.complex128)
        m.sum_duplicates()
        m.eliminate_zeros()
        if m.shape != (row_basis.dim, col_basis.dim):
            raise ValueError("matrix shape does not match the bases")
        self.matrix = m
        self.row_basis = row_basis
        self.col_basis = col_basis

    @classmethod
    def from_entries(cls, rows, cols, vals, row_basis, col_basis):
        m = sp.coo_matrix(
            (np.asarray(vals, dtype=np.complex128), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
            shape=(row_basis.dim, col_basis.dim),
        )
        return cls(m, row_basis, col_basis)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(self.matrix.conj().T, self.col_basis, self.row_basis)

    def __matmul__(self, other):
        if isinstance(other, SparseOperator):
            if self.col_basis != other.row_basis:
                raise ValueError("incompatible bases in operator product")
            return SparseOperator(self.matrix @ other.matrix, self.row_basis, other.col_basis)
        return self.matrix @ other

    def _same_space(self, other):
        if self.row_basis != other.row_basis or self.col_basis != other.col_basis:
            raise ValueError("operators act between different spaces")

    def __add__(self, other):
        self._same_space(other)
        return SparseOperator(self.matrix + other.matrix, self.row_basis, self.col_basis)

    def __sub__(self, other):
        self._same_space(other)
        return SparseOperator(self.matrix - other.matrix, self.row_basis, self.col_basis)

    def __mul__(self, scalar):
        return SparseOperator(self.matrix * scalar, self.row_basis, self.col_basis)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.matrix.data))) if self.matrix.nnz else 0.0

    def is_hermitian(self, tol: float = 0.0) -> bool:
        if self.row_basis != self.col_basis:
            return False
        diff = self.matrix - self.matrix.conj().T
        return (np.max(np.abs(diff.data)) if diff.nnz else 0.0) <= tol

    def to_coo_text(self) -> str:
        """Coordinate-list export, one ``row col re im`` line per stored entry."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        lines = [f"# rows={self.shape[0]} cols={self.shape[1]} nnz={self.nnz}"]
        for k in order:
            v = coo.data[k]
            lines.append(f"{coo.row[k]} {coo.col[k]} {v.real:.17g} {v.imag:.17g}")
        return "\n".join(lines) + "\n"

    def write_coo(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_coo_text())

    def __repr__(self):
        return f"SparseOperator(shape={self.shape}, nnz={self.nnz})"


# ---------------------------------------------------------------------------
# elementary actions on occupation tuples


def _annihilate(state, i, fermion):
    n = state[i]
    if n == 0:
        return None, 0.0
    new = list(state)
    new[i] = n - 1
    if fermion:
        amp = -1.0 if sum(state[:i]) % 2 else 1.0
    else:
        amp = math.sqrt(n)
    return tuple(new), amp


def _create(state, i, fermion, cap):
    n = state[i]
    if n >= cap:
        return None, 0.0
    new = list(state)
    new[i] = n + 1
    if fermion:
        amp = -1.0 if sum(state[:i]) % 2 else 1.0
    else:
        amp = math.sqrt(n + 1)
    return tuple(new), amp


def _neighbour_basis(basis: OccupationBasis, delta: int) -> OccupationBasis:
    if basis.n_particles is None:
        return basis
    target = basis.n_particles + delta
    if target < 0 or target > basis.n_modes * basis.cap:
        raise ValueError(f"target sector N={target} is absent")
    cap = None if basis.statistics == FERMION else basis.cap
    return enumerate_basis(basis.statistics, basis.n_modes, n_particles=target, cap=cap)


def _check_mode(basis, i):
    if not 0 <= i < basis.n_modes:
        raise ValueError(f"mode index {i} out of range")


def ladder_matrix(basis: OccupationBasis, mode_i: int, kind: str, target: OccupationBasis | None = None) -> SparseOperator:
    """Matrix of ``a_i^dagger`` (``kind="create"``) or ``a_i`` (``kind="annihilate"``).

    For a fixed-N basis the result maps into the N+1 or N-1 sector, which is
    built on the fly unless ``target`` is given. On an all-sector basis the
    operator is square and truncated at the basis edge.
    """
    _check_mode(basis, mode_i)
    if kind not in ("create", "annihilate"):
        raise ValueError("kind must be 'create' or 'annihilate'")
    delta = 1 if kind == "create" else -1
    if target is None:
        target = _neighbour_basis(basis, delta)
    fermion = basis.is_fermion
    rows, cols, vals = [], [], []
    for c, s in enumerate(basis.states):
        if kind == "create":
            new, amp = _create(s, mode_i, fermion, basis.cap)
        else:
            new, amp = _annihilate(s, mode_i, fermion)
        if new is None:
            continue
        r = target.index_of.get(new)
        if r is None:
            continue
        rows.append(r)
        cols.append(c)
        vals.append(amp)
    return SparseOperator.from_entries(rows, cols, vals, target, basis)


def _safe_columns(basis: OccupationBasis) -> np.ndarray:
    occ = basis.occupations()
    if basis.is_fermion:
        if basis.n_particles is None and basis.max_particles < basis.n_modes:
            return basis.particle_numbers < basis.max_particles
        return np.ones(basis.dim, dtype=bool)
    ok = np.all(occ < basis.cap, axis=1)
    if basis.n_particles is None:
        ok &= basis.particle_numbers < basis.max_particles
    return ok


def commutator_check(basis: OccupationBasis, i: int, j: int) -> float:
    """Largest entry of ``[a_i, a_j^dagger]_-+ - delta_ij``.

    Uses the anticommutator for fermions and the commutator for bosons,
    restricted to columns where no creation operator hits a truncation edge.
    """
    _check_mode(basis, i)
    _check_mode(basis, j)
    sign = 1.0 if basis.is_fermion else -1.0
    ident = sp.identity(basis.dim, dtype=np.complex128, format="csr")

    def product(first_kind, first_mode, second_kind, second_mode):
        try:
            a = ladder_matrix(basis, first_mode, first_kind)
        except ValueError:
            return sp.csr_matrix((basis.dim, basis.dim), dtype=np.complex128)
        b = ladder_matrix(a.row_basis, second_mode, second_kind, target=basis)
        return (b @ a).matrix

    # a_i a_j^dagger acts with a_j^dagger first
    m = product("create", j, "annihilate", i) + sign * product("annihilate", i, "create", j)
    if i == j:
        m = m - ident
    m = m.tocsc()[:, np.flatnonzero(_safe_columns(basis))]
    return float(np.max(np.abs(m.data))) if m.nnz else 0.0


# ---------------------------------------------------------------------------
# one- and two-body operators


def one_body_operator(basis: OccupationBasis, h) -> SparseOperator:
    """Second-quantized ``sum_ij h_ij a_i^dagger a_j``."""
    h = np.asarray(h, dtype=np.complex128)
    if h.shape != (basis.n_modes, basis.n_modes):
        raise ValueError(f"h must have shape ({basis.n_modes}, {basis.n_modes})")
    fermion, cap = basis.is_fermion, basis.cap
    nz = list(zip(*np.nonzero(h)))
    rows, cols, vals = [], [], []
    for c, s in enumerate(basis.states):
        for i, j in nz:
            s1, a1 = _annihilate(s, j, fermion)
            if s1 is None:
                continue
            s2, a2 = _create(s1, i, fermion, cap)
            if s2 is None:
                continue
            r = basis.index_of.get(s2)
            if r is None:
                continue
            rows.append(r)
            cols.append(c)
            vals.append(h[i, j] * a1 * a2)
    return SparseOperator.from_entries(rows, cols, vals, basis, basis)


def two_body_operator(basis: OccupationBasis, V) -> SparseOperator:
    """Second-quantized ``1/2 sum_ijkl V_ijkl a_i^dagger a_j^dagger a_l a_k``.

    ``V[i, j, k, l]`` is the two-particle matrix element ``<ij|V|kl>`` with
    particle 1 in modes ``i``/``k`` and particle 2 in ``j``/``l``.
    """
    V = np.asarray(V, dtype=np.complex128)
    M = basis.n_modes
    if V.shape != (M, M, M, M):
        raise ValueError(f"V must have shape ({M}, {M}, {M}, {M})")
    fermion, cap = basis.is_fermion, basis.cap
    nz_kl = {}
    for i, j, k, l in zip(*np.nonzero(V)):
        nz_kl.setdefault((k, l), []).append((i, j))
    rows, cols, vals = [], [], []
    for c, s in enumerate(basis.states):
        for (k, l), targets in nz_kl.items():
            s1, a1 = _annihilate(s, k, fermion)
            if s1 is None:
                continue
            s2, a2 = _annihilate(s1, l, fermion)
            if s2 is None:
                continue
            for i, j in targets:
                s3, a3 = _create(s2, j, fermion, cap)
                if s3 is None:
                    continue
                s4, a4 = _create(s3, i, fermion, cap)
                if s4 is None:
                    continue
                r = basis.index_of.get(s4)
                if r is None:
                    continue
                rows.append(r)
                cols.append(c)
                vals.append(0.5 * V[i, j, k, l] * a1 * a2 * a3 * a4)
    return SparseOperator.from_entries(rows, cols, vals, basis, basis)


def number_operator(basis: OccupationBasis) -> SparseOperator:
    """Total particle number, diagonal in the occupation basis."""
    n = basis.particle_numbers.astype(np.complex128)
    return SparseOperator(sp.diags(n, format="csr"), basis, basis)


@dataclass(frozen=True)
class ModeSet:
    """Single-particle modes with energies and optional labels."""

    energies: tuple
    labels: tuple | None = None

    def __post_init__(self):
        if self.labels is not None and len(self.labels) != len(self.energies):
            raise ValueError("labels and energies differ in length")

    @property
    def n_modes(self) -> int:
        return len(self.energies)


def noninteracting_hamiltonian(basis: OccupationBasis, modes: ModeSet) -> SparseOperator:
    """``sum_i eps_i n_i`` for the given mode energies."""
    if modes.n_modes != basis.n_modes:
        raise ValueError("mode count does not match the basis")
    return one_body_operator(basis, np.diag(np.asarray(modes.energies, dtype=float)))


def number_commutator(op: SparseOperator) -> float:
    """Largest entry of ``[F, N]``; zero for number-conserving operators."""
    coo = op.matrix.tocoo()
    nr = op.row_basis.particle_numbers[coo.row]
    nc = op.col_basis.particle_numbers[coo.col]
    d = np.abs(coo.data * (nc - nr))
    return float(d.max()) if d.size else 0.0


def u1_phase_check(op: SparseOperator, alpha: float = 0.7, charge: int | None = None) -> float:
    """Deviation of ``exp(-i alpha N) F exp(i alpha N)`` from ``exp(i alpha q) F``.

    ``q`` is the number of particles the operator removes (1 for ``a_i``,
    -1 for ``a_i^dagger``, 0 for number-conserving operators). It is inferred
    from the matrix when not given.
    """
    coo = op.matrix.tocoo()
    if coo.nnz == 0:
        return 0.0
    nr = op.row_basis.particle_numbers[coo.row]
    nc = op.col_basis.particle_numbers[coo.col]
    if charge is None:
        shifts = np.unique(nc - nr)
        if shifts.size != 1:
            raise ValueError("operator mixes different particle-number changes")
        charge = int(shifts[0])
    transformed = np.exp(-1j * alpha * nr) * coo.data * np.exp(1j * alpha * nc)
    return float(np.max(np.abs(transformed - np.exp(1j * alpha * charge) * coo.data)))


# ---------------------------------------------------------------------------
# first-quantized oracle


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass
class FirstQuantizedState:
    """Dense amplitude tensor ``Phi[i_1, ..., i_N]`` over single-particle modes."""

    statistics: str
    n_modes: int
    amplitudes: np.ndarray

    @property
    def n_particles(self) -> int:
        return self.amplitudes.ndim

    @classmethod
    def from_occupation(cls, occupation, statistics: str) -> "FirstQuantizedState":
        """(Anti)symmetrized, normalized tensor for an occupation tuple.

        The mode list is sorted ascending, matching the ordering of creation
        operators used by the Fock-space sign convention.
        """
        occupation = tuple(int(n) for n in occupation)
        n_modes = len(occupation)
        modes = [i for i, n in enumerate(occupation) for _ in range(n)]
        n_part = len(modes)
        if n_part > _ORACLE_MAX_PARTICLES or n_modes > _ORACLE_MAX_MODES:
            raise ValueError("dense tensor too large for the first-quantized oracle")
        fermion = statistics == FERMION
        if fermion and any(n > 1 for n in occupation):
            raise ValueError("antisymmetrization annihilates a doubly occupied fermion mode")
        amp = np.zeros((n_modes,) * n_part, dtype=np.complex128)
        for perm in itertools.permutations(range(n_part)):
            idx = tuple(modes[p] for p in perm)
            amp[idx] += _perm_sign(perm) if fermion else 1.0
        norm = np.linalg.norm(amp)
        if norm == 0:
            raise ValueError("state vanishes after (anti)symmetrization")
        return cls(statistics, n_modes, amp / norm)


def _apply_one_body(t: np.ndarray, h: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    for a in range(t.ndim):
        moved = np.tensordot(h, t, axes=([1], [a]))
        out += np.moveaxis(moved, 0, a)
    return out


def _apply_two_body(t: np.ndarray, V: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    for a in range(t.ndim):
        for b in range(t.ndim):
            if a == b:
                continue
            moved = np.moveaxis(t, (a, b), (0, 1))
            res = np.tensordot(V, moved, axes=([2, 3], [0, 1]))
            out += 0.5 * np.moveaxis(res, (0, 1), (a, b))
    return out


def first_quantized_oracle(fq: FirstQuantizedState, op_kind: str, payload, bra: FirstQuantizedState | None = None) -> complex:
    """Matrix element ``<bra| F |fq>`` computed directly on amplitude tensors.

    Parameters
    ----------
    fq : FirstQuantizedState
        Ket.
    op_kind : {"one_body", "two_body"}
        ``sum_a h_a`` or ``1/2 sum_{a != b} V_ab``.
    payload : ndarray
        ``h`` (shape ``(M, M)``) or ``V`` (shape ``(M, M, M, M)``).
    bra : FirstQuantizedState, optional
        Defaults to ``fq`` (expectation value).
    """
    bra = fq if bra is None else bra
    if bra.amplitudes.shape != fq.amplitudes.shape:
        raise ValueError("bra and ket live in different spaces")
    payload = np.asarray(payload, dtype=np.complex128)
    if op_kind == "one_body":
        out = _apply_one_body(fq.amplitudes, payload)
    elif op_kind == "two_body":
        out = _apply_two_body(fq.amplitudes, payload)
    else:
        raise ValueError("op_kind must be 'one_body' or 'two_body'")
    return complex(np.vdot(bra.amplitudes, out))


def first_quantized_matrix(basis: OccupationBasis, op_kind: str, payload) -> np.ndarray:
    """Dense matrix of a one- or two-body operator over a fixed-N basis, via the oracle."""
    if basis.n_particles is None:
        raise ValueError("the oracle needs a fixed particle number")
    if basis.n_particles == 0:
        return np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    states = [FirstQuantizedState.from_occupation(s, basis.statistics) for s in basis.states]
    payload = np.asarray(payload, dtype=np.complex128)
    apply = _apply_one_body if op_kind == "one_body" else _apply_two_body
    if op_kind not in ("one_body", "two_body"):
        raise ValueError("op_kind must be 'one_body' or 'two_body'")
    kets = [apply(s.amplitudes, payload) for s in states]
    bras = np.array([s.amplitudes.ravel() for s in states])
    return np.conj(bras) @ np.array([k.ravel() for k in kets]).T
