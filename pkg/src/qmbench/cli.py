"""Command-line scenario runner.

Usage::

    qmbench <scenario> [--key value]... [--config FILE] [--output PATH] [--format csv|json]
    qmbench --list

Each scenario declares a typed parameter schema. Values come from the
defaults, then from the ``[scenario]`` section of an INI config file, then
from command-line flags. Output is a table whose header records the scenario,
the full parameter set, the package version and the formulas reproduced.

Exit codes: 0 success, 2 usage error or unknown scenario, 3 tolerance failure
in a self-check scenario, 4 parameter schema violation, 5 output not writable.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from . import decay, fieldstates, fockspace, gaugefields, radiation, stringmodes

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TOLERANCE = 3
EXIT_SCHEMA = 4
EXIT_OUTPUT = 5

FORMATS = ("csv", "json")


class CliError(Exception):
    exit_code = EXIT_USAGE


class UsageError(CliError):
    exit_code = EXIT_USAGE


class SchemaError(CliError):
    exit_code = EXIT_SCHEMA


class OutputError(CliError):
    exit_code = EXIT_OUTPUT


@dataclass(frozen=True)
class Param:
    kind: type
    default: object
    help: str
    choices: tuple | None = None

    def convert(self, name: str, raw):
        try:
            if self.kind is int:
                value = int(raw) if not isinstance(raw, float) or raw.is_integer() else None
                if value is None:
                    raise ValueError
            elif self.kind is float:
                value = float(raw)
                if not math.isfinite(value):
                    raise ValueError
            else:
                value = str(raw)
        except (TypeError, ValueError):
            raise SchemaError(f"parameter {name!r} expects {self.kind.__name__}, got {raw!r}") from None
        if self.choices is not None and value not in self.choices:
            raise SchemaError(f"parameter {name!r} must be one of {', '.join(map(str, self.choices))}")
        return value


@dataclass
class Table:
    columns: list
    rows: list
    summary: dict = field(default_factory=dict)
    passed: bool | None = None  # set by self-check scenarios


@dataclass(frozen=True)
class ScenarioDef:
    name: str
    description: str
    anchors: tuple
    params: dict
    runner: Callable[[dict], Table]
    self_check: bool = False


@dataclass
class Scenario:
    """One resolved invocation."""

    name: str
    params: dict
    output_path: str | None = None
    format: str = "csv"


REGISTRY: dict[str, ScenarioDef] = {}


def scenario(name, description, anchors, params, self_check=False):
    def wrap(fn):
        REGISTRY[name] = ScenarioDef(name, description, tuple(anchors), params, fn, self_check)
        return fn

    return wrap


# ---------------------------------------------------------------------------
# scenarios


@scenario(
    "ab-ring",
    "Ring levels versus enclosed flux",
    ["E_M = (M + Phi/Phi0)^2 / (2 a^2)"],
    {
        "radius": Param(float, 1.0, "ring radius"),
        "flux": Param(float, 0.0, "enclosed flux in flux quanta"),
        "mmax": Param(int, 5, "angular momenta -mmax..mmax"),
    },
)
def _ab_ring(p):
    cfg = gaugefields.RingConfig(p["radius"], p["flux"], p["mmax"])
    rows = gaugefields.ab_ring_spectrum(cfg)
    return Table(["M", "energy"], [list(r) for r in rows])


@scenario(
    "ab-sector",
    "Ring segment levels: closed form and flux-threaded finite differences",
    ["E_n = pi^2 n^2 / (2 a^2 opening^2), flux independent"],
    {
        "radius": Param(float, 1.0, "ring radius"),
        "flux": Param(float, 0.3, "flux in flux quanta"),
        "opening": Param(float, math.pi, "angular width of the segment"),
        "levels": Param(int, 5, "number of levels"),
        "points": Param(int, 400, "interior grid points"),
    },
)
def _ab_sector(p):
    cfg = gaugefields.RingConfig(p["radius"], p["flux"])
    bare = gaugefields.RingConfig(p["radius"], 0.0)
    exact = gaugefields.ab_sector_spectrum(cfg, p["opening"], p["levels"])
    grid = gaugefields.ab_sector_spectrum_grid(cfg, p["opening"], p["levels"], p["points"])
    grid0 = gaugefields.ab_sector_spectrum_grid(bare, p["opening"], p["levels"], p["points"])
    rows = [[n + 1, exact[n], grid[n], grid[n] - grid0[n]] for n in range(p["levels"])]
    return Table(["n", "energy_closed", "energy_grid", "flux_shift_grid"], rows)


def _free_landau(b, half_width, step, levels):
    x = np.arange(-half_width, half_width + 0.5 * step, step)
    prob = gaugefields.EdgeProblem(x, np.zeros_like(x), 0.0, levels)
    return gaugefields.edge_spectrum(gaugefields.LandauConfig(b), prob).energies


@scenario(
    "landau-levels",
    "Landau levels from a finite-difference solve with Richardson extrapolation",
    ["E_n = omega_c (n + 1/2)"],
    {
        "b": Param(float, 1.0, "magnetic field"),
        "levels": Param(int, 4, "number of levels"),
        "step": Param(float, 0.02, "coarse grid step in magnetic lengths"),
        "half-width": Param(float, 12.0, "box half-width in magnetic lengths"),
    },
)
def _landau_levels(p):
    ell = 1 / math.sqrt(p["b"])
    coarse = _free_landau(p["b"], p["half-width"] * ell, p["step"] * ell, p["levels"])
    fine = _free_landau(p["b"], p["half-width"] * ell, 0.5 * p["step"] * ell, p["levels"])
    cfg = gaugefields.LandauConfig(p["b"])
    rows = []
    for n in range(p["levels"]):
        exact = gaugefields.landau_energy(cfg, n)
        extrap = gaugefields.richardson(coarse[n], fine[n])
        rows.append([n, exact, coarse[n], fine[n], extrap, extrap - exact])
    return Table(["n", "exact", "grid_h", "grid_h2", "richardson", "error"], rows)


def _edge_problem(p, x0=0.0):
    ell = 1 / math.sqrt(p["b"])
    half = p["wall"] + 8 * ell
    step = min(0.05, ell / 20)
    x = np.arange(-half, half + 0.5 * step, step)
    pot = gaugefields.soft_wall(x, -p["wall"], p["wall"], p["height"], p["width"])
    return gaugefields.EdgeProblem(x, pot, x0, p["levels"])


_EDGE_PARAMS = {
    "b": Param(float, 1.0, "magnetic field"),
    "wall": Param(float, 6.0, "walls at +-wall"),
    "height": Param(float, 10.0, "wall height"),
    "width": Param(float, 0.5, "wall softness"),
    "levels": Param(int, 3, "levels per guiding center"),
}


@scenario(
    "landau-edge",
    "Edge-state dispersion eps_n(x0) across a soft-walled strip",
    ["H = p^2/2 + omega_c^2 (x - x0)^2 / 2 + V(x)"],
    dict(_EDGE_PARAMS, **{
        "x0-min": Param(float, -9.0, "first guiding center"),
        "x0-max": Param(float, 9.0, "last guiding center"),
        "points": Param(int, 37, "number of guiding centers"),
    }),
)
def _landau_edge(p):
    prob = _edge_problem(p)
    cfg = gaugefields.LandauConfig(p["b"])
    x0 = np.linspace(p["x0-min"], p["x0-max"], p["points"])
    eps = gaugefields.edge_dispersion(cfg, prob, x0)
    rows = [[x0[i], *eps[i]] for i in range(x0.size)]
    return Table(["x0"] + [f"eps_{n}" for n in range(p["levels"])], rows)


@scenario(
    "landau-current",
    "Edge current: density integral versus the slope of the dispersion",
    ["d eps / d x0 = omega_c L_y I_y", "j_y = B (x0 - x) rho"],
    dict(_EDGE_PARAMS, **{
        "x0": Param(float, 6.0, "guiding center"),
        "tolerance": Param(float, 0.01, "allowed relative mismatch"),
    }),
    self_check=True,
)
def _landau_current(p):
    cfg = gaugefields.LandauConfig(p["b"])
    prob = _edge_problem(p, p["x0"])
    rows, worst = [], 0.0
    for level in range(p["levels"]):
        cur = gaugefields.edge_current(cfg, prob, level)
        scale = max(abs(cur.spectral), 1e-12)
        rel = abs(cur.profile - cur.spectral) / scale
        worst = max(worst, rel)
        rows.append([level, cur.profile, cur.spectral, rel])
    return Table(["level", "current_profile", "current_spectral", "relative_mismatch"], rows,
                 {"max_relative_mismatch": worst}, worst <= p["tolerance"])


@scenario(
    "string-modes",
    "Normal modes of a string and their ground-state spread",
    ["k = pi nu / L (fixed) or 2 pi nu / L (periodic)", "omega = v |k|"],
    {
        "length": Param(float, math.pi, "string length"),
        "speed": Param(float, 1.0, "wave speed"),
        "cutoff": Param(int, 10, "highest mode index"),
        "boundary": Param(str, "fixed", "boundary condition", ("fixed", "periodic")),
    },
)
def _string_modes(p):
    cfg = stringmodes.StringConfig(p["length"], p["speed"], p["cutoff"], p["boundary"])
    idx, k, w = stringmodes.mode_table(cfg)
    var = stringmodes.ground_state_variance(cfg)
    rows = [[int(idx[i]), k[i], w[i], var[i]] for i in range(idx.size)]
    return Table(["index", "k", "omega", "ground_variance"], rows)


@scenario(
    "casimir-1d",
    "Zero-point energy of a string pinned at d, against the closed form",
    ["Delta E = -(pi v / 24) (1/d + 1/(L-d) - 4/L)"],
    {
        "length": Param(float, 1.0, "string length"),
        "speed": Param(float, 1.0, "wave speed"),
        "cutoff": Param(int, 10000, "cutoff mode index nu_c"),
        "regulator": Param(str, "soft", "cutoff shape", ("soft", "hard")),
        "d-min": Param(float, 0.05, "first node position over L"),
        "d-max": Param(float, 0.45, "last node position over L"),
        "points": Param(int, 9, "number of positions"),
    },
)
def _casimir_1d(p):
    L, v = p["length"], p["speed"]
    cfg = stringmodes.StringConfig(L, v, p["cutoff"])
    rows = []
    for frac in np.linspace(p["d-min"], p["d-max"], p["points"]):
        d = frac * L
        de, force = stringmodes.casimir_energy(cfg, d, p["regulator"])
        closed = stringmodes.casimir_closed_form(L, v, d)
        rows.append([d, de, closed, force, stringmodes.casimir_force_closed_form(L, v, d)])
    return Table(["d", "delta_e", "delta_e_closed", "force", "force_closed"], rows)


@scenario(
    "casimir-sum",
    "Soft-cutoff sum of mode indices with the divergence removed",
    ["sum nu exp(-nu/nu_c) - nu_c^2 -> -1/12"],
    {
        "nu-min": Param(float, 10.0, "smallest cutoff"),
        "nu-max": Param(float, 1000.0, "largest cutoff"),
        "points": Param(int, 5, "log-spaced cutoffs"),
        "tolerance": Param(float, 1e-6, "allowed error at the largest cutoff"),
    },
    self_check=True,
)
def _casimir_sum(p):
    rows = []
    for nu in np.geomspace(p["nu-min"], p["nu-max"], p["points"]):
        s = stringmodes.casimir_regularized_sum(float(nu))
        rows.append([nu, s, s + 1 / 12, 1 / (240 * nu * nu)])
    err = abs(rows[-1][2])
    return Table(["nu_c", "regularized_sum", "error", "predicted_error"], rows,
                 {"error_at_max": err}, err <= p["tolerance"])


@scenario(
    "coherent-evolve",
    "Coherent-state means and spreads against the classical oscillator",
    ["alpha(t) = alpha exp(-i omega t)", "dq dp = 1/2"],
    {
        "alpha-re": Param(float, 2.0, "real part of alpha"),
        "alpha-im": Param(float, 0.5, "imaginary part of alpha"),
        "omega": Param(float, 1.0, "mode frequency"),
        "periods": Param(float, 5.0, "evolution time in periods"),
        "steps": Param(int, 50, "time samples"),
    },
)
def _coherent_evolve(p):
    w = p["omega"]
    state = fieldstates.CoherentState(complex(p["alpha-re"], p["alpha-im"]), w)
    q0, p0 = fieldstates.phase_space_point(state)
    rows = []
    for t in np.linspace(0.0, p["periods"] * 2 * math.pi / w, p["steps"] + 1):
        st = fieldstates.coherent_evolve(state, t)
        qm, pm = fieldstates.phase_space_means(st)
        qc, pc = fieldstates.classical_trajectory(q0, p0, w, t)
        dq, dp, prod = fieldstates.uncertainties(st)
        rows.append([t, qm, pm, float(qc), float(pc), dq, dp, prod])
    return Table(["t", "q_mean", "p_mean", "q_classical", "p_classical", "dq", "dp", "dq_dp"], rows)


@scenario(
    "coherent-poisson",
    "Photon-number distribution of a coherent state",
    ["P_n = exp(-|alpha|^2) |alpha|^(2n) / n!"],
    {
        "alpha-re": Param(float, 2.0, "real part of alpha"),
        "alpha-im": Param(float, 0.0, "imaginary part of alpha"),
        "nmax": Param(int, 20, "largest photon number listed"),
    },
)
def _coherent_poisson(p):
    a = complex(p["alpha-re"], p["alpha-im"])
    c = fieldstates.coherent_amplitudes(fieldstates.CoherentState(a, n_max=max(p["nmax"], fieldstates.truncation_for(a))))
    rows = [[n, abs(c[n]) ** 2] for n in range(p["nmax"] + 1)]
    mean = math.fsum(n * abs(c[n]) ** 2 for n in range(c.size))
    return Table(["n", "probability"], rows, {"mean_number": mean, "alpha_squared": abs(a) ** 2})


@scenario(
    "planck",
    "Black-body spectral density and mode occupation",
    ["u(nu) = 8 pi h nu^3 / (exp(h nu / T) - 1)", "<N> = 1 / (exp(omega / T) - 1)"],
    {
        "temperature": Param(float, 1.0, "temperature (k_B = 1)"),
        "nu-max": Param(float, 2.0, "largest frequency"),
        "points": Param(int, 41, "frequency samples"),
    },
)
def _planck(p):
    T = p["temperature"]
    rows = []
    for nu in np.linspace(0.0, p["nu-max"], p["points"]):
        occ = fieldstates.thermal_occupation(fieldstates.ThermalMode(2 * math.pi * nu, T)) if nu > 0 else 0.0
        rows.append([nu, fieldstates.planck_density(nu, T), occ])
    peak = fieldstates.wien_peak() * T / (2 * math.pi)
    return Table(["nu", "energy_density", "occupation"], rows, {"peak_frequency": peak})


_DECAY_PARAMS = {
    "levels": Param(int, 2000, "continuum levels"),
    "bandwidth": Param(float, 20.0, "band width"),
    "coupling": Param(float, 0.05, "constant coupling V"),
    "e0": Param(float, 0.0, "discrete level energy (band centre is 0)"),
    "min-ratio": Param(float, 10.0, "required bandwidth / Gamma"),
}


def _decay_problem(p):
    return decay.flat_band(p["e0"], p["levels"], p["bandwidth"], p["coupling"], center=0.0)


@scenario(
    "ww-decay",
    "Survival probability of a level coupled to a flat continuum",
    ["Gamma = 2 pi |V|^2 rho", "|c0(t)|^2 ~ exp(-Gamma t)"],
    dict(_DECAY_PARAMS, **{"points": Param(int, 401, "time samples")}),
)
def _ww_decay(p):
    prob = _decay_problem(p)
    gr = decay.golden_rule_details(prob)
    if gr.gamma <= 0:
        raise SchemaError("e0 lies outside the band")
    t_end = min(5.0 / gr.gamma, 0.5 * decay.revival_time(prob))
    times = np.linspace(0.0, t_end, p["points"])
    res = decay.simulate(prob, times, p["min-ratio"])
    amp = res.survival
    surv = np.abs(amp) ** 2
    rows = [[times[i], amp[i].real, amp[i].imag, surv[i], math.exp(-gr.gamma * times[i])] for i in range(times.size)]
    summary = {
        "gamma_fit": res.gamma_fit,
        "gamma_golden": res.gamma_golden,
        "delta_e": res.delta_e,
        "revival_time": decay.revival_time(prob),
    }
    return Table(["t", "amplitude_re", "amplitude_im", "survival", "golden_rule_exponential"], rows, summary)


@scenario(
    "ww-lineshape",
    "Strength of the discrete level over exact eigenstates with its Lorentzian fit",
    ["S(E) = (Gamma / 2 pi) / ((E - E0 - Delta E)^2 + Gamma^2 / 4)"],
    dict(_DECAY_PARAMS, **{
        "span": Param(float, 5.0, "half-range in units of Gamma"),
        "points": Param(int, 201, "energy samples"),
    }),
)
def _ww_lineshape(p):
    prob = _decay_problem(p)
    res = decay.simulate(prob, None, p["min-ratio"])
    g = res.gamma_golden
    grid = np.linspace(prob.e0 - p["span"] * g, prob.e0 + p["span"] * g, p["points"])
    dens = decay.line_shape(prob, grid)
    lor = decay.lorentzian(grid, res.lorentz_center, res.lorentz_fwhm)
    rows = [[grid[i], dens[i], lor[i]] for i in range(grid.size)]
    summary = {"lorentz_center": res.lorentz_center, "lorentz_fwhm": res.lorentz_fwhm,
               "gamma_golden": g, "delta_e": res.delta_e}
    return Table(["energy", "strength_density", "lorentzian_fit"], rows, summary)


@scenario(
    "dipole-pattern",
    "Angular distribution of emitted photons per polarization",
    ["E1: |d . lambda|^2", "M1: |(k x lambda) . M|^2", "E2: |k . Q . lambda|^2"],
    {
        "multipole": Param(str, "E1", "transition type", ("E1", "E2", "M1")),
        "mu": Param(int, 0, "spherical component of the matrix element"),
        "omega": Param(float, 1.0, "transition frequency"),
        "ntheta": Param(int, 19, "polar samples"),
        "nphi": Param(int, 1, "azimuthal samples"),
    },
)
def _dipole_pattern(p):
    mu = p["mu"]
    if p["multipole"] == "E2":
        if abs(mu) > 2:
            raise SchemaError("mu must be in -2..2 for E2")
        spec = radiation.EmissionSpec(p["omega"], "E2", me_tensor=radiation.quadrupole_channel_tensor(mu))
    else:
        if abs(mu) > 1:
            raise SchemaError("mu must be in -1..1 for E1 and M1")
        # Cartesian vector whose spherical component mu is 1 and the rest 0
        vec = np.linalg.solve(radiation._CART_TO_SPH, np.eye(3)[radiation._SPH_ROW[mu]])
        spec = radiation.EmissionSpec(p["omega"], p["multipole"], me_vector=vec)
    table = radiation.angular_map(spec, p["ntheta"], p["nphi"])
    rows = [list(r) for r in table]
    return Table(["theta", "phi", "rate_lambda1", "rate_lambda2"], rows,
                 {"total_rate": radiation.angular_integral(spec)})


@scenario(
    "selection-rule",
    "Multipole selection rule query",
    ["triangle(l, L, l')", "|m' - m| <= L", "parity change (-1)^L for E_L, (-1)^(L+1) for M_L"],
    {
        "multipole": Param(str, "E1", "E0, E1, E2, M1, ...", None),
        "l": Param(int, 0, "initial orbital momentum"),
        "m": Param(int, 0, "initial projection"),
        "lf": Param(int, 1, "final orbital momentum"),
        "mf": Param(int, 0, "final projection"),
        "parity-i": Param(int, 0, "initial parity (+1/-1, 0 for (-1)^l)", (-1, 0, 1)),
        "parity-f": Param(int, 0, "final parity (+1/-1, 0 for (-1)^l')", (-1, 0, 1)),
    },
)
def _selection_rule(p):
    try:
        res = radiation.selection_rules(p["multipole"], p["l"], p["m"], p["parity-i"] or None,
                                        p["lf"], p["mf"], p["parity-f"] or None)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    return Table(["allowed", "reason"], [[int(res.allowed), res.reason]])


@scenario(
    "hydrogen-dipole",
    "Hydrogen dipole matrix elements between two (n, l) shells",
    ["<n'l'm'| r_mu |nlm> = R_int sqrt(4 pi / 3) Gaunt(l'm', 1mu, lm)"],
    {
        "n": Param(int, 2, "initial n"),
        "l": Param(int, 1, "initial l"),
        "nf": Param(int, 1, "final n"),
        "lf": Param(int, 0, "final l"),
    },
)
def _hydrogen_dipole(p):
    rows = []
    try:
        for m in range(-p["l"], p["l"] + 1):
            for mu in (-1, 0, 1):
                mf = m + mu
                if abs(mf) > p["lf"]:
                    continue
                val = radiation.hydrogen_multipole_me((p["n"], p["l"], m), (p["nf"], p["lf"], mf), "E1", mu)
                rows.append([m, mu, mf, val])
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    return Table(["m", "mu", "mf", "element"], rows)


@scenario(
    "fock-check",
    "Second-quantized operators against first-quantized brute force",
    ["sum h_ij a+_i a_j", "1/2 sum V_ijkl a+_i a+_j a_l a_k", "{a_i, a+_j} = delta_ij"],
    {
        "statistics": Param(str, "fermion", "particle statistics", ("boson", "fermion")),
        "modes": Param(int, 4, "single-particle modes"),
        "particles": Param(int, 2, "particle number"),
        "samples": Param(int, 5, "random operators of each kind"),
        "seed": Param(int, 0, "random seed"),
        "tolerance": Param(float, 1e-12, "allowed deviation"),
    },
    self_check=True,
)
def _fock_check(p):
    rng = np.random.default_rng(p["seed"])
    n = p["modes"]
    try:
        basis = fockspace.enumerate_basis(p["statistics"], n, p["particles"])
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    rows = []
    for s in range(p["samples"]):
        h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = h + h.conj().T
        v = rng.normal(size=(n,) * 4)
        v = v + v.transpose(1, 0, 3, 2)
        for kind, payload, op in (
            ("one_body", h, fockspace.one_body_operator(basis, h)),
            ("two_body", v, fockspace.two_body_operator(basis, v)),
        ):
            oracle = fockspace.first_quantized_matrix(basis, kind, payload)
            rows.append([s, kind, float(np.max(np.abs(op.toarray() - oracle)))])
    # (anti)commutators on the full Fock space (bosons truncated at 3 quanta per mode)
    if p["statistics"] == "fermion":
        full = fockspace.enumerate_basis("fermion", n, max_particles=n)
    else:
        full = fockspace.enumerate_basis("boson", n, max_particles=3 * n, cap=3)
    worst_alg = max(fockspace.commutator_check(full, i, j) for i in range(n) for j in range(n))
    worst = max(r[2] for r in rows)
    return Table(["sample", "operator", "max_deviation"], rows,
                 {"max_deviation": worst, "max_algebra_residual": worst_alg},
                 worst <= p["tolerance"] and worst_alg <= p["tolerance"])


@scenario(
    "gauge-currents",
    "Plane-wave current in a uniform field: static versus time-dependent gauge",
    ["j = q (k + q E t) / m", "j = q k / m - q^2 A / m, A = -E t"],
    {
        "samples": Param(int, 100, "random (k, E, t) cases"),
        "seed": Param(int, 0, "random seed"),
        "tolerance": Param(float, 1e-14, "allowed relative difference"),
    },
    self_check=True,
)
def _gauge_currents(p):
    rng = np.random.default_rng(p["seed"])
    rows, ok = [], True
    for _ in range(p["samples"]):
        k, e, t = rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0, 10)
        cur = gaugefields.gauge_current_check(e, k, t)
        a, b = cur.static_total, cur.timedep_total
        diff = abs(a - b)
        ok &= diff <= p["tolerance"] * max(1.0, abs(a))
        rows.append([k, e, t, a, b, diff])
    return Table(["k", "e_field", "t", "static_total", "timedep_total", "difference"], rows,
                 {"max_difference": max(r[5] for r in rows)}, bool(ok))


# ---------------------------------------------------------------------------
# encoding


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, (complex, np.complexfloating)):
        raise TypeError("complex values must be split before encoding")
    return str(x)


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(format(float(x), ".17g"))
    return str(x)


def _header(defn: ScenarioDef, sc: Scenario, table: Table) -> dict:
    return {
        "scenario": defn.name,
        "version": __version__,
        "anchors": list(defn.anchors),
        "params": {k: sc.params[k] for k in sorted(sc.params)},
        "summary": dict(table.summary),
    }


def encode_csv(defn: ScenarioDef, sc: Scenario, table: Table) -> str:
    head = _header(defn, sc, table)
    buf = io.StringIO()
    buf.write(f"# scenario: {head['scenario']}\n")
    buf.write(f"# version: {head['version']}\n")
    for a in head["anchors"]:
        buf.write(f"# anchor: {a}\n")
    buf.write("# params: " + " ".join(f"{k}={_fmt(v)}" for k, v in head["params"].items()) + "\n")
    if head["summary"]:
        buf.write("# summary: " + " ".join(f"{k}={_fmt(v)}" for k, v in head["summary"].items()) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def encode_json(defn: ScenarioDef, sc: Scenario, table: Table) -> str:
    head = _header(defn, sc, table)
    head["params"] = {k: _json_value(v) for k, v in head["params"].items()}
    head["summary"] = {k: _json_value(v) for k, v in head["summary"].items()}
    head["columns"] = list(table.columns)
    head["rows"] = [[_json_value(v) for v in row] for row in table.rows]
    return json.dumps(head, indent=1, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# driver


def list_scenarios() -> str:
    """One line per registered scenario: name, description and reproduced formulas."""
    lines = []
    for name in sorted(REGISTRY):
        d = REGISTRY[name]
        lines.append(f"{name:18s} {d.description}  [{'; '.join(d.anchors)}]")
    return "\n".join(lines) + "\n"


def _schema_help(defn: ScenarioDef) -> str:
    parts = [f"parameters of {defn.name}:"]
    for key, prm in defn.params.items():
        extra = f" one of {prm.choices}" if prm.choices else ""
        parts.append(f"  --{key} ({prm.kind.__name__}, default {prm.default!r}){extra}: {prm.help}")
    return "\n".join(parts)


def resolve(name: str, flags: dict, config_path: str | None = None) -> Scenario:
    """Merge defaults, config-file values and flags into a validated :class:`Scenario`."""
    if name not in REGISTRY:
        raise UsageError(f"unknown scenario {name!r}; use --list")
    defn = REGISTRY[name]
    raw = {}
    output, fmt = None, None
    if config_path is not None:
        cp = configparser.ConfigParser()
        try:
            with open(config_path, encoding="utf-8") as fh:
                cp.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise UsageError(f"cannot read config {config_path}: {exc}") from None
        if cp.has_section(name):
            for key, value in cp.items(name):
                if key == "output":
                    output = value
                elif key == "format":
                    fmt = value
                else:
                    raw[key.replace("_", "-")] = value
    for key, value in flags.items():
        if key == "output":
            output = value
        elif key == "format":
            fmt = value
        else:
            raw[key] = value
    unknown = sorted(set(raw) - set(defn.params))
    if unknown:
        raise SchemaError(f"unknown parameter(s) for {name}: {', '.join(unknown)}\n{_schema_help(defn)}")
    params = {key: prm.convert(key, raw.get(key, prm.default)) for key, prm in defn.params.items()}
    fmt = fmt or "csv"
    if fmt not in FORMATS:
        raise UsageError(f"format must be one of {FORMATS}")
    return Scenario(name, params, output, fmt)


def execute(sc: Scenario) -> tuple[str, Table]:
    """Run a resolved scenario and return the encoded text and the table."""
    defn = REGISTRY[sc.name]
    try:
        table = defn.runner(sc.params)
    except CliError:
        raise
    except ValueError as exc:
        raise SchemaError(f"{sc.name}: {exc}") from None
    encoder = encode_json if sc.format == "json" else encode_csv
    return encoder(defn, sc, table), table


def run(sc: Scenario, stdout=None) -> int:
    """Execute, write the artifact and return the exit status."""
    text, table = execute(sc)
    if sc.output_path:
        try:
            with open(sc.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OutputError(f"cannot write {sc.output_path}: {exc}") from None
    else:
        (stdout or sys.stdout).write(text)
    if table.passed is False:
        return EXIT_TOLERANCE
    return EXIT_OK


def _split_flags(tokens: list[str]) -> dict:
    flags = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--") or len(tok) == 2:
            raise UsageError(f"expected --key value, got {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(tokens):
                raise UsageError(f"flag --{key} needs a value")
            value = tokens[i + 1]
            i += 2
        flags[key.replace("_", "-")] = value
    return flags


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qmbench",
        allow_abbrev=False,  # scenario flags such as --l must not expand to --list
        description="Run a named numerical experiment and write a CSV or JSON table.",
        epilog="Scenario parameters are given as --key value; run with --list to see scenarios.",
    )
    p.add_argument("scenario", nargs="?", help="registered scenario name")
    p.add_argument("--list", action="store_true", help="list scenarios and exit")
    p.add_argument("--config", help="INI file with a [scenario] section")
    p.add_argument("--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=FORMATS, help="output encoding (default csv)")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args, rest = parser.parse_known_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else EXIT_USAGE
    if args.list:
        sys.stdout.write(list_scenarios())
        return EXIT_OK
    try:
        if not args.scenario:
            raise UsageError("no scenario given")
        flags = _split_flags(rest)
        if args.output is not None:
            flags["output"] = args.output
        if args.format is not None:
            flags["format"] = args.format
        sc = resolve(args.scenario, flags, args.config)
        return run(sc)
    except CliError as exc:
        sys.stderr.write(f"qmbench: {exc}\n")
        if isinstance(exc, UsageError):
            sys.stderr.write(parser.format_usage())
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
