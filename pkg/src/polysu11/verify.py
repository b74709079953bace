"""Invariant suite behind ``polysu11 verify`` and the acceptance tests.

Each check yields one record {name, criterion, value, tolerance, pass}; a
check passes when value <= tolerance.  Checks that do not apply to the given
input (no oscillator parameter, no positive weight) are kept with pass = None
so that every criterion shows up in the report.
"""

from __future__ import annotations

import cmath
import json
import math
import os
import platform
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln

from . import __version__
from .algebra import AlgebraError, AlgebraSpec, deformation_roots, eval_structure_function, structure_factor
from .oscillator import (
    OscillatorParams,
    cubic_algebra_spec,
    d_algebra_bracket_defect,
    grid_spectrum,
    ladder_coefficients,
    spectrum,
)
from .rep import build_rep, commutator_defect, polynomial_commutator_defect, structure_defects
from .states import (
    DEFAULT_TOL,
    Family,
    build_state,
    lowering_eigendefect,
    normalization_closed_form,
    normalization_series,
    radius_of_convergence,
    radius_ratio,
)
from .unity import moment_quadrature, moment_target, unity_defect, weight_spec, weight_table

__all__ = ["CheckRecord", "VerificationReport", "TOLERANCES", "SEED", "default_tol", "run_suite",
           "linear_limit_defects", "weight_grid_checks"]

SEED = 20240611

TOLERANCES = {
    "structure": 1e-10,
    "eigenrelation": 1e-8,
    "normalization": 1e-10,
    "linear_limit": 1e-6,
    "moment": 1e-5,
    "unity": 1e-4,
    "radius_finite": 1e-2,
    "radius_divergent": 1.0,
    "spectrum": 1e-3,
    "ladder": 1e-12,
    "positivity": 0.0,
}

EIGEN_RADII = (0.5, 1.0, 2.5, 5.0)
NORMALIZATION_POINTS = 20
MOMENT_ORDERS = 6
UNITY_M = 5
D_ALGEBRA_SAMPLES = ((0.1, -0.3), (0.25, 0.2), (0.4, -0.5), (0.3, 0.0), (0.2, -0.9))
LINEAR_ALPHA2 = 1e-8


def default_tol() -> float:
    """Coherent-state truncation tolerance; POLYSU11_TOL overrides the built-in 1e-14."""
    raw = os.environ.get("POLYSU11_TOL")
    if raw is None:
        return DEFAULT_TOL
    value = float(raw)
    if not 0 < value < 1:
        raise ValueError(f"POLYSU11_TOL must lie in (0, 1), got {raw!r}")
    return value


@dataclass
class CheckRecord:
    name: str
    criterion: int
    value: Optional[float]
    tolerance: float
    passed: Optional[bool]
    note: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass
class VerificationReport:
    spec: dict
    gamma: Optional[float]
    checks: list[CheckRecord] = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    @property
    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if c.passed is False]

    def add(self, name: str, criterion: int, value: float, tol_key: str, note: str = ""):
        tol = TOLERANCES[tol_key]
        value = float(value)
        self.checks.append(CheckRecord(name, criterion, value, tol, bool(value <= tol), note))

    def skip(self, name: str, criterion: int, tol_key: str, note: str):
        self.checks.append(CheckRecord(name, criterion, None, TOLERANCES[tol_key], None, note))

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "gamma": self.gamma,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
            "notes": self.notes,
            "environment": self.environment,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"


def _environment(tol: float) -> dict:
    return {
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "seed": SEED,
        "state_tol": tol,
        "tolerances": dict(TOLERANCES),
    }


def _sample_zetas(radii, rng) -> list[complex]:
    return [r * cmath.exp(2j * math.pi * rng.random()) for r in radii]


def _structure_checks(report, spec, trunc, label="", criterion=1):
    rep = build_rep(spec, trunc)
    sd = structure_defects(rep)
    report.add(f"commutator_defect{label}", criterion, commutator_defect(rep), "structure")
    report.add(f"casimir_defect{label}", criterion, sd.casimir_defect, "structure")
    report.add(f"adjoint_defect{label}", criterion, sd.adjoint_defect, "structure")


def _eigen_check(report, spec, tol, rng, label=""):
    worst = 0.0
    for zeta in _sample_zetas(EIGEN_RADII, rng):
        state = build_state(spec, Family.BG, zeta, tol)
        rep = build_rep(spec, state.N + 1)
        worst = max(worst, lowering_eigendefect(rep, state).minus_defect)
    report.add(f"bg_lowering_eigendefect{label}", 2, worst, "eigenrelation",
               note=f"|xi| in {list(EIGEN_RADII)}")


def _normalization_checks(report, spec, label=""):
    for family in (Family.BG, Family.P):
        radius = radius_of_convergence(spec, family)
        top = 5.0 if math.isinf(radius) else 0.95 * math.sqrt(radius)
        worst = 0.0
        for r in np.linspace(top / NORMALIZATION_POINTS, top, NORMALIZATION_POINTS):
            closed = normalization_closed_form(spec, family, float(r))
            series = normalization_series(spec, family, float(r))
            worst = max(worst, abs(closed / series - 1.0))
        report.add(f"normalization_{family.value}{label}", 3, worst, "normalization",
                   note=f"{NORMALIZATION_POINTS} points, |zeta| <= {top:.4g}")


def linear_limit_defects(k: float, tol: float = DEFAULT_TOL, xi: complex = 1.5 + 0.5j,
                         eta: complex = 0.3 - 0.4j) -> tuple[float, float]:
    """Sup-norm distance between p = 2 states with alpha = (1, 1e-8) and the undeformed closed forms."""
    spec = AlgebraSpec(2, (1.0, LINEAR_ALPHA2), k)
    out = []
    for family, zeta in ((Family.BG, xi), (Family.P, eta)):
        state = build_state(spec, family, zeta, tol)
        n = np.arange(state.N + 1, dtype=float)
        log_poch = gammaln(2.0 * k + n) - gammaln(2.0 * k)
        log_fact = gammaln(n + 1.0)
        if family is Family.BG:
            mag = np.exp(n * math.log(abs(zeta)) - 0.5 * (log_fact + log_poch))
            mag /= math.sqrt(math.fsum(mag * mag))
        else:
            r2 = abs(zeta) ** 2
            mag = (1.0 - r2) ** k * np.exp(n * math.log(abs(zeta)) + 0.5 * (log_poch - log_fact))
        ref = mag * np.exp(1j * n * cmath.phase(zeta))
        out.append(float(np.max(np.abs(state.coeffs - ref))))
    return out[0], out[1]


def _moment_checks(report, spec, label=""):
    for family in (Family.BG, Family.P):
        name = f"moment_law_{family.value}{label}"
        try:
            ws = weight_spec(spec, family)
        except (AlgebraError, ValueError) as exc:
            report.skip(name, 5, "moment", f"no positive weight: {exc}")
            report.skip(f"unity_defect_{family.value}{label}", 6, "unity", "no positive weight")
            continue
        worst = 0.0
        for n in range(MOMENT_ORDERS + 1):
            worst = max(worst, abs(moment_quadrature(ws, n) / math.exp(moment_target(spec, family, n)) - 1.0))
        report.add(name, 5, worst, "moment", note=f"n <= {MOMENT_ORDERS}")
        report.add(f"unity_defect_{family.value}{label}", 6, unity_defect(spec, family, UNITY_M), "unity",
                   note=f"M = {UNITY_M}")


def _radius_checks(report, spec, label=""):
    n_far = 1e4
    if spec.p == 1:
        ratio = radius_ratio(spec, Family.P, n_far)
        report.add(f"radius_p_finite{label}", 7, abs(ratio / spec.alpha[0] - 1.0), "radius_finite",
                   note=f"ratio at n = 1e4 is {ratio:.6g}, alpha_1 = {spec.alpha[0]:g}")
    else:
        ratio = radius_ratio(spec, Family.P, n_far)
        report.add(f"radius_p_divergent{label}", 7, 1e6 / ratio, "radius_divergent",
                   note=f"ratio at n = 1e4 is {ratio:.6g}; passes when above 1e6")
    ratio = radius_ratio(spec, Family.BG, n_far)
    report.add(f"radius_bg_divergent{label}", 7, 1e6 / ratio, "radius_divergent",
               note=f"ratio at n = 1e4 is {ratio:.6g}; passes when above 1e6")


def weight_grid_checks(rows) -> tuple[float, float]:
    """(negativity, tail growth) of (gamma, t, rho) rows; both are zero for acceptable tables."""
    data = np.asarray(rows, dtype=float)
    negativity = max(0.0, -float(data[:, 2].min()))
    growth = 0.0
    for gamma in dict.fromkeys(data[:, 0]):
        rho = data[data[:, 0] == gamma, 2]
        tail = rho[3 * rho.size // 4:]
        growth = max(growth, float(np.max(np.diff(tail), initial=0.0)))
    return negativity, growth


def _oscillator_checks(report, gamma, trunc, tol, rng):
    params = OscillatorParams.g_zero(gamma)
    cubic = cubic_algebra_spec(params)
    label = "_cubic"
    _structure_checks(report, cubic, trunc, label)
    gg = gamma * (gamma + 1.0)
    rep = build_rep(cubic, trunc)
    report.add("cubic_bracket_polynomial", 1, polynomial_commutator_defect(rep, [0.0, -(1.5 - 2.0 * gg), 0.0, -16.0]),
               "structure", note="[D+, D-] = -(3/2 - 2 gamma(gamma+1)) D0 - 16 D0^3")
    report.add("general_g_bracket", 1, max(d_algebra_bracket_defect(OscillatorParams(g, e)) for g, e in
                                           D_ALGEBRA_SAMPLES), "structure",
               note=f"sampled (gamma, eps) = {list(D_ALGEBRA_SAMPLES)}")
    _eigen_check(report, cubic, tol, rng, label)
    _normalization_checks(report, cubic, label)
    _moment_checks(report, cubic, label)
    _radius_checks(report, cubic, label)

    levels = np.arange(6)
    exact = spectrum(params, levels)
    for which in ("plus", "minus"):
        grid = np.asarray(grid_spectrum(params, which))
        report.add(f"grid_spectrum_{which}", 8, float(np.max(np.abs(grid - exact))), "spectrum",
                   note="n <= 5, r_max = 12, 4000 points with one doubling")
    worst = max(abs(ladder_coefficients(params, n).up ** 2 / structure_factor(cubic, n + 1) - 1.0) for n in range(21))
    report.add("ladder_identity", 9, worst, "ladder", note="n <= 20")

    t_grid = np.linspace(1e-3, 20.0, 200)
    for family in (Family.BG, Family.P):
        rows = weight_table(family, [gamma], t_grid)
        negativity, growth = weight_grid_checks(rows)
        report.add(f"weight_nonnegative_{family.value}", 10, negativity, "positivity", note="t in [1e-3, 20]")
        report.add(f"weight_tail_decay_{family.value}", 10, growth, "positivity",
                   note="largest increase over the last quarter of the grid")

    d = params.d
    report.notes["casimir_phi_at_d(d-1)"] = float(eval_structure_function(cubic, d * (d - 1.0)))
    report.notes["d(d-1)"] = d * (d - 1.0)


def run_suite(spec: AlgebraSpec, gamma: Optional[float] = None, trunc: int = 64, tol: Optional[float] = None,
              progress: Optional[Callable[[str], None]] = None) -> VerificationReport:
    """Run every check for ``spec`` (and the oscillator checks when ``gamma`` is given)."""
    tol = default_tol() if tol is None else tol
    rng = np.random.default_rng(SEED)
    report = VerificationReport(spec.to_dict(), gamma, environment=_environment(tol))
    roots = deformation_roots(spec)
    report.notes["deformation_roots"] = [[z.real, z.imag] for z in roots]
    report.notes["complex_roots"] = any(abs(z.imag) > 0 for z in roots)
    steps = [
        ("structure", lambda: _structure_checks(report, spec, trunc)),
        ("eigenrelation", lambda: _eigen_check(report, spec, tol, rng)),
        ("normalization", lambda: _normalization_checks(report, spec)),
        ("linear limit", lambda: _linear_limit(report, spec.k, tol)),
        ("moments", lambda: _moment_checks(report, spec)),
        ("radius", lambda: _radius_checks(report, spec)),
    ]
    if gamma is not None:
        steps.append(("oscillator", lambda: _oscillator_checks(report, float(gamma), trunc, tol, rng)))
    for label, step in steps:
        if progress:
            progress(label)
        step()
    if gamma is None:
        for name, crit, key in (("grid_spectrum", 8, "spectrum"), ("ladder_identity", 9, "ladder"),
                                ("weight_nonnegative", 10, "positivity")):
            report.skip(name, crit, key, "needs an oscillator parameter (--gamma)")
    return report


def _linear_limit(report, k, tol):
    bg, p = linear_limit_defects(k, tol)
    report.add("linear_limit_bg", 4, bg, "linear_limit", note=f"alpha = (1, {LINEAR_ALPHA2:g}), k = {k:g}")
    report.add("linear_limit_p", 4, p, "linear_limit", note=f"alpha = (1, {LINEAR_ALPHA2:g}), k = {k:g}")
