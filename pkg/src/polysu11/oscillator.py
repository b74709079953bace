"""Conditionally solvable radial oscillator and its cubic su(1,1) structure.

The superpotential is W = U + f with U(x) = x + (gamma+1)/x and
f = d/dx ln 1F1((1-eps)/2, gamma+3/2; -x**2).  The partner Hamiltonians
H_+- = -1/2 d^2/dx^2 + V_+- share the spectrum 2n + 2gamma + 2 + eps
(broken SUSY).  When g = gamma + eps + 1/2 vanishes, the ladder operators
D_+- = A^dagger C_+- A close a cubic algebra that maps onto a p = 2 spec.
Units are hbar = m = omega = 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .algebra import AlgebraError, AlgebraSpec, DomainError
from .rep import _row_scaled
from .special import kummer_log_derivative, kummer_log_derivative_prime

__all__ = [
    "OscillatorParams",
    "Validity",
    "Potentials",
    "Ladder",
    "ValidityError",
    "DiscretizationWarning",
    "validity",
    "partner_potentials",
    "potentials_from_superpotential",
    "potential_values",
    "spectrum",
    "spectrum_general",
    "effective_energy",
    "cubic_algebra_spec",
    "ladder_coefficients",
    "grid_spectrum",
    "d_algebra_bracket_defect",
]

_G_ATOL = 1e-12


class ValidityError(AlgebraError):
    """Parameters outside the window where the cubic reduction holds."""


class DiscretizationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class OscillatorParams:
    gamma: float
    epsilon: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and math.isfinite(self.epsilon)):
            raise DomainError("gamma and epsilon must be finite")
        if self.gamma < 0:
            raise DomainError(f"gamma must be nonnegative, got {self.gamma}")

    @classmethod
    def g_zero(cls, gamma: float) -> "OscillatorParams":
        """Parameters with epsilon = -gamma - 1/2, so that g = 0."""
        return cls(float(gamma), -float(gamma) - 0.5)

    @property
    def g(self) -> float:
        return self.gamma + self.epsilon + 0.5

    @property
    def c(self) -> float:
        return (2.0 * self.gamma + 3.0) / 4.0

    @property
    def d(self) -> float:
        return self.c

    @property
    def kummer_a(self) -> float:
        return 0.5 - 0.5 * self.epsilon

    @property
    def kummer_b(self) -> float:
        return self.gamma + 1.5


class Validity(NamedTuple):
    convergent: bool
    cubic_ok: bool


class Potentials(NamedTuple):
    Vplus: float
    Vminus: float
    U: float
    f: float


class Ladder(NamedTuple):
    up: float
    down: float


def validity(params: OscillatorParams) -> Validity:
    gam, eps = params.gamma, params.epsilon
    convergent = eps + 2.0 * eps * gam + 2.0 > 0
    cubic_ok = (convergent and abs(params.g) <= _G_ATOL and 3.0 - 4.0 * gam * (gam + 1.0) > 0
                and 0.0 < gam < 0.5 and -1.0 < eps < 0.5)
    return Validity(bool(convergent), bool(cubic_ok))


def _require_cubic(params: OscillatorParams):
    if not validity(params).cubic_ok:
        raise ValidityError(f"cubic reduction needs g = 0, 0 < gamma < 1/2, -1 < eps < 1/2; got {params}")


def _require_convergent(params: OscillatorParams):
    if not validity(params).convergent:
        raise ValidityError(f"eps + 2 eps gamma + 2 must be positive; got {params}")


def _pieces(params: OscillatorParams, x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("the radial coordinate must be positive")
    _require_convergent(params)
    gp1 = params.gamma + 1.0
    U = x + gp1 / x
    dU = 1.0 - gp1 / (x * x)
    a, b = params.kummer_a, params.kummer_b
    f = np.asarray(kummer_log_derivative(a, b, x))
    df = np.asarray(kummer_log_derivative_prime(a, b, x))
    return x, U, dU, f, df


def potential_values(params: OscillatorParams, x, which: str = "plus") -> np.ndarray:
    """V_+ (closed form) or V_- (assembled with f') on an array of x."""
    x, U, dU, f, df = _pieces(params, x)
    if which == "plus":
        gam = params.gamma
        return 0.5 * x * x + gam * (gam + 1.0) / (2.0 * x * x) + params.g
    if which == "minus":
        return 0.5 * (U * U - dU) - df + params.epsilon - 1.0
    raise ValueError("which must be 'plus' or 'minus'")


def partner_potentials(params: OscillatorParams, x: float) -> Potentials:
    """V_+, V_-, U and f at one point x > 0."""
    vp = float(potential_values(params, x, "plus"))
    vm = float(potential_values(params, x, "minus"))
    _, U, _, f, _ = _pieces(params, x)
    return Potentials(vp, vm, float(U), float(f))


def potentials_from_superpotential(params: OscillatorParams, x) -> tuple[np.ndarray, np.ndarray]:
    """V_+- = (W**2 +- W')/2 with W = U + f; agrees with the direct forms when the Riccati relation holds."""
    _, U, dU, f, df = _pieces(params, x)
    W = U + f
    dW = dU + df
    return 0.5 * (W * W + dW), 0.5 * (W * W - dW)


def spectrum_general(params: OscillatorParams, n) -> np.ndarray | float:
    """2n + 2gamma + 2 + eps for either partner (no g = 0 requirement)."""
    _require_convergent(params)
    out = 2.0 * np.asarray(n, dtype=float) + 2.0 * params.gamma + 2.0 + params.epsilon
    return float(out) if out.ndim == 0 else out


def spectrum(params: OscillatorParams, n) -> np.ndarray | float:
    """E_n = 2n + gamma + 3/2 on the g = 0 line."""
    _require_cubic(params)
    n = np.asarray(n)
    if np.any(n < 0):
        raise DomainError("level index must be nonnegative")
    out = 2.0 * n.astype(float) + params.gamma + 1.5
    return float(out) if out.ndim == 0 else out


def effective_energy(params: OscillatorParams, n, omega: float = 1.0):
    """Eigenvalues of (omega/2)(H_- - gamma - 3/2), i.e. omega * n."""
    return 0.5 * omega * (np.asarray(spectrum(params, n)) - params.gamma - 1.5)


def cubic_algebra_spec(params: OscillatorParams, n_max: int | None = None) -> AlgebraSpec:
    _require_cubic(params)
    gam = params.gamma
    kwargs = {} if n_max is None else {"n_max": n_max}
    return AlgebraSpec(2, (0.75 - gam * (gam + 1.0), 4.0), (2.0 * gam + 3.0) / 4.0, **kwargs)


def ladder_coefficients(params: OscillatorParams, n: int) -> Ladder:
    """Matrix elements of D_+ (n -> n+1) and D_- (n -> n-1) in the positive-phase basis."""
    _require_cubic(params)
    if n < 0:
        raise DomainError("level index must be nonnegative")
    gam = params.gamma

    def E(m):
        return 2.0 * m + gam + 1.5

    up = math.sqrt((n + 1) * (n + gam + 1.5) * E(n) * E(n + 1))
    down = 0.0 if n == 0 else math.sqrt(n * (n + gam + 0.5) * E(n) * E(n - 1))
    return Ladder(up, down)


def _fd_levels(V, x, h, levels):
    diag = 1.0 / (h * h) + V
    off = np.full(x.size - 1, -0.5 / (h * h))
    return eigh_tridiagonal(diag, off, select="i", select_range=(0, levels - 1), eigvals_only=True)


def grid_spectrum(params: OscillatorParams, which: str = "plus", r_max: float = 12.0, points: int = 4000,
                  levels: int = 6, potential=None) -> list[float]:
    """Lowest levels of -1/2 d^2/dx^2 + V on (0, r_max] by finite differences.

    Dirichlet conditions at both ends and a uniform grid of ``points`` interior
    nodes.  The computation is repeated with twice the points and a
    DiscretizationWarning is raised if any level moves by more than 1e-3;
    the finer result is returned.  ``potential`` overrides V_+- with any
    vectorized callable.
    """
    if points < 1000:
        raise ValueError("grid_spectrum needs at least 1000 points")
    if levels < 1:
        raise ValueError("levels must be positive")
    if potential is None:
        if which not in ("plus", "minus"):
            raise ValueError("which must be 'plus' or 'minus'")

        def potential(xs):
            return potential_values(params, xs, which)

    results = []
    for m in (points, 2 * points):
        h = r_max / (m + 1)
        x = h * np.arange(1, m + 1)
        results.append(_fd_levels(np.asarray(potential(x), dtype=float), x, h, levels))
    coarse, fine = results
    top = float(fine[-1])
    v_edge = float(np.asarray(potential(np.array([r_max])), dtype=float).ravel()[0])
    if v_edge <= 3.0 * top:
        raise ValueError(f"r_max = {r_max} is too small: V(r_max) = {v_edge:.3g} <= 3 E_top = {3 * top:.3g}")
    shift = float(np.max(np.abs(fine - coarse)))
    if shift > 1e-3:
        warnings.warn(f"grid levels moved by {shift:.2e} on doubling the points", DiscretizationWarning,
                      stacklevel=2)
    return [float(e) for e in fine]


def d_algebra_bracket_defect(params: OscillatorParams, N: int = 24) -> float:
    """Compare [D_+, D_-] against -16 D0^3 + 12 g D0^2 - 2(g^2 - (2c-1)^2 + 1) D0.

    D_+- are assembled as A^dagger C_+- A on the H_- eigenbasis, with C_+-
    taken from the su(1,1) ladder actions on the H_+ eigenbasis and A carrying
    sqrt(E_n) between the two ladders.  D0 is diag(E_n / 2).  Works for any g.
    """
    _require_convergent(params)
    gam, g, c = params.gamma, params.g, params.c
    n = np.arange(N + 1, dtype=float)
    E = 2.0 * n + 2.0 * gam + 2.0 + params.epsilon
    Cplus = np.diag(np.sqrt((n[:-1] + 1.0) * (n[:-1] + gam + 1.5)), -1)
    Cminus = Cplus.T
    A = np.diag(np.sqrt(E))
    Dplus = A.T @ Cplus @ A
    Dminus = A.T @ Cminus @ A
    D0 = np.diag(0.5 * E)
    pm, mp = Dplus @ Dminus, Dminus @ Dplus
    rhs = -16.0 * D0 @ D0 @ D0 + 12.0 * g * D0 @ D0 - 2.0 * (g * g - (2.0 * c - 1.0) ** 2 + 1.0) * D0
    bracket = _row_scaled(pm - mp - rhs, pm, mp, rhs)
    adjoint_p = _row_scaled(D0 @ Dplus - Dplus @ D0 - Dplus, D0 @ Dplus, Dplus @ D0)
    adjoint_m = _row_scaled(D0 @ Dminus - Dminus @ D0 + Dminus, D0 @ Dminus, Dminus @ D0)
    return max(bracket, adjoint_p, adjoint_m)
