"""Weight functions for the resolution of unity and their moment checks.

The measure  d mu = |N(|zeta|)|**2 rho(|zeta|**2) d|zeta|**2 dphi / (2 pi)
turns the angular integral of |k,zeta><k,zeta| into a diagonal operator, and
the |N|**2 factor cancels the state normalization.  What is left is one
scalar condition per basis level:

    int_0^inf rho(t) t**n dt = ([nu_n]!)**2 / [phi_n]!,

so the resolution of unity is verified through moments alone.  The weights
are inverse Mellin transforms of these moment sequences: Meijer G^{2p,0}_{0,2p}
for the Barut-Girardello family and G^{2p-1,0}_{1,2p-1} for the Perelomov
family, both in the scaled variable t / alpha_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import integrate
from scipy.special import gammaln, kv, loggamma

from .algebra import AlgebraError, AlgebraSpec, DomainError, StructureSequence
from .special import ConvergenceError, MeijerSpec, meijer_g
from .states import Family

__all__ = [
    "WeightFunctionSpec",
    "MomentResult",
    "weight_spec",
    "weight_density",
    "weight_density_meijer",
    "moment_target",
    "moment_quadrature",
    "unity_defect",
    "weight_table",
    "GAMMA_WINDOW",
]

GAMMA_WINDOW = (0.0, 0.5)
_POSITIVITY_POINTS = 512
_PANEL = 4.0
_TAIL_RTOL = 1e-10
_DECLARED_RTOL = 1e-6


@dataclass(frozen=True)
class WeightFunctionSpec:
    """rho(t) = prefactor * G(t / scale | meijer) on ``support``."""

    spec: AlgebraSpec
    family: Family
    meijer: MeijerSpec
    prefactor: float
    scale: float
    support: tuple[float, float]

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.support[1])


class MomentResult(NamedTuple):
    value: float
    error: float


def weight_spec(spec: AlgebraSpec, family, check_positive: bool = True) -> WeightFunctionSpec:
    family = Family.parse(family)
    seq = StructureSequence(spec)
    roots = seq.roots
    k, alpha_p = spec.k, spec.alpha[-1]
    if alpha_p < 0:
        raise DomainError("weights need alpha_p > 0 (the G-function argument t/alpha_p must be positive)")
    log_gamma_roots = sum(complex(loggamma(1.0 - a)) for a in roots)
    gamma_roots = complex(np.exp(log_gamma_roots))
    gamma_roots = gamma_roots.real
    neg_roots = tuple(-a for a in roots)
    if family is Family.BG:
        meijer = MeijerSpec((), (0.0, 2.0 * k - 1.0) + neg_roots)
        prefactor = 1.0 / (alpha_p * math.gamma(2.0 * k) * gamma_roots)
        support = (0.0, math.inf)
    elif family is Family.P:
        if spec.p == 1 and 2.0 * k <= 1.0:
            raise DomainError("the p = 1 Perelomov weight is positive only for 2k > 1")
        meijer = MeijerSpec((2.0 * k - 1.0,), (0.0,) + neg_roots)
        prefactor = math.gamma(2.0 * k) / (alpha_p * gamma_roots)
        support = (0.0, spec.alpha[0] if spec.p == 1 else math.inf)
    else:
        raise ValueError("weights exist only for the BG and P families")
    ws = WeightFunctionSpec(spec, family, meijer, prefactor, alpha_p, support)
    if check_positive:
        grid = positivity_grid(ws)
        rho = np.array([weight_density(ws, t) for t in grid])
        if not np.all(np.isfinite(rho)) or np.any(rho < 0):
            bad = grid[np.argmax(~np.isfinite(rho) | (rho < 0))]
            raise DomainError(f"weight function is negative or non-finite near t={bad:g}; no positive measure")
    return ws


def positivity_grid(ws: WeightFunctionSpec, points: int = _POSITIVITY_POINTS) -> np.ndarray:
    lo, hi = ws.support
    if ws.bounded:
        return np.linspace(lo, hi, points + 2)[1:-1]
    d = ws.meijer.decay_order
    t_hi = ws.scale * (40.0 / d) ** d
    return np.geomspace(1e-3 * ws.scale, t_hi, points)


def _check_support(ws: WeightFunctionSpec, t: float):
    lo, hi = ws.support
    if not (lo < t < hi):
        raise DomainError(f"t={t:g} is outside the support ({lo:g}, {hi:g})")


def weight_density(ws: WeightFunctionSpec, t: float) -> float:
    """rho(t); closed Bessel-K / beta-kernel forms for p = 1, contour quadrature otherwise."""
    _check_support(ws, t)
    if ws.spec.p == 1:
        k = ws.spec.k
        u = t / ws.scale
        if ws.family is Family.BG:
            nu = 2.0 * k - 1.0
            return 2.0 * u ** (0.5 * nu) * float(kv(nu, 2.0 * math.sqrt(u))) / (ws.scale * math.gamma(2.0 * k))
        return (2.0 * k - 1.0) * (1.0 - u) ** (2.0 * k - 2.0) / ws.scale
    return _density_meijer(ws, float(t))


def weight_density_meijer(ws: WeightFunctionSpec, t: float) -> float:
    """rho(t) through the Meijer G contour integral regardless of p."""
    _check_support(ws, t)
    return _density_meijer(ws, float(t))


@lru_cache(maxsize=65536)
def _density_meijer(ws: WeightFunctionSpec, t: float) -> float:
    return ws.prefactor * meijer_g(ws.meijer, t / ws.scale)


def moment_target(spec: AlgebraSpec, family, n: int) -> float:
    """log of ([nu_n]!)**2 / [phi_n]!: log [phi_n]! (BG) or log(n! [chi_n]! / (2k)_n) (P)."""
    family = Family.parse(family)
    seq = StructureSequence(spec)
    if family is Family.BG:
        return seq.log_phi_fact(n)
    if family is Family.P:
        log_poch = float(gammaln(2.0 * spec.k + n) - gammaln(2.0 * spec.k))
        return float(gammaln(n + 1.0)) + seq.log_chi_fact(n) - log_poch
    raise ValueError("moment targets exist only for the BG and P families")


def moment_quadrature(ws: WeightFunctionSpec, n: int, full_output: bool = False):
    """int rho(t) t**n dt by adaptive quadrature.

    Unbounded supports are mapped to w = (t/scale)**(1/d), d = q - r, where
    the integrand decays like exp(-d w); integration proceeds panel by panel
    until a panel past the peak contributes less than 1e-10 of the total.
    """
    if n < 0:
        raise DomainError("moment order must be nonnegative")
    if ws.bounded:
        res = _bounded_moment(ws, n)
    else:
        res = _unbounded_moment(ws, n)
    if not res.error <= _DECLARED_RTOL * abs(res.value):
        raise ConvergenceError(f"moment {n} quadrature error {res.error:.2e} exceeds {_DECLARED_RTOL:g} relative "
                               f"(value {res.value:.6e})")
    return res if full_output else res.value


def _bounded_moment(ws: WeightFunctionSpec, n: int) -> MomentResult:
    # p = 1 Perelomov kernel: (2k-1)/a * (1 - t/a)**(2k-2) on (0, a)
    k, a = ws.spec.k, ws.scale
    coef = (2.0 * k - 1.0) / a * a ** (2.0 - 2.0 * k)
    val, err = integrate.quad(lambda t: coef * t ** n, 0.0, a, weight="alg", wvar=(0.0, 2.0 * k - 2.0),
                              epsabs=0.0, epsrel=1e-12, limit=200)
    return MomentResult(val, err)


def _unbounded_moment(ws: WeightFunctionSpec, n: int) -> MomentResult:
    d = ws.meijer.decay_order
    s = ws.scale

    def integrand(w):
        if w <= 0:
            return 0.0
        t = s * w ** d
        return weight_density(ws, t) * t ** n * s * d * w ** (d - 1)

    total, err = 0.0, 0.0
    lo = 0.0
    prev_edge = 0.0
    for _ in range(400):
        hi = lo + _PANEL
        val, e = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-11, limit=200)
        total += val
        err += e
        edge = integrand(hi)
        if lo > 0 and edge < prev_edge and abs(val) <= _TAIL_RTOL * abs(total):
            # the decay past this point is at least geometric across panels
            return MomentResult(total, err + abs(val))
        prev_edge = edge
        lo = hi
    raise ConvergenceError("moment integrand tail did not decay")


def unity_defect(spec: AlgebraSpec, family, M: int) -> float:
    """max_{n <= M} |moment_n / target_n - 1|."""
    ws = weight_spec(spec, family)
    worst = 0.0
    for n in range(M + 1):
        ratio = moment_quadrature(ws, n) / math.exp(moment_target(spec, family, n))
        worst = max(worst, abs(ratio - 1.0))
    return worst


def weight_table(family, gamma_list: Iterable[float], t_grid: Sequence[float]) -> list[tuple[float, float, float]]:
    """Rows (gamma, t, rho(t)) for the cubic-oscillator weights."""
    from .oscillator import OscillatorParams, cubic_algebra_spec

    family = Family.parse(family)
    rows = []
    for gamma in gamma_list:
        gamma = float(gamma)
        if not GAMMA_WINDOW[0] < gamma < GAMMA_WINDOW[1]:
            raise DomainError(f"gamma must lie in (0, 1/2), got {gamma}")
        spec = cubic_algebra_spec(OscillatorParams.g_zero(gamma))
        ws = weight_spec(spec, family, check_positive=False)
        for t in t_grid:
            rows.append((gamma, float(t), weight_density(ws, float(t))))
    return rows
