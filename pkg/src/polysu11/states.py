"""Generalized coherent states of the polynomial su(1,1) algebra.

A state with base sequence nu_n is

    |k, zeta> = N^{-1} sum_n sqrt([phi_n]!) / [nu_n]! * zeta**n |k, n>

with ``nu_n = phi_n`` for the Barut-Girardello type and ``nu_n = n chi_n``
for the Perelomov type.  Any other positive sequence can be supplied as a
custom base.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.special import gammaln

from .algebra import AlgebraSpec, DomainError, NonPositiveFactorError, StructureSequence
from .rep import TruncatedRep
from .special import pfq

__all__ = [
    "Family",
    "CoherentStateVector",
    "EigenDefects",
    "build_state",
    "normalization_closed_form",
    "normalization_series",
    "inner_product",
    "radius_of_convergence",
    "radius_ratio",
    "lowering_eigendefect",
    "time_evolve",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-14
_MAX_TERMS = 1 << 16


class Family(str, Enum):
    BG = "bg"
    P = "p"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, value) -> "Family":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True, eq=False)
class CoherentStateVector:
    spec: AlgebraSpec
    family: Family
    zeta: complex
    N: int
    coeffs: np.ndarray
    tail_bound: float
    tol: float = DEFAULT_TOL
    nu: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def padded(self, dim: int) -> np.ndarray:
        out = np.zeros(dim, dtype=complex)
        out[: self.N + 1] = self.coeffs
        return out


class EigenDefects(NamedTuple):
    minus_defect: float
    plus_defect: float


def _nu_values(seq: StructureSequence, family: Family, n: np.ndarray, nu=None) -> np.ndarray:
    if family is Family.BG:
        return seq.phi(n)
    if family is Family.P:
        return n * seq.chi(n)
    if nu is None:
        raise ValueError("a custom family needs a base sequence nu")
    vals = np.asarray(nu(n), dtype=float)
    if np.any(vals <= 0):
        raise NonPositiveFactorError("custom base sequence must be positive")
    return vals


def _step_ratios(seq, family, n_terms: int, nu=None) -> np.ndarray:
    """|c_{n+1} / c_n| / |zeta| = sqrt(phi_{n+1}) / nu_{n+1} for n = 0..n_terms-1."""
    m = np.arange(1, n_terms + 1, dtype=float)
    phi = seq.phi(m)
    if np.any(phi <= 0):
        raise NonPositiveFactorError("structure factor is not positive")
    if family is Family.BG:
        return 1.0 / np.sqrt(phi)
    return np.sqrt(phi) / _nu_values(seq, family, m, nu)


def radius_ratio(spec: AlgebraSpec, family, n: float, nu=None) -> float:
    """|nu_n|**2 / phi_n at index n; tends to the radius of convergence in |zeta|**2."""
    family = Family.parse(family)
    seq = StructureSequence(spec)
    n_arr = np.asarray(float(n))
    nu_n = float(_nu_values(seq, family, n_arr, nu))
    return nu_n * nu_n / seq.phi(float(n))


def radius_of_convergence(spec: AlgebraSpec, family, nu=None) -> float:
    family = Family.parse(family)
    if family is Family.BG:
        return math.inf
    if family is Family.P:
        return spec.alpha[0] if spec.p == 1 else math.inf
    r = radius_ratio(spec, family, 1e4, nu)
    return math.inf if r > 1e12 else r


def build_state(spec: AlgebraSpec, family, zeta: complex, tol: float = DEFAULT_TOL, nu=None) -> CoherentStateVector:
    """Coherent state truncated where the ratio-test tail bound drops below ``tol``."""
    family = Family.parse(family)
    zeta = complex(zeta)
    radius = radius_of_convergence(spec, family, nu)
    r2 = abs(zeta) ** 2
    if r2 >= radius:
        raise DomainError(f"|zeta|^2 = {r2:g} is outside the disk of convergence (R = {radius:g})")
    if zeta == 0:
        return CoherentStateVector(spec, family, zeta, 0, np.ones(1, dtype=complex), 0.0, tol, nu)

    seq = StructureSequence(spec)
    limit = r2 / radius
    n_terms = 64
    while True:
        # ratio of consecutive |c_n|**2 terms
        step = _step_ratios(seq, family, 2 * n_terms, nu)
        log_q = 2.0 * (math.log(abs(zeta)) + np.log(step))
        q = np.exp(log_q)
        log_w = np.concatenate([[0.0], np.cumsum(log_q)])
        total = _logsumexp(log_w[: n_terms + 1])
        # sup of the ratios beyond each index, over a look-ahead window, capped by the limit ratio
        sup_ahead = np.maximum(np.maximum.accumulate(q[::-1])[::-1], limit)
        for N in range(n_terms):
            r_sup = sup_ahead[N + 1]
            if r_sup >= 1:
                continue
            tail = math.exp(log_w[N + 1] - total) / (1.0 - r_sup)
            if tail < tol:
                return _assemble(spec, family, zeta, N, step, log_w, tail, tol, nu)
        n_terms *= 2
        if n_terms > _MAX_TERMS:
            raise DomainError(f"coherent-state series did not reach tail {tol:g} within {_MAX_TERMS} terms")


def _assemble(spec, family, zeta, N, step, log_w, tail, tol, nu):
    # Magnitudes by multiplicative recurrence outward from the largest term, so that
    # consecutive coefficients carry the exact ladder ratio up to one rounding.
    ratio = abs(zeta) * step[:N]
    peak = int(np.argmax(log_w[: N + 1]))
    mag = np.empty(N + 1)
    mag[peak] = 1.0
    for n in range(peak, N):
        mag[n + 1] = mag[n] * ratio[n]
    for n in range(peak - 1, -1, -1):
        mag[n] = mag[n + 1] / ratio[n]
    mag /= math.sqrt(math.fsum(mag * mag))
    phase = np.exp(1j * np.arange(N + 1) * cmath.phase(zeta))
    return CoherentStateVector(spec, family, zeta, N, mag * phase, tail, tol, nu)


def _logsumexp(x: np.ndarray) -> float:
    top = float(np.max(x))
    return top + math.log(math.fsum(np.exp(x - top)))


def normalization_closed_form(spec: AlgebraSpec, family, abs_zeta: float) -> float:
    """|N|**2 as 0F_{2p-1} (BG) or 1F_{2p-2} (P) in |zeta|**2 / alpha_p."""
    family = Family.parse(family)
    seq = StructureSequence(spec)
    z = abs_zeta ** 2 / spec.alpha[-1]
    lower = [1.0 - a for a in seq.roots]
    if family is Family.BG:
        return float(pfq([], [2.0 * spec.k] + lower, z))
    if family is Family.P:
        if abs_zeta ** 2 >= radius_of_convergence(spec, family):
            raise DomainError("|eta|^2 must stay below alpha_1 for the p = 1 Perelomov series")
        return float(pfq([2.0 * spec.k], lower, z))
    raise ValueError("closed-form normalization exists only for the BG and P families")


def normalization_series(spec: AlgebraSpec, family, abs_zeta: float, rtol: float = 1e-16, nu=None) -> float:
    """|N|**2 = sum_n [phi_n]! / ([nu_n]!)**2 |zeta|**(2n), summed directly."""
    family = Family.parse(family)
    if abs_zeta == 0:
        return 1.0
    seq = StructureSequence(spec)
    limit = abs_zeta ** 2 / radius_of_convergence(spec, family, nu)
    n_terms = 64
    while n_terms <= _MAX_TERMS:
        n = np.arange(n_terms + 1, dtype=float)
        log_phi = seq.log_phi_table(n_terms)
        if family is Family.BG:
            log_nu = log_phi
        elif family is Family.P:
            log_nu = gammaln(n + 1) + seq.log_chi_table(n_terms)
        else:
            log_nu = np.concatenate([[0.0], np.cumsum(np.log(_nu_values(seq, family, n[1:], nu)))])
        log_w = log_phi - 2.0 * log_nu + 2.0 * n * math.log(abs_zeta)
        q = math.exp(log_w[-1] - log_w[-2])
        r_sup = max(q, limit)
        total = math.fsum(np.exp(log_w))
        if r_sup < 1 and math.exp(log_w[-1]) * r_sup / (1 - r_sup) < rtol * total:
            return total
        n_terms *= 2
    raise DomainError("normalization series did not converge")


def inner_product(s1: CoherentStateVector, s2: CoherentStateVector) -> complex:
    """<s1|s2> = sum_n conj(c_n(s1)) c_n(s2)."""
    if s1.spec != s2.spec or s1.family is not s2.family:
        raise ValueError("inner product needs states of the same algebra and family")
    dim = max(s1.N, s2.N) + 1
    return complex(np.vdot(s1.padded(dim), s2.padded(dim)))


def lowering_eigendefect(rep: TruncatedRep, state: CoherentStateVector) -> EigenDefects:
    """Residuals ||K_- c - zeta c|| and ||K_+ c - zeta c|| on rows 0..N-1 of the state."""
    if rep.spec != state.spec:
        raise ValueError("representation and state belong to different algebras")
    if rep.N < state.N + 1:
        raise ValueError("representation must be at least one level larger than the state truncation")
    c = state.padded(rep.dim)
    rows = slice(0, state.N)
    minus = (rep.Kminus @ c - state.zeta * c)[rows]
    plus = (rep.Kplus @ c - state.zeta * c)[rows]
    return EigenDefects(float(np.linalg.norm(minus)), float(np.linalg.norm(plus)))


def time_evolve(state: CoherentStateVector, phase: float) -> CoherentStateVector:
    """State after evolution by exp(-i phase (K0 - k)): the label rotates to zeta e^{-i phase}."""
    return build_state(state.spec, state.family, state.zeta * cmath.exp(-1j * phase), state.tol, state.nu)
