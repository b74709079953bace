"""Scalar layer of the polynomial su(1,1) algebra.

The algebra is fixed by a structure function

    Phi(x) = alpha_1 x + alpha_2 x**2 + ... + alpha_p x**p

and a Bargmann index ``k > 0``.  On the lowest-weight basis ``|k, n>`` the
ladder operators act through the *structure factor*

    phi_n = Phi((k+n)(k+n-1)) - Phi(k(k-1)) = n (2k+n-1) chi_n,

where ``chi_n`` (the *deformation factor*) is a polynomial of degree 2p-2 in
``n``.  Every factorial-like product is handled in log scale: ``[phi_n]!``
overflows a double well before n = 100 once p >= 2.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import loggamma

__all__ = [
    "AlgebraError",
    "DomainError",
    "NonPositiveFactorError",
    "AlgebraSpec",
    "StructureSequence",
    "eval_structure_function",
    "structure_factor",
    "deformation_factor",
    "deformation_roots",
    "log_generalized_factorial",
    "pochhammer_log",
    "DEFAULT_N_MAX",
    "DEFAULT_RTOL",
]

DEFAULT_N_MAX = 256
DEFAULT_RTOL = 1e-12
_MONOTONE_GRID = 1024
_IMAG_RTOL = 1e-10


class AlgebraError(ValueError):
    """Invalid algebra data."""


class DomainError(AlgebraError):
    """Argument outside the domain of a function."""


class NonPositiveFactorError(AlgebraError):
    """A factor that must be positive (it sits under a square root) is not."""


@dataclass(frozen=True)
class AlgebraSpec:
    """Structure-function coefficients ``alpha`` and Bargmann index ``k``.

    Construction checks that dPhi/dx > 0 on a 1024-point grid over
    [k(k+1), (k+n_max)(k+n_max-1)] and that phi_n > 0 for 1 <= n <= n_max+1.
    ``n_max`` is not part of the JSON form.
    """

    p: int
    alpha: tuple[float, ...]
    k: float
    n_max: int = field(default=DEFAULT_N_MAX, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "k", float(self.k))
        if int(self.p) != self.p or self.p < 1:
            raise AlgebraError(f"degree p must be a positive integer, got {self.p!r}")
        if len(self.alpha) != self.p:
            raise AlgebraError(f"expected {self.p} coefficients, got {len(self.alpha)}")
        if not all(math.isfinite(a) for a in self.alpha) or not math.isfinite(self.k):
            raise AlgebraError("coefficients and k must be finite")
        if self.alpha[0] <= 0:
            raise AlgebraError(f"alpha_1 must be positive, got {self.alpha[0]}")
        if self.alpha[-1] == 0:
            raise AlgebraError("leading coefficient alpha_p must be nonzero")
        if self.k <= 0:
            raise AlgebraError(f"k must be positive, got {self.k}")
        self._check_monotone()

    @classmethod
    def linear(cls, k: float, alpha1: float = 1.0) -> "AlgebraSpec":
        """The undeformed su(1,1) case ``Phi(x) = alpha1 * x``."""
        return cls(1, (alpha1,), k)

    @classmethod
    def from_dict(cls, data: dict) -> "AlgebraSpec":
        alpha = data["alpha"]
        if isinstance(alpha, (int, float)):
            alpha = [alpha]
        return cls(int(data.get("p", len(alpha))), tuple(alpha), data["k"])

    @classmethod
    def from_json(cls, text: str) -> "AlgebraSpec":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {"p": self.p, "alpha": list(self.alpha), "k": self.k}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @property
    def casimir_argument(self) -> float:
        """``k(k-1)``, the argument of Phi giving the Casimir eigenvalue."""
        return self.k * (self.k - 1.0)

    def phi_poly(self) -> Polynomial:
        return Polynomial((0.0,) + self.alpha)

    def _check_monotone(self):
        # Phi may dip between k(k-1) and k(k+1) (it does for the cubic oscillator
        # algebra); what the representation needs is growth from the first
        # lattice step on, plus phi_n > 0 at every lattice point.
        x_lo = self.k * (self.k + 1.0)
        x_hi = (self.k + self.n_max) * (self.k + self.n_max - 1.0)
        grid = np.linspace(x_lo, x_hi, _MONOTONE_GRID)
        slope = self.phi_poly().deriv()(grid)
        if np.any(slope <= 0):
            bad = grid[np.argmax(slope <= 0)]
            raise AlgebraError(f"Phi is not increasing on [{x_lo:g}, {x_hi:g}] (dPhi/dx <= 0 near x={bad:g})")
        n = np.arange(1, self.n_max + 2)
        if np.any(_chi_double_sum(self, n) <= 0):
            raise NonPositiveFactorError("structure factor is not positive for some 1 <= n <= n_max+1")


def eval_structure_function(spec: AlgebraSpec, x):
    """Phi(x) for ``x >= -1/4``; accepts scalars or arrays."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < -0.25):
        raise DomainError("structure function is defined for x >= -1/4 only")
    out = np.zeros_like(xa)
    for a in reversed(spec.alpha):
        out = (out + a) * xa
    return float(out) if out.ndim == 0 else out


def _chi_double_sum(spec: AlgebraSpec, n):
    n = np.asarray(n, dtype=float)
    a = spec.casimir_argument
    b = (spec.k + n) * (spec.k + n - 1.0)
    total = np.zeros_like(b)
    for r, alpha_r in enumerate(spec.alpha, start=1):
        inner = np.zeros_like(b)
        for s in range(1, r + 1):
            inner = inner + a ** (r - s) * b ** (s - 1)
        total = total + alpha_r * inner
    return total


class StructureSequence:
    """Lazily evaluated phi_n, chi_n, roots of chi and log-factorials for one spec.

    Factorial tables are grown on demand and cached; all public results are
    pure functions of ``spec``.
    """

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        self._log_phi = np.zeros(1)
        self._log_chi = np.zeros(1)

    def __repr__(self):
        return f"StructureSequence({self.spec!r})"

    def chi(self, n):
        out = _chi_double_sum(self.spec, n)
        return float(out) if out.ndim == 0 else out

    def phi(self, n):
        n_arr = np.asarray(n, dtype=float)
        out = n_arr * (2.0 * self.spec.k + n_arr - 1.0) * _chi_double_sum(self.spec, n_arr)
        return float(out) if out.ndim == 0 else out

    def phi_difference(self, n):
        """Structure factor from its definition as a difference of Phi values."""
        k = self.spec.k
        n_arr = np.asarray(n, dtype=float)
        out = eval_structure_function(self.spec, (k + n_arr) * (k + n_arr - 1.0)) - eval_structure_function(
            self.spec, k * (k - 1.0)
        )
        return float(out) if np.ndim(out) == 0 else out

    @cached_property
    def chi_poly(self) -> Polynomial:
        """chi_n as a polynomial in n."""
        a = self.spec.casimir_argument
        b = Polynomial([a, 2.0 * self.spec.k - 1.0, 1.0])
        total = Polynomial([0.0])
        for r, alpha_r in enumerate(self.spec.alpha, start=1):
            for s in range(1, r + 1):
                total = total + alpha_r * a ** (r - s) * b ** (s - 1)
        return total

    @cached_property
    def roots(self) -> tuple[complex, ...]:
        if self.spec.p == 1:
            return ()
        poly = self.chi_poly
        roots = poly.roots().astype(complex)
        dpoly = poly.deriv()
        polished = []
        for z in roots:
            for _ in range(4):
                d = dpoly(z)
                if d == 0:
                    break
                z = z - poly(z) / d
            polished.append(complex(z))
        return _pair_conjugates(polished)

    def chi_from_roots(self, n):
        n = np.asarray(n, dtype=complex)
        out = np.full(n.shape, complex(self.spec.alpha[-1]))
        for a in self.roots:
            out = out * (n - a)
        if np.any(np.abs(out.imag) > _IMAG_RTOL * np.maximum(np.abs(out), 1.0)):
            raise AlgebraError("root product of chi has a residual imaginary part")
        real = out.real
        return float(real) if real.ndim == 0 else real

    def log_phi_table(self, n: int) -> np.ndarray:
        """Array of log [phi_m]! for m = 0..n."""
        self._grow(n)
        return self._log_phi[: n + 1].copy()

    def log_chi_table(self, n: int) -> np.ndarray:
        self._grow(n)
        return self._log_chi[: n + 1].copy()

    def log_phi_fact(self, n: int) -> float:
        self._grow(n)
        return float(self._log_phi[n])

    def log_chi_fact(self, n: int) -> float:
        self._grow(n)
        return float(self._log_chi[n])

    def log_chi_fact_roots(self, n: int) -> float:
        """log [chi_n]! through alpha_p**n * prod_i (1 - a_i)_n."""
        if self.spec.p == 1:
            return n * math.log(self.spec.alpha[0])
        total = n * cmath.log(self.spec.alpha[-1])
        for a in self.roots:
            term = pochhammer_log(1.0 - a, n)
            if math.isinf(term.real):
                raise NonPositiveFactorError(f"(1 - a)_n vanishes for root a={a}")
            total += term
        # The product is real; its log is real up to a multiple of 2*pi*i.
        if math.cos(total.imag) <= 0 or abs(math.sin(total.imag)) > _IMAG_RTOL * max(1.0, abs(total.real)):
            raise NonPositiveFactorError(f"root product for [chi_{n}]! is not positive")
        return total.real

    def _grow(self, n: int):
        if n < 0:
            raise DomainError("n must be nonnegative")
        have = self._log_chi.size - 1
        if n <= have:
            return
        m = np.arange(have + 1, max(n, 2 * have) + 1)
        chi = _chi_double_sum(self.spec, m)
        phi = m * (2.0 * self.spec.k + m - 1.0) * chi
        if np.any(chi <= 0) or np.any(phi <= 0):
            bad = int(m[np.argmax((chi <= 0) | (phi <= 0))])
            raise NonPositiveFactorError(f"structure factor phi_{bad} is not positive")
        self._log_chi = np.concatenate([self._log_chi, self._log_chi[-1] + np.cumsum(np.log(chi))])
        self._log_phi = np.concatenate([self._log_phi, self._log_phi[-1] + np.cumsum(np.log(phi))])


def _pair_conjugates(roots: Sequence[complex]) -> tuple[complex, ...]:
    """Snap roots into an exactly conjugate-closed set."""
    scale = max(1.0, max(abs(z) for z in roots))
    real, upper = [], []
    for z in roots:
        if abs(z.imag) <= 1e-10 * scale:
            real.append(complex(z.real, 0.0))
        elif z.imag > 0:
            upper.append(z)
    lower = [z for z in roots if z.imag < -1e-10 * scale]
    if len(upper) != len(lower):
        raise AlgebraError("complex roots of chi do not pair into conjugates")
    paired = []
    for z in upper:
        w = min(lower, key=lambda v: abs(v - z.conjugate()))
        lower.remove(w)
        mid = 0.5 * (z + w.conjugate())
        paired += [mid, mid.conjugate()]
    real.sort(key=lambda z: -z.real)
    return tuple(real + paired)


def _as_sequence(obj) -> StructureSequence:
    return obj if isinstance(obj, StructureSequence) else StructureSequence(obj)


def structure_factor(seq: StructureSequence | AlgebraSpec, n: int) -> float:
    seq = _as_sequence(seq)
    if n < 0:
        raise DomainError("n must be nonnegative")
    return seq.phi(n)


def deformation_factor(seq: StructureSequence | AlgebraSpec, n: int) -> float:
    seq = _as_sequence(seq)
    if n < 0:
        raise DomainError("n must be nonnegative")
    return seq.chi(n)


def deformation_roots(seq: StructureSequence | AlgebraSpec) -> list[complex]:
    return list(_as_sequence(seq).roots)


def log_generalized_factorial(seq: StructureSequence | AlgebraSpec, which: Literal["phi", "chi"], n: int) -> float:
    seq = _as_sequence(seq)
    if which == "phi":
        return seq.log_phi_fact(n)
    if which == "chi":
        return seq.log_chi_fact(n)
    raise ValueError(f"which must be 'phi' or 'chi', not {which!r}")


def pochhammer_log(z: complex, n: int) -> complex:
    """log of the rising factorial (z)_n.

    Returns ``complex(-inf, 0)`` when one of the factors z, z+1, ..., z+n-1
    is exactly zero, so that ``exp`` of the result is the correct 0.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    z = complex(z)
    if n == 0:
        return 0j
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real) and z.real + n > 0:
        return complex(-math.inf, 0.0)
    near_pole = z.imag == 0 and z.real <= 0 and abs(z.real - round(z.real)) < 1e-8
    if near_pole or n <= 8:
        return complex(sum(cmath.log(z + j) for j in range(n)))
    return complex(loggamma(z + n) - loggamma(z))
