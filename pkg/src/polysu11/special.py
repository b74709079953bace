"""Special-function kernels: log-gamma, pFq series, Bessel I/K, Meijer G^{q,0}, Kummer ratios.

Meijer's G-function of the ``G^{q,0}_{r,q}`` class is evaluated from its
Mellin-Barnes integral

    G(z) = 1/(2 pi i) * int  prod_j Gamma(b_j + s) / prod_i Gamma(a_i + s) * z**(-s) ds

along a contour to the right of every pole of the numerator.  The contour
crosses the real axis at the saddle point of the integrand (clamped away from
the rightmost pole), which keeps the integral free of cancellation even where
G is exponentially small.  With q > r the contour is vertical and the
integrand decays like exp(-(q-r) pi |Im s| / 2); with q == r it is bent to
the left as a parabola so that z**(-s) supplies Gaussian decay (z < 1).
Trapezoid sums converge geometrically on both contours.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import digamma, iv, kv, loggamma

from .algebra import DomainError

__all__ = [
    "PoleError",
    "DivergenceError",
    "ContourError",
    "ConvergenceError",
    "log_gamma",
    "pfq",
    "pfq_with_tail",
    "PFQResult",
    "bessel_modified",
    "MeijerSpec",
    "meijer_g",
    "kummer_ratio",
    "kummer_log_derivative",
    "kummer_log_derivative_prime",
]


class PoleError(DomainError):
    """Argument at a pole."""


class DivergenceError(DomainError):
    """Series evaluated outside its disk of convergence."""


class ContourError(DomainError):
    """No admissible Mellin-Barnes contour exists for the parameters."""


class ConvergenceError(RuntimeError):
    """A numerical procedure did not reach its error target."""


def _is_nonpositive_int(x: complex) -> bool:
    x = complex(x)
    return x.imag == 0 and x.real <= 0 and x.real == math.floor(x.real)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z)."""
    if _is_nonpositive_int(z):
        raise PoleError(f"Gamma has a pole at {z}")
    return complex(loggamma(complex(z)))


class PFQResult(NamedTuple):
    value: complex | float
    tail_bound: float
    terms: int


def pfq_with_tail(a: Sequence[complex], b: Sequence[complex], z: complex, *, rtol: float = 1e-15,
                  max_terms: int = 200_000) -> PFQResult:
    """Generalized hypergeometric series with a certified tail bound.

    Summation stops once the geometric bound on the remaining terms, built
    from the supremum of the term ratio beyond the current index, drops below
    ``rtol`` times the partial sum.
    """
    a = [complex(x) for x in a]
    b = [complex(x) for x in b]
    for bj in b:
        if _is_nonpositive_int(bj):
            raise PoleError(f"lower parameter {bj} is a nonpositive integer")
    z = complex(z)
    real_out = all(x.imag == 0 for x in a + b) and z.imag == 0
    terminating = any(_is_nonpositive_int(x) for x in a)
    if z == 0:
        return PFQResult(1.0 if real_out else 1.0 + 0j, 0.0, 1)
    excess = len(a) - len(b) - 1
    if not terminating:
        if excess > 0:
            raise DivergenceError(f"{len(a)}F{len(b)} series diverges for z != 0")
        if excess == 0 and abs(z) >= 1:
            raise DivergenceError(f"{len(a)}F{len(b)} series needs |z| < 1, got |z|={abs(z):g}")
    limit = abs(z) if excess == 0 else 0.0
    # Beyond this index every factor (x+n) has settled, so the term ratios are monotone.
    n_mono = 2 * int(max([abs(x) for x in a + b] + [0.0])) + 2

    re_terms, im_terms = [1.0], [0.0]
    running = 1.0 + 0j
    term = 1.0 + 0j
    n = 0
    while True:
        term *= _term_ratio(a, b, z, n)
        n += 1
        re_terms.append(term.real)
        im_terms.append(term.imag)
        running += term
        if term == 0:
            tail = 0.0
            break
        if n >= n_mono:
            # sup of the remaining ratios: the next one if they decrease, the limit if they increase
            r_sup = max(abs(_term_ratio(a, b, z, n)), limit)
            if r_sup < 1:
                tail = abs(term) * r_sup / (1 - r_sup)
                if tail <= rtol * abs(running):
                    break
        if n >= max_terms:
            raise ConvergenceError(f"pFq did not converge within {max_terms} terms")
    value = complex(math.fsum(re_terms), math.fsum(im_terms))
    if real_out:
        return PFQResult(value.real, tail, n + 1)
    return PFQResult(value, tail, n + 1)


def _term_ratio(a, b, z, n):
    num = z
    for ai in a:
        num *= ai + n
    den = complex(n + 1)
    for bj in b:
        den *= bj + n
    return num / den


def pfq(a: Sequence[complex], b: Sequence[complex], z: complex, *, rtol: float = 1e-15):
    """Sum ``pFq(a; b; z)``.  Real inputs give a float.

    Complex parameters are accepted; when they come in conjugate pairs and
    ``z`` is real, the imaginary part of the result is dropped.
    """
    res = pfq_with_tail(a, b, z, rtol=rtol)
    value = res.value
    if isinstance(value, complex) and complex(z).imag == 0 and _conjugate_closed(a) and _conjugate_closed(b):
        return value.real
    return value


def _conjugate_closed(params) -> bool:
    pool = [complex(x) for x in params]
    while pool:
        x = pool.pop()
        if abs(x.imag) <= 1e-14 * max(1.0, abs(x)):
            continue
        j = min(range(len(pool)), key=lambda i: abs(pool[i] - x.conjugate()), default=None)
        if j is None or abs(pool[j] - x.conjugate()) > 1e-10 * max(1.0, abs(x)):
            return False
        pool.pop(j)
    return True


def bessel_modified(kind: str, nu: float, x: float) -> float:
    """Modified Bessel function I_nu(x) or K_nu(x) for x > 0."""
    if x <= 0:
        raise DomainError("modified Bessel functions are evaluated for x > 0 only")
    if kind == "I":
        return float(iv(nu, x))
    if kind == "K":
        return float(kv(nu, x))
    raise ValueError(f"kind must be 'I' or 'K', not {kind!r}")


@dataclass(frozen=True)
class MeijerSpec:
    """Parameters of ``G^{q,0}_{r,q}(z | a_1..a_r ; b_1..b_q)``.

    Complex parameters are allowed in conjugate pairs (the function is then
    real on z > 0).
    """

    a: tuple[complex, ...] = ()
    b: tuple[complex, ...] = ()

    def __post_init__(self):
        a = tuple(_maybe_real(x) for x in self.a)
        b = tuple(_maybe_real(x) for x in self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if len(b) < 1:
            raise ContourError("at least one lower parameter is required")
        if len(b) < len(a):
            raise ContourError("G^{q,0}_{r,q} needs q >= r")
        if not (_conjugate_closed(a) and _conjugate_closed(b)):
            raise ContourError("complex parameters must come in conjugate pairs")
        if len(a) == len(b):
            excess = sum(complex(x).real for x in b) - sum(complex(x).real for x in a)
            if excess >= 0:
                raise ContourError("for q == r the contour needs sum(b) < sum(a)")

    @property
    def q(self) -> int:
        return len(self.b)

    @property
    def r(self) -> int:
        return len(self.a)

    @property
    def decay_order(self) -> int:
        """q - r; G decays like exp(-(q-r) z**(1/(q-r))) for large z."""
        return self.q - self.r


def _maybe_real(x):
    x = complex(x)
    return x.real if x.imag == 0 else x


class _Contour(NamedTuple):
    c: float
    bend: float
    step: float


def _saddle(ms: MeijerSpec, lnz: float) -> _Contour:
    b = np.array(ms.b, dtype=complex)
    a = np.array(ms.a, dtype=complex)
    rightmost_pole = -b.real.min()
    # For small z the integrand at Re s = c is ~ z**-c while G ~ z**(min b); keeping
    # the offset below 1/|ln z| bounds that cancellation by a factor e.
    floor = rightmost_pole + min(0.25, 1.0 / abs(lnz)) if lnz < 0 else rightmost_pole + 0.25

    def slope(c):
        return float(np.sum(digamma(b + c)).real - np.sum(digamma(a + c)).real - lnz)

    if slope(floor) >= 0:
        c = floor
    else:
        hi = floor + 1.0
        while slope(hi) < 0:
            hi = floor + 2.0 * (hi - floor)
            if hi > 1e8:
                raise ContourError("could not bracket the saddle point of the Mellin-Barnes integrand")
        c = brentq(slope, floor, hi, xtol=1e-12, rtol=1e-12)
    bend = 0.0 if ms.q > ms.r else 0.5
    # Nearest numerator pole, measured in the contour parameter.
    gaps = [c + float(np.real(bj)) for bj in b]
    width = min(gaps)
    if bend:
        width = min(width, 1.0 / (2.0 * bend))
    step = min(0.1, width / 5.0)
    return _Contour(c, bend, step)


def _log_integrand(ms: MeijerSpec, s: np.ndarray, lnz: float) -> np.ndarray:
    out = -s * lnz
    for bj in ms.b:
        out = out + loggamma(bj + s)
    for ai in ms.a:
        out = out - loggamma(ai + s)
    return out


def _half_contour(ms, contour, lnz, tau, ref):
    s = contour.c + 1j * tau - contour.bend * tau * tau
    ds = 1j - 2.0 * contour.bend * tau
    return (np.exp(_log_integrand(ms, s, lnz) - ref) * ds).imag


def meijer_g(ms: MeijerSpec, z: float, *, rtol: float = 1e-10, return_error: bool = False):
    """Evaluate ``G^{q,0}_{r,q}(z | a; b)`` for z > 0 by contour quadrature.

    With ``return_error=True`` returns ``(value, error_estimate)``; the
    estimate combines the step-halving difference and the truncated tail.
    """
    if not z > 0:
        raise DomainError("Meijer G is evaluated for z > 0 only")
    if ms.q == ms.r:
        if z > 1:
            return (0.0, 0.0) if return_error else 0.0
        if z == 1:
            raise DomainError("G^{q,0}_{q,q} is singular at z = 1")
    lnz = math.log(z)
    contour = _saddle(ms, lnz)
    ref = float(_log_integrand(ms, np.array([contour.c + 0j]), lnz)[0].real)

    h = contour.step
    span = 20.0
    for _ in range(12):
        tau = np.arange(0.0, span + 0.5 * h, 0.5 * h)
        vals = _half_contour(ms, contour, lnz, tau, ref)
        weights = np.full(tau.size, 2.0)
        weights[0] = 1.0
        fine = 0.5 * h * math.fsum(weights * vals)
        coarse = h * math.fsum(weights[::2] * vals[::2])
        last = 0.5 * h * abs(math.fsum(vals[tau > span - 5.0]))
        err = abs(fine - coarse) + last
        if last <= 1e-13 * abs(fine) or fine == 0:
            if err <= rtol * abs(fine):
                break
            h *= 0.5
        else:
            span *= 2.0
    else:
        raise ConvergenceError(f"Meijer G contour quadrature did not converge at z={z:g}")
    scale = math.exp(ref) / (2.0 * math.pi)
    value = fine * scale
    if return_error:
        return value, err * scale
    return value


def _kummer_positive_series(alpha: float, betas: Sequence[float], y: np.ndarray) -> list[np.ndarray]:
    """1F1(alpha, beta; y) for several beta at once; alpha > 0 and y >= 0 so all terms are positive."""
    if np.max(y, initial=0.0) > 600:
        raise DomainError("1F1 series is evaluated for x**2 <= 600 only")
    sums = [np.ones_like(y) for _ in betas]
    terms = [np.ones_like(y) for _ in betas]
    n = 0
    while True:
        done = True
        for j, beta in enumerate(betas):
            ratio = (alpha + n) * y / ((n + 1.0) * (beta + n))
            terms[j] = terms[j] * ratio
            sums[j] = sums[j] + terms[j]
            next_ratio = (alpha + n + 1.0) * y / ((n + 2.0) * (beta + n + 1.0))
            if np.any(next_ratio >= 0.5) or np.any(terms[j] > 1e-17 * sums[j]):
                done = False
        n += 1
        if done:
            return sums
        if n > 100_000:
            raise ConvergenceError("1F1 series did not converge")


def kummer_ratio(a: float, b: float, y, shift: int = 1):
    """``1F1(a+shift, b+shift; -y) / 1F1(a, b; -y)`` for y >= 0 (scalar or array).

    Both functions go through Kummer's transformation
    ``1F1(a, b; -y) = exp(-y) 1F1(b-a, b; y)``, so for b > a the series have
    positive terms and no cancellation at large y.
    """
    if _is_nonpositive_int(b):
        raise PoleError(f"1F1 lower parameter {b} is a nonpositive integer")
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr < 0):
        raise DomainError("kummer_ratio expects y >= 0")
    if b - a > 0:
        den, num = _kummer_positive_series(b - a, (b, b + shift), y_arr)
        out = num / den
        return float(out) if out.ndim == 0 else out
    if np.any(y_arr > 60):
        raise DomainError("alternating 1F1 series is not evaluated beyond x**2 = 60")
    out = []
    for yy in y_arr.ravel():
        den = pfq([b - a], [b], yy)
        if den == 0:
            raise ZeroDivisionError("1F1(a, b; -x^2) vanishes; the parameter condition is violated")
        out.append(pfq([b - a], [b + shift], yy) / den)
    out = np.array(out).reshape(y_arr.shape)
    return float(out) if out.ndim == 0 else out


def kummer_log_derivative(a: float, b: float, x):
    """``d/dx ln 1F1(a, b; -x**2) = -2x (a/b) 1F1(a+1, b+1; -x**2) / 1F1(a, b; -x**2)``."""
    x = np.asarray(x, dtype=float)
    if a == 0:
        out = np.zeros_like(x)
    else:
        out = -2.0 * x * (a / b) * kummer_ratio(a, b, x * x, 1)
    return float(out) if np.ndim(out) == 0 else out


def kummer_log_derivative_prime(a: float, b: float, x):
    """x-derivative of :func:`kummer_log_derivative`, by differentiating the ratio analytically."""
    x = np.asarray(x, dtype=float)
    if a == 0:
        out = np.zeros_like(x)
    else:
        y = x * x
        r1 = kummer_ratio(a, b, y, 1)
        r2 = kummer_ratio(a, b, y, 2)
        f = -2.0 * x * (a / b) * r1
        out = -2.0 * (a / b) * r1 + 4.0 * y * (a * (a + 1.0)) / (b * (b + 1.0)) * r2 - f * f
    return float(out) if np.ndim(out) == 0 else out
