"""Truncated matrix representation of K_0, K_+, K_- and the Casimir on |k, n>, n = 0..N.

Truncation breaks the algebra only in the last row and column (K_+ has no
image beyond n = N), so every check below is restricted to indices 0..N-1.
Defects are reported relative to the magnitude of the operands on each row
(with a floor of one): the structure factor grows like n**(2p), and an
absolute tolerance would measure double-precision rounding of those large
entries rather than the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .algebra import AlgebraSpec, StructureSequence, eval_structure_function

__all__ = [
    "TruncatedRep",
    "StructureDefects",
    "build_rep",
    "commutator_defect",
    "structure_defects",
    "polynomial_commutator_defect",
]


@dataclass(frozen=True, eq=False)
class TruncatedRep:
    spec: AlgebraSpec
    N: int
    K0: np.ndarray
    Kplus: np.ndarray
    Kminus: np.ndarray
    Casimir: np.ndarray

    @property
    def dim(self) -> int:
        return self.N + 1

    def phi_of(self, shift: int) -> np.ndarray:
        """Diagonal matrix Phi(K0 (K0 + shift)) for shift = +1 or -1."""
        m = np.diag(self.K0)
        return np.diag(eval_structure_function(self.spec, m * (m + shift)))

    def with_matrices(self, **changes) -> "TruncatedRep":
        fields = dict(spec=self.spec, N=self.N, K0=self.K0, Kplus=self.Kplus, Kminus=self.Kminus,
                      Casimir=self.Casimir)
        fields.update(changes)
        return TruncatedRep(**fields)


class StructureDefects(NamedTuple):
    casimir_defect: float
    adjoint_defect: float


def build_rep(spec: AlgebraSpec, N: int) -> TruncatedRep:
    if N < 1:
        raise ValueError("truncation order N must be at least 1")
    seq = StructureSequence(spec)
    n = np.arange(N + 1)
    ladder = np.sqrt(seq.phi(np.arange(1, N + 1)))
    K0 = np.diag(spec.k + n.astype(float))
    Kplus = np.diag(ladder, -1)
    Kminus = np.ascontiguousarray(Kplus.T)
    m = spec.k + n
    casimir = -Kminus @ Kplus + np.diag(eval_structure_function(spec, m * (m + 1.0)))
    return TruncatedRep(spec, N, K0, Kplus, Kminus, casimir)


def _row_scaled(diff: np.ndarray, *operands: np.ndarray) -> float:
    inner = slice(0, diff.shape[0] - 1)
    d = np.abs(diff[inner, inner])
    scale = np.ones(d.shape[0])
    for op in operands:
        scale = np.maximum(scale, np.abs(op[inner, inner]).max(axis=1))
    return float((d / scale[:, None]).max())


def commutator_defect(rep: TruncatedRep) -> float:
    """Largest interior deviation from the defining relations

    [K_+, K_-] = Phi(K0(K0-1)) - Phi(K0(K0+1)),   [K0, K_+-] = +-K_+-.
    """
    kp, km, k0 = rep.Kplus, rep.Kminus, rep.K0
    pk, mk = kp @ km, km @ kp
    lower, upper = rep.phi_of(-1), rep.phi_of(+1)
    d_pm = _row_scaled(pk - mk - (lower - upper), pk, mk, lower, upper)
    d_0p = _row_scaled(k0 @ kp - kp @ k0 - kp, k0 @ kp, kp @ k0)
    d_0m = _row_scaled(k0 @ km - km @ k0 + km, k0 @ km, km @ k0)
    return max(d_pm, d_0p, d_0m)


def structure_defects(rep: TruncatedRep) -> StructureDefects:
    """Casimir and adjointness defects.

    Both forms  -K_- K_+ + Phi(K0(K0+1))  and  -K_+ K_- + Phi(K0(K0-1))  are
    compared against Phi(k(k-1)) times the identity on interior indices.
    """
    kp, km = rep.Kplus, rep.Kminus
    target = eval_structure_function(rep.spec, rep.spec.casimir_argument) * np.eye(rep.dim)
    mk, pk = km @ kp, kp @ km
    upper, lower = rep.phi_of(+1), rep.phi_of(-1)
    first = _row_scaled(-mk + upper - target, mk, upper, target)
    second = _row_scaled(-pk + lower - target, pk, lower, target)
    adjoint = float(np.abs(kp - km.T).max())
    return StructureDefects(max(first, second), adjoint)


def polynomial_commutator_defect(rep: TruncatedRep, coeffs) -> float:
    """Deviation of [K_+, K_-] from the polynomial sum_j coeffs[j] * K0**j (interior rows)."""
    m = np.diag(rep.K0)
    rhs = np.diag(np.polynomial.polynomial.polyval(m, coeffs))
    pk, mk = rep.Kplus @ rep.Kminus, rep.Kminus @ rep.Kplus
    return _row_scaled(pk - mk - rhs, pk, mk, rhs)
