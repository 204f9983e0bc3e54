"""Truncated bosonic operator algebra on dense matrices.

Basis convention, fixed once for the whole package: the product space is
field-major, i.e. the composite basis state |n, m> (n photons, m phonons)
sits at flat index  n * (m_max + 1) + m.  ``tensor`` therefore maps a field
operator A and a mechanical operator B to kron(A, B).

Operators are built from truncated ladder-matrix products, so commutators
pick up the usual corner artifacts confined to the highest Fock level (e.g.
[a, a^dag] equals the identity except for the last diagonal entry).  Scalar
functions of Hermitian operators go through an explicit eigendecomposition,
which keeps rational functions like omega(x) = omega0/(1 + x/L) exact on the
truncated spectrum instead of committing to a power-series order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, SingularityError
from .params import ModelParams, TruncationSpec

HERMITICITY_RTOL = 1e-12

FIELD = "field"
MECH = "mech"
PRODUCT = "product"


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex matrix tagged with the space it acts on."""

    data: np.ndarray
    space: str

    def __post_init__(self):
        if self.data.ndim != 2 or self.data.shape[0] != self.data.shape[1]:
            raise DomainError(f"operator matrix must be square, got shape {self.data.shape}")
        if self.space not in (FIELD, MECH, PRODUCT):
            raise DomainError(f"unknown space tag {self.space!r}")

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def hermiticity_defect(self) -> float:
        """max|M - M^dag| scaled by max|M| (0 for the zero matrix)."""
        scale = float(np.max(np.abs(self.data)))
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(self.data - self.data.conj().T))) / scale

    def is_hermitian(self, rtol: float = HERMITICITY_RTOL) -> bool:
        return self.hermiticity_defect() <= rtol

    def require_hermitian(self, rtol: float = HERMITICITY_RTOL) -> None:
        defect = self.hermiticity_defect()
        if defect > rtol:
            raise DomainError(f"matrix is not Hermitian (relative defect {defect:.3e})")


def annihilation(dim: int, space: str = FIELD) -> OperatorMatrix:
    """Ladder matrix with <k-1| a |k> = sqrt(k) on a dim-level truncation."""
    if dim < 2:
        raise DomainError(f"annihilation needs dim >= 2, got {dim}")
    data = np.zeros((dim, dim), dtype=complex)
    ks = np.arange(1, dim)
    data[ks - 1, ks] = np.sqrt(ks)
    return OperatorMatrix(data, space)


def number_operator(dim: int, space: str = FIELD) -> OperatorMatrix:
    return OperatorMatrix(np.diag(np.arange(dim, dtype=float)).astype(complex), space)


def identity(dim: int, space: str) -> OperatorMatrix:
    return OperatorMatrix(np.eye(dim, dtype=complex), space)


def mech_position(m_max: int, Omega: float) -> OperatorMatrix:
    """Mirror position x = x_zpf (b + b^dag) on dimension m_max + 1."""
    if m_max < 1:
        raise DomainError(f"m_max must be >= 1, got {m_max}")
    b = annihilation(m_max + 1, MECH).data
    x_zpf = 1.0 / math.sqrt(2.0 * Omega)
    return OperatorMatrix(x_zpf * (b + b.conj().T), MECH)


def mech_momentum(m_max: int, Omega: float) -> OperatorMatrix:
    """Mirror momentum p = i sqrt(Omega/2) (b^dag - b) on dimension m_max + 1."""
    if m_max < 1:
        raise DomainError(f"m_max must be >= 1, got {m_max}")
    b = annihilation(m_max + 1, MECH).data
    return OperatorMatrix(1j * math.sqrt(Omega / 2.0) * (b.conj().T - b), MECH)


def apply_scalar_function(
    M: OperatorMatrix,
    f: Callable[[np.ndarray], np.ndarray],
    domain_guard: tuple[float, float] = (-math.inf, math.inf),
) -> OperatorMatrix:
    """f(M) = V f(D) V^dag for Hermitian M with eigenvalues inside the guard.

    The guard protects against evaluating f near a pole: any eigenvalue of M
    outside the open interval aborts with a SingularityError naming it.
    """
    M.require_hermitian()
    eigenvalues, V = np.linalg.eigh(M.data)
    lo, hi = domain_guard
    inside = (eigenvalues > lo) & (eigenvalues < hi)
    if not bool(np.all(inside)):
        offender = float(eigenvalues[~inside][0])
        raise SingularityError(
            f"eigenvalue {offender!r} of the operator falls outside the "
            f"allowed domain ({lo!r}, {hi!r})"
        )
    mapped = np.asarray(f(eigenvalues), dtype=float)
    result = (V * mapped) @ V.conj().T
    result = 0.5 * (result + result.conj().T)  # scrub roundoff asymmetry
    return OperatorMatrix(result, M.space)


def tensor(field_op: OperatorMatrix, mech_op: OperatorMatrix) -> OperatorMatrix:
    """Field-major Kronecker product of a field and a mechanical operator."""
    if field_op.space != FIELD or mech_op.space != MECH:
        raise DomainError(
            f"tensor expects (field, mech) operators, got "
            f"({field_op.space!r}, {mech_op.space!r})"
        )
    return OperatorMatrix(np.kron(field_op.data, mech_op.data), PRODUCT)


@dataclass(frozen=True)
class ProductOperators:
    """Frequently used product-space observables for one truncation."""

    trunc: TruncationSpec
    number: np.ndarray        # a^dag a  (x) 1
    annihilation: np.ndarray  # a        (x) 1
    position: np.ndarray      # 1        (x) x
    position_sq: np.ndarray   # 1        (x) x @ x


def product_operators(p: ModelParams, t: TruncationSpec) -> ProductOperators:
    a = annihilation(t.field_dim, FIELD)
    n_field = number_operator(t.field_dim, FIELD)
    x = mech_position(t.m_max, p.Omega)
    x_sq = OperatorMatrix(x.data @ x.data, MECH)
    eye_m = identity(t.mech_dim, MECH)
    return ProductOperators(
        trunc=t,
        number=tensor(n_field, eye_m).data,
        annihilation=tensor(a, eye_m).data,
        position=tensor(identity(t.field_dim, FIELD), x).data,
        position_sq=tensor(identity(t.field_dim, FIELD), x_sq).data,
    )
