"""Factory for the truncated matrices of the seven radiation-pressure models.

All Hamiltonians share the bare mirror term p^2/2 + Omega^2 x^2/2 and differ
in how the cavity couples to the mirror coordinate:

* ``lin``   (omega0 - G x)(a^dag a + 1/2)
* ``quad``  (omega0 - G x + beta2 x^2/2)(a^dag a + 1/2)
* ``phen``  omega(x)(a^dag a + 1/2) with the full omega(x) = omega0/(1 + x/L)
* ``nhat``  per-photon-sector harmonic re-expansion of ``phen`` around the
            exact sector minimum (block-diagonal by construction)
* ``mic``   two-mode microscopic model: nu(x)(a^dag a + 1/2)
            + lambda(x)(a^2 + a^dag^2)/2, with nu = (omega(x)^2 + omega0^2)/(2 omega0)
            and lambda = (omega(x)^2 - omega0^2)/(2 omega0); the annihilation
            operator is referenced to the fixed frequency omega0, so the Fock
            basis does not depend on the mirror coordinate
* ``mic1``  lin minus (G x/2)(a^2 + a^dag^2): first order in G
* ``mic2``  quad plus (beta2 x^2/4)(a^dag a + 1/2) minus (G x/2)(a^2 + a^dag^2)

The 'counter-rotating' combination a^2 + a^dag^2 is what breaks photon number
conservation in the microscopic family.
"""

from __future__ import annotations

import enum

import numpy as np

from . import analytic, fock
from .errors import DomainError, NumericalError
from .fock import OperatorMatrix
from .params import ModelParams, TruncationSpec

# A scalar function of x may not be evaluated closer to the pole at x = -L
# than this fraction of L; the truncated model is meaningless beyond it.
SINGULARITY_MARGIN = 1e-3


class ModelKind(enum.Enum):
    LIN = "lin"
    QUAD = "quad"
    NHAT = "nhat"
    PHEN = "phen"
    MIC1 = "mic1"
    MIC2 = "mic2"
    MIC = "mic"

    @classmethod
    def from_name(cls, name: str) -> "ModelKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(kind.value for kind in cls)
            raise DomainError(f"unknown model {name!r}; expected one of: {valid}") from None

    @property
    def conserves_photon_number(self) -> bool:
        return self in (ModelKind.LIN, ModelKind.QUAD, ModelKind.NHAT, ModelKind.PHEN)

    @property
    def has_closed_form(self) -> bool:
        return self in (ModelKind.LIN, ModelKind.QUAD, ModelKind.NHAT)


def frequency_guard(p: ModelParams) -> tuple[float, float]:
    """Open interval of mirror positions where omega(x) may be evaluated."""
    return (-p.L * (1.0 - SINGULARITY_MARGIN), np.inf)


def _omega_sq_of_x(x: OperatorMatrix, p: ModelParams) -> np.ndarray:
    """omega(x)^2 as a single spectral-function evaluation.

    Squaring the scalar inside one decomposition avoids a second round of
    matrix roundoff compared to squaring omega(x) as a matrix.
    """
    if not p.coupled:
        return p.omega0**2 * np.eye(x.dim, dtype=complex)
    return fock.apply_scalar_function(
        x, lambda s: (p.omega0 / (1.0 + s / p.L)) ** 2, frequency_guard(p)
    ).data


def _omega_of_x(x: OperatorMatrix, p: ModelParams) -> np.ndarray:
    if not p.coupled:
        return p.omega0 * np.eye(x.dim, dtype=complex)
    return fock.apply_scalar_function(
        x, lambda s: p.omega0 / (1.0 + s / p.L), frequency_guard(p)
    ).data


def build(kind: ModelKind, p: ModelParams, t: TruncationSpec) -> OperatorMatrix:
    """Assemble the Hermitian product-space matrix of the requested model."""
    a_op = fock.annihilation(t.field_dim)
    a = a_op.data
    eye_f = np.eye(t.field_dim, dtype=complex)
    eye_m = np.eye(t.mech_dim, dtype=complex)
    n_half = np.diag(np.arange(t.field_dim, dtype=float)).astype(complex) + 0.5 * eye_f
    x_op = fock.mech_position(t.m_max, p.Omega)
    x = x_op.data
    x_sq = x @ x
    p_mat = fock.mech_momentum(t.m_max, p.Omega).data
    h_mirror = p_mat @ p_mat / 2.0 + 0.5 * p.Omega**2 * x_sq
    counter_rotating = a @ a + (a @ a).conj().T

    if kind is ModelKind.LIN:
        data = np.kron(n_half, p.omega0 * eye_m - p.G * x) + np.kron(eye_f, h_mirror)
    elif kind is ModelKind.QUAD:
        pulled = p.omega0 * eye_m - p.G * x + 0.5 * p.beta2 * x_sq
        data = np.kron(n_half, pulled) + np.kron(eye_f, h_mirror)
    elif kind is ModelKind.PHEN:
        data = np.kron(n_half, _omega_of_x(x_op, p)) + np.kron(eye_f, h_mirror)
    elif kind is ModelKind.MIC:
        omega_sq = _omega_sq_of_x(x_op, p)
        nu = (omega_sq + p.omega0**2 * eye_m) / (2.0 * p.omega0)
        lam = (omega_sq - p.omega0**2 * eye_m) / (2.0 * p.omega0)
        data = (
            np.kron(n_half, nu)
            + np.kron(counter_rotating, lam / 2.0)
            + np.kron(eye_f, h_mirror)
        )
    elif kind is ModelKind.MIC1:
        data = (
            np.kron(n_half, p.omega0 * eye_m - p.G * x)
            + np.kron(eye_f, h_mirror)
            - np.kron(counter_rotating, 0.5 * p.G * x)
        )
    elif kind is ModelKind.MIC2:
        pulled = p.omega0 * eye_m - p.G * x + 0.5 * p.beta2 * x_sq
        data = (
            np.kron(n_half, pulled)
            + np.kron(n_half, 0.25 * p.beta2 * x_sq)
            + np.kron(eye_f, h_mirror)
            - np.kron(counter_rotating, 0.5 * p.G * x)
        )
    elif kind is ModelKind.NHAT:
        data = np.zeros((t.total_dim, t.total_dim), dtype=complex)
        dm = t.mech_dim
        for n in range(t.field_dim):
            x_bar = analytic.nhat_xbar(n, p)
            omega_n = analytic.nhat_omega(n, p, x_bar)
            floor = analytic.nhat_potential(x_bar, n, p)
            shifted = x - x_bar * eye_m
            block = p_mat @ p_mat / 2.0 + 0.5 * omega_n**2 * (shifted @ shifted) + floor * eye_m
            data[n * dm : (n + 1) * dm, n * dm : (n + 1) * dm] = block
    else:
        raise DomainError(f"unknown model kind {kind!r}")

    matrix = OperatorMatrix(data, fock.PRODUCT)
    defect = matrix.hermiticity_defect()
    if defect > fock.HERMITICITY_RTOL:
        raise NumericalError(f"built {kind.value} matrix has hermiticity defect {defect:.3e}")
    return matrix
