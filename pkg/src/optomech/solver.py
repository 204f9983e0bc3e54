"""Hermitian eigensolution, photon-sector labeling, and spectral time evolution.

The solver diagonalizes once and reuses the eigendecomposition for all time
samples (the Hamiltonians are time independent).  Eigenvectors carry a fixed
phase convention -- first component above threshold made real positive -- so
repeated runs produce identical output.

Photon sectors of the non-number-conserving models are labeled by the integer
closest to n_bar = <a^dag a>; the distance |n - n_bar| is reported as the
labeling confidence and records with confidence >= 0.5 are dropped with a
warning.  Only sectors a safety margin below n_max are reported, since the
highest sectors are polluted by the Fock-space truncation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LabelingError, NumericalError
from .fock import OperatorMatrix, ProductOperators, product_operators
from .hamiltonians import ModelKind, build
from .params import ModelParams, TruncationSpec

RESIDUAL_RTOL = 1e-9           # eigenpair residual, relative to the spectral range
ORTHONORMALITY_TOL = 1e-10     # max-norm of V^dag V - I
NORM_DRIFT_TOL = 1e-10         # state-norm deviation allowed during evolution
SECTOR_MARGIN = 5              # highest reported sector is n_max - SECTOR_MARGIN
CONFIDENCE_REJECT = 0.5        # records at or above this |n - n_bar| are dropped
CONFIDENCE_WARN = 0.1          # records above this are kept but warned about
COHERENT_TAIL_TOL = 1e-8       # truncated probability mass allowed in |alpha>
PHASE_THRESHOLD = 1e-12        # relative size of the component that fixes the phase


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and orthonormal eigenvectors with diagnostics."""

    eigenvalues: np.ndarray   # shape (dim,), real, ascending
    eigenvectors: np.ndarray  # shape (dim, dim), columns
    residual: float           # max_j ||H v_j - w_j v_j||_2
    dim: int

    @property
    def spectral_range(self) -> float:
        return float(self.eigenvalues[-1] - self.eigenvalues[0])

    @property
    def min_gap(self) -> float:
        """Smallest adjacent eigenvalue spacing; eigenvectors are sensitive to
        perturbations at the scale (matrix norm)/(gap)."""
        return float(np.min(np.diff(self.eigenvalues)))


def _fix_phases(V: np.ndarray) -> np.ndarray:
    """Rotate each column so its first non-negligible component is real positive."""
    mags = np.abs(V)
    thresholds = PHASE_THRESHOLD * mags.max(axis=0)
    first = (mags > thresholds[None, :]).argmax(axis=0)
    anchors = V[first, np.arange(V.shape[1])]
    phases = anchors / np.abs(anchors)
    return V * phases.conj()[None, :]


def eigh(H: OperatorMatrix) -> EigenSystem:
    """Diagonalize a Hermitian operator, enforcing the accuracy contract."""
    H.require_hermitian()
    eigenvalues, V = np.linalg.eigh(H.data)
    V = _fix_phases(V)
    residual_matrix = H.data @ V - V * eigenvalues[None, :]
    residual = float(np.max(np.linalg.norm(residual_matrix, axis=0)))
    spectral_range = float(eigenvalues[-1] - eigenvalues[0])
    bound = RESIDUAL_RTOL * max(spectral_range, np.finfo(float).tiny)
    if residual > bound:
        raise NumericalError(
            f"eigensolver residual {residual:.3e} exceeds {bound:.3e} "
            f"(dim={H.dim}, spectral range={spectral_range:.3e})"
        )
    gram_defect = float(np.max(np.abs(V.conj().T @ V - np.eye(H.dim))))
    if gram_defect > ORTHONORMALITY_TOL:
        raise NumericalError(f"eigenvector orthonormality defect {gram_defect:.3e}")
    return EigenSystem(eigenvalues, V, residual, H.dim)


def solve_model(kind: ModelKind, p: ModelParams, t: TruncationSpec) -> EigenSystem:
    """Build and diagonalize one model; convenience for the harness/service."""
    return eigh(build(kind, p, t))


# ---------------------------------------------------------------------------
# Sector labeling and eigenstate observables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectorLevel:
    """One labeled eigenstate: m-th level of effective photon sector n."""

    n: int
    m: int
    energy: float
    x_mean: float
    x_std: float
    n_bar: float
    confidence: float  # |n - n_bar|


@dataclass(frozen=True)
class SectorObservables:
    """Per-sector ground-level record (the m = 0 row of the sector table)."""

    n: int
    E_n0: float
    x_mean: float
    x_std: float
    n_bar: float
    confidence: float


def eigenstate_observables(
    v: np.ndarray, x_op: np.ndarray, x2_op: np.ndarray
) -> tuple[float, float]:
    """Position mean and spread of a normalized state vector."""
    x_mean = float(np.real(v.conj() @ (x_op @ v)))
    radicand = float(np.real(v.conj() @ (x2_op @ v))) - x_mean**2
    if radicand < 0.0:
        if radicand < -1e-12:
            raise NumericalError(f"negative position variance {radicand:.3e}")
        warnings.warn(f"clipping tiny negative position variance {radicand:.3e}", stacklevel=2)
        radicand = 0.0
    return x_mean, math.sqrt(radicand)


def sector_spectrum(
    es: EigenSystem,
    ops: ProductOperators,
    n_keep: int,
    m_keep: int = 0,
    margin: int = SECTOR_MARGIN,
) -> list[SectorLevel]:
    """Group eigenstates by effective photon number and enumerate levels.

    Returns records for n = 0..n_keep and m = 0..m_keep, where m indexes the
    energy rank inside the sector.  A missing sector (or one left with fewer
    than m_keep + 1 trustworthy levels) raises LabelingError, which signals a
    truncation that is too small or a regime where the labeling breaks down.
    """
    t = ops.trunc
    if n_keep < 0:
        raise DomainError("n_keep must be non-negative")
    if n_keep > t.n_max - margin:
        raise DomainError(
            f"n_keep={n_keep} exceeds n_max - margin = {t.n_max - margin}; "
            f"higher sectors are truncation-polluted"
        )
    V = es.eigenvectors
    n_bars = np.real(np.einsum("ij,ij->j", V.conj(), ops.number @ V))
    labels = np.rint(n_bars).astype(int)
    confidences = np.abs(n_bars - labels)
    trusted = confidences < CONFIDENCE_REJECT
    if not bool(np.all(trusted)):
        worst = float(confidences.max())
        warnings.warn(
            f"{int((~trusted).sum())} eigenstates dropped from sector labeling "
            f"(|n - n_bar| up to {worst:.3f})",
            stacklevel=2,
        )
    records: list[SectorLevel] = []
    for n in range(n_keep + 1):
        indices = np.nonzero(trusted & (labels == n))[0]
        if indices.size < m_keep + 1:
            raise LabelingError(
                f"sector n={n} has only {indices.size} trustworthy levels "
                f"(need {m_keep + 1}); increase the truncation or check the regime"
            )
        indices = indices[np.argsort(es.eigenvalues[indices], kind="stable")]
        for m in range(m_keep + 1):
            i = int(indices[m])
            confidence = float(confidences[i])
            if confidence >= CONFIDENCE_WARN:
                warnings.warn(
                    f"sector n={n}, level m={m}: weak labeling confidence "
                    f"|n - n_bar| = {confidence:.3f}",
                    stacklevel=2,
                )
            x_mean, x_std = eigenstate_observables(V[:, i], ops.position, ops.position_sq)
            records.append(
                SectorLevel(n, m, float(es.eigenvalues[i]), x_mean, x_std,
                            float(n_bars[i]), confidence)
            )
    return records


def label_sectors(
    es: EigenSystem,
    ops: ProductOperators,
    n_keep: int,
    margin: int = SECTOR_MARGIN,
) -> list[SectorObservables]:
    """Lowest level of each effective photon sector n = 0..n_keep."""
    return [
        SectorObservables(r.n, r.energy, r.x_mean, r.x_std, r.n_bar, r.confidence)
        for r in sector_spectrum(es, ops, n_keep, m_keep=0, margin=margin)
    ]


# ---------------------------------------------------------------------------
# Initial states and spectral time evolution
# ---------------------------------------------------------------------------


def coherent_vacuum_state(alpha: complex, t: TruncationSpec) -> tuple[np.ndarray, float]:
    """Truncated |alpha> on the field, tensored with the mechanical ground state.

    The coherent amplitudes are renormalized after truncation; the discarded
    tail mass is returned.  Guards reject amplitudes whose photon distribution
    is not comfortably inside the truncation.
    """
    mean_photons = abs(alpha) ** 2
    if mean_photons > t.n_max / 2.0:
        raise DomainError(
            f"|alpha|^2 = {mean_photons:.3f} exceeds n_max/2 = {t.n_max / 2.0}; "
            f"increase n_max"
        )
    ns = np.arange(t.field_dim)
    # log-domain magnitudes: exp(-|a|^2/2) |a|^n / sqrt(n!)
    if alpha == 0:
        amplitudes = np.zeros(t.field_dim, dtype=complex)
        amplitudes[0] = 1.0
        tail_mass = 0.0
    else:
        log_mag = (
            -mean_photons / 2.0
            + ns * math.log(abs(alpha))
            - 0.5 * np.cumsum(np.concatenate(([0.0], np.log(ns[1:]))))
        )
        amplitudes = np.exp(log_mag) * np.exp(1j * np.angle(alpha) * ns)
        head_mass = float(np.sum(np.abs(amplitudes) ** 2))
        tail_mass = 1.0 - head_mass
        if tail_mass > COHERENT_TAIL_TOL:
            raise DomainError(
                f"coherent-state tail mass {tail_mass:.3e} beyond n_max={t.n_max} "
                f"exceeds {COHERENT_TAIL_TOL}; increase n_max"
            )
        amplitudes = amplitudes / math.sqrt(head_mass)
    mech_ground = np.zeros(t.mech_dim, dtype=complex)
    mech_ground[0] = 1.0
    return np.kron(amplitudes, mech_ground), tail_mass


def default_times(p: ModelParams, t_max_periods: float = 3.0, t_steps: int = 600) -> np.ndarray:
    """Uniform grid of t_steps intervals over the given number of mechanical
    periods; the endpoints land exactly on multiples of pi/Omega when t_steps
    is divisible by 2 * t_max_periods."""
    if t_max_periods <= 0 or t_steps < 1:
        raise DomainError("need t_max_periods > 0 and t_steps >= 1")
    t_max = t_max_periods * 2.0 * math.pi / p.Omega
    return np.linspace(0.0, t_max, t_steps + 1)


@dataclass(frozen=True)
class TimeSeries:
    """Sampled expectation values along a spectral-propagator evolution."""

    times: np.ndarray
    x_mean: np.ndarray      # real
    a_mean: np.ndarray      # complex
    norm_dev: np.ndarray    # | ||psi(t)|| - 1 | per sample

    @property
    def norm_drift(self) -> float:
        return float(np.max(self.norm_dev))


def evolve(
    es: EigenSystem,
    psi0: np.ndarray,
    times: np.ndarray,
    ops: ProductOperators,
    t_cap: float = 1e6,
) -> TimeSeries:
    """Evolve |psi0> under exp(-i H t) using the eigendecomposition of H."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise DomainError("times must be a non-empty 1-D array")
    if times[0] < 0.0 or times[-1] > t_cap:
        raise DomainError(f"times must lie in [0, {t_cap}]")
    if times.size > 1 and not bool(np.all(np.diff(times) > 0.0)):
        raise DomainError("times must be strictly increasing")
    norm0 = float(np.linalg.norm(psi0))
    if abs(norm0 - 1.0) > 1e-12:
        raise DomainError(f"initial state norm {norm0!r} is not 1")

    coefficients = es.eigenvectors.conj().T @ psi0
    phases = np.exp(-1j * np.outer(es.eigenvalues, times)) * coefficients[:, None]
    states = es.eigenvectors @ phases  # (dim, n_times)

    norm_dev = np.abs(np.linalg.norm(states, axis=0) - 1.0)
    drift = float(np.max(norm_dev))
    if drift > NORM_DRIFT_TOL:
        raise NumericalError(f"state norm drifted by {drift:.3e} during evolution")
    x_mean = np.real(np.einsum("it,it->t", states.conj(), ops.position @ states))
    a_mean = np.einsum("it,it->t", states.conj(), ops.annihilation @ states)
    return TimeSeries(times, x_mean, a_mean, norm_dev)


def reduced_field_purity(psi: np.ndarray, t: TruncationSpec) -> float:
    """Tr(rho_field^2) after tracing out the mirror (field-major layout)."""
    block = np.reshape(psi, (t.field_dim, t.mech_dim))
    gram = block.conj().T @ block
    return float(np.real(np.sum(np.abs(gram) ** 2)))
