"""Closed-form eigensystem solvers for the exactly tractable models.

Three of the radiation-pressure models admit sector-wise harmonic-oscillator
solutions because they commute with the photon number operator:

* ``lin``  -- cavity frequency linearized in the mirror coordinate.  The
  mirror sees a displaced oscillator per photon sector, with an unchanged
  spring constant.  The spectrum is unbounded below at very large photon
  number, which is quantified by :func:`negative_energy_threshold`.
* ``quad`` -- cavity frequency expanded to second order.  Each sector has a
  stiffened frequency Omega_n and a finite displacement limit G/beta2.
* ``nhat`` -- the photon-controlled oscillator: the full Fabry-Perot
  frequency omega(x) = omega0/(1 + x/L) is kept, and each sector's potential
  is re-expanded around its exact minimum x_bar_n, found by a bracketed root
  solve of  Omega^2 x (1 + x/L)^2 = (n + 1/2) omega0 / L.

All functions are pure and cheap; they serve both as model solvers and as
independent oracles for the matrix diagonalization route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NumericalError
from .params import ModelParams

# Relative residual demanded of the equilibrium-position root solve; the
# downstream analytic-vs-numeric comparisons at 1e-8 need ample margin.
XBAR_RESIDUAL_RTOL = 1e-12

# Relative agreement demanded between the closed-form Omega_n^2 and the
# second derivative of the sector potential at its minimum.
CURVATURE_CONSISTENCY_RTOL = 1e-10

# Saturation sentinel for the negative-energy threshold.
N_STAR_CAP = 2**62

ANALYTIC_MODELS = ("lin", "quad", "nhat")


@dataclass(frozen=True)
class AnalyticEigenData:
    """One closed-form eigenstate record (photon sector n, phonon level m)."""

    model: str
    n: int
    m: int
    energy: float
    x_bar: float
    omega_n: float
    delta_x: float


def _check_indices(n: int, m: int) -> None:
    if n < 0 or m < 0:
        raise DomainError(f"Fock indices must be non-negative, got n={n}, m={m}")


def _delta_x(m: int, omega_n: float) -> float:
    return math.sqrt((m + 0.5) / (2.0 * omega_n))


def lin_energy(n: int, m: int, p: ModelParams) -> AnalyticEigenData:
    """Spectrum of the linearized model (the beta2 = 0 case of ``quad``)."""
    _check_indices(n, m)
    s = n + 0.5
    energy = s * p.omega0 + p.Omega * (m + 0.5) - p.G**2 * s**2 / (2.0 * p.Omega**2)
    x_bar = p.G * s / p.Omega**2
    return AnalyticEigenData("lin", n, m, energy, x_bar, p.Omega, _delta_x(m, p.Omega))


def quad_omega(n: int, p: ModelParams) -> float:
    """Stiffened sector frequency Omega_n = sqrt(Omega^2 + (n+1/2) beta2)."""
    return math.sqrt(p.Omega**2 + (n + 0.5) * p.beta2)


def quad_spectrum(n: int, m: int, p: ModelParams) -> AnalyticEigenData:
    """Spectrum of the second-order (quadratic) expansion model."""
    _check_indices(n, m)
    s = n + 0.5
    omega_n2 = p.Omega**2 + s * p.beta2
    omega_n = math.sqrt(omega_n2)
    x_bar = p.G * s / omega_n2
    energy = s * p.omega0 + omega_n * (m + 0.5) - p.G**2 * s**2 / (2.0 * omega_n2)
    return AnalyticEigenData("quad", n, m, energy, x_bar, omega_n, _delta_x(m, omega_n))


def nhat_potential(x: float, n: int, p: ModelParams) -> float:
    """Sector potential V_n(x) = omega(x) (n + 1/2) + Omega^2 x^2 / 2."""
    if p.coupled:
        omega_x = p.omega0 / (1.0 + x / p.L)
    else:
        omega_x = p.omega0
    return omega_x * (n + 0.5) + 0.5 * p.Omega**2 * x**2


def nhat_xbar(n: int, p: ModelParams) -> float:
    """Equilibrium mirror position of photon sector n for the full omega(x).

    The defining equation  Omega^2 x (1 + x/L)^2 = (n + 1/2) omega0 / L  is
    the intersection of a strictly increasing and a strictly decreasing
    function of x > 0, so the positive root is unique and bracketing is safe.
    The linear-model displacement G (n + 1/2) / Omega^2 is a provable upper
    bound, which seeds the bracket.
    """
    if n < 0:
        raise DomainError(f"photon number must be non-negative, got n={n}")
    if not p.coupled:
        return 0.0
    target = (n + 0.5) * p.omega0 / p.L

    def excess(x: float) -> float:
        return p.Omega**2 * x * (1.0 + x / p.L) ** 2 - target

    hi = p.G * (n + 0.5) / p.Omega**2
    while excess(hi) < 0.0:  # guard against rounding at the bracket edge
        hi *= 2.0
    root = brentq(excess, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
    residual = abs(excess(root))
    if residual > XBAR_RESIDUAL_RTOL * target:
        raise NumericalError(
            f"equilibrium solve for n={n} left relative residual "
            f"{residual / target:.3e} (> {XBAR_RESIDUAL_RTOL})"
        )
    return root


def nhat_omega(n: int, p: ModelParams, x_bar: float | None = None) -> float:
    """Sector frequency Omega_n = Omega sqrt(1 + 2 (x/L) / (1 + x/L)) at x = x_bar_n."""
    if not p.coupled:
        return p.Omega
    if x_bar is None:
        x_bar = nhat_xbar(n, p)
    r = x_bar / p.L
    return p.Omega * math.sqrt(1.0 + 2.0 * r / (1.0 + r))


def nhat_spectrum(n: int, m: int, p: ModelParams) -> AnalyticEigenData:
    """Spectrum of the photon-controlled oscillator model.

    Cross-checks that the closed-form Omega_n^2 equals the analytic second
    derivative of V_n at the computed minimum, which ties the root solve and
    the frequency formula together.
    """
    _check_indices(n, m)
    if not p.coupled:
        energy = (n + 0.5) * p.omega0 + p.Omega * (m + 0.5)
        return AnalyticEigenData("nhat", n, m, energy, 0.0, p.Omega, _delta_x(m, p.Omega))
    x_bar = nhat_xbar(n, p)
    omega_n = nhat_omega(n, p, x_bar)
    # V_n''(x) = 2 (n+1/2) omega0 / (L^2 (1+x/L)^3) + Omega^2
    curvature = 2.0 * (n + 0.5) * p.omega0 / (p.L**2 * (1.0 + x_bar / p.L) ** 3) + p.Omega**2
    if abs(curvature - omega_n**2) > CURVATURE_CONSISTENCY_RTOL * curvature:
        raise NumericalError(
            f"sector frequency inconsistent with potential curvature at n={n}: "
            f"{omega_n**2!r} vs {curvature!r}"
        )
    energy = nhat_potential(x_bar, n, p) + omega_n * (m + 0.5)
    return AnalyticEigenData("nhat", n, m, energy, x_bar, omega_n, _delta_x(m, omega_n))


@dataclass(frozen=True)
class ThresholdResult:
    """Smallest photon number with a negative linear-model sector energy."""

    n_star: int
    energy_before: float  # E_{n*-1, 0}; nan when n_star == 0
    energy_at: float      # E_{n*, 0}
    estimate: float       # leading-order estimate 2 omega0 Omega^2 / G^2
    saturated: bool


def negative_energy_threshold(p: ModelParams) -> ThresholdResult:
    """Locate where the linearized model turns unbounded below.

    E_{n,0} is a downward parabola in s = n + 1/2, so the positive root of
    the quadratic gives the crossing; the returned integer is verified by
    evaluating the closed form on both sides.
    """
    if not p.coupled:
        raise DomainError("threshold requires a positive coupling G")
    a = p.G**2 / (2.0 * p.Omega**2)
    s_star = (p.omega0 + math.sqrt(p.omega0**2 + 2.0 * a * p.Omega)) / (2.0 * a)
    estimate = 2.0 * p.omega0 * p.Omega**2 / p.G**2
    if not math.isfinite(s_star) or s_star - 0.5 >= N_STAR_CAP:
        return ThresholdResult(N_STAR_CAP, math.nan, math.nan, estimate, True)

    def ground_energy(n: int) -> float:
        return lin_energy(n, 0, p).energy

    n_star = max(0, math.ceil(s_star - 0.5))
    while n_star > 0 and ground_energy(n_star - 1) < 0.0:
        n_star -= 1
    while ground_energy(n_star) >= 0.0:
        n_star += 1
    energy_before = ground_energy(n_star - 1) if n_star > 0 else math.nan
    return ThresholdResult(n_star, energy_before, ground_energy(n_star), estimate, False)


@dataclass(frozen=True)
class AsymptoticLimits:
    """Large-photon-number limits of the sector displacement and frequency."""

    model: str
    x_bar_limit: float        # inf for nhat; G/beta2 for quad
    omega_limit: float        # sqrt(3) Omega for nhat; inf for quad
    sqrt_n_exponent: float | None  # fitted d log(Omega_n)/d log(n) (quad only)

FIT_WINDOW = (1e6, 1e9)
FIT_POINTS = 31


def asymptotics(model: str, p: ModelParams) -> AsymptoticLimits:
    """Large-n limits, plus a log-log scaling fit of Omega_n for ``quad``.

    The exponent is a least-squares slope over log-spaced photon numbers in
    ``FIT_WINDOW``; it approaches 1/2 once (n + 1/2) beta2 dominates Omega^2
    throughout the window.  These are formula limits evaluated in floating
    point, never matrix computations.
    """
    if model not in ("quad", "nhat"):
        raise DomainError(f"asymptotics is defined for 'quad' and 'nhat', got {model!r}")
    if not p.coupled:
        return AsymptoticLimits(model, 0.0, p.Omega, None)
    if model == "nhat":
        return AsymptoticLimits("nhat", math.inf, math.sqrt(3.0) * p.Omega, None)
    ns = np.logspace(math.log10(FIT_WINDOW[0]), math.log10(FIT_WINDOW[1]), FIT_POINTS)
    omegas = np.sqrt(p.Omega**2 + (ns + 0.5) * p.beta2)
    slope = float(np.polyfit(np.log(ns), np.log(omegas), 1)[0])
    return AsymptoticLimits("quad", p.G / p.beta2, math.inf, slope)
