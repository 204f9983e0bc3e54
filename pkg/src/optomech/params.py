"""Model constants and run configuration.

Natural units are fixed once here: hbar = 1, unit effective mirror mass, and
the bare mechanical frequency Omega = 1, so energies are quoted in units of
Omega and lengths in units where x_zpf = 1/sqrt(2).  Every physical rate is
derived from the two dimensionless inputs omega0/Omega and g0/Omega.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError, ResourceLimitError

# Relative tolerance for the internal consistency identities between the
# derived constants (g0 = G*x_zpf, L*G = omega0, beta2*omega0 = 2 G^2).
IDENTITY_RTOL = 1e-14

# Largest allowed Fock index per mode; a dense eigensolve scales with the
# cube of (n_max+1)*(m_max+1), so this bounds memory and runtime.
DEFAULT_HARD_CAP = 200


@dataclass(frozen=True)
class ModelParams:
    """Physical rates of the optomechanical system in Omega = 1 units.

    Attributes:
        omega0: bare cavity frequency.
        Omega: bare mechanical frequency (1.0 by construction).
        g0: vacuum optomechanical coupling strength.
        x_zpf: mechanical zero-point fluctuation, 1/sqrt(2*Omega).
        G: frequency pull parameter, g0/x_zpf.
        L: bare cavity length, omega0/G (inf when the coupling is switched off).
        beta2: curvature of the cavity frequency, 2*G**2/omega0.
        hierarchy_warning: True when omega0 > Omega > g0 does not hold.
    """

    omega0: float
    Omega: float
    g0: float
    x_zpf: float
    G: float
    L: float
    beta2: float
    hierarchy_warning: bool = False

    def __post_init__(self):
        if self.G == 0.0:
            # Explicit zero-coupling switch: g0 = G = beta2 = 0, L = inf.
            if self.omega0 <= 0 or self.Omega <= 0 or self.x_zpf <= 0:
                raise DomainError("frequencies and x_zpf must be positive")
            if self.g0 != 0.0 or self.beta2 != 0.0 or not math.isinf(self.L):
                raise DomainError("inconsistent zero-coupling parameters")
            return
        for name in ("omega0", "Omega", "g0", "x_zpf", "G", "L", "beta2"):
            value = getattr(self, name)
            if not (value > 0) or not math.isfinite(value):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        checks = (
            ("g0 = G*x_zpf", self.G * self.x_zpf, self.g0),
            ("L*G = omega0", self.L * self.G, self.omega0),
            ("beta2*omega0 = 2 G^2", self.beta2 * self.omega0, 2.0 * self.G**2),
        )
        for label, got, want in checks:
            if abs(got - want) > IDENTITY_RTOL * abs(want):
                raise DomainError(f"derived-constant identity violated: {label}")

    @property
    def coupled(self) -> bool:
        return self.G != 0.0

    @classmethod
    def uncoupled(cls, omega0_over_Omega: float) -> "ModelParams":
        """Zero-coupling switch: G = 0 exactly, avoiding L = omega0/G hazards."""
        if not omega0_over_Omega > 0:
            raise DomainError("omega0/Omega must be positive")
        return cls(
            omega0=float(omega0_over_Omega),
            Omega=1.0,
            g0=0.0,
            x_zpf=1.0 / math.sqrt(2.0),
            G=0.0,
            L=math.inf,
            beta2=0.0,
            hierarchy_warning=not (omega0_over_Omega > 1.0),
        )


def derive_params(omega0_over_Omega: float, g0_over_Omega: float) -> ModelParams:
    """Derive all model constants from the two dimensionless input ratios.

    Violating the usual scale hierarchy omega0 > Omega > g0 is allowed (the
    regime of comparable cavity and mechanical frequencies is still physically
    meaningful) but sets ``hierarchy_warning`` and emits a UserWarning.
    """
    if not (omega0_over_Omega > 0) or not math.isfinite(omega0_over_Omega):
        raise DomainError(f"omega0/Omega must be positive, got {omega0_over_Omega!r}")
    if not (g0_over_Omega > 0) or not math.isfinite(g0_over_Omega):
        raise DomainError(f"g0/Omega must be positive, got {g0_over_Omega!r}")
    Omega = 1.0
    omega0 = float(omega0_over_Omega)
    g0 = float(g0_over_Omega)
    x_zpf = 1.0 / math.sqrt(2.0 * Omega)
    G = g0 / x_zpf
    L = omega0 / G
    beta2 = 2.0 * G**2 / omega0
    hierarchy_warning = not (omega0 > Omega > g0)
    if hierarchy_warning:
        warnings.warn(
            f"scale hierarchy omega0 > Omega > g0 violated "
            f"(omega0={omega0}, Omega={Omega}, g0={g0})",
            UserWarning,
            stacklevel=2,
        )
    return ModelParams(
        omega0=omega0,
        Omega=Omega,
        g0=g0,
        x_zpf=x_zpf,
        G=G,
        L=L,
        beta2=beta2,
        hierarchy_warning=hierarchy_warning,
    )


@dataclass(frozen=True)
class TruncationSpec:
    """Fock-space truncation: photon indices 0..n_max, phonon indices 0..m_max."""

    n_max: int
    m_max: int
    hard_cap: int = DEFAULT_HARD_CAP

    def __post_init__(self):
        for name in ("n_max", "m_max"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise DomainError(f"{name} must be an integer >= 1, got {value!r}")
        if self.n_max > self.hard_cap or self.m_max > self.hard_cap:
            raise ResourceLimitError(
                f"truncation ({self.n_max},{self.m_max}) exceeds the hard cap "
                f"of {self.hard_cap} per mode"
            )
        if self.total_dim < 4:
            raise DomainError("total dimension must be at least 4")

    @property
    def field_dim(self) -> int:
        return self.n_max + 1

    @property
    def mech_dim(self) -> int:
        return self.m_max + 1

    @property
    def total_dim(self) -> int:
        return self.field_dim * self.mech_dim


# ---------------------------------------------------------------------------
# Run configuration files: one "key = value" per line, '#' starts a comment.
# ---------------------------------------------------------------------------

CONFIG_DEFAULTS: dict[str, object] = {
    "omega0_over_Omega": 100.0,
    "g0_over_Omega": 0.01,
    "n_max": 20,
    "m_max": 30,
    "alpha_re": 2.0,
    "alpha_im": 0.0,
    "t_max_periods": 3.0,
    "t_steps": 600,
    "models": ["lin", "quad", "nhat", "phen", "mic2"],
}

_FLOAT_KEYS = ("omega0_over_Omega", "g0_over_Omega", "alpha_re", "alpha_im", "t_max_periods")
_INT_KEYS = ("n_max", "m_max", "t_steps")


def parse_config_text(text: str) -> dict[str, object]:
    """Parse a config file body into a settings dict with defaults applied.

    Unknown keys raise DomainError; so do malformed lines and values.
    """
    settings = dict(CONFIG_DEFAULTS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in CONFIG_DEFAULTS:
            raise DomainError(f"config line {lineno}: unknown key {key!r}")
        try:
            if key in _FLOAT_KEYS:
                settings[key] = float(value)
            elif key in _INT_KEYS:
                settings[key] = int(value)
            else:  # models
                names = [item.strip() for item in value.split(",") if item.strip()]
                if not names:
                    raise ValueError("empty model list")
                settings[key] = names
        except ValueError as exc:
            raise DomainError(f"config line {lineno}: bad value for {key!r}: {value!r}") from exc
    return settings


def parse_config_file(path: str | Path) -> dict[str, object]:
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


def params_from_config(settings: dict[str, object]) -> ModelParams:
    return derive_params(float(settings["omega0_over_Omega"]), float(settings["g0_over_Omega"]))


def truncation_from_config(settings: dict[str, object]) -> TruncationSpec:
    return TruncationSpec(int(settings["n_max"]), int(settings["m_max"]))


def alpha_from_config(settings: dict[str, object]) -> complex:
    return complex(float(settings["alpha_re"]), float(settings["alpha_im"]))
