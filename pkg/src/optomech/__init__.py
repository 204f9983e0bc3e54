"""Cross-comparison of radiation-pressure Hamiltonians on truncated Fock spaces.

The package builds six models of a Fabry-Perot cavity with a movable mirror
(linearized, quadratic, photon-controlled, phenomenological, and first/second
order microscopic) plus the full two-mode microscopic benchmark, solves their
eigensystems and dynamics, and tabulates absolute errors against the
benchmark.  An HTTP service (``optomech.service``) exposes the harness; the
``optomech`` CLI is a thin client over it.
"""

__version__ = "0.1.0"

from .analytic import (
    AnalyticEigenData,
    asymptotics,
    lin_energy,
    negative_energy_threshold,
    nhat_spectrum,
    nhat_xbar,
    quad_spectrum,
)
from .errors import (
    DomainError,
    LabelingError,
    NumericalError,
    OptomechError,
    ResourceLimitError,
    SingularityError,
)
from .fock import (
    OperatorMatrix,
    annihilation,
    apply_scalar_function,
    mech_momentum,
    mech_position,
    product_operators,
    tensor,
)
from .hamiltonians import ModelKind, build
from .harness import (
    agreement_scaling,
    compare_dynamics,
    compare_spectra,
    convergence_scan,
    render_csv,
)
from .params import ModelParams, TruncationSpec, derive_params, parse_config_file
from .solver import (
    EigenSystem,
    SectorLevel,
    SectorObservables,
    TimeSeries,
    coherent_vacuum_state,
    default_times,
    eigh,
    evolve,
    label_sectors,
    sector_spectrum,
    solve_model,
)

__all__ = [
    "__version__",
    "AnalyticEigenData",
    "DomainError",
    "EigenSystem",
    "LabelingError",
    "ModelKind",
    "ModelParams",
    "NumericalError",
    "OperatorMatrix",
    "OptomechError",
    "ResourceLimitError",
    "SectorLevel",
    "SectorObservables",
    "SingularityError",
    "TimeSeries",
    "TruncationSpec",
    "agreement_scaling",
    "annihilation",
    "apply_scalar_function",
    "asymptotics",
    "build",
    "coherent_vacuum_state",
    "compare_dynamics",
    "compare_spectra",
    "convergence_scan",
    "default_times",
    "derive_params",
    "eigh",
    "evolve",
    "label_sectors",
    "lin_energy",
    "mech_momentum",
    "mech_position",
    "negative_energy_threshold",
    "nhat_spectrum",
    "nhat_xbar",
    "parse_config_file",
    "product_operators",
    "quad_spectrum",
    "render_csv",
    "sector_spectrum",
    "solve_model",
    "tensor",
]
