"""Pydantic request/response models for the comparison service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class RunConfig(BaseModel):
    """Mirror of the plain-text config file; unknown fields are rejected."""

    model_config = ConfigDict(extra="forbid")

    omega0_over_Omega: float = 100.0
    g0_over_Omega: float = 0.01
    n_max: int = 20
    m_max: int = 30
    alpha_re: float = 2.0
    alpha_im: float = 0.0
    t_max_periods: float = 3.0
    t_steps: int = 600
    models: list[str] = Field(default_factory=lambda: ["lin", "quad", "nhat", "phen", "mic2"])


class SpectrumRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: RunConfig = Field(default_factory=RunConfig)
    model: str
    n_keep: int | None = None
    m_keep: int | None = None


class SpectrumRow(BaseModel):
    n: int
    m: int
    energy: float
    x_mean: float
    x_std: float
    n_bar: float
    confidence: float


class SpectrumResponse(BaseModel):
    meta: dict[str, str]
    rows: list[SpectrumRow]


class DynamicsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: RunConfig = Field(default_factory=RunConfig)
    model: str


class DynamicsRow(BaseModel):
    t: float
    x_mean: float
    a_re: float
    a_im: float
    a_abs: float
    norm_drift: float


class DynamicsResponse(BaseModel):
    meta: dict[str, str]
    rows: list[DynamicsRow]


class CompareRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: RunConfig = Field(default_factory=RunConfig)
    benchmark: str = "mic"
    n_keep: int | None = None


class CompareSpectrumRow(BaseModel):
    model: str
    n: int
    err_E: float
    err_x: float
    err_dx: float


class CompareSpectrumResponse(BaseModel):
    meta: dict[str, str]
    rows: list[CompareSpectrumRow]


class CompareDynamicsRow(BaseModel):
    model: str
    t: float
    err_x: float
    err_a: float


class DynamicsSummaryRow(BaseModel):
    model: str
    err_x_avg: float
    err_a_avg: float


class CompareDynamicsResponse(BaseModel):
    meta: dict[str, str]
    rows: list[CompareDynamicsRow]
    summary: list[DynamicsSummaryRow]


class ConvergeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: RunConfig = Field(default_factory=RunConfig)
    model: str
    ladder: list[tuple[int, int]]
    quantities: list[str] = Field(default_factory=lambda: ["energy", "x_of_t"])


class ConvergeRow(BaseModel):
    model: str
    quantity: str
    n_max_from: int
    m_max_from: int
    n_max_to: int
    m_max_to: int
    max_change: float | None
    tol: float
    converged: bool


class ConvergeResponse(BaseModel):
    meta: dict[str, str]
    rows: list[ConvergeRow]
    failures: list[str]


class PathologyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: RunConfig = Field(default_factory=RunConfig)


class PathologyResponse(BaseModel):
    meta: dict[str, str]
    n_star: int
    energy_before: float | None
    energy_at: float | None
    estimate: float
    saturated: bool


class InfoResponse(BaseModel):
    name: str
    version: str
    models: list[str]
