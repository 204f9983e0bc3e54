"""FastAPI application exposing the comparison harness.

Diagonalizing a model is the expensive step, so solved eigensystems are kept
in a small process-wide LRU cache keyed by (model, parameters, truncation);
repeated or overlapping requests (a spectrum query followed by a comparison,
or several clients exploring the same regime) then reuse one factorization.
"""

from __future__ import annotations

import math
from functools import lru_cache

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..analytic import negative_energy_threshold
from ..errors import DomainError, LabelingError, OptomechError, ResourceLimitError
from ..fock import product_operators
from ..hamiltonians import ModelKind
from ..harness import (
    compare_dynamics,
    compare_spectra,
    convergence_scan,
    format_value,
    DEFAULT_N_KEEP,
)
from ..params import ModelParams, TruncationSpec, derive_params
from ..solver import (
    EigenSystem,
    SECTOR_MARGIN,
    coherent_vacuum_state,
    default_times,
    evolve,
    sector_spectrum,
    solve_model,
)
from . import schemas

EIGENSYSTEM_CACHE_SIZE = 12


@lru_cache(maxsize=EIGENSYSTEM_CACHE_SIZE)
def _cached_solve(kind: ModelKind, p: ModelParams, t: TruncationSpec) -> EigenSystem:
    return solve_model(kind, p, t)


def _settings(config: schemas.RunConfig) -> tuple[ModelParams, TruncationSpec, complex]:
    p = derive_params(config.omega0_over_Omega, config.g0_over_Omega)
    t = TruncationSpec(config.n_max, config.m_max)
    alpha = complex(config.alpha_re, config.alpha_im)
    return p, t, alpha


def _meta(config: schemas.RunConfig, **extra: object) -> dict[str, str]:
    meta: dict[str, object] = {"tool": "optomech", "version": __version__}
    for key, value in config.model_dump().items():
        meta[key] = ",".join(value) if key == "models" else value
    meta.update(extra)
    return {key: format_value(value) for key, value in meta.items()}


def _model_list(names: list[str]) -> list[ModelKind]:
    return [ModelKind.from_name(name) for name in names]


def _default_n_keep(t: TruncationSpec) -> int:
    return max(0, min(DEFAULT_N_KEEP, t.n_max - SECTOR_MARGIN))


def create_app() -> FastAPI:
    app = FastAPI(
        title="optomech",
        version=__version__,
        description="Eigensystems, dynamics, and benchmark error tables for "
        "six radiation-pressure Hamiltonians on a truncated Fock space.",
    )

    @app.exception_handler(OptomechError)
    async def _handle_package_error(request, exc: OptomechError):
        if isinstance(exc, DomainError):
            status = 422
        elif isinstance(exc, ResourceLimitError):
            status = 413
        elif isinstance(exc, LabelingError):
            status = 409
        else:
            status = 500
        return JSONResponse(status_code=status,
                            content={"detail": str(exc), "type": type(exc).__name__})

    @app.get("/api/info", response_model=schemas.InfoResponse)
    def info() -> schemas.InfoResponse:
        return schemas.InfoResponse(
            name="optomech",
            version=__version__,
            models=[kind.value for kind in ModelKind],
        )

    @app.post("/api/spectrum", response_model=schemas.SpectrumResponse)
    def spectrum(request: schemas.SpectrumRequest) -> schemas.SpectrumResponse:
        p, t, _ = _settings(request.config)
        kind = ModelKind.from_name(request.model)
        n_keep = _default_n_keep(t) if request.n_keep is None else request.n_keep
        m_keep = 10 if request.m_keep is None else request.m_keep
        m_keep = min(m_keep, t.m_max - SECTOR_MARGIN)
        es = _cached_solve(kind, p, t)
        ops = product_operators(p, t)
        levels = sector_spectrum(es, ops, n_keep, m_keep)
        rows = [
            schemas.SpectrumRow(
                n=r.n, m=r.m, energy=r.energy, x_mean=r.x_mean, x_std=r.x_std,
                n_bar=r.n_bar, confidence=r.confidence,
            )
            for r in levels
        ]
        meta = _meta(request.config, command="spectrum", model=kind.value,
                     n_keep=n_keep, m_keep=m_keep)
        return schemas.SpectrumResponse(meta=meta, rows=rows)

    @app.post("/api/dynamics", response_model=schemas.DynamicsResponse)
    def dynamics(request: schemas.DynamicsRequest) -> schemas.DynamicsResponse:
        p, t, alpha = _settings(request.config)
        kind = ModelKind.from_name(request.model)
        times = default_times(p, request.config.t_max_periods, request.config.t_steps)
        es = _cached_solve(kind, p, t)
        ops = product_operators(p, t)
        psi0, _ = coherent_vacuum_state(alpha, t)
        series = evolve(es, psi0, times, ops)
        rows = [
            schemas.DynamicsRow(
                t=float(series.times[i]),
                x_mean=float(series.x_mean[i]),
                a_re=float(series.a_mean[i].real),
                a_im=float(series.a_mean[i].imag),
                a_abs=float(abs(series.a_mean[i])),
                norm_drift=float(series.norm_dev[i]),
            )
            for i in range(series.times.size)
        ]
        meta = _meta(request.config, command="dynamics", model=kind.value)
        return schemas.DynamicsResponse(meta=meta, rows=rows)

    @app.post("/api/compare/spectrum", response_model=schemas.CompareSpectrumResponse)
    def compare_spectrum_endpoint(
        request: schemas.CompareRequest,
    ) -> schemas.CompareSpectrumResponse:
        p, t, _ = _settings(request.config)
        benchmark = ModelKind.from_name(request.benchmark)
        models = _model_list(request.config.models)
        n_keep = _default_n_keep(t) if request.n_keep is None else request.n_keep
        table = compare_spectra(models, p, t, n_keep, benchmark, solve=_cached_solve)
        rows = [
            schemas.CompareSpectrumRow(model=row[0], n=row[1], err_E=row[2],
                                       err_x=row[3], err_dx=row[4])
            for row in table.rows
        ]
        meta = _meta(request.config, command="compare-spectrum",
                     benchmark=benchmark.value, n_keep=n_keep)
        return schemas.CompareSpectrumResponse(meta=meta, rows=rows)

    @app.post("/api/compare/dynamics", response_model=schemas.CompareDynamicsResponse)
    def compare_dynamics_endpoint(
        request: schemas.CompareRequest,
    ) -> schemas.CompareDynamicsResponse:
        p, t, alpha = _settings(request.config)
        benchmark = ModelKind.from_name(request.benchmark)
        models = _model_list(request.config.models)
        times = default_times(p, request.config.t_max_periods, request.config.t_steps)
        table, summaries = compare_dynamics(models, p, t, alpha, times, benchmark,
                                            solve=_cached_solve)
        rows = [
            schemas.CompareDynamicsRow(model=row[0], t=row[1], err_x=row[2], err_a=row[3])
            for row in table.rows
        ]
        summary = [
            schemas.DynamicsSummaryRow(model=s.model.value, err_x_avg=s.err_x_avg,
                                       err_a_avg=s.err_a_avg)
            for s in summaries
        ]
        meta = _meta(request.config, command="compare-dynamics", benchmark=benchmark.value)
        return schemas.CompareDynamicsResponse(meta=meta, rows=rows, summary=summary)

    @app.post("/api/converge", response_model=schemas.ConvergeResponse)
    def converge(request: schemas.ConvergeRequest) -> schemas.ConvergeResponse:
        p, t, alpha = _settings(request.config)
        kind = ModelKind.from_name(request.model)
        ladder = [TruncationSpec(n, m) for n, m in request.ladder]
        rows: list[schemas.ConvergeRow] = []
        failures: list[str] = []
        for quantity in request.quantities:
            report = convergence_scan(kind, p, alpha, quantity, ladder, solve=_cached_solve)
            failures.extend(report.failures)
            for i, change in enumerate(report.changes):
                lower, upper = report.ladder[i], report.ladder[i + 1]
                rows.append(
                    schemas.ConvergeRow(
                        model=kind.value,
                        quantity=quantity,
                        n_max_from=lower.n_max,
                        m_max_from=lower.m_max,
                        n_max_to=upper.n_max,
                        m_max_to=upper.m_max,
                        max_change=change,
                        tol=report.tolerance,
                        converged=report.converged,
                    )
                )
        meta = _meta(request.config, command="converge", model=kind.value,
                     ladder=",".join(f"{r.n_max}x{r.m_max}" for r in ladder))
        return schemas.ConvergeResponse(meta=meta, rows=rows, failures=failures)

    @app.post("/api/pathology", response_model=schemas.PathologyResponse)
    def pathology(request: schemas.PathologyRequest) -> schemas.PathologyResponse:
        p, _, _ = _settings(request.config)
        result = negative_energy_threshold(p)
        meta = _meta(request.config, command="pathology")
        return schemas.PathologyResponse(
            meta=meta,
            n_star=result.n_star,
            energy_before=None if math.isnan(result.energy_before) else result.energy_before,
            energy_at=None if math.isnan(result.energy_at) else result.energy_at,
            estimate=result.estimate,
            saturated=result.saturated,
        )

    return app


app = create_app()
