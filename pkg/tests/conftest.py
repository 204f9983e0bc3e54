"""Shared fixtures: paper-regime parameters and a session-wide solve cache.

Diagonalizations dominate the suite's runtime, so solved eigensystems are
memoized across all test modules (including the acceptance gate).
"""

from __future__ import annotations

import functools

import pytest

from optomech import ModelKind, TruncationSpec, derive_params, solve_model
from optomech.fock import product_operators

PAPER_TRUNC = TruncationSpec(20, 30)


@functools.lru_cache(maxsize=None)
def _paper_params():
    return derive_params(100.0, 0.01)


@functools.lru_cache(maxsize=None)
def _cached_solve(kind, p, t):
    return solve_model(kind, p, t)


@pytest.fixture(scope="session")
def paper_params():
    return _paper_params()


@pytest.fixture(scope="session")
def paper_trunc():
    return PAPER_TRUNC


@pytest.fixture(scope="session")
def paper_ops(paper_params, paper_trunc):
    return product_operators(paper_params, paper_trunc)


@pytest.fixture(scope="session")
def cached_solve():
    """Memoized drop-in for solver.solve_model (same signature)."""
    return _cached_solve


@pytest.fixture(scope="session")
def paper_solution(paper_params, paper_trunc, cached_solve):
    """kind -> EigenSystem at paper parameters and (20, 30)."""

    def solve(kind: ModelKind):
        return cached_solve(kind, _paper_params(), PAPER_TRUNC)

    return solve
