import numpy as np
import pytest

from optomech import DomainError, ModelKind, derive_params
from optomech.analytic import nhat_spectrum
from optomech.harness import (
    agreement_scaling,
    compare_dynamics,
    compare_spectra,
    convergence_scan,
    format_value,
    parse_ladder,
    render_csv,
)
from optomech.params import TruncationSpec
from optomech.solver import default_times, label_sectors
from optomech.fock import product_operators

PAPER = derive_params(100.0, 0.01)
SMALL = TruncationSpec(12, 16)


def test_benchmark_against_itself_is_zero(cached_solve):
    table = compare_spectra([ModelKind.MIC], PAPER, SMALL, n_keep=5, solve=cached_solve)
    assert len(table.rows) == 6
    for row in table.rows:
        assert row[2] == row[3] == row[4] == 0.0


def test_error_tables_are_symmetric_in_the_benchmark(cached_solve):
    forward = compare_spectra([ModelKind.PHEN], PAPER, SMALL, n_keep=5,
                              benchmark=ModelKind.MIC, solve=cached_solve)
    backward = compare_spectra([ModelKind.MIC], PAPER, SMALL, n_keep=5,
                               benchmark=ModelKind.PHEN, solve=cached_solve)
    for row_f, row_b in zip(forward.rows, backward.rows):
        assert row_f[1] == row_b[1]
        assert row_f[2:] == pytest.approx(row_b[2:], rel=1e-12, abs=1e-18)


def test_compare_spectra_is_deterministic(cached_solve):
    first = compare_spectra([ModelKind.LIN, ModelKind.QUAD], PAPER, SMALL, n_keep=4,
                            solve=cached_solve)
    second = compare_spectra([ModelKind.LIN, ModelKind.QUAD], PAPER, SMALL, n_keep=4,
                             solve=cached_solve)
    assert first.rows == second.rows


def test_vacuum_drive_leaves_field_amplitude_dark(cached_solve):
    # alpha = 0: every model keeps <a(t)> = 0 (photon parity), while <x(t)>
    # still differs between models through vacuum radiation pressure.
    times = default_times(PAPER, 3.0, 40)
    table, summaries = compare_dynamics(
        [ModelKind.LIN, ModelKind.QUAD, ModelKind.PHEN, ModelKind.MIC2],
        PAPER, SMALL, alpha=0.0, times=times, solve=cached_solve,
    )
    for summary in summaries:
        assert summary.err_a_avg <= 1e-10
        assert summary.err_x_avg < 1e-4
    lin_summary = next(s for s in summaries if s.model is ModelKind.LIN)
    assert lin_summary.err_x_avg > 0.0


def test_fig2_pattern_displacement_up_spread_down(paper_solution, paper_ops):
    records = label_sectors(paper_solution(ModelKind.PHEN), paper_ops, n_keep=10)
    x_means = [r.x_mean for r in records]
    x_stds = [r.x_std for r in records]
    assert all(b > a for a, b in zip(x_means, x_means[1:]))
    assert all(b < a for a, b in zip(x_stds, x_stds[1:]))


# ---------------------------------------------------------------------------
# convergence scans
# ---------------------------------------------------------------------------


def test_tiny_truncation_cannot_demonstrate_convergence(cached_solve):
    ladder = [TruncationSpec(2, 2), TruncationSpec(20, 30)]
    report = convergence_scan(ModelKind.LIN, PAPER, 2.0, "energy", ladder, solve=cached_solve)
    assert not report.converged
    assert report.failures  # the (2,2) rung cannot label 10 sectors
    dynamic = convergence_scan(ModelKind.LIN, PAPER, 2.0, "x_of_t", ladder, solve=cached_solve)
    assert not dynamic.converged  # |alpha|^2 = 4 does not fit in n_max = 2


def test_nhat_matrix_agrees_with_analytic_at_any_rung(cached_solve):
    # The sector re-expansion is built from the analytic x_bar_n / Omega_n, so
    # its low sectors do not move once they fit inside the truncation.
    ladder = [TruncationSpec(16, 20), TruncationSpec(20, 30)]
    report = convergence_scan(ModelKind.NHAT, PAPER, 2.0, "energy", ladder, solve=cached_solve)
    assert report.converged
    for t in ladder:
        ops = product_operators(PAPER, t)
        records = label_sectors(cached_solve(ModelKind.NHAT, PAPER, t), ops, n_keep=10)
        for record in records:
            want = nhat_spectrum(record.n, 0, PAPER).energy
            assert abs(record.E_n0 - want) / want < 1e-8


def test_convergence_scan_validates_ladder(cached_solve):
    with pytest.raises(DomainError, match="two rungs"):
        convergence_scan(ModelKind.LIN, PAPER, 2.0, "energy", [SMALL], solve=cached_solve)
    with pytest.raises(DomainError, match="strictly increase"):
        convergence_scan(ModelKind.LIN, PAPER, 2.0, "energy",
                         [SMALL, TruncationSpec(13, 16)], solve=cached_solve)
    with pytest.raises(DomainError, match="quantity"):
        convergence_scan(ModelKind.LIN, PAPER, 2.0, "entropy",
                         [SMALL, TruncationSpec(16, 20)], solve=cached_solve)


def test_parse_ladder():
    assert parse_ladder("20x30, 30x45") == [TruncationSpec(20, 30), TruncationSpec(30, 45)]
    with pytest.raises(DomainError):
        parse_ladder("20x30x40")
    with pytest.raises(DomainError):
        parse_ladder("")


# ---------------------------------------------------------------------------
# order-of-agreement scaling
# ---------------------------------------------------------------------------


def test_agreement_scaling_orders():
    scaling = agreement_scaling()
    # mic vs lin converges at second order in the coupling; mic vs mic2 at
    # fourth (the third-order terms have odd photon-pair parity and drop out
    # of the sector ground energy).
    assert scaling.slope_lin == pytest.approx(2.0, abs=0.05)
    assert scaling.slope_mic2 == pytest.approx(4.0, abs=0.2)
    assert all(d > 0 for d in scaling.diffs_lin + scaling.diffs_mic2)


# ---------------------------------------------------------------------------
# CSV rendering
# ---------------------------------------------------------------------------


def test_format_value_17_digits():
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(50.499975) == "50.499974999999999"
    assert format_value(True) == "true"
    assert format_value(None) == ""
    assert format_value(12) == "12"


def test_render_csv_layout():
    text = render_csv({"tool": "optomech", "n_max": 4}, ("a", "b"),
                      [(1, 0.5), (2, None)])
    lines = text.splitlines()
    assert lines[0] == "# tool = optomech"
    assert lines[1] == "# n_max = 4"
    assert lines[2] == "a,b"
    assert lines[3] == "1,0.5"
    assert lines[4] == "2,"
    assert text.endswith("\n")
    assert float(lines[3].split(",")[1]) == 0.5
