import math

import pytest

from optomech import DomainError, ModelParams, ResourceLimitError, TruncationSpec, derive_params
from optomech.analytic import quad_spectrum
from optomech.params import (
    CONFIG_DEFAULTS,
    alpha_from_config,
    params_from_config,
    parse_config_text,
    truncation_from_config,
)


def test_paper_point_derived_constants():
    # Frozen against a 50-digit evaluation of the defining formulas.
    p = derive_params(100.0, 0.01)
    assert p.Omega == 1.0
    assert p.omega0 == 100.0
    assert p.g0 == 0.01
    assert p.x_zpf == pytest.approx(0.70710678118654752, rel=1e-15)
    assert p.G == pytest.approx(0.014142135623730950, rel=1e-15)
    assert p.L == pytest.approx(7071.0678118654752, rel=1e-14)
    assert p.beta2 == pytest.approx(4.0e-6, rel=1e-14)
    assert not p.hierarchy_warning


@pytest.mark.parametrize("w0, g0", [(100.0, 0.01), (1000.0, 0.003), (17.5, 0.2), (2.0, 1e-6)])
def test_round_trip_identities(w0, g0):
    p = derive_params(w0, g0)
    assert p.G * p.x_zpf == pytest.approx(p.g0, rel=1e-14)
    assert p.L * p.G == pytest.approx(p.omega0, rel=1e-14)
    assert p.beta2 * p.omega0 == pytest.approx(2.0 * p.G**2, rel=1e-14)


def test_degenerate_scales_set_hierarchy_warning():
    with pytest.warns(UserWarning, match="hierarchy"):
        p = derive_params(1.0, 1.0)
    assert p.hierarchy_warning
    assert p.omega0 == p.Omega == p.g0 == 1.0


@pytest.mark.parametrize("w0, g0", [(100.0, 0.0), (0.0, 0.01), (-1.0, 0.01),
                                    (100.0, -0.2), (math.inf, 0.01), (100.0, math.nan)])
def test_invalid_ratios_rejected(w0, g0):
    with pytest.raises(DomainError):
        derive_params(w0, g0)


def test_scaling_covariance_through_quad_formulas():
    # Scaling both input ratios by c multiplies G by c and beta2 by c; the
    # quadratic-model displacement then transforms exactly as its closed form.
    p1 = derive_params(100.0, 0.01)
    c = 3.7
    p2 = derive_params(c * 100.0, c * 0.01)
    assert p2.G == pytest.approx(c * p1.G, rel=1e-14)
    assert p2.beta2 == pytest.approx(c * p1.beta2, rel=1e-14)
    for n in (0, 3, 17):
        s = n + 0.5
        expected = c * p1.G * s / (p1.Omega**2 + s * c * p1.beta2)
        assert quad_spectrum(n, 0, p2).x_bar == pytest.approx(expected, rel=1e-12)


def test_uncoupled_switch():
    p = ModelParams.uncoupled(100.0)
    assert p.G == 0.0 and p.g0 == 0.0 and p.beta2 == 0.0
    assert math.isinf(p.L)
    assert not p.coupled


def test_truncation_dims_and_caps():
    t = TruncationSpec(20, 30)
    assert (t.field_dim, t.mech_dim, t.total_dim) == (21, 31, 651)
    with pytest.raises(DomainError):
        TruncationSpec(0, 30)
    with pytest.raises(DomainError):
        TruncationSpec(20, -1)
    with pytest.raises(ResourceLimitError):
        TruncationSpec(201, 30)
    with pytest.raises(ResourceLimitError):
        TruncationSpec(20, 500)
    assert TruncationSpec(250, 30, hard_cap=300).total_dim == 251 * 31


def test_config_parse_happy_path():
    text = """
    # comment line
    omega0_over_Omega = 250
    g0_over_Omega = 0.02

    n_max = 12
    models = lin , mic2
    """
    settings = parse_config_text(text)
    assert settings["omega0_over_Omega"] == 250.0
    assert settings["g0_over_Omega"] == 0.02
    assert settings["n_max"] == 12
    assert settings["m_max"] == CONFIG_DEFAULTS["m_max"]
    assert settings["models"] == ["lin", "mic2"]
    p = params_from_config(settings)
    assert p.omega0 == 250.0
    assert truncation_from_config(settings).n_max == 12
    assert alpha_from_config(settings) == 2.0 + 0.0j


def test_config_defaults_from_empty_text():
    settings = parse_config_text("")
    assert settings == CONFIG_DEFAULTS
    assert settings is not CONFIG_DEFAULTS  # caller gets a fresh dict


@pytest.mark.parametrize("line", ["frequency = 3", "n_max: 12", "n_max = twelve",
                                  "models = "])
def test_config_rejects_bad_lines(line):
    with pytest.raises(DomainError):
        parse_config_text(line)
