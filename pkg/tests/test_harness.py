import math

import pytest

from logpole.errors import ConfigurationError, DomainError
from logpole.harness import (
    QuotientSeries,
    dispersion_quotient,
    expected_slope,
    h1_quotient_quadrature,
    loss_strichartz_quotient,
    quotient_series,
    resolvent_quotient,
    smoothing_quotient,
    strichartz_quotient,
)


def test_trivial_values(mode0):
    assert strichartz_quotient(mode0, 3, 3) == 1.0
    assert dispersion_quotient(mode0, 2) == 1.0
    assert smoothing_quotient(mode0, 0) == 1.0
    assert loss_strichartz_quotient(mode0, 6, 0) == pytest.approx(strichartz_quotient(mode0, 6, 2), rel=1e-14)
    assert resolvent_quotient(mode0) > 0


def test_region_errors(mode0):
    with pytest.raises(DomainError):
        strichartz_quotient(mode0, 2, 4)
    with pytest.raises(DomainError):
        loss_strichartz_quotient(mode0, 6, 1.0)  # 1/2 - 1/6 = 1/3 = sigma/d
    with pytest.raises(DomainError):
        dispersion_quotient(mode0, 1.5)
    with pytest.raises(ConfigurationError):
        smoothing_quotient(mode0, 0.5, points_per_wavelength=10)
    with pytest.raises(ConfigurationError):
        QuotientSeries("nope", {})


def test_smoothing_two_path(modes160):
    for m in modes160[:3]:
        assert smoothing_quotient(m, 1.0) == pytest.approx(h1_quotient_quadrature(m), rel=0.05)
        assert smoothing_quotient(m, 1.0) == pytest.approx(h1_quotient_quadrature(m), rel=1e-8)


@pytest.mark.parametrize(
    "family, params, lower",
    [
        ("strichartz", {"q": 4.0, "q0": 2.0}, 0.75 - 0.1),
        ("dispersion", {"q": 4.0}, 1.5 - 0.1),
        ("loss_strichartz", {"q": 6.0, "sigma": 0.5}, 0.4),
        ("resolvent", {}, 1.0),
    ],
)
def test_slope_lower_bounds(modes160, family, params, lower):
    s = quotient_series(family, modes160, **params)
    reg = s.regression
    assert reg.slope >= lower
    assert reg.max_residual <= 0.2
    assert s.increasing
    assert all(v > 0 for v in s.values)


def test_smoothing_slope(modes160):
    s = quotient_series("smoothing", modes160[:6], sigma=0.5)
    assert s.regression.slope == pytest.approx(0.5, abs=0.15)
    assert s.increasing


def test_expected_slopes():
    assert expected_slope("strichartz", 3, q=4, q0=2) == pytest.approx(0.75)
    assert expected_slope("dispersion", 3, q=4) == pytest.approx(1.5)
    assert expected_slope("loss_strichartz", 3, q=6, sigma=0.5) == pytest.approx(0.5)
    assert expected_slope("resolvent", 3, N=2) == 1.0


def test_regression_needs_four_entries(modes160):
    s = quotient_series("strichartz", modes160[:3], q=4.0, q0=2.0)
    assert s.regression is None
    assert "slope" not in s.summary()
    rows = s.rows()
    assert rows[0][:2] == ("strichartz", "q=4;q0=2")
    assert math.isclose(rows[0][3], modes160[0].lambda_n)
