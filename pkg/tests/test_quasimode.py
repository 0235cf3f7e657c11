import math

import numpy as np
import pytest

from logpole.errors import DomainError
from logpole.ladder import FrequencyProfile
from logpole.potential import PotentialModel
from logpole.quasimode import QuasiMode, build_modes


@pytest.fixture(scope="module")
def mode_d1():
    model = PotentialModel(profile=FrequencyProfile(M=160.0), d=1, n0=4)
    return build_modes(model, [5])[0]


def test_support_endpoints(modes160):
    for m in modes160:
        a, b = m.support
        unit = m.log_lambda / m.lambda_n
        assert a == pytest.approx(160 / 5 * unit, rel=1e-12)
        assert b == pytest.approx(2 * 160 / 5 * unit, rel=1e-12)


def test_center_values(mode0):
    c = mode0.center
    assert mode0.y_level(c).value == pytest.approx(math.exp(-1), rel=1e-15)
    assert mode0.b_level(c).value == pytest.approx(-(mode0.lambda_n**2) / 4, rel=1e-15)
    assert mode0.v(c).value == pytest.approx(mode0.alpha * math.exp(-1), rel=1e-14)
    assert mode0.u(c).value == pytest.approx(mode0.alpha * math.exp(-1) * c**-1.0, rel=1e-14)


def test_scaled_ode_on_chi_support(mode0):
    rng = np.random.default_rng(3)
    r = rng.uniform(*mode0.support, 20)
    y = mode0.y_level(r, 2)
    res = -y.derivative(2) + mode0.b_level(r).value * y.value
    assert np.all(np.abs(res) <= 1e-9 * mode0.lambda_n**2 * np.maximum(np.abs(y.value), 1e-300))


def test_zero_outside_support_and_on_plateau(mode0):
    a, b = mode0.support
    outside = np.array([0.9 * a, 1.1 * b])
    assert np.all(mode0.v(outside, 2).coeffs == 0)
    assert np.all(mode0.g(outside, 2).coeffs == 0)
    plateau = np.linspace(*mode0.window.chi_plateau, 51)
    assert np.all(mode0.g(plateau, 2).coeffs == 0)
    assert np.all(mode0.f(plateau, 2).coeffs == 0)


def test_d1_reductions(mode_d1):
    r = np.linspace(*mode_d1.support, 101)
    np.testing.assert_array_equal(mode_d1.u(r, 2).coeffs, mode_d1.v(r, 2).coeffs)
    np.testing.assert_array_equal(mode_d1.f(r, 1).coeffs, mode_d1.g(r, 1).coeffs)


def test_two_path_residual(mode0):
    for lo, hi in mode0.window.ramp_bands:
        r = np.linspace(lo, hi, 202)[1:-1]
        g1 = mode0.g(r).value
        v = mode0.v(r, 2)
        bv = mode0.b_level(r).value * v.value
        scale = np.abs(v.derivative(2)) + np.abs(bv)
        assert np.all(np.abs(g1 - mode0.g_direct(r).value) <= 1e-9 * scale)


def test_equation_residual_vanishes(mode0):
    # the full equation closes with f_n, to rounding relative to lambda^2 u
    r = np.linspace(*mode0.support, 400)
    res = mode0.equation_residual(r)
    big = mode0.lambda_n**2 * np.abs(mode0.u(r).value).max()
    assert np.abs(res).max() <= 1e-9 * big


def test_calibration(modes160):
    for m in modes160:
        assert m.lp_norm_u_physical(1, rel_tol=1e-11) == pytest.approx(1.0, abs=1e-8)


def test_alpha_growth(modes160):
    # alpha_n <= C lambda_n 10^(n (d-1)/2) with a stable constant, slope near (d+1)/2
    logC = [m.log_alpha - m.log_lambda - m.n * math.log(10) for m in modes160]
    assert max(logC) - min(logC) <= math.log(4)
    x = [m.log_lambda for m in modes160]
    y = [m.log_alpha for m in modes160]
    slope = np.polyfit(x, y, 1)[0]
    assert slope == pytest.approx(2.0, abs=0.15)


def test_lp_norms_two_ways(mode0):
    for p in (1, 2, 4):
        assert mode0.lp_norm_u(p) == pytest.approx(mode0.lp_norm_u_physical(p), rel=1e-9)
    for p in (2, 3):
        assert mode0.lp_norm_f(p) == pytest.approx(mode0.lp_norm_f_physical(p), rel=1e-9)


def test_sup_located_in_ramp(mode0):
    for j in (0, 1, 2):
        scan = mode0.sup_scan(j)
        assert scan.converged
        (a1, b1), (a2, b2) = mode0.window.ramp_bands
        assert a1 <= scan.location <= b1 or a2 <= scan.location <= b2
    # dense physical scan over the whole support agrees with the ramp-only sup
    r = np.linspace(*mode0.support, 200001)
    dense = np.abs(mode0.f(r).value).max()
    assert dense <= mode0.sup_derivative_norm(0) * (1 + 1e-6)
    assert dense >= mode0.sup_derivative_norm(0) * 0.99


def test_far_level_log_space_only():
    model = PotentialModel(profile=FrequencyProfile(variant="epsilon"), d=3, n0=2)
    m = QuasiMode(model, 300)
    assert not m.desk and m.log_lambda > 690
    m.calibrate_alpha()
    assert math.isfinite(m.log_alpha)
    assert math.isfinite(m.log_sup_derivative_norm(1))
    assert math.isfinite(m.log_lp_norm_u(2))
    with pytest.raises(DomainError):
        m.u(1e-301)


def test_far_log_norms_match_desk(mode0):
    # on a desk level log-space and physical values coincide
    assert math.exp(mode0.log_lp_norm_u(1)) == pytest.approx(1.0, rel=1e-9)
    assert mode0.log_sup_derivative_norm(0) == pytest.approx(math.log(mode0.sup_derivative_norm(0)))


def test_r_must_be_positive(mode0):
    with pytest.raises(DomainError):
        mode0.u(np.array([-1e-5]))
