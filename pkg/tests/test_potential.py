import math

import numpy as np
import pytest

from logpole.errors import DomainError
from logpole.kernel import eval_b
from logpole.ladder import FrequencyProfile
from logpole.potential import LevelWindow, PotentialModel, level_index, sandwich_report


@pytest.fixture(scope="module")
def model2():
    return PotentialModel(profile=FrequencyProfile(M=160.0), d=2, n0=4)


def test_window_geometry():
    w = LevelWindow.for_level(5)
    assert w.center == pytest.approx(3e-6)
    assert w.psi_plateau[0] <= w.chi_support[0] and w.chi_support[1] <= w.psi_plateau[1]
    (a, b), (c, e) = w.ramp_bands
    assert (a, b, c, e) == pytest.approx((2e-6, 2.5e-6, 3.5e-6, 4e-6))


def test_windows_touch_only_neighbours():
    w = {n: LevelWindow.for_level(n) for n in range(4, 9)}
    for n in range(4, 8):
        assert w[n + 1].psi_support[1] > w[n].psi_support[0]
    for n in range(4, 7):
        assert w[n + 2].psi_support[1] <= w[n].psi_support[0]


def test_level_index_at_exact_decades():
    r = np.array([1e-4, 1.0000001e-4, 9.999999e-5, 1e-5, 3.3e-7])
    assert level_index(r).tolist() == [4, 3, 4, 5, 6]


def test_psi_examples(model160):
    n = 6
    assert model160.psi(n, 3 * 10.0 ** (-(n + 1))).value == pytest.approx(1.0)
    assert model160.psi(n, 2 * 10.0 ** (-n)).value == 0.0
    n0 = model160.n0
    total = sum(model160.psi(m, 10.0 ** (-n0 - 2)).value for m in range(n0, n0 + 9))
    assert total == pytest.approx(1.0, abs=1e-15)


def test_partition_identity(model160):
    n0 = model160.n0
    r = np.logspace(-(n0 + 8), -n0 + 0.3, 5000)
    total = sum(model160.psi(m, r).value for m in range(n0, n0 + 10))
    assert np.abs(total - model160.outer_cutoff(r).value).max() <= 1e-12


def test_chi_window_examples(model160):
    n = 5
    u = 10.0 ** (-(n + 1))
    np.testing.assert_allclose(model160.chi_window(n, 3 * u, 2).coeffs, [1, 0, 0], atol=0)
    assert model160.chi_window(n, 4.5 * u).value == 0.0
    assert model160.chi_window(n, 2.5 * u).value == 1.0


def test_W_at_center_and_outside(model160):
    for n in range(4, 10):
        c = LevelWindow.for_level(n).center
        lam = model160.lam(n)
        assert model160.W_of_r(c).value == pytest.approx(0.75 * lam**2, rel=1e-14)
    r = np.array([1.01e-4, 1e-3, 0.5])
    assert np.all(model160.W_of_r(r).value == 0.0)
    assert np.all(model160.V_of_r(r).value == 0.0)


def test_W_equals_well_on_chi_support(model160):
    n = 6
    a, b = LevelWindow.for_level(n).chi_support
    r = np.linspace(a, b, 301)
    lam = model160.lam(n)
    np.testing.assert_allclose(model160.W_of_r(r).value, model160.b_level(n, r).value + lam**2, rtol=1e-14)


def test_V_d3_is_W(model160):
    r = np.logspace(-11, -4, 777)
    np.testing.assert_array_equal(model160.V_of_r(r).value, model160.W_of_r(r).value)


def test_V_d2_adds_inverse_square(model2):
    n = 5
    w = LevelWindow.for_level(n)
    r = np.linspace(*w.chi_plateau, 51)
    lam = model2.lam(n)
    s = lam / 2 * (r - w.center)
    expect = (lam / 2) ** 2 * eval_b(s).value + lam**2 + 1 / (4 * r * r)
    np.testing.assert_allclose(model2.V_of_r(r).value, expect, rtol=1e-13)
    assert model2.centrifugal_coefficient == -0.25


def test_V_nonnegative_and_compact(model160):
    for n in range(model160.n0, model160.n0 + 6):
        assert model160.is_nonnegative_on_level(n)
    assert np.all(model160.V_of_r(np.logspace(-3.99, 0, 50)).value == 0.0)


def test_V_jet_matches_finite_difference(model160):
    r0 = 2.2e-6
    jet = model160.V_of_r(np.array([r0]), 1)
    h = r0 * 1e-7
    fd = (model160.V_of_r(r0 + h).value - model160.V_of_r(r0 - h).value) / (2 * h)
    assert jet.derivative(1)[0] == pytest.approx(fd, rel=1e-6)


def test_pole_rejected(model160):
    with pytest.raises(DomainError):
        model160.W_of_r(np.array([0.0, 1e-5]))


def test_sandwich_report(model160):
    n0 = model160.n0
    rep = sandwich_report(model160, range(n0, n0 + 7))
    assert rep.overall_min > 0 and math.isfinite(rep.overall_max)
    assert rep.ratio_stability <= 1.2
    assert rep.passed
    # plateau lower bound V >= lambda_n^2 / 2 on the chi plateau
    for n in range(n0, n0 + 7):
        r = np.linspace(*LevelWindow.for_level(n).chi_plateau, 101)
        assert np.all(model160.V_of_r(r).value >= 0.5 * model160.lam(n) ** 2)


def test_sandwich_center_value(model160):
    # V r^2 / log^2 r at the center, with lambda_n r = (3 M / 10) log lambda_n
    n = 6
    c = LevelWindow.for_level(n).center
    lam = model160.lam(n)
    assert lam * c == pytest.approx(3 * 160 / 10 * math.log(lam), rel=1e-12)
    Q = model160.V_of_r(c).value * c * c / math.log(c) ** 2
    assert Q == pytest.approx(0.75 * (lam * c / abs(math.log(c))) ** 2, rel=1e-13)


def test_integrability_partials(model160):
    # increments shrink geometrically below d/2 and grow at d/2 = 1.5
    pieces = [model160.lp_partial_integral(1.2, LevelWindow.for_level(n).psi_support[0],
                                           LevelWindow.for_level(n).psi_support[1]) for n in (6, 7, 8)]
    assert pieces[1] / pieces[0] < 0.5 and pieces[2] / pieces[1] < 0.5
    big = [model160.lp_partial_integral(1.5, LevelWindow.for_level(n).psi_support[0],
                                        LevelWindow.for_level(n).psi_support[1]) for n in (6, 7)]
    assert big[1] > big[0]
