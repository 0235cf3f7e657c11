"""Norm quotients along the ladder whose growth rules out the dispersive estimates.

Each quotient is evaluated on the stationary family u_n; the Duhamel check in
:mod:`logpole.dynamics` bounds how far the time evolution strays from it.
Growth rates are least-squares slopes of ``log(quotient)`` against
``log(lambda_n / log lambda_n)`` (the inverse support width), or against
``log lambda_n`` for the resolvent family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError
from .quadrature import integrate

FAMILIES = ("strichartz", "smoothing", "dispersion", "loss_strichartz", "resolvent")
MIN_FIT_ENTRIES = 4


def _norm_u(mode, p):
    return mode.lp_norm_u(p)


def strichartz_quotient(mode, q, q0):
    """``||u_n||_q / ||u_n||_q0``."""
    if q == q0:
        return 1.0
    if not q > q0 >= 1:
        raise DomainError(f"need q > q0 >= 1, got q={q}, q0={q0}")
    return _norm_u(mode, q) / _norm_u(mode, q0)


def dispersion_quotient(mode, q):
    """``||u_n||_q / ||u_n||_q'`` with the dual exponent q'."""
    if q == 2:
        return 1.0
    if not q > 2:
        raise DomainError(f"need q > 2, got {q}")
    qp = q / (q - 1.0)
    return _norm_u(mode, q) / _norm_u(mode, qp)


def _inside_loss_region(q, sigma, d):
    # strict inequality with a rounding margin, so the boundary itself is rejected
    return 0.5 - 1.0 / q - sigma / d > 1e-12


def loss_strichartz_quotient(mode, q, sigma):
    """``||u_n||_q / (lambda_n^sigma ||u_n||_2)`` inside ``1/2 - 1/q > sigma/d``."""
    d = mode.d
    if not 0.0 <= sigma <= 1.0:
        raise DomainError(f"need 0 <= sigma <= 1, got {sigma}")
    if not _inside_loss_region(q, sigma, d):
        raise DomainError(f"need 1/2 - 1/q > sigma/d, got q={q}, sigma={sigma}, d={d}")
    return _norm_u(mode, q) / (mode.lambda_n**sigma * _norm_u(mode, 2))


def resolvent_quotient(mode):
    """``lambda_n ||u_n||_2 / ||f_n||_2``."""
    return mode.lambda_n * _norm_u(mode, 2) / mode.lp_norm_f(2)


# -- H^sigma by discrete Fourier transform -------------------------------------


@dataclass
class SpectralSample:
    """``v = r^((d-1)/2) u`` on a uniform grid of ``[0, L]`` and its DFT."""

    h: float
    values: np.ndarray
    k: np.ndarray
    power: np.ndarray

    def sobolev_sq(self, sigma, sphere=1.0):
        dk = abs(self.k[1] - self.k[0])
        return sphere * float(np.sum((1.0 + self.k**2) ** sigma * self.power)) * dk / (2 * math.pi)


def spectral_sample(mode, window=None, points_per_wavelength=40, pad=2):
    """Sample v_n over ``[0, window]`` (default ``2 * 10^-n``) and transform it."""
    if points_per_wavelength < 20:
        raise ConfigurationError("smoothing quotient needs at least 20 points per wavelength")
    L = 2.0 * 10.0 ** (-mode.n) if window is None else window
    h = 2.0 * math.pi / (mode.lambda_n * points_per_wavelength)
    count = int(math.ceil(L / h))
    r = h * np.arange(count)
    v = np.zeros(count)
    a, b = mode.support
    inside = (r > a) & (r < b)
    v[inside] = mode.v(r[inside]).value
    V = np.fft.fft(v, n=pad * count) * h
    k = 2.0 * math.pi * np.fft.fftfreq(pad * count, d=h)
    return SpectralSample(h=h, values=v, k=k, power=np.abs(V) ** 2)


def smoothing_quotient(mode, sigma, **kwargs):
    """``||u_n||_{H^sigma} / ||u_n||_2`` from the Fourier weight ``(1 + k^2)^sigma``."""
    if not 0.0 <= sigma <= 2.0:
        raise DomainError(f"need 0 <= sigma <= 2, got {sigma}")
    if sigma == 0:
        return 1.0
    sample = spectral_sample(mode, **kwargs)
    return math.sqrt(sample.sobolev_sq(sigma) / sample.sobolev_sq(0.0))


def h1_quotient_quadrature(mode):
    """``(||u||^2 + ||grad u||^2)^(1/2) / ||u||`` by quadrature in r, jets for u'."""
    d = mode.d
    a, b = mode.support
    brk = mode.r_breakpoints()
    scale = abs(mode.u(np.array([mode.center])).value[0])

    def grad_density(r):
        return (mode.u(r, 1).derivative(1) / scale) ** 2 * r ** (d - 1)

    def mass_density(r):
        return (mode.u(r).value / scale) ** 2 * r ** (d - 1)

    g = integrate(grad_density, a, b, rel_tol=1e-10, breakpoints=brk)
    m = integrate(mass_density, a, b, rel_tol=1e-10, breakpoints=brk)
    return math.sqrt((m + g) / m)


# -- series and regression ------------------------------------------------------


def _evaluate(family, mode, params):
    if family == "strichartz":
        return strichartz_quotient(mode, params["q"], params["q0"])
    if family == "smoothing":
        return smoothing_quotient(mode, params["sigma"])
    if family == "dispersion":
        return dispersion_quotient(mode, params["q"])
    if family == "loss_strichartz":
        return loss_strichartz_quotient(mode, params["q"], params["sigma"])
    if family == "resolvent":
        return resolvent_quotient(mode)
    raise ConfigurationError(f"unknown quotient family {family!r}")


def validate_params(family, params, d):
    """Raise :class:`DomainError` when the parameters leave the family's region."""
    if family == "strichartz" and not params["q"] > params["q0"] >= 1:
        raise DomainError("strichartz needs q > q0 >= 1")
    if family == "dispersion" and not params["q"] > 2:
        raise DomainError("dispersion needs q > 2")
    if family == "smoothing" and not 0 < params["sigma"] <= 2:
        raise DomainError("smoothing needs 0 < sigma <= 2")
    if family == "loss_strichartz":
        q, s = params["q"], params["sigma"]
        if not (0 <= s <= 1 and _inside_loss_region(q, s, d)):
            raise DomainError("loss_strichartz needs 0 <= sigma <= 1 and 1/2 - 1/q > sigma/d")
    if family not in FAMILIES:
        raise ConfigurationError(f"unknown quotient family {family!r}")


@dataclass
class Regression:
    slope: float
    intercept: float
    max_residual: float


@dataclass
class QuotientSeries:
    family: str
    params: dict
    entries: list = field(default_factory=list)  # (n, lambda_n, value)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown quotient family {self.family!r}")

    def abscissa(self, lam):
        if self.family == "resolvent":
            return math.log(lam)
        return math.log(lam / math.log(lam))

    @property
    def values(self):
        return [e[2] for e in self.entries]

    @property
    def regression(self):
        if len(self.entries) < MIN_FIT_ENTRIES:
            return None
        x = np.array([self.abscissa(e[1]) for e in self.entries])
        y = np.log(np.array(self.values))
        slope, intercept = np.polyfit(x, y, 1)
        resid = float(np.abs(y - (slope * x + intercept)).max())
        return Regression(float(slope), float(intercept), resid)

    @property
    def increasing(self):
        v = self.values
        return all(b > a for a, b in zip(v, v[1:]))

    def rows(self):
        label = ";".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return [(self.family, label, n, lam, val) for n, lam, val in self.entries]

    def summary(self):
        reg = self.regression
        out = {"family": self.family, "params": dict(self.params), "levels": [e[0] for e in self.entries]}
        if reg is not None:
            out.update(slope=reg.slope, intercept=reg.intercept, max_residual=reg.max_residual)
        out["increasing"] = self.increasing
        return out


def quotient_series(family, modes, **params):
    if modes:
        validate_params(family, params, modes[0].d)
    series = QuotientSeries(family, params)
    for mode in modes:
        value = _evaluate(family, mode, params)
        if not value > 0:
            raise DomainError(f"non-positive quotient {value} at level {mode.n}")
        series.entries.append((mode.n, mode.lambda_n, value))
    return series


def expected_slope(family, d, N=2, **params):
    """Lower bounds on the growth rate (smoothing: the target value)."""
    if family == "strichartz":
        return d * (1.0 / params["q0"] - 1.0 / params["q"])
    if family == "dispersion":
        q = params["q"]
        return d * ((q - 1.0) / q - 1.0 / q)
    if family == "smoothing":
        return params["sigma"]
    if family == "loss_strichartz":
        return d / 2.0 - d / params["q"] - params["sigma"]
    if family == "resolvent":
        return N - 1.0
    raise ConfigurationError(f"unknown quotient family {family!r}")


__all__ = [
    "FAMILIES",
    "QuotientSeries",
    "Regression",
    "dispersion_quotient",
    "expected_slope",
    "h1_quotient_quadrature",
    "loss_strichartz_quotient",
    "quotient_series",
    "resolvent_quotient",
    "smoothing_quotient",
    "spectral_sample",
    "strichartz_quotient",
]
