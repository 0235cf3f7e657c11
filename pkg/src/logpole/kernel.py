"""Closed-form profile functions and the smooth cutoff.

``y(s) = exp(-sqrt(s^2 + 1))`` solves ``-y'' + b y = 0`` with the bounded
well ``b(s) = -(s^2 + 1)^(-3/2) + s^2 / (s^2 + 1)``.  Everything here returns
:class:`~logpole.jets.Jet` objects so derivatives of any finite order come out
exactly (up to rounding), and all functions accept scalar or array points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .jets import Jet

MAX_JET_ORDER = 8

# below this ramp parameter exp(-1/t) and its first dozen derivatives are < 1e-380
_THETA_FLOOR = 1e-3


def _check_order(order, max_order):
    limit = MAX_JET_ORDER if max_order is None else max_order
    if order < 0 or order > limit:
        raise ConfigurationError(f"jet order {order} outside [0, {limit}]")


def _phase(s, order):
    # -sqrt(s^2 + 1) as a jet
    x = Jet.variable(s, order)
    return -((x * x + 1.0).sqrt())


def eval_y(s, order=0, max_order=None):
    """Jet of ``y(s) = exp(-sqrt(s^2+1))`` at ``s``."""
    _check_order(order, max_order)
    return _phase(s, order).exp()


def eval_y_normalized(s, order=0):
    """Jet of ``y(s0 + .) / y(s0)`` together with ``log y(s0)``.

    The normalized jet has value 1 and moderate derivatives for any ``s0``,
    which lets callers track the exponentially small factor in log space.
    """
    phi = _phase(s, order)
    log_scale = phi.value.copy()
    phi.taylor[0] = 0.0
    return phi.exp(), log_scale


def eval_b(s, order=0, max_order=None):
    """Jet of the well ``b(s) = -(s^2+1)^(-3/2) + s^2/(s^2+1)``."""
    _check_order(order, max_order)
    x = Jet.variable(s, order)
    w = x * x + 1.0
    return -(w.power(-1.5)) + (x * x) / w


def ode_residual(s):
    """``-y''(s) + b(s) y(s)``, which vanishes identically."""
    y = eval_y(s, 2)
    b = eval_b(s, 0)
    return -y.derivative(2) + b.value * y.value


def _check_omega(omega):
    if np.any(np.asarray(omega) <= 0):
        raise DomainError(f"scaling frequency must be positive, got {omega!r}")


def eval_scaled_y(omega, a, r, order=0, max_order=None):
    """Jet in ``r`` of ``y(omega (r - a))``."""
    _check_omega(omega)
    s = omega * (np.asarray(r, dtype=float) - a)
    out = eval_y(s, order, max_order).rescale(omega)
    out.base_point = r
    return out


def eval_scaled_b(omega, a, r, order=0, max_order=None):
    """Jet in ``r`` of ``omega^2 b(omega (r - a))``."""
    _check_omega(omega)
    s = omega * (np.asarray(r, dtype=float) - a)
    out = eval_b(s, order, max_order).rescale(omega) * (omega * omega)
    out.base_point = r
    return out


def scaled_ode_residual(omega, a, r):
    y = eval_scaled_y(omega, a, r, 2)
    b = eval_scaled_b(omega, a, r, 0)
    return -y.derivative(2) + b.value * y.value


# -- cutoff -------------------------------------------------------------------


def _theta(t, order):
    """Jet of ``exp(-1/t)`` for t > 0, identically zero for t <= 0."""
    t = np.asarray(t, dtype=float)
    live = t > _THETA_FLOOR
    safe = np.where(live, t, 1.0)
    jet = (-(Jet.variable(safe, order).reciprocal())).exp()
    jet.taylor = np.where(live[None, ...], jet.taylor, 0.0)
    return jet


def _ramp(t, order):
    """Jet of ``rho(t) = theta(t) / (theta(t) + theta(1 - t))`` for t in (0, 1)."""
    a = _theta(t, order)
    b = _theta(1.0 - np.asarray(t, dtype=float), order).rescale(-1.0)
    return a / (a + b)


@dataclass(frozen=True)
class BumpSpec:
    """Even cutoff equal to 1 on ``|s| <= plateau_half_width`` and 0 beyond
    ``support_half_width``, joined by the ``exp(-1/t)`` ramp."""

    plateau_half_width: float = 0.5
    support_half_width: float = 1.0

    def __post_init__(self):
        if not 0 < self.plateau_half_width < self.support_half_width:
            raise ConfigurationError("need 0 < plateau_half_width < support_half_width")

    def __call__(self, s, order=0, max_order=None):
        _check_order(order, max_order)
        s = np.asarray(s, dtype=float)
        a = np.abs(s)
        width = self.support_half_width - self.plateau_half_width
        on_ramp = (a > self.plateau_half_width) & (a < self.support_half_width)
        # t runs from 1 at the plateau edge to 0 at the support edge
        t = np.where(on_ramp, (self.support_half_width - a) / width, 0.5)
        sign = np.where(s < 0, -1.0, 1.0)
        ramp = _ramp(t, order).rescale(-sign / width)
        plateau = (a <= self.plateau_half_width).astype(float)
        out = ramp.where(on_ramp, Jet.constant(plateau, order))
        out.base_point = s
        return out


DEFAULT_BUMP = BumpSpec()


def eval_chi(s, order=0, max_order=None, bump=DEFAULT_BUMP):
    """Jet of the cutoff ``chi`` at ``s``."""
    return bump(s, order, max_order)
