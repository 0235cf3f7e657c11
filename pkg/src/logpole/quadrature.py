"""Adaptive Gauss-Legendre quadrature and L^p norms of radial functions on R^d."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import gamma

from .errors import NumericalError

GL_POINTS = 15
MAX_LEVELS = 24

_nodes, _weights = np.polynomial.legendre.leggauss(GL_POINTS)


def sphere_area(d):
    """Surface area ``2 pi^(d/2) / Gamma(d/2)`` of the unit sphere in R^d (2 for d = 1)."""
    return 2.0 * math.pi ** (d / 2.0) / gamma(d / 2.0)


def _panel_sums(func, a, b):
    # 15-point rule on each panel [a_i, b_i]; one vectorized call to func
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid[:, None] + half[:, None] * _nodes[None, :]
    fx = np.asarray(func(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise NumericalError("integrand is not finite on the panel nodes")
    return half * (fx @ _weights)


def integrate(
    func: Callable,
    a: float,
    b: float,
    rel_tol: float = 1e-9,
    abs_tol: float = 0.0,
    breakpoints: Sequence[float] = (),
    initial_panels: int = 8,
    max_levels: int = MAX_LEVELS,
):
    """Integral of a vectorized ``func`` over ``[a, b]``.

    Each panel is compared against the sum over its two halves; a panel is
    accepted once the two agree to its share of the tolerance, otherwise it is
    bisected.  ``breakpoints`` seed the initial partition (put them at narrow
    peaks so no starting panel can miss one).
    """
    if not b > a:
        if b == a:
            return 0.0
        return -integrate(func, b, a, rel_tol, abs_tol, breakpoints, initial_panels, max_levels)
    pts = sorted({a, b, *(p for p in breakpoints if a < p < b)})
    edges = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        edges.append(np.linspace(lo, hi, initial_panels + 1))
    edges = np.concatenate([e[:-1] for e in edges] + [np.array([b])])
    lo, hi = edges[:-1], edges[1:]
    length = b - a
    coarse = _panel_sums(func, lo, hi)

    accepted = 0.0
    accepted_err = 0.0
    for level in range(max_levels + 1):
        mid = 0.5 * (lo + hi)
        left = _panel_sums(func, lo, mid)
        right = _panel_sums(func, mid, hi)
        fine = left + right
        err = np.abs(fine - coarse)
        estimate = accepted + fine.sum()
        scale = max(abs(estimate), np.abs(fine).sum() * 1e-3)
        budget = max(rel_tol * scale, abs_tol)
        # global exit: the summed error estimates already fit the budget.  This
        # also stops refinement once abscissa rounding dominates tiny panels.
        if accepted_err + err.sum() <= budget:
            return float(estimate)
        share = (hi - lo) / length
        ok = err <= budget * share
        accepted += fine[ok].sum()
        accepted_err += err[ok].sum()
        if ok.all():
            return float(accepted)
        keep = ~ok
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        coarse = np.concatenate([left[keep], right[keep]])
    raise NumericalError(
        "adaptive quadrature did not converge",
        levels=max_levels,
        open_panels=int(lo.size),
        estimate=float(accepted + coarse.sum()),
    )


@dataclass
class NormRequest:
    """An ``L^p(R^d)`` norm of a radial function supported in ``[a, b]``, 0 < a."""

    integrand: Callable
    p: float
    interval: tuple
    d: int
    rel_tol: float = 1e-9
    breakpoints: Sequence[float] = field(default_factory=tuple)

    def __post_init__(self):
        a, b = self.interval
        if not 0 < a < b:
            raise ValueError(f"need 0 < a < b, got {self.interval}")
        if not (self.p >= 1):
            raise ValueError(f"need p >= 1, got {self.p}")

    @property
    def sphere_factor(self):
        return sphere_area(self.d)


def scan_sup(func, a, b, points=4001, refinements=4, breakpoints=()):
    """Sup of ``|func|`` over ``[a, b]`` from a dense grid refined near the maximum."""
    grid = np.union1d(np.linspace(a, b, points), [p for p in breakpoints if a <= p <= b])
    vals = np.abs(np.asarray(func(grid), dtype=float))
    best = vals.max()
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    for _ in range(refinements):
        sub = np.linspace(lo, hi, 65)
        sv = np.abs(np.asarray(func(sub), dtype=float))
        k = int(np.argmax(sv))
        best = max(best, sv[k])
        lo, hi = sub[max(k - 1, 0)], sub[min(k + 1, sub.size - 1)]
    return float(best)


def lp_norm(req: NormRequest):
    """``(|S^{d-1}| int_a^b |f|^p r^(d-1) dr)^(1/p)``; ``p = inf`` is a scan sup."""
    a, b = req.interval
    if math.isinf(req.p):
        return scan_sup(req.integrand, a, b, breakpoints=req.breakpoints)
    # normalize by a sampled magnitude so |f|^p neither overflows nor underflows
    probe = np.union1d(np.linspace(a, b, 257), [x for x in req.breakpoints if a <= x <= b])
    mag = float(np.max(np.abs(req.integrand(probe))))
    if mag == 0.0 or not np.isfinite(mag):
        mag = 1.0
    p, d = req.p, req.d

    def density(r):
        return (np.abs(req.integrand(r)) / mag) ** p * r ** (d - 1)

    total = integrate(density, a, b, rel_tol=req.rel_tol, breakpoints=req.breakpoints)
    return mag * (req.sphere_factor * total) ** (1.0 / p)


def holder_volume_check(f, q0, q, volume, interval, d, rel_slack=1e-6, breakpoints=()):
    """Whether ``||f||_{q0} <= B^(1/q0 - 1/q) ||f||_q`` for support volume B."""
    if not q >= q0 >= 1:
        raise ValueError("need q >= q0 >= 1")
    lhs = lp_norm(NormRequest(f, q0, interval, d, rel_tol=1e-10, breakpoints=breakpoints))
    rhs = volume ** (1.0 / q0 - 1.0 / q) * lp_norm(
        NormRequest(f, q, interval, d, rel_tol=1e-10, breakpoints=breakpoints)
    )
    return bool(lhs <= rhs * (1.0 + rel_slack))


def shell_volume(a, b, d):
    """Volume of the shell ``a <= |x| <= b`` in R^d."""
    return sphere_area(d) * (b**d - a**d) / d


def _graph_sq(func, V, a, b, d, breakpoints, rel_tol):
    probe = np.linspace(a, b, 513)
    mag = float(np.max(np.abs(func(probe, 0).value))) or 1.0

    def density(r):
        jet = func(r, 1)
        val = jet.value / mag
        return ((jet.derivative(1) / mag) ** 2 + (1.0 + V(r)) * val * val) * r ** (d - 1)

    return mag * mag * integrate(density, a, b, rel_tol=rel_tol, breakpoints=breakpoints)


def graph_norm_P(mode, rel_tol=1e-8):
    """``(||f_n||_D, ||u_n||_D)`` for ``||w||_D^2 = ||grad w||^2 + int (1 + V) |w|^2``.

    ``mode`` is a calibrated quasi-mode; radial gradients come from jets.
    """
    d = mode.d
    V = lambda r: mode.model.V_of_r(r).value  # noqa: E731
    f_sq = 0.0
    for lo, hi in mode.window.ramp_bands:
        brk = [lo + k * (hi - lo) for k in (0.005, 0.02, 0.1, 0.3, 0.7, 0.9, 0.98, 0.995)]
        f_sq += _graph_sq(mode.f, V, lo, hi, d, brk, rel_tol)
    a, b = mode.support
    u_sq = _graph_sq(mode.u, V, a, b, d, mode.r_breakpoints(), rel_tol)
    area = sphere_area(d)
    return math.sqrt(area * f_sq), math.sqrt(area * u_sq)
