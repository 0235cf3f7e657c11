"""Dyadic windows, the reduced potential W and the physical potential V.

Level n owns the window ``psi_n(r) = chi(10^n r) - chi(10^(n+1) r)`` and, in
its plateau, the well ``chi_n`` centered at ``3 * 10^-(n+1)``.  The reduced
potential is ``W = sum_n psi_n (b_n + lambda_n^2)`` and
``V = W - chi(10^n0 r) (d^2 - 4d + 3) / (4 r^2)``; the cutoff on the
centrifugal term keeps V compactly supported for every d and leaves the
equation untouched wherever a quasi-mode lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .jets import Jet
from .kernel import DEFAULT_BUMP, BumpSpec, eval_scaled_b
from .ladder import FrequencyProfile, Ladder, lambda_of_level
from .quadrature import integrate

POINTS_PER_DECADE = 512


# correctly rounded 10^-k (numpy's vectorized power is off by an ulp for some k)
_NEG_POW10 = np.array([float(f"1e-{k}") for k in range(0, 324)])


def _pow10(k):
    return float(f"1e{-k}")


@dataclass(frozen=True)
class LevelWindow:
    """Support and plateau geometry of ``psi_n`` and ``chi_n``."""

    n: int
    psi_support: tuple
    psi_plateau: tuple
    chi_support: tuple
    chi_plateau: tuple
    center: float

    @classmethod
    def for_level(cls, n):
        u1, u2 = _pow10(n + 1), _pow10(n + 2)
        return cls(
            n=n,
            psi_support=(5 * u2, _pow10(n)),
            psi_plateau=(u1, 5 * u1),
            chi_support=(2 * u1, 4 * u1),
            chi_plateau=(25 * u2, 35 * u2),
            center=3 * u1,
        )

    @property
    def ramp_bands(self):
        """The two intervals where chi_n is strictly between 0 and 1."""
        (a, b), (c, e) = self.chi_support, self.chi_plateau
        return (a, c), (e, b)


def _as_r(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("r must be positive (the pole sits at r = 0)")
    return r


def level_index(r):
    """``m`` with ``10^-(m+1) < r <= 10^-m``, decided against exact powers of ten."""
    r = np.asarray(r, dtype=float)
    m = np.clip(np.floor(-np.log10(r)).astype(int), 1, _NEG_POW10.size - 2)
    # correct log10 rounding at the decade boundaries
    m = np.where(r > _NEG_POW10[m], m - 1, m)
    m = np.where(r <= _NEG_POW10[m + 1], m + 1, m)
    return m


@dataclass
class PotentialModel:
    """The potential built on the frequency ladder from level ``n0`` down."""

    profile: FrequencyProfile
    d: int
    n0: int
    bump: BumpSpec = DEFAULT_BUMP
    ladder: Ladder | None = field(default=None, repr=False)

    @classmethod
    def from_ladder(cls, ladder, bump=DEFAULT_BUMP):
        return cls(profile=ladder.profile, d=ladder.d, n0=ladder.n0, bump=bump, ladder=ladder)

    @property
    def centrifugal_coefficient(self):
        d = self.d
        return (d * d - 4 * d + 3) / 4.0

    @property
    def r0(self):
        """Largest radius where the windows sum to one (the sandwich range)."""
        return 5 * _pow10(self.n0 + 1)

    def lam(self, n):
        if self.ladder is not None:
            return self.ladder.lam(n)
        return lambda_of_level(self.profile, n)

    def window(self, n):
        return LevelWindow.for_level(n)

    # -- windows --------------------------------------------------------------

    def outer_cutoff(self, r, order=0):
        """``chi(10^n0 r)``, equal to the sum of all windows."""
        r = _as_r(r)
        k = 10.0**self.n0
        return self.bump(k * r, order, max_order=order).rescale(k)

    def psi(self, n, r, order=0):
        r = _as_r(r)
        k0, k1 = 10.0**n, 10.0 ** (n + 1)
        a = self.bump(k0 * r, order, max_order=order).rescale(k0)
        b = self.bump(k1 * r, order, max_order=order).rescale(k1)
        out = a - b
        out.base_point = r
        return out

    def chi_window(self, n, r, order=0):
        r = _as_r(r)
        k = 10.0 ** (n + 1)
        out = self.bump(k * r - 3.0, order, max_order=order).rescale(k)
        out.base_point = r
        return out

    def b_level(self, n, r, order=0):
        return eval_scaled_b(0.5 * self.lam(n), LevelWindow.for_level(n).center, r, order, max_order=order)

    # -- potentials -----------------------------------------------------------

    def _levels_for(self, r):
        m = level_index(r)
        lo = max(int(m.min()) - 1, self.n0)
        hi = max(int(m.max()), self.n0)
        return range(lo, hi + 1)

    def W_of_r(self, r, order=0):
        """Jet of W; only the (at most two) windows containing r contribute."""
        r = _as_r(r)
        flat = np.atleast_1d(r).ravel()
        total = np.zeros((order + 1, flat.size))
        for m in self._levels_for(flat):
            lo, hi = LevelWindow.for_level(m).psi_support
            idx = np.nonzero((flat > lo) & (flat < hi))[0]
            if idx.size == 0:
                continue
            rr = flat[idx]
            lam = self.lam(m)
            term = self.psi(m, rr, order) * (self.b_level(m, rr, order) + lam * lam)
            total[:, idx] += term.taylor
        return Jet(total.reshape((order + 1,) + r.shape), base_point=r)

    def V_of_r(self, r, order=0):
        r = _as_r(r)
        W = self.W_of_r(r, order)
        c = self.centrifugal_coefficient
        if c == 0.0:
            return W
        x = Jet.variable(r, order)
        correction = self.outer_cutoff(r, order) * (x * x).reciprocal() * c
        out = W - correction
        out.base_point = r
        return out

    # -- checks ----------------------------------------------------------------

    def sample_level(self, n, points_per_decade=POINTS_PER_DECADE, clip_r0=False):
        lo, hi = LevelWindow.for_level(n).psi_support
        if clip_r0:
            hi = min(hi, self.r0)
        count = max(int(math.ceil(points_per_decade * math.log10(hi / lo))), 2)
        return np.logspace(math.log10(lo), math.log10(hi), count + 1)[1:-1]

    def is_nonnegative_on_level(self, n, points_per_decade=POINTS_PER_DECADE):
        r = self.sample_level(n, points_per_decade)
        return bool(np.all(self.V_of_r(r).value >= 0.0))

    def sandwich_report(self, levels, points_per_decade=POINTS_PER_DECADE):
        return sandwich_report(self, levels, points_per_decade)

    def breakpoints(self, lo, hi):
        """Well centers and plateau edges inside ``[lo, hi]`` for quadrature."""
        pts = []
        for m in self._levels_for(np.array([lo, hi])):
            w = LevelWindow.for_level(m)
            width = 2.0 / self.lam(m)
            pts += [w.center + k * width for k in (-16, -4, -1, 0, 1, 4, 16)]
            pts += [*w.psi_support, *w.psi_plateau]
        return [p for p in pts if lo < p < hi]

    def lp_partial_integral(self, p, inner, outer=None, rel_tol=1e-8):
        """``int_inner^outer V^p r^(d-1) dr``, split at every window edge."""
        outer = _pow10(self.n0) if outer is None else outer
        edges = sorted({inner, outer, *self.breakpoints(inner, outer)})
        d = self.d

        def density(r):
            return np.maximum(self.V_of_r(r).value, 0.0) ** p * r ** (d - 1)

        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            total += integrate(density, a, b, rel_tol=rel_tol, initial_panels=4)
        return total


@dataclass
class SandwichReport:
    levels: list
    level_min: list
    level_max: list
    r_range: tuple

    @property
    def level_ratio(self):
        return [hi / lo for lo, hi in zip(self.level_min, self.level_max)]

    @property
    def overall_min(self):
        return min(self.level_min)

    @property
    def overall_max(self):
        return max(self.level_max)

    @property
    def overall_ratio(self):
        return self.overall_max / self.overall_min

    @property
    def ratio_stability(self):
        ratios = self.level_ratio
        return max(ratios) / min(ratios)

    @property
    def passed(self):
        finite = np.all(np.isfinite(self.level_max)) and self.overall_min > 0
        return bool(finite and self.ratio_stability <= 4.0)


def sandwich_report(model, levels, points_per_decade=POINTS_PER_DECADE):
    """Min and max of ``V r^2 / log(r)^2`` on each window, restricted to r <= r0."""
    mins, maxs = [], []
    levels = list(levels)
    for n in levels:
        r = model.sample_level(n, points_per_decade, clip_r0=True)
        Q = model.V_of_r(r).value * r * r / np.log(r) ** 2
        mins.append(float(Q.min()))
        maxs.append(float(Q.max()))
    lo = LevelWindow.for_level(levels[-1]).psi_support[0]
    hi = min(LevelWindow.for_level(levels[0]).psi_support[1], model.r0)
    return SandwichReport(levels=levels, level_min=mins, level_max=maxs, r_range=(lo, hi))
