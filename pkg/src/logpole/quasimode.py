"""Quasi-modes ``u_n`` concentrated in the well of level n, and their residuals.

``v_n = alpha_n y_n chi_n`` with ``y_n(r) = y(omega (r - c))``, ``omega =
lambda_n / 2`` and ``c = 3 * 10^-(n+1)``; ``u_n = r^(-(d-1)/2) v_n``.  Since
``y_n`` solves the scaled ODE exactly, ``g_n = -v_n'' + b_n v_n`` collapses to
``-alpha_n (2 y_n' chi_n' + y_n chi_n'')`` and ``f_n = r^(-(d-1)/2) g_n``.

Physical-coordinate evaluators return jets in r.  Normalization and sup-norms
are computed in the level-local variable ``s = omega (r - c)``, tracking the
exponentially small size of ``y`` as a logarithm, so they remain meaningful
for levels whose ``lambda_n`` is far outside double range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericalError
from .jets import Jet
from .kernel import eval_scaled_y, eval_y_normalized
from .ladder import log_lambda_of_level
from .potential import LevelWindow, PotentialModel
from .quadrature import NormRequest, integrate, lp_norm, sphere_area

DESK_LOG_LAMBDA = 690.0
SCAN_STEP = 1.0 / 40.0
REFINEMENTS = 3


@dataclass
class SupScan:
    """Result of a sup-norm scan; ``log_value`` is the natural log of the sup."""

    j: int
    log_value: float
    location: float
    history: list = field(default_factory=list)

    @property
    def value(self):
        return math.exp(self.log_value) if self.log_value < 709 else math.inf

    @property
    def converged(self):
        # successive refinements agree to 1%
        return len(self.history) < 2 or abs(self.history[-1] - self.history[-2]) <= math.log(1.01)


class QuasiMode:
    """Quasi-mode of level ``n`` for a given potential model."""

    def __init__(self, model: PotentialModel, n: int, alpha=None, log_alpha=None):
        self.model = model
        self.n = int(n)
        self.d = model.d
        self.window = LevelWindow.for_level(self.n)
        self.log_lambda = log_lambda_of_level(model.profile, self.n)
        if self.log_lambda < DESK_LOG_LAMBDA:
            self.lambda_n = model.lam(self.n)
            self.log_lambda = math.log(self.lambda_n)
        else:
            self.lambda_n = math.inf
        self.log_omega = self.log_lambda - math.log(2.0)
        self.omega = 0.5 * self.lambda_n
        self.center = self.window.center
        # kappa = 10^(n+1) / omega: chi_n in the s variable is chi(kappa s)
        self.kappa = math.exp((self.n + 1) * math.log(10.0) - self.log_omega)
        self._log_alpha = None
        self._scans = {}
        if log_alpha is not None:
            self._log_alpha = float(log_alpha)
        elif alpha is not None:
            self._log_alpha = math.log(alpha)

    @classmethod
    def from_profile(cls, profile, d, n, n0=None, **kwargs):
        n0 = n if n0 is None else n0
        return cls(PotentialModel(profile=profile, d=d, n0=n0), n, **kwargs)

    def __repr__(self):
        return f"QuasiMode(n={self.n}, d={self.d}, log_lambda={self.log_lambda:.6g})"

    @property
    def support(self):
        return self.window.chi_support

    @property
    def desk(self):
        """Whether physical-coordinate evaluators are available (lambda_n finite)."""
        return math.isfinite(self.lambda_n)

    @property
    def half_dim(self):
        return 0.5 * (self.d - 1)

    def _require_desk(self):
        if not self.desk:
            raise DomainError(
                f"level {self.n} has log lambda = {self.log_lambda:.4g}; only log-space "
                "quantities are available"
            )

    # -- normalization --------------------------------------------------------

    def _s_breakpoints(self):
        inner, outer = 0.5 / self.kappa, 1.0 / self.kappa
        pts = [0.0]
        for k in (1.0, 4.0, 16.0, 64.0, 256.0):
            if k < outer:
                pts += [-k, k]
        return pts + [-inner, inner]

    def _l1_density(self, s):
        # y(s) chi(kappa s) (1 + kappa s / 3)^((d-1)/2)
        chi = self.model.bump(self.kappa * s).value
        y = np.exp(-np.sqrt(s * s + 1.0))
        return y * chi * (1.0 + self.kappa * s / 3.0) ** self.half_dim

    def _log_l1_unit(self, rel_tol=1e-12, initial_panels=8):
        """``log ||u_n||_{L^1}`` for alpha_n = 1, from the s-space integral."""
        b = 1.0 / self.kappa
        I = integrate(
            self._l1_density, -b, b, rel_tol=rel_tol, breakpoints=self._s_breakpoints(),
            initial_panels=initial_panels,
        )
        return (
            math.log(sphere_area(self.d) * I)
            - self.log_omega
            + self.half_dim * math.log(self.center)
        )

    def calibrate_alpha(self, rel_tol=1e-12, initial_panels=8):
        """Set alpha_n so that ``||u_n||_{L^1(R^d)} = 1``; returns alpha_n."""
        self._log_alpha = -self._log_l1_unit(rel_tol, initial_panels)
        self._scans.clear()
        return self.alpha

    @property
    def log_alpha(self):
        if self._log_alpha is None:
            self.calibrate_alpha()
        return self._log_alpha

    @property
    def alpha(self):
        return math.exp(self.log_alpha) if self.log_alpha < 709 else math.inf

    # -- physical-coordinate evaluators --------------------------------------

    def _r(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise DomainError("r must be positive")
        return r

    def y_level(self, r, order=0):
        self._require_desk()
        return eval_scaled_y(self.omega, self.center, self._r(r), order)

    def b_level(self, r, order=0):
        self._require_desk()
        return self.model.b_level(self.n, self._r(r), order)

    def chi(self, r, order=0):
        return self.model.chi_window(self.n, self._r(r), order)

    def _radial_weight(self, r, order, exponent):
        return Jet.variable(r, order).power(exponent)

    def v(self, r, order=0):
        r = self._r(r)
        out = self.y_level(r, order) * self.chi(r, order) * self.alpha
        out.base_point = r
        return out

    def u(self, r, order=0):
        r = self._r(r)
        if self.d == 1:
            return self.v(r, order)
        out = self._radial_weight(r, order, -self.half_dim) * self.v(r, order)
        out.base_point = r
        return out

    def g(self, r, order=0):
        """Closed-form residual ``-alpha (2 y' chi' + y chi'')``."""
        r = self._r(r)
        y = self.y_level(r, order + 2)
        x = self.chi(r, order + 2)
        yd, xd = y.d(), x.d()
        out = (yd * xd * 2.0 + y * xd.d()) * (-self.alpha)
        out.base_point = r
        return out.truncate(order)

    def g_direct(self, r, order=0):
        """``-v'' + b_n v`` straight from jets, the second evaluation path."""
        r = self._r(r)
        v = self.v(r, order + 2)
        out = -(v.d().d()) + self.b_level(r, order) * v
        out.base_point = r
        return out

    def f(self, r, order=0):
        r = self._r(r)
        if self.d == 1:
            return self.g(r, order)
        out = self._radial_weight(r, order, -self.half_dim) * self.g(r, order)
        out.base_point = r
        return out

    def equation_residual(self, r):
        """``-u'' - (d-1)/r u' + V u - lambda^2 u - f`` from jets."""
        r = self._r(r)
        u = self.u(r, 2)
        V = self.model.V_of_r(r).value
        lhs = -u.derivative(2) - (self.d - 1) / r * u.derivative(1) + (V - self.lambda_n**2) * u.value
        return lhs - self.f(r).value

    # -- norms ----------------------------------------------------------------

    def r_breakpoints(self):
        a, b = self.support
        pts = [self.center + s / self.omega for s in self._s_breakpoints()]
        (a1, b1), (a2, b2) = self.window.ramp_bands
        return sorted({p for p in pts + [b1, a2] if a < p < b})

    def lp_norm_u_physical(self, p, rel_tol=1e-10):
        """``||u_n||_{L^p(R^d)}`` by quadrature in r (desk levels only)."""
        self._require_desk()
        req = NormRequest(
            lambda r: self.u(r).value, p, self.support, self.d, rel_tol, self.r_breakpoints()
        )
        return lp_norm(req)

    def lp_norm_f_physical(self, p, rel_tol=1e-10):
        self._require_desk()
        fn = lambda r: self.f(r).value  # noqa: E731
        bands = self.window.ramp_bands
        if math.isinf(p):
            return max(lp_norm(NormRequest(fn, p, band, self.d)) for band in bands)
        total = 0.0
        for lo, hi in bands:
            brk = [lo + k * (hi - lo) for k in (0.005, 0.02, 0.1, 0.3, 0.7, 0.9, 0.98, 0.995)]
            total += lp_norm(NormRequest(fn, p, (lo, hi), self.d, rel_tol, brk)) ** p
        return total ** (1.0 / p)

    def _log_band_integral(self, log_density, lo, hi, rel_tol):
        # locate the peak on the scan grid, then integrate exp(log f - peak)
        grid = np.linspace(lo, hi, int(math.ceil((hi - lo) / SCAN_STEP)) + 2)
        L = log_density(grid)
        peak = float(np.max(L))
        if not np.isfinite(peak):
            return -math.inf
        s_max = float(grid[int(np.argmax(L))])
        brk = [s_max + k for k in (-64, -16, -4, -1, 0, 1, 4, 16, 64)]
        I = integrate(
            lambda x: np.exp(log_density(x) - peak), lo, hi, rel_tol=rel_tol, breakpoints=brk,
            initial_panels=4,
        )
        return peak + math.log(I)

    def _log_lp(self, which, p, rel_tol=1e-10):
        """``log ||u_n||_p`` or ``log ||f_n||_p`` from s-space integrals.

        With r = c (1 + kappa s / 3) the radial weights combine into
        ``(1 + kappa s / 3)^((d-1)(1 - p/2))``; everything else is a prefactor.
        """
        k, d = self.kappa, self.d
        weight_exp = (d - 1) * (1.0 - p / 2.0)
        log_c = math.log(self.center)

        def log_weight(s):
            return weight_exp * np.log1p(k * s / 3.0)

        if which == "u":
            def log_density(s):
                chi = self.model.bump(k * s).value
                with np.errstate(divide="ignore"):
                    return p * (-np.sqrt(s * s + 1.0) + np.log(chi)) + log_weight(s)

            bands = [(-1.0 / k, 1.0 / k)]
            log_pre = p * self.log_alpha - p * self.half_dim * log_c
        else:
            def log_density(s):
                Y, log_y = eval_y_normalized(s, 1)
                X = self.model.bump(k * s, 2, max_order=2).rescale(k)
                core = 2.0 * Y.derivative(1) * X.derivative(1) + Y.value * X.derivative(2)
                with np.errstate(divide="ignore"):
                    return p * (log_y + np.log(np.abs(core))) + log_weight(s)

            inner, outer = 0.5 / k, 1.0 / k
            bands = [(-outer, -inner), (inner, outer)]
            log_pre = p * (self.log_alpha + 2 * self.log_omega) - p * self.half_dim * log_c
        logs = [self._log_band_integral(log_density, lo, hi, rel_tol) for lo, hi in bands]
        top = max(logs)
        log_int = top + math.log(sum(math.exp(x - top) for x in logs))
        log_total = math.log(sphere_area(d)) + log_pre + (d - 1) * log_c - self.log_omega + log_int
        return log_total / p

    def log_lp_norm_u(self, p, rel_tol=1e-10):
        if math.isinf(p):
            raise ValueError("use the physical scan for p = inf")
        return self._log_lp("u", p, rel_tol)

    def log_lp_norm_f(self, p, rel_tol=1e-10):
        if math.isinf(p):
            return self.log_sup_derivative_norm(0)
        return self._log_lp("f", p, rel_tol)

    def lp_norm_u(self, p, rel_tol=1e-10):
        """``||u_n||_{L^p(R^d)}``."""
        if math.isinf(p):
            return self.lp_norm_u_physical(p)
        return math.exp(self.log_lp_norm_u(p, rel_tol))

    def lp_norm_f(self, p, rel_tol=1e-10):
        return math.exp(self.log_lp_norm_f(p, rel_tol))

    # -- sup-norms in log space ----------------------------------------------

    def _log_H(self, s, j):
        """``log |H^(j)(s)| + phase(s)`` where f^(j) = -alpha omega^(2+j) c^(-(d-1)/2) H^(j)."""
        s = np.asarray(s, dtype=float)
        k = self.kappa
        Y, log_y = eval_y_normalized(s, j + 2)
        X = self.model.bump(k * s, j + 2, max_order=j + 2).rescale(k)
        Xd = X.d()
        core = Y.d() * Xd * 2.0 + Y * Xd.d()
        if self.d != 1:
            R = (Jet.variable(s, j) * (k / 3.0) + 1.0).power(-self.half_dim)
            core = R * core
        with np.errstate(divide="ignore"):
            return log_y + np.log(np.abs(core.derivative(j)))

    def _log_prefactor(self, j):
        return self.log_alpha + (2 + j) * self.log_omega - self.half_dim * math.log(self.center)

    def sup_scan(self, j, step=SCAN_STEP, refinements=REFINEMENTS):
        """Sup of ``|d^j f_n / dr^j|`` over both ramp bands, as a :class:`SupScan`."""
        inner, outer = 0.5 / self.kappa, 1.0 / self.kappa
        count = int(math.ceil((outer - inner) / step)) + 1
        band = np.linspace(inner, outer, count)
        grid = np.concatenate([-band[::-1], band])
        L = self._log_H(grid, j)
        i = int(np.argmax(L))
        best, where = float(L[i]), float(grid[i])
        history = [best]
        h = grid[1] - grid[0]
        for _ in range(refinements):
            sub = np.linspace(where - h, where + h, 41)
            sub = sub[(np.abs(sub) >= inner) & (np.abs(sub) <= outer)]
            Ls = self._log_H(sub, j)
            k = int(np.argmax(Ls))
            if Ls[k] > best:
                best, where = float(Ls[k]), float(sub[k])
            history.append(best)
            h = sub[1] - sub[0] if sub.size > 1 else h / 20
        if not np.isfinite(best):
            raise NumericalError("sup scan found no nonzero value", n=self.n, j=j)
        pre = self._log_prefactor(j)
        return SupScan(
            j=j,
            log_value=pre + best,
            location=self.center + where * math.exp(-self.log_omega),
            history=[pre + x for x in history],
        )

    def log_sup_derivative_norm(self, j):
        if j not in self._scans:
            self._scans[j] = self.sup_scan(j)
        return self._scans[j].log_value

    def sup_derivative_norm(self, j):
        self.log_sup_derivative_norm(j)
        return self._scans[j].value


def build_modes(model, levels, calibrate=True):
    modes = []
    for n in levels:
        mode = QuasiMode(model, n)
        if calibrate:
            mode.calibrate_alpha()
        modes.append(mode)
    return modes

