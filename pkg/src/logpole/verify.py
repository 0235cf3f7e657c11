"""Independent cross-checks of the construction, each returning a report.

Every check names the oracle it compares against.  The finite-difference
oracle re-implements u_n and V in mpmath from their definitions, so it shares
nothing with the jet code except the ladder values and alpha_n.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import mpmath as mp
import numpy as np

from .kernel import eval_b, eval_y, ode_residual
from .ladder import STANDARD
from .potential import LevelWindow, PotentialModel, sandwich_report

# 6th-order central stencils for the first and second derivative
_D1 = ((-3, -1), (-2, 9), (-1, -45), (1, 45), (2, -9), (3, 1))
_D1_DEN = 60
_D2 = ((-3, 2), (-2, -27), (-1, 270), (0, -490), (1, 270), (2, -27), (3, 2))
_D2_DEN = 180


@dataclass
class VerificationReport:
    check: str
    levels: list
    values: list
    tolerance: float
    passed: bool
    oracle: str
    details: dict = field(default_factory=dict)

    def to_dict(self):
        out = asdict(self)
        out["pass"] = out.pop("passed")
        out.pop("details")
        if self.details:
            out["details"] = self.details
        return out

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), default=_json_default, **kwargs)

    def summary_line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.check} levels={self.levels} tol={self.tolerance:g}"


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _finite_list(xs):
    return [float(x) for x in xs]


# -- analytic kernel ------------------------------------------------------------


def ode_check(points=1000, span=30.0, tol=1e-12):
    s = np.linspace(-span, span, points)
    by = eval_b(s).value * eval_y(s).value
    rel = np.abs(ode_residual(s)) / np.maximum(1.0, np.abs(by))
    worst = float(rel.max())
    return VerificationReport(
        check="ode",
        levels=[],
        values=[worst],
        tolerance=tol,
        passed=worst <= tol,
        oracle=f"jet evaluation of -y'' + b y on {points} points of [-{span:g}, {span:g}]",
    )


def partition_check(model: PotentialModel, samples=10_000, depth=10, tol=1e-12):
    """``sum psi_n = chi(10^n0 r)`` on log-spaced r over ``depth`` decades."""
    n0 = model.n0
    r = np.logspace(-(n0 + depth), -n0 + 0.5, samples)
    total = np.zeros_like(r)
    for n in range(n0, n0 + depth + 2):
        total += model.psi(n, r).value
    worst = float(np.abs(total - model.outer_cutoff(r).value).max())
    return VerificationReport(
        check="partition",
        levels=[n0, n0 + depth],
        values=[worst],
        tolerance=tol,
        passed=worst <= tol,
        oracle="direct summation of the windows against the outer cutoff",
    )


# -- finite-difference residual oracle -----------------------------------------


def _mp_theta(t):
    return mp.exp(-1 / t) if t > 0 else mp.mpf(0)


def _mp_chi(s):
    a = abs(s)
    if a <= mp.mpf(1) / 2:
        return mp.mpf(1)
    if a >= 1:
        return mp.mpf(0)
    t = 2 - 2 * a
    return _mp_theta(t) / (_mp_theta(t) + _mp_theta(1 - t))


class _MpLevel:
    """mpmath re-implementation of u_n and V near level n."""

    def __init__(self, mode):
        model = mode.model
        self.d = mode.d
        self.n = mode.n
        self.n0 = model.n0
        self.alpha = mp.mpf(mode.alpha)
        self.lam = {m: mp.mpf(model.lam(m)) for m in (mode.n - 1, mode.n, mode.n + 1) if m >= model.n0}
        self.cc = mp.mpf(self.d * self.d - 4 * self.d + 3) / 4

    def u(self, r):
        n = self.n
        c = 3 * mp.mpf(10) ** (-(n + 1))
        s = self.lam[n] / 2 * (r - c)
        y = mp.exp(-mp.sqrt(s * s + 1))
        chi = _mp_chi(mp.mpf(10) ** (n + 1) * (r - c))
        return self.alpha * y * chi * r ** (-mp.mpf(self.d - 1) / 2)

    def V(self, r):
        total = mp.mpf(0)
        for m, lam in self.lam.items():
            psi = _mp_chi(mp.mpf(10) ** m * r) - _mp_chi(mp.mpf(10) ** (m + 1) * r)
            if psi == 0:
                continue
            w = lam / 2
            s = w * (r - 3 * mp.mpf(10) ** (-(m + 1)))
            b = -((s * s + 1) ** mp.mpf(-1.5)) + s * s / (s * s + 1)
            total += psi * (w * w * b + lam * lam)
        return total - _mp_chi(mp.mpf(10) ** self.n0 * r) * self.cc / (r * r)


def fd_apply(level: _MpLevel, r, h):
    """``-u'' - (d-1)/r u' + (V - lambda^2) u`` by 6th-order central differences."""
    vals = {k: level.u(r + k * h) for k in range(-3, 4)}
    d1 = sum(w * vals[k] for k, w in _D1) / (_D1_DEN * h)
    d2 = sum(w * vals[k] for k, w in _D2) / (_D2_DEN * h * h)
    lam = level.lam[level.n]
    return -d2 - (level.d - 1) / r * d1 + (level.V(r) - lam * lam) * vals[0]


def fd_residual_check(mode, points=200, step_factor=1e-3, tol=1e-5, dps=50):
    """Compare closed-form f_n against the FD oracle at ``points`` support points."""
    a, b = mode.support
    r = np.linspace(a, b, points + 2)[1:-1]
    lam = mode.lambda_n
    f_closed = mode.f(r).value
    u_vals = mode.u(r).value
    scale = max(float(np.abs(f_closed).max()), lam * lam * float(np.abs(u_vals).max()) * 1e-9)
    with mp.workdps(dps):
        level = _MpLevel(mode)
        steps = [mp.mpf(step_factor) / lam / 2**k for k in range(3)]
        fd = np.array(
            [[float(fd_apply(level, mp.mpf(float(ri)), h)) for ri in r] for h in steps]
        )
    deviation = float(np.abs(fd[0] - f_closed).max()) / scale
    # the global scale is dominated by lambda^2 |u| at the center, far above f_n
    # in the ramps; the same scale taken pointwise actually resolves f_n
    local_scale = np.maximum(np.abs(f_closed), lam * lam * np.abs(u_vals) * 1e-9)
    live = local_scale > 0
    local = float((np.abs(fd[0] - f_closed)[live] / local_scale[live]).max()) if live.any() else 0.0
    diffs = [float(np.abs(fd[0] - fd[1]).max()), float(np.abs(fd[1] - fd[2]).max())]
    # below ~1e-30 relative the differences are roundoff, not truncation
    floor = 1e-30 * lam * lam * float(np.abs(u_vals).max())
    order_ratio = diffs[0] / diffs[1] if diffs[1] > floor else math.inf
    order_ok = math.isinf(order_ratio) or 48.0 <= order_ratio <= 80.0
    plateau = (r >= mode.window.chi_plateau[0]) & (r <= mode.window.chi_plateau[1])
    return VerificationReport(
        check="fd_residual",
        levels=[mode.n],
        values=[deviation, order_ratio, local],
        tolerance=tol,
        passed=bool(deviation <= tol and local <= tol and order_ok),
        oracle=(
            f"6th-order central differences of an mpmath re-implementation of u_n and V "
            f"(dps={dps}, h={step_factor:g}/lambda_n, halved twice)"
        ),
        details={
            "scale": scale,
            "step_differences": diffs,
            "plateau_fd_max": float(np.abs(fd[0][plateau]).max()) if plateau.any() else 0.0,
        },
    )


# -- normalization --------------------------------------------------------------


def normalization_check(modes, tol=1e-8):
    """Physical-coordinate L^1 norms after calibration, and stability of alpha."""
    errors, drifts = [], []
    for mode in modes:
        l1 = mode.lp_norm_u_physical(1, rel_tol=1e-11)
        errors.append(abs(l1 - 1.0))
        # doubled starting panels and a tighter tolerance
        log_fine = mode._log_l1_unit(rel_tol=1e-13, initial_panels=16)
        drifts.append(abs(math.expm1(-log_fine - mode.log_alpha)))
    worst = max(max(errors), max(drifts))
    return VerificationReport(
        check="normalization",
        levels=[m.n for m in modes],
        values=_finite_list(errors),
        tolerance=tol,
        passed=worst <= tol,
        oracle="adaptive quadrature in r against the s-space calibration integral",
        details={"alpha_drift_under_doubling": _finite_list(drifts)},
    )


def support_check(modes, tol=1e-12):
    """``[2, 4] 10^-(n+1) = [M/5, 2M/5] log(lambda_n) / lambda_n``."""
    devs = []
    for mode in modes:
        prof = mode.model.profile
        if prof.variant != STANDARD:
            continue
        a, b = mode.support
        unit = mode.log_lambda / mode.lambda_n
        devs.append(max(abs(prof.M / 5 * unit / a - 1), abs(2 * prof.M / 5 * unit / b - 1)))
    worst = max(devs) if devs else 0.0
    return VerificationReport(
        check="support",
        levels=[m.n for m in modes],
        values=_finite_list(devs),
        tolerance=tol,
        passed=worst <= tol,
        oracle="ladder identity 10^-n = M log(lambda_n) / lambda_n",
    )


def two_path_check(modes, points=100, tol=1e-9, seed=0):
    """Closed-form g_n against ``-v'' + b_n v`` at random support points."""
    rng = np.random.default_rng(seed)
    worst_per_level = []
    for mode in modes:
        a, b = mode.support
        r = rng.uniform(a, b, points)
        g1 = mode.g(r).value
        v = mode.v(r, 2)
        bv = mode.b_level(r).value * v.value
        g2 = -v.derivative(2) + bv
        # the direct path cancels terms of size omega^2 |v|; measure against them
        scale = np.maximum(np.abs(g1), np.abs(v.derivative(2)) + np.abs(bv))
        scale = np.where(scale > 0, scale, 1.0)
        worst_per_level.append(float((np.abs(g1 - g2) / scale).max()))
    return VerificationReport(
        check="two_path",
        levels=[m.n for m in modes],
        values=worst_per_level,
        tolerance=tol,
        passed=max(worst_per_level) <= tol,
        oracle="jet second derivative of v_n plus b_n v_n, relative to the cancelled terms",
    )


# -- lemma constants and decay -------------------------------------------------


def log_decay_factor(mode, divisor=20.0):
    """``-lambda_n / (divisor 10^n)`` via ``lambda_n / 10^n = P (log lambda_n)^p``."""
    prof = mode.model.profile
    return -prof.prefactor * mode.log_lambda**prof.log_power / divisor


def lemma_ratios(mode, js=(0, 1, 2), divisor=20.0):
    d, ln10 = mode.d, math.log(10.0)
    log_r1 = []
    for j in js:
        denom = (
            mode.log_alpha
            + (1 + j) * mode.log_lambda
            + mode.n * ln10 * (d + 1) / 2
            + log_decay_factor(mode, divisor)
        )
        log_r1.append(mode.log_sup_derivative_norm(j) - denom)
    # ||u_n||_{L^1} = 1 after calibration
    log_r2 = mode.log_lambda + mode.n * ln10 * (d - 1) / 2 - mode.log_alpha
    return log_r1, log_r2


def lemma_estimations_check(modes, js=(0, 1, 2), divisor=20.0, factor=4.0):
    """R1 bounded above and R2 bounded below, both relative to the first level."""
    rows = [lemma_ratios(m, js, divisor) for m in modes]
    log_r1 = np.array([r[0] for r in rows])  # (levels, js)
    log_r2 = np.array([r[1] for r in rows])
    lf = math.log(factor)
    r1_ok = bool(np.all(log_r1.max(axis=0) <= log_r1[0] + lf))
    r2_ok = bool(log_r2.min() >= log_r2[0] - lf)
    return VerificationReport(
        check="lemma_estimations",
        levels=[m.n for m in modes],
        values=_finite_list(log_r1.ravel()) + _finite_list(log_r2),
        tolerance=factor,
        passed=r1_ok and r2_ok,
        oracle=f"log-space sup scans and calibration (exponent lambda/({divisor:g} q))",
        details={
            "log_R1": log_r1.tolist(),
            "log_R2": log_r2.tolist(),
            "R1_bounded": r1_ok,
            "R2_bounded_below": r2_ok,
        },
    )


def decay_series(modes, N, j):
    """``log(sup |d^j f_n| lambda_n^(N-j))`` along the modes."""
    return [m.log_sup_derivative_norm(j) + (N - j) * m.log_lambda for m in modes]


def theorem_decay_check(modes, N, js=(0, 1, 2)):
    """Each series is finite and non-increasing from the second level on."""
    table, ok = {}, True
    for j in js:
        series = decay_series(modes, N, j)
        tail = np.array(series[1:])
        good = bool(np.all(np.isfinite(series)) and np.all(np.diff(tail) <= 0.0))
        table[j] = series
        ok = ok and good
    return VerificationReport(
        check="theorem_decay",
        levels=[m.n for m in modes],
        values=[v for j in js for v in table[j]],
        tolerance=0.0,
        passed=ok,
        oracle="log-space sup scans of the jet-evaluated residual derivatives",
        details={"N": N, "log_series": {str(j): table[j] for j in js}},
    )


# -- potential ------------------------------------------------------------------


def sandwich_check(model, levels, max_ratio=None):
    """Positivity, finiteness and factor-4 stability of per-level sandwich ratios.

    With ``max_ratio`` the overall max/min over all levels must also stay below it.
    """
    rep = sandwich_report(model, levels)
    ok = rep.passed
    if max_ratio is not None:
        ok = ok and rep.overall_ratio <= max_ratio
    return VerificationReport(
        check="sandwich",
        levels=list(levels),
        values=[rep.overall_min, rep.overall_max, rep.overall_ratio, rep.ratio_stability],
        tolerance=max_ratio if max_ratio is not None else 4.0,
        passed=bool(ok),
        oracle="V r^2 / log(r)^2 on 512 log-spaced points per decade",
        details={"level_ratio": rep.level_ratio, "r_range": list(rep.r_range)},
    )


def integrability_series(model, p, depth=7):
    inner = [LevelWindow.for_level(model.n0 + k).psi_support[0] for k in range(depth)]
    pieces, hi = [], 10.0 ** (-model.n0)
    for lo in inner:
        pieces.append(model.lp_partial_integral(p, lo, hi))
        hi = lo
    return np.cumsum(pieces).tolist(), pieces


def integrability_check(model, depth=7, p_conv=1.2, p_div=1.5, blowup=1e6):
    """Partial integrals of V^p r^(d-1) as the inner cutoff shrinks decade by decade."""
    conv, conv_pieces = integrability_series(model, p_conv, depth)
    div, div_pieces = integrability_series(model, p_div, depth)
    # geometric decay of the increments, and a tail bound below 1% of the sum
    ratios = [b / a for a, b in zip(conv_pieces[1:-1], conv_pieces[2:])]
    rho = max(ratios)
    tail = conv_pieces[-1] * rho / (1 - rho) if rho < 1 else math.inf
    converges = rho < 1 and tail <= 1e-2 * conv[-1]
    diverges = div[-1] > blowup and all(b >= a for a, b in zip(div_pieces[1:-1], div_pieces[2:]))
    return VerificationReport(
        check="integrability",
        levels=[model.n0, model.n0 + depth - 1],
        values=[conv[-1], rho, div[-1]],
        tolerance=blowup,
        passed=bool(converges and diverges),
        oracle="adaptive quadrature split at every window edge and well center",
        details={"partial_p_conv": conv, "partial_p_div": div, "p": [p_conv, p_div]},
    )


def holder_check(modes, q0=1.0, q=2.0):
    """Hoelder volume bound for u_n with B the volume of its support shell."""
    from .quadrature import holder_volume_check, shell_volume

    flags = []
    for mode in modes:
        a, b = mode.support
        flags.append(
            holder_volume_check(
                lambda r, m=mode: m.u(r).value, q0, q, shell_volume(a, b, mode.d), (a, b),
                mode.d, breakpoints=mode.r_breakpoints(),
            )
        )
    return VerificationReport(
        check="holder",
        levels=[m.n for m in modes],
        values=[float(f) for f in flags],
        tolerance=1e-6,
        passed=all(flags),
        oracle="quadrature of both sides of the volume inequality",
    )


def sup_norm_cross_check(mode, j=0, rel_tol=1e-2):
    """Log-space sup scan against a physical-coordinate scan of f_n^(j)."""
    from .quadrature import scan_sup

    (a1, b1), (a2, b2) = mode.window.ramp_bands
    phys = max(
        scan_sup(lambda r: mode.f(r, j).derivative(j), a, b, points=20001) for a, b in ((a1, b1), (a2, b2))
    )
    logv = mode.log_sup_derivative_norm(j)
    dev = abs(math.log(phys) - logv)
    return VerificationReport(
        check="sup_cross",
        levels=[mode.n],
        values=[dev],
        tolerance=rel_tol,
        passed=dev <= math.log1p(rel_tol),
        oracle="dense scan in r of the jet-evaluated derivative",
    )

