"""Frequency profile q and the ladder of frequencies solving ``q(lambda_n) = 10^n``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DomainError, NumericalError

STANDARD = "standard"
EPSILON = "epsilon"

DESK_LAMBDA_LIMIT = 1e15
MAX_N0 = 60


@dataclass(frozen=True)
class FrequencyProfile:
    """``q(l) = l / (M log l)`` (standard) or ``q(l) = l / (log l)^(1+epsilon)``."""

    M: float = 160.0
    variant: str = STANDARD
    epsilon: float = 1.0

    def __post_init__(self):
        if self.variant not in (STANDARD, EPSILON):
            raise ConfigurationError(f"unknown profile variant {self.variant!r}")
        if self.variant == STANDARD and not self.M > 1:
            raise ConfigurationError(f"M must exceed 1, got {self.M}")
        if self.variant == EPSILON and not self.epsilon > 0:
            raise ConfigurationError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def domain_min(self):
        """Left end of the domain on which q is evaluated."""
        return math.e if self.variant == STANDARD else 1.0

    @property
    def lambda_min(self):
        """Left end of the interval on which q is strictly increasing."""
        return math.e if self.variant == STANDARD else math.exp(1.0 + self.epsilon)

    @property
    def log_power(self):
        return 1.0 if self.variant == STANDARD else 1.0 + self.epsilon

    @property
    def prefactor(self):
        return self.M if self.variant == STANDARD else 1.0

    def q(self, lam):
        return q_of_lambda(self, lam)

    def log_q(self, log_lam):
        """``log q`` from ``log lambda``; usable far beyond double range."""
        log_lam = np.asarray(log_lam, dtype=float)
        return log_lam - math.log(self.prefactor) - self.log_power * np.log(log_lam)


def q_of_lambda(profile, lam):
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr <= profile.domain_min):
        raise DomainError(
            f"q is defined for lambda > {profile.domain_min:.6g} ({profile.variant} profile)"
        )
    out = lam_arr / (profile.prefactor * np.log(lam_arr) ** profile.log_power)
    return float(out) if out.ndim == 0 else out


def _newton_guess(profile, n):
    ln10 = math.log(10.0)
    if profile.variant == STANDARD:
        M = profile.M
        return M * 10.0**n * (n * ln10 + math.log(M * n * ln10))
    p = profile.log_power
    return 10.0**n * (n * ln10 + p * math.log(n * ln10)) ** p


def _residual(profile, lam, n):
    # lam - P 10^n (log lam)^p, whose large root is lambda_n
    return lam - profile.prefactor * 10.0**n * math.log(lam) ** profile.log_power


def _residual_slope(profile, lam, n):
    p = profile.log_power
    return 1.0 - profile.prefactor * 10.0**n * p * math.log(lam) ** (p - 1.0) / lam


def _converged(profile, lam, n, rtol):
    return abs(q_of_lambda(profile, lam) - 10.0**n) <= rtol * 10.0**n


def _newton(profile, n, rtol, max_iter):
    lam = _newton_guess(profile, n)
    history = []
    for it in range(max_iter):
        F = _residual(profile, lam, n)
        history.append(lam)
        if _converged(profile, lam, n, rtol):
            return lam, it
        step = F / _residual_slope(profile, lam, n)
        trial = lam - step
        # damping: keep the iterate on the increasing branch and reduce |F|
        while trial <= profile.lambda_min or abs(_residual(profile, trial, n)) > abs(F):
            step *= 0.5
            trial = lam - step
            if abs(step) < 1e-300:
                break
        if trial == lam:
            break
        lam = trial
    if _converged(profile, lam, n, rtol):
        return lam, max_iter
    raise NumericalError("Newton iteration did not converge", n=n, iterates=history[-5:])


def bisect_level(profile, n, lo=None, hi=None, rtol=1e-15, max_iter=400):
    """Bracketing solve of ``q(lambda) = 10^n``, independent of the Newton path."""
    target = 10.0**n
    lo = max(profile.lambda_min, 10.0**n) if lo is None else lo
    hi = 10.0 ** (n + 1) * (n + 10) ** 2 * profile.prefactor * 10 if hi is None else hi
    if not (q_of_lambda(profile, lo) <= target <= q_of_lambda(profile, hi)):
        raise NumericalError("bisection bracket does not contain the level", n=n, lo=lo, hi=hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if q_of_lambda(profile, mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * hi:
            break
    return 0.5 * (lo + hi)


@lru_cache(maxsize=4096)
def _lambda_cached(profile, n, rtol):
    try:
        lam, _ = _newton(profile, n, rtol, 50)
    except (NumericalError, OverflowError, ValueError, ZeroDivisionError) as exc:
        lam = bisect_level(profile, n)
        if not _converged(profile, lam, n, rtol):
            raise NumericalError("ladder solve failed", n=n, newton=str(exc), bisection=lam)
    return lam


def lambda_of_level(profile, n, rtol=1e-13):
    """Solve ``q(lambda_n) = 10^n`` by damped Newton (bisection fallback)."""
    if n < 1:
        raise DomainError(f"ladder levels start at n = 1, got {n}")
    return _lambda_cached(profile, int(n), rtol)


def log_lambda_of_level(profile, n, tol=1e-14, max_iter=50):
    """``log lambda_n`` solved directly in log space, valid far beyond double range."""
    if n < 1:
        raise DomainError(f"ladder levels start at n = 1, got {n}")
    p, target = profile.log_power, n * math.log(10.0) + math.log(profile.prefactor)
    L = target + p * math.log(target)
    for _ in range(max_iter):
        step = (L - p * math.log(L) - target) / (1.0 - p / L)
        L -= step
        if abs(step) <= tol * L:
            return L
    raise NumericalError("log-space ladder solve did not converge", n=n, last=L)


def choose_M(d, N):
    """Smallest M (plus one unit of exponent margin) for which the residual
    sup-norms decay like ``lambda_n^(j - N)``.

    On the ramp of chi_n the distance to the window center is at least half
    the plateau width, so y_n is bounded by ``lambda^(-M/40)`` there; together
    with the normalization growth this needs ``M/40 >= d + 2 + N``.
    """
    if d < 1 or N < 0:
        raise ConfigurationError(f"need d >= 1 and N >= 0, got d={d}, N={N}")
    return 40.0 * (d + 2 + N) + 40.0


def check_equiv_q(profile, lam=None, *, log_lam=None):
    """``log q(lambda) / log lambda``, the ratio of ``q log q`` to its equivalent.

    Standard profile: ``q log q / (lambda / M)``.  Epsilon profile:
    ``q log q / (lambda / (log lambda)^epsilon)``.  Both reduce to the same
    expression, which tends to 1.  Pass ``log_lam`` to go beyond double range.
    """
    if log_lam is None:
        if lam is None:
            raise ValueError("give lam or log_lam")
        if lam <= profile.domain_min:
            raise DomainError(f"lambda must exceed {profile.domain_min}")
        log_lam = math.log(lam)
    return float(profile.log_q(log_lam) / log_lam)


def choose_n0(profile, d, max_n=MAX_N0):
    """Smallest level meeting the three admissibility predicates.

    (a) lambda_n > e^2, (b) the log q / log lambda ratio lies in [1/2, 2],
    (c) V >= 0 on the support of psi_n.
    """
    from .potential import PotentialModel  # deferred: potential builds on this module

    for n in range(1, max_n + 1):
        lam = lambda_of_level(profile, n)
        if not lam > math.e**2:
            continue
        ratio = check_equiv_q(profile, lam)
        if not 0.5 <= ratio <= 2.0:
            continue
        model = PotentialModel(profile=profile, d=d, n0=n)
        if model.is_nonnegative_on_level(n):
            return n
    raise ConfigurationError(f"no admissible n0 up to n = {max_n}")


@dataclass
class LadderEntry:
    n: int
    lambda_n: float
    alpha_n: float | None = None
    log_alpha_n: float | None = None

    @property
    def q(self):
        return 10.0**self.n

    @property
    def flagged(self):
        """True beyond the range where physical-coordinate quadrature is reliable."""
        return self.lambda_n > DESK_LAMBDA_LIMIT


@dataclass
class Ladder:
    profile: FrequencyProfile
    n0: int
    d: int = 3
    N: int = 2
    entries: list = field(default_factory=list)

    def __post_init__(self):
        self._by_n = {e.n: e for e in self.entries}

    def lam(self, n):
        """lambda_n for any level, stored or not."""
        e = self._by_n.get(n)
        return e.lambda_n if e is not None else lambda_of_level(self.profile, n)

    def entry(self, n):
        try:
            return self._by_n[n]
        except KeyError:
            raise KeyError(f"level {n} is not stored in the ladder") from None

    @property
    def levels(self):
        return [e.n for e in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def build_ladder(profile, d=3, N=2, n0=None, count=13, start=None):
    """Ladder with ``count`` consecutive levels from ``start`` (default n0)."""
    if n0 is None:
        n0 = choose_n0(profile, d)
    start = n0 if start is None else start
    if start < n0:
        raise ConfigurationError(f"first stored level {start} is below n0 = {n0}")
    entries = [LadderEntry(n, lambda_of_level(profile, n)) for n in range(start, start + count)]
    return Ladder(profile=profile, n0=n0, d=d, N=N, entries=entries)
