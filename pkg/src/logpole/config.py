"""Versioned key-value run configuration with exact round trips."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import ConfigurationError
from .ladder import EPSILON, STANDARD, FrequencyProfile, choose_M, choose_n0

FORMAT_VERSION = 1
AUTO = "auto"
DEFAULT_SPAN = 8
FORMATS = ("csv", "json")


def parse_levels(text):
    """``"A..B"`` (inclusive) or a single level ``"A"``."""
    text = text.strip()
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise ConfigurationError(f"levels must look like A..B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise ConfigurationError(f"bad level span {text!r}")
    return lo, hi


@dataclass(frozen=True)
class RunConfig:
    d: int = 3
    N: int = 2
    M: object = AUTO
    variant: str = STANDARD
    epsilon: float = 1.0
    n0: object = AUTO
    levels: tuple | None = None
    rel_tol: float = 1e-10
    fd_step: float = 1e-3
    scan_density: float = 40.0
    out: str | None = None
    formats: tuple = ("csv",)

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise ConfigurationError(f"d must be a positive integer, got {self.d!r}")
        if not isinstance(self.N, int) or self.N < 0:
            raise ConfigurationError(f"N must be a nonnegative integer, got {self.N!r}")
        if self.variant not in (STANDARD, EPSILON):
            raise ConfigurationError(f"unknown variant {self.variant!r}")
        if self.M != AUTO and not (isinstance(self.M, float) and self.M > 1):
            raise ConfigurationError(f"M must be 'auto' or a real > 1, got {self.M!r}")
        if self.n0 != AUTO and not (isinstance(self.n0, int) and self.n0 >= 1):
            raise ConfigurationError(f"n0 must be 'auto' or a positive integer, got {self.n0!r}")
        if not self.epsilon > 0:
            raise ConfigurationError("epsilon must be positive")
        for name in ("rel_tol", "fd_step", "scan_density"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be positive")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise ConfigurationError(f"unknown output formats {bad}")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    @property
    def profile(self):
        M = choose_M(self.d, self.N) if self.M == AUTO else self.M
        return FrequencyProfile(M=M, variant=self.variant, epsilon=self.epsilon)

    def resolved(self):
        """Copy with M, n0 and the level span made explicit."""
        prof = self.profile
        n0 = choose_n0(prof, self.d) if self.n0 == AUTO else self.n0
        levels = self.levels or (n0, n0 + DEFAULT_SPAN - 1)
        if levels[0] < n0:
            raise ConfigurationError(f"level span starts below n0 = {n0}")
        return self.replace(M=float(prof.M), n0=n0, levels=tuple(levels))

    @property
    def level_range(self):
        if self.levels is None:
            raise ConfigurationError("level span unresolved; call resolved() first")
        return range(self.levels[0], self.levels[1] + 1)

    # -- serialization --------------------------------------------------------

    def to_text(self):
        lines = [f"version = {FORMAT_VERSION}"]
        for f in dataclasses.fields(self):
            lines.append(f"{f.name} = {_format(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        values, version = {}, None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if line.startswith("#"):
                line = line[1:].strip()
            if not line or "=" not in line:
                continue
            key, _, val = (part.strip() for part in line.partition("="))
            if key == "version":
                version = int(val)
                continue
            if key not in _FIELDS:
                raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
            values[key] = _parse(key, val)
        if version != FORMAT_VERSION:
            raise ConfigurationError(f"unsupported config version {version!r}")
        return cls(**values)

    def header_lines(self, prefix="# "):
        return [prefix + line for line in self.to_text().splitlines()]


_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def _format(value):
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        if value and isinstance(value[0], int):
            return f"{value[0]}..{value[1]}"
        return ",".join(value)
    return str(value)


def _parse(key, text):
    if text == "none":
        return None
    if key in ("d", "N"):
        return int(text)
    if key in ("M", "n0"):
        if text == AUTO:
            return AUTO
        return float(text) if key == "M" else int(text)
    if key in ("epsilon", "rel_tol", "fd_step", "scan_density"):
        value = float(text)
        if not math.isfinite(value):
            raise ConfigurationError(f"{key} must be finite")
        return value
    if key == "levels":
        return parse_levels(text)
    if key == "formats":
        return tuple(p.strip() for p in text.split(",") if p.strip())
    return text


def load(path):
    with open(path, encoding="utf-8") as fh:
        return RunConfig.from_text(fh.read())


def dump(config, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(config.to_text())


__all__ = ["AUTO", "DEFAULT_SPAN", "RunConfig", "dump", "load", "parse_levels"]
