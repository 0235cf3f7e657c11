"""Truncated Taylor jets: a value together with its first k derivatives.

A :class:`Jet` stores Taylor-normalized coefficients ``t[j] = f^(j)(x0) / j!``
internally, which keeps the product and composition rules simple, and exposes
the plain derivative values through :attr:`Jet.coeffs`.  Coefficient arrays
have shape ``(order + 1, *batch)`` so one jet can carry many base points at
once; arithmetic broadcasts over the batch axes.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["Jet", "compose", "factorials"]


def factorials(order):
    return np.array([math.factorial(j) for j in range(order + 1)], dtype=float)


def _expand(t, ndim):
    # pad batch axes so that (k+1, n) and (k+1,) broadcast against each other
    extra = ndim - t.ndim
    if extra <= 0:
        return t
    return t.reshape(t.shape[:1] + (1,) * extra + t.shape[1:])


class Jet:
    """Value and derivatives up to a fixed order at one or many base points."""

    __array_priority__ = 1000  # make ndarray * Jet dispatch to Jet.__rmul__

    def __init__(self, taylor, base_point=None):
        taylor = np.asarray(taylor, dtype=float)
        if taylor.ndim == 0:
            taylor = taylor.reshape(1)
        self.taylor = taylor
        self.base_point = base_point

    # -- construction -------------------------------------------------------

    @classmethod
    def variable(cls, x, order):
        """Jet of the identity map at ``x``."""
        x = np.asarray(x, dtype=float)
        t = np.zeros((order + 1,) + x.shape)
        t[0] = x
        if order >= 1:
            t[1] = 1.0
        return cls(t, base_point=x)

    @classmethod
    def constant(cls, c, order, base_point=None):
        c = np.asarray(c, dtype=float)
        t = np.zeros((order + 1,) + c.shape)
        t[0] = c
        return cls(t, base_point=base_point)

    @classmethod
    def from_derivatives(cls, coeffs, base_point=None):
        coeffs = np.asarray(coeffs, dtype=float)
        fact = factorials(coeffs.shape[0] - 1)
        return cls(coeffs / _expand(fact, coeffs.ndim), base_point=base_point)

    @classmethod
    def zeros(cls, order, shape=(), base_point=None):
        return cls(np.zeros((order + 1,) + tuple(shape)), base_point=base_point)

    # -- accessors ------------------------------------------------------------

    @property
    def order(self):
        return self.taylor.shape[0] - 1

    @property
    def batch_shape(self):
        return self.taylor.shape[1:]

    @property
    def value(self):
        return self.taylor[0]

    @property
    def coeffs(self):
        """Derivative values: ``coeffs[j]`` is the j-th derivative."""
        fact = factorials(self.order)
        return self.taylor * _expand(fact, self.taylor.ndim)

    def derivative(self, j=1):
        """The j-th derivative value (not Taylor-normalized)."""
        return self.taylor[j] * math.factorial(j)

    def __repr__(self):
        return f"Jet(order={self.order}, coeffs={self.coeffs!r})"

    def __len__(self):
        return self.order + 1

    # -- structural operations ------------------------------------------------

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot extend a jet of order {self.order} to {order}")
        return Jet(self.taylor[: order + 1], self.base_point)

    def d(self):
        """Jet of the derivative, one order lower."""
        if self.order == 0:
            raise ValueError("derivative of an order-0 jet is undetermined")
        k = np.arange(1, self.order + 1, dtype=float)
        return Jet(self.taylor[1:] * _expand(k, self.taylor.ndim), self.base_point)

    def rescale(self, factor):
        """Chain rule for a linear change of variable ``x -> factor * x``."""
        powers = np.asarray(factor, dtype=float)[None, ...] ** _expand(
            np.arange(self.order + 1, dtype=float), self.taylor.ndim
        )
        return Jet(self.taylor * powers, self.base_point)

    def where(self, mask, other):
        """Pick self where ``mask`` holds and ``other`` elsewhere."""
        other = _as_jet(other, self.order)
        a, b = _align(self, other)
        mask = np.asarray(mask, dtype=bool)
        return Jet(np.where(mask[None, ...], a, b), self.base_point)

    def copy(self):
        return Jet(self.taylor.copy(), self.base_point)

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self):
        return Jet(-self.taylor, self.base_point)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Jet):
            a, b = _align(self, other)
            return Jet(a + b, self.base_point)
        other = np.asarray(other, dtype=float)
        t = _expand(self.taylor, other.ndim + 1)
        t = np.broadcast_to(t, np.broadcast_shapes(t.shape, (1,) + other.shape)).copy()
        t[0] = t[0] + other
        return Jet(t, self.base_point)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other, dtype=float)
            t = _expand(self.taylor, other.ndim + 1)
            return Jet(t * other[None, ...], self.base_point)
        a, b = _align(self, other)
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
        for k in range(out.shape[0]):
            acc = a[0] * b[k]
            for j in range(1, k + 1):
                acc = acc + a[j] * b[k - j]
            out[k] = acc
        return Jet(out, self.base_point)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * (1.0 / np.asarray(other, dtype=float))
        a, b = _align(self, other)
        shape = np.broadcast_shapes(a.shape, b.shape)
        out = np.zeros(shape)
        for k in range(shape[0]):
            acc = a[k] * np.ones(shape[1:])
            for j in range(1, k + 1):
                acc = acc - b[j] * out[k - j]
            out[k] = acc / b[0]
        return Jet(out, self.base_point)

    def __rtruediv__(self, other):
        return _as_jet(other, self.order, self.batch_shape) / self

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)) and p >= 0:
            result = Jet.constant(np.ones(self.batch_shape), self.order, self.base_point)
            base = self
            while p:
                if p & 1:
                    result = result * base
                base = base * base
                p >>= 1
            return result
        return self.power(float(p))

    # -- elementary functions -------------------------------------------------

    def power(self, p):
        """Real power ``f**p`` for a jet with nonzero value (positive for non-integer p)."""
        a = self.taylor
        out = np.zeros_like(a)
        out[0] = a[0] ** p
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc = acc + ((p + 1.0) * j - k) * a[j] * out[k - j]
            out[k] = acc / (k * a[0])
        return Jet(out, self.base_point)

    def sqrt(self):
        return self.power(0.5)

    def reciprocal(self):
        return self.power(-1.0)

    def exp(self):
        a = self.taylor
        out = np.zeros_like(a)
        out[0] = np.exp(a[0])
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc = acc + j * a[j] * out[k - j]
            out[k] = acc / k
        return Jet(out, self.base_point)

    def log(self):
        a = self.taylor
        out = np.zeros_like(a)
        out[0] = np.log(a[0])
        for k in range(1, a.shape[0]):
            acc = a[k].copy()
            for j in range(1, k):
                acc = acc - (j / k) * out[j] * a[k - j]
            out[k] = acc / a[0]
        return Jet(out, self.base_point)


def _as_jet(x, order, shape=()):
    if isinstance(x, Jet):
        return x
    x = np.asarray(x, dtype=float)
    return Jet.constant(np.broadcast_to(x, np.broadcast_shapes(x.shape, tuple(shape))), order)


def _align(a, b):
    k = min(a.order, b.order)
    ta, tb = a.taylor[: k + 1], b.taylor[: k + 1]
    n = max(ta.ndim, tb.ndim)
    return _expand(ta, n), _expand(tb, n)


def compose(outer, inner):
    """Jet of ``F(g(x))`` from the jet of F at ``g(x0)`` and the jet of g at ``x0``.

    ``outer`` must be expanded at ``inner.value``.  Uses Horner evaluation of
    the outer Taylor polynomial in the increment ``g - g(x0)``.
    """
    k = min(outer.order, inner.order)
    delta = Jet(inner.taylor[: k + 1].copy(), inner.base_point)
    delta.taylor[0] = 0.0
    to = outer.taylor[: k + 1]
    result = Jet.constant(to[k], k)
    for j in range(k - 1, -1, -1):
        result = result * delta + to[j]
    result.base_point = inner.base_point
    return result
