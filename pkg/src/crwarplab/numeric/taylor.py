"""Second-order truncated Taylor arithmetic (value, gradient, Hessian).

A :class:`Taylor2` carries a scalar together with its first and second
derivatives with respect to ``d`` seed directions.  Every operation applies the
second-order chain rule and truncates, so composing smooth primitives yields
derivatives that are exact up to rounding.

The value slot of every operation is computed with the same floating point
expression that the plain-real code path uses, so ``Taylor2`` evaluation and
``float`` evaluation agree bit-for-bit in the value.
"""
from __future__ import annotations

import math

import numpy as np

from crwarplab.errors import DomainError

DIV_EPS = 1e-300


class Taylor2:
    __slots__ = ("value", "grad", "hess")

    def __init__(self, value: float, grad, hess):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    @classmethod
    def constant(cls, value: float, d: int) -> "Taylor2":
        return cls(value, np.zeros(d), np.zeros((d, d)))

    @classmethod
    def variable(cls, value: float, index: int, d: int) -> "Taylor2":
        g = np.zeros(d)
        g[index] = 1.0
        return cls(value, g, np.zeros((d, d)))

    @classmethod
    def seed(cls, point) -> list["Taylor2"]:
        """Independent variables seeded at ``point``."""
        d = len(point)
        return [cls.variable(float(x), i, d) for i, x in enumerate(point)]

    @property
    def dim(self) -> int:
        return self.grad.shape[0]

    def __repr__(self) -> str:
        return f"Taylor2(value={self.value!r}, grad={self.grad.tolist()!r})"

    def _lift(self, other) -> "Taylor2":
        if isinstance(other, Taylor2):
            return other
        return Taylor2.constant(float(other), self.dim)

    def _chain(self, f0: float, f1: float, f2: float) -> "Taylor2":
        # second-order chain rule for a smooth scalar primitive
        g = self.grad
        return Taylor2(f0, f1 * g, f1 * self.hess + f2 * np.outer(g, g))

    # arithmetic -----------------------------------------------------------

    def __neg__(self) -> "Taylor2":
        return Taylor2(-self.value, -self.grad, -self.hess)

    def __pos__(self) -> "Taylor2":
        return self

    def __add__(self, other) -> "Taylor2":
        if not isinstance(other, Taylor2):
            return Taylor2(self.value + float(other), self.grad, self.hess)
        return Taylor2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)

    def __radd__(self, other) -> "Taylor2":
        return Taylor2(float(other) + self.value, self.grad, self.hess)

    def __sub__(self, other) -> "Taylor2":
        if not isinstance(other, Taylor2):
            return Taylor2(self.value - float(other), self.grad, self.hess)
        return Taylor2(self.value - other.value, self.grad - other.grad, self.hess - other.hess)

    def __rsub__(self, other) -> "Taylor2":
        return Taylor2(float(other) - self.value, -self.grad, -self.hess)

    def __mul__(self, other) -> "Taylor2":
        if not isinstance(other, Taylor2):
            c = float(other)
            return Taylor2(self.value * c, self.grad * c, self.hess * c)
        a, b = self, other
        cross = np.outer(a.grad, b.grad)
        return Taylor2(
            a.value * b.value,
            a.value * b.grad + b.value * a.grad,
            a.value * b.hess + b.value * a.hess + (cross + cross.T),
        )

    def __rmul__(self, other) -> "Taylor2":
        c = float(other)
        return Taylor2(c * self.value, c * self.grad, c * self.hess)

    def __truediv__(self, other) -> "Taylor2":
        return _divide(self, self._lift(other))

    def __rtruediv__(self, other) -> "Taylor2":
        return _divide(self._lift(other), self)

    def __pow__(self, n) -> "Taylor2":
        if isinstance(n, Taylor2) or int(n) != n:
            raise TypeError("Taylor2 supports integer exponents only")
        return ipow(self, int(n))


def _divide(a: Taylor2, b: Taylor2) -> Taylor2:
    if abs(b.value) < DIV_EPS:
        raise DomainError("division by zero")
    q = a.value / b.value
    gq = (a.grad - q * b.grad) / b.value
    cross = np.outer(gq, b.grad)
    hq = (a.hess - q * b.hess - (cross + cross.T)) / b.value
    return Taylor2(q, gq, hq)


def ipow(x, n: int):
    """``x**n`` for integer ``n`` on floats or jets."""
    if not isinstance(x, Taylor2):
        if n < 0 and x == 0.0:
            raise DomainError("zero raised to a negative power")
        return float(x) ** n
    v = x.value
    if n == 0:
        return Taylor2.constant(1.0, x.dim)
    if n < 0 and v == 0.0:
        raise DomainError("zero raised to a negative power")
    f0 = v ** n
    f1 = n * v ** (n - 1) if n != 1 else 1.0
    f2 = n * (n - 1) * v ** (n - 2) if n not in (1, 2) else (0.0 if n == 1 else 2.0)
    return x._chain(f0, f1, f2)


# elementary functions; each accepts a float or a Taylor2 ---------------------

def sin(x):
    if not isinstance(x, Taylor2):
        return math.sin(x)
    s, c = math.sin(x.value), math.cos(x.value)
    return x._chain(s, c, -s)


def cos(x):
    if not isinstance(x, Taylor2):
        return math.cos(x)
    s, c = math.sin(x.value), math.cos(x.value)
    return x._chain(c, -s, -c)


def exp(x):
    if not isinstance(x, Taylor2):
        return math.exp(x)
    e = math.exp(x.value)
    return x._chain(e, e, e)


def log(x):
    v = x.value if isinstance(x, Taylor2) else x
    if v <= 0.0:
        raise DomainError(f"log of non-positive value {v!r}")
    if not isinstance(x, Taylor2):
        return math.log(x)
    return x._chain(math.log(v), 1.0 / v, -1.0 / (v * v))


def sqrt(x):
    v = x.value if isinstance(x, Taylor2) else x
    if v < 0.0:
        raise DomainError(f"sqrt of negative value {v!r}")
    if not isinstance(x, Taylor2):
        return math.sqrt(x)
    if v == 0.0:
        raise DomainError("sqrt is not differentiable at 0")
    r = math.sqrt(v)
    return x._chain(r, 0.5 / r, -0.25 / (r * v))


def sinh(x):
    if not isinstance(x, Taylor2):
        return math.sinh(x)
    s, c = math.sinh(x.value), math.cosh(x.value)
    return x._chain(s, c, s)


def cosh(x):
    if not isinstance(x, Taylor2):
        return math.cosh(x)
    s, c = math.sinh(x.value), math.cosh(x.value)
    return x._chain(c, s, c)


UNARY = {
    "sin": sin,
    "cos": cos,
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "sinh": sinh,
    "cosh": cosh,
}


def divide(a, b):
    """Division shared by the float and jet code paths."""
    if isinstance(a, Taylor2) or isinstance(b, Taylor2):
        return a / b
    if abs(b) < DIV_EPS:
        raise DomainError("division by zero")
    return a / b


def jet(fn, point) -> Taylor2:
    """Evaluate ``fn`` on seeded jets at ``point`` and return the result."""
    out = fn(*Taylor2.seed(point))
    if not isinstance(out, Taylor2):
        return Taylor2.constant(out, len(point))
    return out
