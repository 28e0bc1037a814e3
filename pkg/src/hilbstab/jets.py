"""Truncated Laurent series ("jets") in one regularization variable s.

A jet is s**val * (c[0] + c[1] s + ... + c[K-1] s**(K-1)) with c[0] != 0
unless the jet is the exact zero jet.  Valuations are structural: they are
set when a factor is known to vanish identically (exact exponent-vector
identity), never inferred from floating-point coefficients, so 0/0 limits
resolve without numeric thresholds.
"""

from __future__ import annotations

import cmath


class Jet:
    __slots__ = ("val", "c")

    def __init__(self, val: int, coeffs):
        self.val = val
        self.c = tuple(complex(x) for x in coeffs)
        if not self.c:
            raise ValueError("jet needs at least one coefficient")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def constant(x: complex, order: int) -> "Jet":
        if x == 0:
            return Jet.zero(order)
        return Jet(0, (complex(x),) + (0j,) * (order - 1))

    @staticmethod
    def zero(order: int) -> "Jet":
        return Jet(0, (0j,) * order)

    @staticmethod
    def var(order: int, coefficient: complex = 1.0) -> "Jet":
        """The jet of coefficient * s."""
        return Jet(1, (complex(coefficient),) + (0j,) * (order - 1))

    @staticmethod
    def exp_linear(w: complex, order: int) -> "Jet":
        """exp(w*s) truncated at the given order."""
        c = [0j] * order
        t = 1.0 + 0j
        for k in range(order):
            c[k] = t
            t = t * w / (k + 1)
        return Jet(0, c)

    # -- queries ---------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.c)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.c)

    def coefficient(self, power: int) -> complex:
        k = power - self.val
        return self.c[k] if 0 <= k < len(self.c) else 0j

    def __repr__(self):
        return f"Jet(val={self.val}, c={list(self.c)})"

    def _normalized(self) -> "Jet":
        # strip exact-zero leading coefficients (structural zeros only)
        c = list(self.c)
        v = self.val
        while len(c) > 1 and c[0] == 0:
            c.pop(0)
            c.append(0j)
            v += 1
        if all(x == 0 for x in c):
            return Jet.zero(len(self.c))
        return Jet(v, c)

    # -- ring operations ---------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, Jet):
            if other == 0:
                return Jet.zero(self.order)
            return Jet(self.val, tuple(x * other for x in self.c))
        if self.is_zero() or other.is_zero():
            return Jet.zero(min(self.order, other.order))
        n = min(len(self.c), len(other.c))
        out = [0j] * n
        for i in range(n):
            a = self.c[i]
            if a == 0:
                continue
            for j in range(n - i):
                out[i + j] += a * other.c[j]
        return Jet(self.val + other.val, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.val, tuple(x / other for x in self.c))
        if other.is_zero():
            raise ZeroDivisionError("division by zero jet")
        other = other._normalized()
        if other.c[0] == 0:
            raise ZeroDivisionError("division by jet with vanishing leading coefficient")
        if self.is_zero():
            return Jet.zero(min(self.order, other.order))
        n = min(len(self.c), len(other.c))
        out = [0j] * n
        inv0 = 1.0 / other.c[0]
        for i in range(n):
            acc = self.c[i] if i < len(self.c) else 0j
            for j in range(1, i + 1):
                if j < len(other.c):
                    acc -= other.c[j] * out[i - j]
            out[i] = acc * inv0
        return Jet(self.val - other.val, out)

    def __add__(self, other):
        if not isinstance(other, Jet):
            other = Jet.constant(other, self.order)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self.val, other.val)
        n = min(self.val + len(self.c), other.val + len(other.c)) - v
        out = [0j] * n
        for k in range(n):
            out[k] = self.coefficient(v + k) + other.coefficient(v + k)
        return Jet(v, out)._normalized()

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.val, tuple(-x for x in self.c))

    def __sub__(self, other):
        if not isinstance(other, Jet):
            other = Jet.constant(other, self.order)
        return self + (-other)

    # -- analytic operations -------------------------------------------------

    def exp(self) -> "Jet":
        """exp of a jet with val >= 0."""
        if self.is_zero():
            return Jet.constant(1.0, self.order)
        if self.val < 0:
            raise ValueError("exp requires valuation >= 0")
        n = self.order
        u = [self.coefficient(k) for k in range(n)]  # plain power-series view
        out = [0j] * n
        out[0] = cmath.exp(u[0])
        # f' = u' f  =>  (k+1) f_{k+1} = sum_{j} (j+1) u_{j+1} f_{k-j}
        for k in range(n - 1):
            acc = 0j
            for j in range(k + 1):
                if j + 1 < n:
                    acc += (j + 1) * u[j + 1] * out[k - j]
            out[k + 1] = acc / (k + 1)
        return Jet(0, out)

    def log(self) -> "Jet":
        """log of a unit jet (val == 0, nonzero constant term)."""
        if self.val != 0 or self.c[0] == 0:
            raise ValueError("log requires a unit jet")
        n = self.order
        f = self.c
        out = [0j] * n
        out[0] = cmath.log(f[0])
        # (log f)' = f'/f
        inv0 = 1.0 / f[0]
        for k in range(1, n):
            acc = k * f[k]
            for j in range(1, k):
                acc -= j * out[j] * f[k - j]
            out[k] = acc * inv0 / k
        return Jet(0, out)
