"""Numerical theta functions on exact monomial arguments, and the generic
parameter point they are evaluated at.

theta(x) = prod_{i>=1}(1 - x q^i) * (x^{1/2} - x^{-1/2}) * prod_{i>=1}(1 - x^{-1} q^i)

Every generator gets one fixed principal logarithm at context creation;
monomials evaluate through exp(sum exponent * log), which makes half-integer
powers single-valued and lets ratios of half-powers cancel exactly.
Singularity detection (argument identically 1) is done on exact exponent
vectors, never by comparing floats.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .jets import Jet
from .monomial import Monomial


class GenericityError(RuntimeError):
    """A drawn or overridden parameter point fails a genericity guard."""


class SingularArgumentError(ValueError):
    """A theta/phi argument is identically 1 as an exponent vector."""


_MODULUS_RANGE = (0.5, 2.0)
_Q_RANGE = (0.05, 0.3)
_GUARD_TOL = 1e-6


@dataclass
class GeneratorContext:
    """A generic parameter point with fixed logarithms and caches.

    Values are immutable after construction; the caches only memoize pure
    evaluations, so sharing between threads is safe for reading.
    """

    n: int
    seed: int
    values: dict
    logs: dict
    theta_tol: float = 1e-14
    jet_order: int = 0
    t1_additive: complex = 0j
    t2_additive: complex = 0j
    _scalar_cache: dict = field(default_factory=dict, repr=False)
    _jet_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.jet_order <= 0:
            self.jet_order = self.n * self.n + 4
        q = self.values["q"]
        self.logq = cmath.log(q)
        self.absq = abs(q)
        # prod_{i>=1} (1 - q^i), truncated like the theta product
        p = 1.0 + 0j
        i = 1
        while self.absq ** i >= self.theta_tol and i < 10000:
            p *= 1 - q ** i
            i += 1
        self.q_euler = p

    # -- logarithm bookkeeping ---------------------------------------------

    def log_sum(self, doubled: dict) -> complex:
        """sum (e/2) * log(gen) over a doubled-exponent map."""
        acc = 0j
        for g, e2 in doubled.items():
            acc += 0.5 * e2 * self.logs[g]
        return acc

    def monomial_value(self, m: Monomial) -> complex:
        return cmath.exp(self.log_sum(m.doubled()))

    def shifted_z(self) -> "GeneratorContext":
        """The context with z replaced by z*q, log-consistently."""
        values = dict(self.values)
        logs = dict(self.logs)
        values["z"] = values["z"] * values["q"]
        logs["z"] = logs["z"] + logs["q"]
        return GeneratorContext(self.n, self.seed, values, logs,
                                self.theta_tol, self.jet_order,
                                self.t1_additive, self.t2_additive)

    def to_json(self) -> dict:
        vals = {}
        for g in sorted(self.values):
            v = self.values[g]
            vals[g] = [v.real, v.imag]
        return {"n": self.n, "seed": self.seed, "theta_tol": self.theta_tol,
                "jet_order": self.jet_order, "values": vals}

    # -- theta evaluation ----------------------------------------------------

    def _trunc_count(self, absx: float, slope: float = 0.0) -> int:
        bound = max(absx, 1.0 / absx) * math.exp(abs(slope))
        i = 1
        while self.absq ** i * bound >= self.theta_tol and i < 10000:
            i += 1
        return i

    def theta_from_log(self, logx: complex) -> complex:
        x = cmath.exp(logx)
        val = cmath.exp(0.5 * logx) - cmath.exp(-0.5 * logx)
        q = self.values["q"]
        for i in range(1, self._trunc_count(abs(x))):
            val *= (1 - x * q ** i) * (1 - q ** i / x)
        return val

    def theta_key(self, key: tuple) -> complex:
        """Cached theta of an exact exponent vector (doubled, sorted items)."""
        hit = self._scalar_cache.get(key)
        if hit is None:
            hit = self.theta_from_log(self.log_sum(dict(key)))
            self._scalar_cache[key] = hit
        return hit

    def ahat_from_log(self, logx: complex) -> complex:
        return cmath.exp(0.5 * logx) - cmath.exp(-0.5 * logx)

    # -- jet evaluation -----------------------------------------------------

    def _sinh_series(self, slope: float, order: int) -> Jet:
        """2*sinh(slope*s/2) as a valuation-1 jet."""
        c = [0j] * order
        u = slope / 2.0
        pw = [0j] * (order + 1)
        t = 1.0
        for k in range(order + 1):
            pw[k] = t
            t = t * u / (k + 1)
        for k in range(1, order + 1, 2):
            c[k - 1] = 2 * pw[k]
        return Jet(1, c)

    def theta_jet(self, key: tuple, slope: float, order: int) -> Jet:
        """theta(C * e^{slope*s}) as a jet; C given by the exponent key.

        The key () (identity monomial) yields the structural valuation-1 jet
        with leading coefficient slope * prod(1-q^i)^2.
        """
        ck = (key, slope, order)
        hit = self._jet_cache.get(ck)
        if hit is not None:
            return hit
        singular = not key
        if singular:
            res = self._sinh_series(slope, order)
            x0 = 1.0 + 0j
        else:
            logc = self.log_sum(dict(key))
            cs = cmath.exp(0.5 * logc)
            e1 = Jet.exp_linear(slope / 2.0, order)
            e2 = Jet.exp_linear(-slope / 2.0, order)
            res = Jet(0, [cs * e1.c[k] - e2.c[k] / cs for k in range(order)])
            x0 = cmath.exp(logc)
        q = self.values["q"]
        ex = Jet.exp_linear(slope, order)
        exm = Jet.exp_linear(-slope, order)
        for i in range(1, self._trunc_count(abs(x0), slope)):
            w1 = Jet(0, [(1.0 if k == 0 else 0.0) - x0 * q ** i * ex.c[k]
                         for k in range(order)])
            w2 = Jet(0, [(1.0 if k == 0 else 0.0) - (q ** i / x0) * exm.c[k]
                         for k in range(order)])
            res = res * w1 * w2
        self._jet_cache[ck] = res
        return res

    def ahat_jet(self, key: tuple, slope: float, order: int) -> Jet:
        ck = ("ah", key, slope, order)
        hit = self._jet_cache.get(ck)
        if hit is not None:
            return hit
        if not key:
            res = self._sinh_series(slope, order)
        else:
            logc = self.log_sum(dict(key))
            cs = cmath.exp(0.5 * logc)
            e1 = Jet.exp_linear(slope / 2.0, order)
            e2 = Jet.exp_linear(-slope / 2.0, order)
            res = Jet(0, [cs * e1.c[k] - e2.c[k] / cs for k in range(order)])
        self._jet_cache[ck] = res
        return res

    def power_jet(self, key: tuple, kappa2: int, slope: float, order: int) -> Jet:
        """(C e^{slope*s})^{kappa2/2} as a unit jet."""
        ck = ("pw", key, kappa2, slope, order)
        hit = self._jet_cache.get(ck)
        if hit is not None:
            return hit
        logc = self.log_sum(dict(key)) if key else 0j
        c = cmath.exp(0.5 * kappa2 * logc)
        res = Jet.exp_linear(0.5 * kappa2 * slope, order) * c
        self._jet_cache[ck] = res
        return res


# -- public operations --------------------------------------------------------


def theta(ctx: GeneratorContext, m: Monomial) -> complex:
    """theta of an exact monomial; exactly 0 for the identity monomial."""
    if m.is_one():
        return 0j
    return ctx.theta_from_log(ctx.log_sum(m.doubled()))


def phi(ctx: GeneratorContext, x: Monomial, z: Monomial) -> complex:
    """phi(x, z) = theta(x z) / (theta(x) theta(z))."""
    if x.is_one() or z.is_one():
        raise SingularArgumentError("phi argument is identically 1; use jets")
    return theta(ctx, x * z) / (theta(ctx, x) * theta(ctx, z))


class IdenticallyZeroJet(Exception):
    """eval_factor_jet was asked for theta(1 * e^{0*s}), which is 0."""


def eval_factor_jet(ctx: GeneratorContext, m: Monomial, c, order: int | None = None) -> Jet:
    """theta(m * e^{c s}) as a jet in s.

    For m != 1 this is a unit jet whose constant term is theta(ctx, m); for
    m == 1 it has valuation 1 with leading coefficient c * prod(1-q^i)^2.
    """
    order = order or ctx.jet_order
    if order < 1:
        raise ValueError("order must be >= 1")
    slope = float(Fraction(c)) if not isinstance(c, float) else c
    key = m.key()
    if not key and slope == 0.0:
        raise IdenticallyZeroJet("theta(e^{0*s}) is identically zero")
    return ctx.theta_jet(key, slope, order)


# -- context construction ------------------------------------------------------


def _near_lattice(y_log_abs: float, y: complex, logq_abs: float, q: complex) -> bool:
    t = y_log_abs / logq_abs
    for k in (math.floor(t), math.ceil(t)):
        if abs(y * q ** (-k) - 1) < _GUARD_TOL:
            return True
    return False


def _guards_ok(n: int, values: dict) -> bool:
    q = values["q"]
    logq_abs = math.log(abs(q))
    drawn = [values[g] for g in ("q", "a", "hbar_half", "z")]
    drawn += [values[f"z{i}"] for i in range(1, n + 1)]
    for i in range(len(drawn)):
        for j in range(i + 1, len(drawn)):
            if abs(drawn[i] / drawn[j] - 1) < _GUARD_TOL:
                return False
    a, h, z = values["a"], values["hbar_half"], values["z"]
    # equivariant monomials a^alpha hbar^{beta/2} off the q-lattice
    for alpha in range(-(2 * n + 2), 2 * n + 3):
        for beta in range(-(4 * n + 4), 4 * n + 5):
            if alpha == 0 and beta == 0:
                continue
            y = a ** alpha * h ** beta
            if _near_lattice(math.log(abs(y)), y, logq_abs, q):
                return False
    # Kaehler monomials z^w hbar^v off the q-lattice
    for w in range(1, n + 1):
        for v in range(0, n + 1):
            y = z ** w * h ** (2 * v)
            if _near_lattice(math.log(abs(y)), y, logq_abs, q):
                return False
    # subset products of z_i (multi-z tree weights)
    zi = [values[f"z{i}"] for i in range(1, n + 1)]
    for mask in range(1, 1 << n):
        y = 1.0 + 0j
        for i in range(n):
            if (mask >> i) & 1:
                y *= zi[i]
        if _near_lattice(math.log(abs(y)), y, logq_abs, q):
            return False
    return True


def _additive_ok(n: int, t1: complex, t2: complex) -> bool:
    # small integer combinations of the additive weights stay away from 0
    scale = max(abs(t1), abs(t2))
    for alpha in range(-(2 * n + 2), 2 * n + 3):
        for beta in range(-(2 * n + 2), 2 * n + 3):
            if alpha == 0 and beta == 0:
                continue
            if abs(alpha * t1 + beta * t2) < _GUARD_TOL * scale:
                return False
    return True


def make_context(n: int, seed: int, overrides: dict | None = None,
                 theta_tol: float = 1e-14, jet_order: int | None = None) -> GeneratorContext:
    """Draw a generic parameter point; deterministic for a given seed.

    overrides maps generator names to explicit complex values; overridden
    generators are not redrawn when a genericity guard fails.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    overrides = dict(overrides or {})
    if "q" in overrides and abs(overrides["q"]) >= 1:
        raise ValueError(f"|q| must be < 1, got {abs(overrides['q'])}")
    for g, v in overrides.items():
        if v == 0:
            raise ValueError(f"generator {g} must be nonzero")
    rng = random.Random(seed)

    def draw(lo, hi):
        mod = rng.uniform(lo, hi)
        ph = rng.uniform(0.0, 2.0 * math.pi)
        return mod * cmath.exp(1j * ph)

    names = ["q", "a", "hbar_half", "z"] + [f"z{i}" for i in range(1, n + 1)]
    for _ in range(200):
        values = {}
        for g in names:
            lo, hi = _Q_RANGE if g == "q" else _MODULUS_RANGE
            v = draw(lo, hi)  # always consume the stream, for determinism
            values[g] = overrides.get(g, v)
        t1a, t2a = draw(*_MODULUS_RANGE), draw(*_MODULUS_RANGE)
        if not _additive_ok(n, t1a, t2a):
            continue
        if not _guards_ok(n, values):
            if all(g in overrides for g in names):
                break
            continue
        logs = {g: cmath.log(v) for g, v in values.items()}
        return GeneratorContext(n, seed, values, logs, theta_tol,
                                jet_order or 0, t1a, t2a)
    raise GenericityError("could not draw a generic parameter point "
                          f"(seed={seed}, overrides={sorted(overrides)})")
