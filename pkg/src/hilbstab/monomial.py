"""Exact exponent vectors over the fixed generator set.

Generators: ``a``, ``hbar_half`` (a square root of hbar, so ``hbar`` is
``hbar_half**2``), the Kaehler variable ``z``, the elliptic modulus ``q``,
Chern roots ``x1 .. xn`` and per-root Kaehler variables ``z1 .. zn``.

All exponents are integers or half-integers.  They are stored exactly as
integer doubles (twice the exponent), so equality tests -- in particular the
"is this argument identically 1" test that drives singularity detection --
never touch floating point.
"""

from __future__ import annotations

from fractions import Fraction


_FIXED = ("a", "hbar_half", "z", "q")


def _as_double(e) -> int:
    f = Fraction(e)
    if f.denominator not in (1, 2):
        raise ValueError(f"exponent {e} is not an integer or half-integer")
    return f.numerator * (2 // f.denominator)


class Monomial:
    """A Laurent monomial with exact integer/half-integer exponents."""

    __slots__ = ("_e",)

    def __init__(self, exponents=None, _doubled=None):
        if _doubled is not None:
            self._e = {g: d for g, d in _doubled.items() if d}
        else:
            self._e = {}
            for g, e in (exponents or {}).items():
                d = _as_double(e)
                if d:
                    self._e[g] = d

    # -- constructors -------------------------------------------------

    @staticmethod
    def one() -> "Monomial":
        return Monomial()

    @staticmethod
    def gen(name: str, exponent=1) -> "Monomial":
        return Monomial({name: exponent})

    @staticmethod
    def x(i: int, exponent=1) -> "Monomial":
        """Chern root x_i, 1-based."""
        return Monomial({f"x{i}": exponent})

    @staticmethod
    def zi(i: int, exponent=1) -> "Monomial":
        return Monomial({f"z{i}": exponent})

    @staticmethod
    def t1() -> "Monomial":
        return Monomial({"a": 1, "hbar_half": 1})

    @staticmethod
    def t2() -> "Monomial":
        return Monomial({"a": -1, "hbar_half": 1})

    @staticmethod
    def hbar(exponent=1) -> "Monomial":
        return Monomial({"hbar_half": 2 * Fraction(exponent)})

    # -- algebra ------------------------------------------------------

    def __mul__(self, other: "Monomial") -> "Monomial":
        d = dict(self._e)
        for g, e in other._e.items():
            d[g] = d.get(g, 0) + e
        return Monomial(_doubled=d)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        d = dict(self._e)
        for g, e in other._e.items():
            d[g] = d.get(g, 0) - e
        return Monomial(_doubled=d)

    def __pow__(self, k) -> "Monomial":
        f = Fraction(k)
        d = {}
        for g, e in self._e.items():
            de = e * f
            if de.denominator != 1:
                raise ValueError(f"power {k} takes exponent of {g} out of (1/2)Z")
            d[g] = int(de)
        return Monomial(_doubled=d)

    def inverse(self) -> "Monomial":
        return Monomial(_doubled={g: -e for g, e in self._e.items()})

    # -- queries --------------------------------------------------------

    def is_one(self) -> bool:
        return not self._e

    def exponent(self, name: str) -> Fraction:
        return Fraction(self._e.get(name, 0), 2)

    def exponents(self) -> dict:
        return {g: Fraction(e, 2) for g, e in self._e.items()}

    def doubled(self) -> dict:
        """Raw storage: generator -> 2*exponent (ints)."""
        return dict(self._e)

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self._e == other._e

    def __hash__(self) -> int:
        return hash(frozenset(self._e.items()))

    def key(self) -> tuple:
        return tuple(sorted(self._e.items()))

    def __repr__(self) -> str:
        if not self._e:
            return "1"
        parts = []
        for g in sorted(self._e):
            e = Fraction(self._e[g], 2)
            parts.append(g if e == 1 else f"{g}^{e}")
        return "*".join(parts)

    def to_json(self) -> dict:
        return {g: str(Fraction(e, 2)) for g, e in sorted(self._e.items())}
