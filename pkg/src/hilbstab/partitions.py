"""Young-diagram combinatorics: boxes, contents, heights, canonical order,
the diagonal profile and the beta function, box characters, dominance.

Boxes of a partition are pairs (i, j) with 1 <= j <= parts[i-1]; the content
is c = i - j and the height is h = i + j - 2.  The canonical order sorts
boxes by ascending content with ties broken by descending height (the order
induced by c - eps*h for infinitesimal eps; no numeric eps is ever used).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum

from .monomial import Monomial


DEFAULT_MAX_N = 8


class ParseError(ValueError):
    pass


def max_n() -> int:
    env = os.environ.get("HILBSTAB_MAX_N")
    return int(env) if env else DEFAULT_MAX_N


def matrix_max_n(default: int = 5) -> int:
    """Cap for full restriction matrices; HILBSTAB_MAX_N overrides it."""
    env = os.environ.get("HILBSTAB_MAX_N")
    return int(env) if env else default


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("empty partition")
        for k in range(len(self.parts) - 1):
            if self.parts[k] < self.parts[k + 1]:
                raise ValueError(f"parts must be non-increasing: {self.parts}")
        if self.parts[-1] < 1:
            raise ValueError("parts must be positive")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return ",".join(str(p) for p in self.parts)

    def conjugate(self) -> "Partition":
        return Partition(tuple(sum(1 for p in self.parts if p >= j)
                               for j in range(1, self.parts[0] + 1)))

    def boxes(self) -> list[tuple[int, int]]:
        """All boxes (i, j), row-major, 1-based."""
        return [(i + 1, j + 1) for i, p in enumerate(self.parts) for j in range(p)]

    def is_hook(self) -> bool:
        return all(p == 1 for p in self.parts[1:])


def parse_partition(text: str) -> Partition:
    if not text.strip():
        raise ParseError("empty partition string")
    parts = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(f"non-numeric part {tok!r}") from None
        if v < 1:
            raise ParseError(f"part {tok!r} is not a positive integer")
        parts.append(v)
    for k in range(len(parts) - 1):
        if parts[k] < parts[k + 1]:
            raise ParseError(f"parts must be non-increasing at {parts[k + 1]!r}")
    return Partition(tuple(parts))


def enumerate_partitions(n: int, limit: int | None = None) -> list[Partition]:
    """All partitions of n in reverse lexicographic order, (n) first."""
    cap = limit if limit is not None else max_n()
    if not 1 <= n <= cap:
        raise ValueError(f"n={n} out of range [1, {cap}]")
    out = []

    def rec(remaining, maxpart, prefix):
        if remaining == 0:
            out.append(Partition(tuple(prefix)))
            return
        for p in range(min(maxpart, remaining), 0, -1):
            rec(remaining - p, p, prefix + [p])

    rec(n, n, [])
    return out


class Dominance(Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def dominance_compare(lam: Partition, mu: Partition) -> Dominance:
    """Compare by dominance: GREATER iff every prefix sum of lam >= mu's."""
    if lam.n != mu.n:
        raise ValueError(f"|lam|={lam.n} != |mu|={mu.n}")
    if lam.parts == mu.parts:
        return Dominance.EQUAL
    k = max(len(lam.parts), len(mu.parts))
    ge = le = True
    sl = sm = 0
    for idx in range(k):
        sl += lam.parts[idx] if idx < len(lam.parts) else 0
        sm += mu.parts[idx] if idx < len(mu.parts) else 0
        if sl < sm:
            ge = False
        if sl > sm:
            le = False
    if ge:
        return Dominance.GREATER
    if le:
        return Dominance.LESS
    return Dominance.INCOMPARABLE


@dataclass(frozen=True)
class BoxTable:
    """Per-box data of a partition in canonical order.

    root_index is the 1-based canonical position of the box (1,1).
    """

    partition: Partition
    boxes: tuple[tuple[int, int], ...]
    content: tuple[int, ...]
    height: tuple[int, ...]
    beta: tuple[int, ...]
    arm: tuple[int, ...]
    leg: tuple[int, ...]
    diag_counts: dict
    root_index: int

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def root(self) -> int:
        """0-based canonical index of the root box (1,1)."""
        return self.root_index - 1

    def index_of(self, box: tuple[int, int]) -> int:
        """0-based canonical index of a box."""
        return self.boxes.index(box)

    def to_json(self) -> dict:
        return {
            "boxes": [list(b) for b in self.boxes],
            "content": list(self.content),
            "height": list(self.height),
            "beta": list(self.beta),
            "arm": list(self.arm),
            "leg": list(self.leg),
            "diag_counts": {str(k): v for k, v in sorted(self.diag_counts.items())},
            "root_index": self.root_index,
        }


def _canonical_sort(boxes):
    # ascending content, ties broken by descending height
    return sorted(boxes, key=lambda b: (b[0] - b[1], -(b[0] + b[1] - 2)))


def apex_profile(diag_counts: dict) -> dict:
    """Apex height A_k = |k| + 2*d_k of the diagram boundary over content k
    (A_k = |k| where d_k = 0)."""
    ks = sorted(diag_counts)
    prof = {}
    for k in range(ks[0] - 1, ks[-1] + 2):
        prof[k] = abs(k) + 2 * diag_counts.get(k, 0)
    return prof


def beta_of_content(diag_counts: dict) -> dict:
    """beta value per content: 1 iff the boundary above that diagonal has a
    minimum or increases, equivalently A_{k+1} = A_k + 1."""
    prof = apex_profile(diag_counts)
    return {k: int(prof[k + 1] == prof[k] + 1) for k in sorted(diag_counts)}


def box_table(lam: Partition) -> BoxTable:
    boxes = _canonical_sort(lam.boxes())
    content = tuple(i - j for i, j in boxes)
    height = tuple(i + j - 2 for i, j in boxes)
    diag = {}
    for c in content:
        diag[c] = diag.get(c, 0) + 1
    beta_c = beta_of_content(diag)
    beta = tuple(beta_c[c] for c in content)
    conj = lam.conjugate().parts
    arm = tuple(conj[j - 1] - i for i, j in boxes)
    leg = tuple(lam.parts[i - 1] - j for i, j in boxes)
    root_index = boxes.index((1, 1)) + 1
    bt = BoxTable(lam, tuple(boxes), content, height, beta, arm, leg, diag, root_index)
    _check_table(bt)
    return bt


def _check_table(bt: BoxTable):
    for c, h in zip(bt.content, bt.height):
        assert (c + h) % 2 == 0
    for k in range(len(bt.boxes) - 1):
        cp, hp = bt.content[k], bt.height[k]
        cq, hq = bt.content[k + 1], bt.height[k + 1]
        assert (cp, -hp) < (cq, -hq)
    assert sum(bt.diag_counts.values()) == bt.n


def rho_gt(bt: BoxTable, j: int, i: int) -> bool:
    """rho_j > rho_i + 1, exactly (0-based canonical indices)."""
    dc = bt.content[j] - bt.content[i]
    return dc > 1 or (dc == 1 and bt.height[j] < bt.height[i])


def rho_lt(bt: BoxTable, j: int, i: int) -> bool:
    """rho_j < rho_i + 1, exactly."""
    dc = bt.content[j] - bt.content[i]
    return dc < 1 or (dc == 1 and bt.height[j] > bt.height[i])


@dataclass(frozen=True)
class AdditiveWeight:
    """Linear form alpha*t1 + beta*t2 (the additive box character lives here)."""

    t1: int
    t2: int

    def __add__(self, other):
        return AdditiveWeight(self.t1 + other.t1, self.t2 + other.t2)

    def __sub__(self, other):
        return AdditiveWeight(self.t1 - other.t1, self.t2 - other.t2)

    def value(self, t1: complex, t2: complex) -> complex:
        return self.t1 * t1 + self.t2 * t2


def box_character(lam: Partition, box: tuple[int, int], mode: str = "multiplicative"):
    """Torus character of the monomial sitting in a box.

    multiplicative: t1^{-(j-1)} t2^{-(i-1)} as a Monomial (= a^c hbar^{-h/2});
    additive: (1-j) t1 + (1-i) t2.
    """
    i, j = box
    if not (1 <= i <= len(lam.parts) and 1 <= j <= lam.parts[i - 1]):
        raise ValueError(f"box {box} not in partition {lam}")
    if mode == "multiplicative":
        c, h = i - j, i + j - 2
        return Monomial({"a": c, "hbar_half": -h})
    if mode == "additive":
        return AdditiveWeight(1 - j, 1 - i)
    raise ValueError(f"unknown mode {mode!r}")


def box_characters(bt: BoxTable) -> list[Monomial]:
    """Multiplicative characters in canonical order."""
    return [Monomial({"a": c, "hbar_half": -h}) for c, h in zip(bt.content, bt.height)]


def additive_characters(bt: BoxTable) -> list[AdditiveWeight]:
    return [AdditiveWeight(1 - j, 1 - i) for i, j in bt.boxes]
