"""K-theoretic stable envelopes with slope, the wall arrangement and wall
R-matrices; cohomological stable envelopes, tree-sum factorization and the
symmetrized closed form; and the q->0 bridge from the elliptic module.

The K-theoretic weight replaces every theta by ahat(x) = x^{1/2} - x^{-1/2}
and the Kaehler pairs by monomial powers U^{floor(w s) + 1/2}; the
cohomological weight replaces multiplicative factors by their additive
versions.  Both reuse the elliptic cancellation combinatorics.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd

from .envelope import (CancellationMissError, CompiledTerm, RestrictionMatrix,
                       WindowAccumulator, _compile_mono, _edge_match,
                       _edge_monomial, _s_den, _s_num_keyed, restricted_sum)
from .jets import Jet
from .monomial import Monomial
from .partitions import (BoxTable, Partition, box_table, enumerate_partitions)
from .thetafun import GenericityError, GeneratorContext, make_context
from .trees import LambdaTree, skeleton, tree_weights, upsilon_trees


KTH_MATRIX_MAX_N = 5
COH_MATRIX_MAX_N = 5
WALL_GUARD = 1e-9


class WallSlopeError(ValueError):
    """The slope sits on a wall (or integer), where the envelope is undefined."""


# -- slopes and walls -------------------------------------------------------------


@dataclass(frozen=True)
class Slope:
    value: float
    n: int

    def is_admissible(self) -> bool:
        for b in range(1, self.n + 1):
            if abs(self.value * b - round(self.value * b)) <= WALL_GUARD * b:
                return False
        return True


@dataclass(frozen=True)
class WallSet:
    n: int
    window: tuple[float, float]
    walls: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {"n": self.n, "window": [self.window[0], self.window[1]],
                "walls": [str(w) for w in self.walls]}


def walls(n: int, lo: float, hi: float) -> WallSet:
    """All rationals a/b with 1 <= b <= n in [lo, hi), exact and sorted."""
    if not lo < hi:
        raise ValueError("need lo < hi")
    found = set()
    for b in range(1, n + 1):
        a_min = math.ceil(lo * b - 1e-12)
        a_max = math.ceil(hi * b - 1e-12) - 1
        for a in range(a_min, a_max + 1):
            if gcd(abs(a), b) <= 1:
                found.add(Fraction(a, b))
    return WallSet(n, (lo, hi), tuple(sorted(found)))


def _require_admissible(s: Slope):
    if not s.is_admissible():
        raise WallSlopeError(
            f"slope {s.value} is within {WALL_GUARD} of a wall a/b, b <= {s.n}")


# -- K-theory term specs -----------------------------------------------------------


def kth_terms(lam: Partition, slope: Slope, bt: BoxTable | None = None) -> list[CompiledTerm]:
    """Cancelled K-theoretic tree terms, with slope powers and the global
    1/(t1^{n^2/2} prod x_i^{1/2}) prefactor."""
    bt = bt or box_table(lam)
    n = bt.n
    s = slope.value
    pref = Monomial.t1() ** Fraction(-n * n, 2)
    for i in range(1, n + 1):
        pref = pref * Monomial.x(i, Fraction(-1, 2))
    out = []
    for tree in upsilon_trees(lam, bt):
        wts = tree_weights(lam, tree, bt)
        keyed = _s_num_keyed(bt)
        sign = 1
        powers = [(_compile_mono(Monomial.x(bt.root + 1)), 2 * math.floor(n * s) + 1),
                  (_compile_mono(pref), 2)]
        for k, (p, c) in enumerate(tree.edges):
            key, sgn = _edge_match(bt, p, c)
            if key not in keyed:
                raise CancellationMissError(f"no S factor for edge {p}-{c}")
            del keyed[key]
            sign *= sgn
            powers.append((_compile_mono(_edge_monomial(bt, p, c)),
                           2 * math.floor(wts.w[k] * s) + 1))
        del keyed[("x", bt.root)]
        if sign != (-1) ** wts.kappa:
            raise CancellationMissError("signs do not absorb (-1)^kappa")
        num = tuple(_compile_mono(m) for m in keyed.values())
        den = tuple(_compile_mono(m) for m in _s_den(bt))
        out.append(CompiledTerm("ahat", num, den, tuple(powers), 1.0))
    return out


def stab_kth_restriction(ctx: GeneratorContext, lam: Partition, mu: Partition,
                         slope: Slope, directions=None,
                         with_diagnostics: bool = False):
    """T^{(s)}_{lam,mu}, jet-regularized at x = phi^mu."""
    _require_admissible(slope)
    if lam.n != mu.n:
        raise ValueError("partitions must have equal size")
    value, diag = restricted_sum(ctx, kth_terms(lam, slope), box_table(mu),
                                 directions, lam=lam)
    return (value, diag) if with_diagnostics else value


def kth_matrix(ctx: GeneratorContext, n: int, slope: Slope,
               limit: int | None = None) -> RestrictionMatrix:
    from .partitions import matrix_max_n

    limit = matrix_max_n(KTH_MATRIX_MAX_N) if limit is None else limit
    _require_admissible(slope)
    if not 1 <= n <= limit:
        raise ValueError(f"n={n} out of range [1, {limit}] for K-theory matrices")
    parts = enumerate_partitions(n, limit=max(n, 8))
    tables = {p: box_table(p) for p in parts}
    terms = {p: kth_terms(p, slope, tables[p]) for p in parts}
    entries = []
    max_pole, max_resid = 0, 0.0
    for lam in parts:
        row = []
        for mu in parts:
            v, diag = restricted_sum(ctx, terms[lam], tables[mu], lam=lam)
            max_pole = max(max_pole, diag["max_pole_order"])
            max_resid = max(max_resid, diag["max_cancel_residual"])
            row.append(v)
        entries.append(row)
    return RestrictionMatrix(n, "ktheory", ctx.seed, parts, entries,
                             {"max_pole_order": max_pole,
                              "max_cancel_residual": max_resid},
                             meta={"slope": slope.value})


def kth_diagonal_oracle(ctx: GeneratorContext, lam: Partition) -> complex:
    """(det N^- / det T^{1/2})^{1/2} * prod_boxes (1 - t1^leg t2^{-arm-1})."""
    bt = box_table(lam)
    det_ratio = Monomial.t1() ** (-bt.n * bt.n)
    for k in range(bt.n):
        det_ratio = det_ratio * (Monomial.t1() ** (-bt.leg[k]) *
                                 Monomial.t2() ** (bt.arm[k] + 1))
        det_ratio = det_ratio / Monomial({"a": bt.content[k],
                                          "hbar_half": -bt.height[k]})
    val = cmath.exp(0.5 * ctx.log_sum(det_ratio.doubled()))
    for k in range(bt.n):
        w = Monomial.t1() ** bt.leg[k] * Monomial.t2() ** (-bt.arm[k] - 1)
        val *= 1 - ctx.monomial_value(w)
    return val


# -- small dense linear algebra (matrices are at most p(5) x p(5)) ------------------


def mat_inverse(m: list[list[complex]]) -> list[list[complex]]:
    n = len(m)
    a = [list(row) + [1.0 + 0j if i == j else 0j for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[piv][col]) < 1e-300:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1.0 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_mul(x, y):
    n, k, m = len(x), len(y), len(y[0])
    return [[sum(x[i][t] * y[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def wall_r_matrix(ctx: GeneratorContext, n: int, s1: Slope, s2: Slope):
    """R_w = T^{(s1)}^{-1} T^{(s2)}, with the walls separating the slopes."""
    if not s1.value < s2.value:
        raise ValueError("need s1 < s2")
    _require_admissible(s1)
    _require_admissible(s2)
    t1m = kth_matrix(ctx, n, s1)
    t2m = kth_matrix(ctx, n, s2)
    eps = 1e-12
    crossed = walls(n, s1.value + eps, s2.value - eps).walls
    r = mat_mul(mat_inverse(t1m.entries), t2m.entries)
    out = RestrictionMatrix(n, "wall_r", ctx.seed, t1m.order, r,
                            meta={"s1": s1.value, "s2": s2.value,
                                  "walls": [str(w) for w in crossed]})
    return out


def is_identity(entries, tol: float) -> bool:
    n = len(entries)
    return all(abs(entries[i][j] - (1.0 if i == j else 0.0)) <= tol
               for i in range(n) for j in range(n))


# -- cohomology ---------------------------------------------------------------------


def _additive_pairs(bt: BoxTable):
    """(t1 coeff, t2 coeff) of the additive box character per canonical index."""
    return [(1 - j, 1 - i) for i, j in bt.boxes]


@dataclass(frozen=True)
class LinAtom:
    """sum coeff_k x_k + t1c*t1 + t2c*t2 (all integer coefficients)."""

    xsup: tuple[tuple[int, int], ...]
    t1c: int
    t2c: int

    def value(self, xs, t1, t2) -> complex:
        acc = self.t1c * t1 + self.t2c * t2
        for sl, cf in self.xsup:
            acc += cf * xs[sl]
        return acc


def _lin_x(i, sign=1):
    return ((i, sign),)


def _coh_num_keyed(bt: BoxTable) -> dict:
    from .partitions import rho_gt, rho_lt

    n = bt.n
    keyed = {}
    for i in range(n):
        for j in range(n):
            if rho_gt(bt, j, i):
                keyed[("t1", i, j)] = LinAtom(((i, 1), (j, -1)), 1, 0)
            if rho_lt(bt, j, i):
                if i == j:
                    keyed[("t2", i, j)] = LinAtom((), 0, 1)
                else:
                    keyed[("t2", i, j)] = LinAtom(((j, 1), (i, -1)), 0, 1)
    for i in range(n):
        if bt.content[i] <= 0:
            keyed[("x", i)] = LinAtom(((i, 1),), 0, 0)
        else:
            keyed[("hx", i)] = LinAtom(((i, -1),), 1, 1)
    return keyed


def _coh_den(bt: BoxTable) -> list[LinAtom]:
    out = []
    for i in range(bt.n):
        for j in range(i + 1, bt.n):
            out.append(LinAtom(((i, 1), (j, -1)), 0, 0))
            out.append(LinAtom(((i, 1), (j, -1)), 1, 1))
    return out


@dataclass(frozen=True)
class CohTerm:
    num: tuple[LinAtom, ...]
    den: tuple[LinAtom, ...]
    prefactor: float = 1.0


def coh_terms(lam: Partition, bt: BoxTable | None = None) -> list[CohTerm]:
    """Cancelled additive tree terms: S^Coh with the tree factors struck out."""
    bt = bt or box_table(lam)
    out = []
    for tree in upsilon_trees(lam, bt):
        wts = tree_weights(lam, tree, bt)
        keyed = _coh_num_keyed(bt)
        sign = 1
        for p, c in tree.edges:
            key, sgn = _edge_match(bt, p, c)
            del keyed[key]
            sign *= sgn
        del keyed[("x", bt.root)]
        if sign != (-1) ** wts.kappa:
            raise CancellationMissError("signs do not absorb (-1)^kappa")
        out.append(CohTerm(tuple(keyed.values()), tuple(_coh_den(bt)), 1.0))
    return out


def _coh_eval_generic(terms, xs, t1, t2) -> complex:
    total = 0j
    for term in terms:
        prod = complex(term.prefactor)
        nd = len(term.den)
        for k, atom in enumerate(term.num):
            prod *= atom.value(xs, t1, t2)
            if k < nd:
                prod /= term.den[k].value(xs, t1, t2)
        for k in range(len(term.num), nd):
            prod /= term.den[k].value(xs, t1, t2)
        total += prod
    return total


def _coh_term_restricted(term: CohTerm, boxes_add, sigma, directions,
                         t1, t2, acc: WindowAccumulator):
    def resolve(atom):
        t1c, t2c = atom.t1c, atom.t2c
        slope = 0.0
        for sl, cf in atom.xsup:
            bi, bj = boxes_add[sigma[sl]]
            t1c += cf * bi
            t2c += cf * bj
            slope += cf * directions[sigma[sl]]
        return t1c, t2c, slope

    resolved_n = [resolve(a) for a in term.num]
    resolved_d = [resolve(a) for a in term.den]
    val = (sum(1 for a, b, _ in resolved_n if a == 0 and b == 0)
           - sum(1 for a, b, _ in resolved_d if a == 0 and b == 0))
    if val > 0:
        return
    if val == 0:
        prod = complex(term.prefactor)
        nd = len(resolved_d)
        for k, (a, b, sl) in enumerate(resolved_n):
            prod *= (a * t1 + b * t2) if (a or b) else sl
            if k < nd:
                a2, b2, sl2 = resolved_d[k]
                prod /= (a2 * t1 + b2 * t2) if (a2 or b2) else sl2
        for k in range(len(resolved_n), nd):
            a2, b2, sl2 = resolved_d[k]
            prod /= (a2 * t1 + b2 * t2) if (a2 or b2) else sl2
        acc.add_scalar(prod)
        return
    order = 1 - val

    def jet(a, b, sl):
        if a == 0 and b == 0:
            return Jet(1, (complex(sl),) + (0j,) * (order - 1))
        c = [0j] * order
        c[0] = a * t1 + b * t2
        if order > 1:
            c[1] = complex(sl)
        return Jet(0, c)

    j = Jet.constant(term.prefactor, order)
    nd = len(resolved_d)
    for k, rn in enumerate(resolved_n):
        j = j * jet(*rn)
        if k < nd:
            j = j / jet(*resolved_d[k])
    for k in range(len(resolved_n), nd):
        j = j / jet(*resolved_d[k])
    acc.add_jet(j.val, j.c)


def stab_coh_eval(ctx: GeneratorContext, lam: Partition, x_values=None,
                  mu: Partition | None = None, directions=None) -> complex:
    """Cohomological envelope: at explicit additive x, or restricted to mu."""
    bt = box_table(lam)
    terms = coh_terms(lam, bt)
    t1, t2 = ctx.t1_additive, ctx.t2_additive
    if mu is None:
        if x_values is None or len(x_values) != bt.n:
            raise ValueError(f"need {bt.n} additive Chern roots")
        total = 0j
        for sigma in permutations(range(bt.n)):
            xs = [x_values[sigma[k]] for k in range(bt.n)]
            total += _coh_eval_generic(terms, xs, t1, t2)
        return total
    mu_bt = box_table(mu)
    boxes_add = _additive_pairs(mu_bt)
    directions = directions or tuple(range(1, bt.n + 1))
    acc = WindowAccumulator()
    for sigma in permutations(range(bt.n)):
        for term in terms:
            _coh_term_restricted(term, boxes_add, sigma, directions, t1, t2, acc)
    value, _ = acc.finish(lam, mu)
    return value


def coh_matrix(ctx: GeneratorContext, n: int,
               limit: int | None = None) -> RestrictionMatrix:
    from .partitions import matrix_max_n

    limit = matrix_max_n(COH_MATRIX_MAX_N) if limit is None else limit
    if not 1 <= n <= limit:
        raise ValueError(f"n={n} out of range [1, {limit}] for cohomology matrices")
    parts = enumerate_partitions(n, limit=max(n, 8))
    entries = [[stab_coh_eval(ctx, lam, mu=mu) for mu in parts] for lam in parts]
    return RestrictionMatrix(n, "cohomology", ctx.seed, parts, entries)


# -- cohomological identities -------------------------------------------------------


def coh_w_tree(bt: BoxTable, tree: LambdaTree, wts, xs, t1, t2) -> complex:
    """W^Coh of one tree at explicit additive values."""
    add = _additive_pairs(bt)
    prod = (-1.0) ** wts.kappa / xs[bt.root]
    for p, c in tree.edges:
        dphi = ((add[p][0] - add[c][0]) * t1 + (add[p][1] - add[c][1]) * t2)
        prod /= xs[c] - xs[p] + dphi
    return prod


def coh_tree_sum(lam: Partition, xs, t1, t2, bt: BoxTable | None = None) -> complex:
    bt = bt or box_table(lam)
    total = 0j
    for tree in upsilon_trees(lam, bt):
        total += coh_w_tree(bt, tree, tree_weights(lam, tree, bt), xs, t1, t2)
    return total


def coh_tree_sum_closed(lam: Partition, xs, t1, t2,
                        bt: BoxTable | None = None) -> complex:
    """x_r^{-1} prod_{2x2 squares}(x_{(i+1,j+1)} - x_{(i,j)} + t1 + t2)
    / prod_{skeleton edges}(x_head - x_tail - phi_head + phi_tail),
    edges oriented up/right."""
    bt = bt or box_table(lam)
    pos = {b: k for k, b in enumerate(bt.boxes)}
    add = _additive_pairs(bt)
    val = 1.0 / xs[bt.root]
    for (i, j), k in pos.items():
        if (i + 1, j + 1) in pos:
            val *= xs[pos[(i + 1, j + 1)]] - xs[k] + t1 + t2
    for u, v in skeleton(lam, bt).edges:
        tail, head = (u, v) if bt.boxes[u] < bt.boxes[v] else (v, u)
        dphi = (add[head][0] - add[tail][0]) * t1 + (add[head][1] - add[tail][1]) * t2
        val /= xs[head] - xs[tail] - dphi
    return val


def coh_s_lambda(lam: Partition, xs, t1, t2, bt: BoxTable | None = None) -> complex:
    """The symmetric-part factor of the cohomological envelope (content-only
    conditions), whose plain symmetrization gives the envelope."""
    bt = bt or box_table(lam)
    n = bt.n
    num = 1.0 + 0j
    for i in range(n):
        for j in range(n):
            if bt.content[j] > bt.content[i] + 1:
                num *= xs[i] - xs[j] + t1
            if bt.content[j] < bt.content[i] + 1:
                num *= xs[j] - xs[i] + t2
    for i in range(n):
        if bt.content[i] < 0:
            num *= xs[i]
        elif bt.content[i] > 0:
            num *= t1 + t2 - xs[i]
    den = 1.0 + 0j
    for i in range(n):
        for j in range(n):
            if bt.content[i] < bt.content[j]:
                den *= (xs[i] - xs[j]) * (xs[i] - xs[j] + t1 + t2)
    return num / den


def z_lambda(lam: Partition) -> int:
    bt = box_table(lam)
    out = 1
    for d in bt.diag_counts.values():
        out *= math.factorial(d)
    return out


def coh_s_gamma(lam: Partition, xs, t1, t2, bt: BoxTable | None = None) -> complex:
    """S_Gamma: adjacency factors off the skeleton over the equal-content
    denominator (the additive analogue of the abelianized tree numerator)."""
    bt = bt or box_table(lam)
    n = bt.n
    skel = {frozenset(e) for e in skeleton(lam, bt).edges}
    num = 1.0 + 0j
    for i in range(n):
        for j in range(n):
            if bt.content[j] - bt.content[i] == 1 and frozenset((i, j)) not in skel:
                if bt.height[i] > bt.height[j]:
                    num *= xs[i] - xs[j] + t1
                else:
                    num *= xs[j] - xs[i] + t2
    for i in range(n):
        if bt.content[i] == 0 and bt.height[i] > 0:
            num *= xs[i]
    den = 1.0 + 0j
    for i in range(n):
        for j in range(n):
            if bt.content[i] == bt.content[j] and bt.height[i] > bt.height[j]:
                den *= xs[i] - xs[j]
                if bt.height[i] > bt.height[j] + 2:
                    den *= xs[i] - xs[j] + t1 + t2
    return num / den


def verify_coh_sum_identity(ctx: GeneratorContext, lam: Partition,
                            trials: int = 10) -> dict:
    """max |sum_{sigma in S_lambda} S_Gamma(x_sigma) - 1| over random x."""
    import random

    from .envelope import s_lambda_permutations

    bt = box_table(lam)
    rng = random.Random(ctx.seed ^ 0x5F3759DF)
    t1, t2 = ctx.t1_additive, ctx.t2_additive
    worst = 0.0
    for _ in range(trials):
        for _attempt in range(10):
            xs = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                  for _ in range(bt.n)]
            try:
                total = 0j
                for sigma in s_lambda_permutations(bt):
                    xsig = [xs[sigma[k]] for k in range(bt.n)]
                    total += coh_s_gamma(lam, xsig, t1, t2, bt)
                break
            except ZeroDivisionError:
                continue
        else:
            raise GenericityError("could not draw generic additive x")
        worst = max(worst, abs(total - 1))
    return {"identity": "sum_S_lambda S_Gamma = 1", "partition": str(lam),
            "trials": trials, "max_abs_error": worst, "pass": worst < 1e-9}


# -- the q->0 bridge -----------------------------------------------------------------


def polarization_column_norm(ctx: GeneratorContext, mu: Partition) -> complex:
    """t1^{n^2/2} * prod_i (phi^mu_i)^{1/2} (det of the polarization)."""
    bt = box_table(mu)
    m = Monomial.t1() ** bt.n ** 2
    for c, h in zip(bt.content, bt.height):
        m = m * Monomial({"a": c, "hbar_half": -h})
    return cmath.exp(0.5 * ctx.log_sum(m.doubled()))


def verify_q_limit(n: int, slope: Slope, q_sequence, seed: int,
                   theta_tol: float = 1e-14) -> dict:
    """Elliptic matrices at z = q^{-s}, column-normalized, against T^{(s)}.

    Phases of a and hbar^{1/2} are held fixed (same seed) while |q| shrinks.
    Redraws the seed when an override collides with a genericity guard.
    """
    from .envelope import restriction_matrix

    _require_admissible(slope)
    s = slope.value
    for attempt in range(10):
        use_seed = seed + attempt
        try:
            ctx0 = make_context(n, use_seed, theta_tol=theta_tol)
            tk = kth_matrix(ctx0, n, slope)
            q_ctxs = []
            for q in q_sequence:
                z = complex(q) ** (-s)
                q_ctxs.append(make_context(
                    n, use_seed, overrides={"q": complex(q), "z": z},
                    theta_tol=theta_tol))
            break
        except GenericityError:
            continue
    else:
        raise GenericityError("no admissible phase draw found for the bridge")
    errors = []
    norm_errors = []
    for ctx_q in q_ctxs:
        tel = restriction_matrix(ctx_q, n)
        norms = [polarization_column_norm(ctx_q, mu) for mu in tel.order]
        scale = max(abs(e) for row in tk.entries for e in row)
        worst = 0.0
        worst_abs = 0.0
        for i in range(len(tel.order)):
            for j in range(len(tel.order)):
                v = tel.entries[i][j] / norms[j]
                d = abs(v - tk.entries[i][j])
                worst_abs = max(worst_abs, d)
                if abs(tk.entries[i][j]) > 1e-12 * scale:
                    worst = max(worst, d / abs(tk.entries[i][j]))
        errors.append(worst)
        norm_errors.append(worst_abs / scale)
    decreasing = all(errors[k + 1] < errors[k] for k in range(len(errors) - 1))
    return {"n": n, "slope": s, "seed": use_seed,
            "q_values": [float(q) for q in q_sequence],
            "entrywise_errors": errors, "normed_errors": norm_errors,
            "decreasing": decreasing, "final_error": errors[-1]}
