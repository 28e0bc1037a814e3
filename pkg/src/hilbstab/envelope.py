"""The elliptic stable envelope: per-partition theta-factor specs, per-tree
Kaehler weights, the cancelled per-tree terms, symmetrized off-shell
evaluation and jet-regularized restriction matrices.

Conventions (canonical 0-based box indices i, j; r is the root):

  S factors      numerator   theta(x_i/x_j t1)        for rho_j > rho_i + 1
                             theta(x_j/x_i t2)        for rho_j < rho_i + 1  (incl. i=j)
                             theta(x_i)               for rho_i <= 0
                             theta(t1 t2 / x_i)       for rho_i > 0
                 denominator theta(x_i/x_j), theta(x_i/x_j hbar)  for i < j canonical
  tree weight    (-1)^kappa phi(x_r, K_r) prod_e phi(U_e, K_e) with
                 U_e = x_child phi_parent / (phi_child x_parent),
                 K_r = z^n hbar^{v_r}, K_e = z^{w_e} hbar^{v_e}
                 (multi-z variant: K = product of z_i over the subtree, no hbar)

In the cancelled per-tree term every phi denominator theta(U_e) and the root
theta(x_r) are matched against S numerator factors; wrong-way edges match the
inverted argument and the collected signs absorb (-1)^kappa exactly.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from itertools import permutations

from .jets import Jet
from .monomial import Monomial
from .partitions import (BoxTable, Partition, box_table, box_characters,
                         rho_gt, rho_lt)
from .thetafun import GeneratorContext
from .trees import LambdaTree, TreeWeights, tree_weights, upsilon_trees


RESIDUAL_TOL = 1e-6
ELL_MATRIX_MAX_N = 5


class CancellationMissError(RuntimeError):
    """A phi denominator found no matching S numerator factor (convention bug)."""


class NonGenericArgumentError(ValueError):
    """Explicit Chern-root values too close to a degenerate configuration."""


class ResidualPoleError(RuntimeError):
    def __init__(self, lam, mu, order, residual):
        self.lam, self.mu, self.order, self.residual = lam, mu, order, residual
        super().__init__(
            f"residual pole of order {-order} at T[{lam}][{mu}]: "
            f"relative residual {residual:.3e}")


# -- factor specs ---------------------------------------------------------------


@dataclass(frozen=True)
class FactorList:
    """sign * prod theta(numerator) / prod theta(denominator)
    * prod theta(U K)/theta(K) over kaehler_pairs."""

    numerator: tuple[Monomial, ...]
    denominator: tuple[Monomial, ...]
    kaehler_pairs: tuple[tuple[Monomial, Monomial], ...]
    sign: int = 1


@dataclass(frozen=True)
class TreeTermSpec:
    """One cancelled permutation-and-tree term: residual S numerator factors,
    the full S denominator, and per-edge/root pairs theta(U K)/theta(K)."""

    numerator: tuple[Monomial, ...]
    denominator: tuple[Monomial, ...]
    kaehler_pairs: tuple[tuple[Monomial, Monomial], ...]
    sign: int = 1


def _s_num_keyed(bt: BoxTable) -> dict:
    """S numerator factors keyed for cancellation lookups."""
    n = bt.n
    keyed = {}
    for i in range(n):
        for j in range(n):
            if rho_gt(bt, j, i):
                keyed[("t1", i, j)] = Monomial.x(i + 1) / Monomial.x(j + 1) * Monomial.t1()
            if rho_lt(bt, j, i):
                keyed[("t2", i, j)] = Monomial.x(j + 1) / Monomial.x(i + 1) * Monomial.t2()
    for i in range(n):
        if bt.content[i] <= 0:
            keyed[("x", i)] = Monomial.x(i + 1)
        else:
            keyed[("hx", i)] = Monomial.hbar() / Monomial.x(i + 1)
    return keyed


def _s_den(bt: BoxTable) -> list[Monomial]:
    out = []
    for i in range(bt.n):
        for j in range(i + 1, bt.n):
            r = Monomial.x(i + 1) / Monomial.x(j + 1)
            out.append(r)
            out.append(r * Monomial.hbar())
    return out


def s_ell_spec(lam: Partition, bt: BoxTable | None = None) -> FactorList:
    """The partition-dependent theta-factor combination S^Ell."""
    bt = bt or box_table(lam)
    return FactorList(tuple(_s_num_keyed(bt).values()), tuple(_s_den(bt)), (), 1)


def _edge_monomial(bt: BoxTable, p: int, c: int) -> Monomial:
    """U_e = x_c phi_p / (phi_c x_p)."""
    da = bt.content[p] - bt.content[c]
    dh = bt.height[p] - bt.height[c]
    return Monomial.x(c + 1) / Monomial.x(p + 1) * Monomial({"a": da, "hbar_half": -dh})


def _edge_match(bt: BoxTable, p: int, c: int):
    """Key of the S numerator factor matching theta(U_e), and the sign picked
    up when the match is the inverted argument (down/left edges)."""
    (ip, jp), (ic, jc) = bt.boxes[p], bt.boxes[c]
    if jc == jp + 1:
        return ("t1", c, p), 1
    if jc == jp - 1:
        return ("t1", p, c), -1
    if ic == ip + 1:
        return ("t2", p, c), 1
    if ic == ip - 1:
        return ("t2", c, p), -1
    raise CancellationMissError(f"edge {bt.boxes[p]}-{bt.boxes[c]} is not an adjacency")


def _kaehler_single(weights: TreeWeights, n: int, edge_idx: int | None) -> Monomial:
    if edge_idx is None:
        return Monomial({"z": n, "hbar_half": 2 * weights.v_root})
    return Monomial({"z": weights.w[edge_idx], "hbar_half": 2 * weights.v[edge_idx]})


def _kaehler_multi(bt: BoxTable, tree: LambdaTree, edge_idx: int | None) -> Monomial:
    if edge_idx is None:
        boxes = range(bt.n)
    else:
        children = {}
        for p, c in tree.edges:
            children.setdefault(p, []).append(c)
        stack = [tree.edges[edge_idx][1]]
        boxes = []
        while stack:
            v = stack.pop()
            boxes.append(v)
            stack.extend(children.get(v, []))
    m = Monomial.one()
    for b in boxes:
        m = m * Monomial.zi(b + 1)
    return m


def w_ell_spec(lam: Partition, tree: LambdaTree, variant: str = "single_z",
               bt: BoxTable | None = None) -> FactorList:
    """The Kaehler weight of one tree: (-1)^kappa phi(x_r, K_r) prod phi(U_e, K_e),
    stored as theta(U K)/theta(K) pairs over the explicit theta(U) denominators."""
    bt = bt or box_table(lam)
    wts = tree_weights(lam, tree, bt)
    if variant == "single_z":
        pairs = [(Monomial.x(bt.root + 1), _kaehler_single(wts, bt.n, None))]
        for k, (p, c) in enumerate(tree.edges):
            pairs.append((_edge_monomial(bt, p, c), _kaehler_single(wts, bt.n, k)))
    elif variant == "multi_z":
        pairs = [(Monomial.x(bt.root + 1), _kaehler_multi(bt, tree, None))]
        for k, (p, c) in enumerate(tree.edges):
            pairs.append((_edge_monomial(bt, p, c), _kaehler_multi(bt, tree, k)))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return FactorList((), tuple(u for u, _ in pairs), tuple(pairs),
                      (-1) ** wts.kappa)


def combined_term_spec(lam: Partition, tree: LambdaTree,
                       bt: BoxTable | None = None) -> TreeTermSpec:
    """S^Ell * W^Ell for one tree with all phi denominators cancelled."""
    bt = bt or box_table(lam)
    wts = tree_weights(lam, tree, bt)
    keyed = _s_num_keyed(bt)
    sign = 1
    pairs = [(Monomial.x(bt.root + 1), _kaehler_single(wts, bt.n, None))]
    for k, (p, c) in enumerate(tree.edges):
        key, sgn = _edge_match(bt, p, c)
        if key not in keyed:
            raise CancellationMissError(f"no S factor for edge {bt.boxes[p]}-{bt.boxes[c]}")
        del keyed[key]
        sign *= sgn
        pairs.append((_edge_monomial(bt, p, c), _kaehler_single(wts, bt.n, k)))
    del keyed[("x", bt.root)]
    if sign != (-1) ** wts.kappa:
        raise CancellationMissError("collected signs do not absorb (-1)^kappa")
    return TreeTermSpec(tuple(keyed.values()), tuple(_s_den(bt)), tuple(pairs), 1)


def f_term_spec(lam: Partition, tree: LambdaTree, bt: BoxTable | None = None) -> TreeTermSpec:
    """One tree term of the abelianized sum F: adjacency factors off the tree
    over the equal-content denominator, with multi-z Kaehler pairs."""
    bt = bt or box_table(lam)
    n = bt.n
    keyed = {}
    for i in range(n):
        for j in range(n):
            if bt.content[j] - bt.content[i] == 1:
                if bt.height[i] > bt.height[j]:
                    keyed[("adj", i, j)] = Monomial.x(i + 1) / Monomial.x(j + 1) * Monomial.t1()
                else:
                    keyed[("adj", i, j)] = Monomial.x(j + 1) / Monomial.x(i + 1) * Monomial.t2()
    for i in range(n):
        if bt.content[i] == 0 and bt.height[i] > 0:
            keyed[("x", i)] = Monomial.x(i + 1)
    for p, c in tree.edges:
        i, j = (p, c) if bt.content[p] < bt.content[c] else (c, p)
        del keyed[("adj", i, j)]
    den = []
    for i in range(n):
        for j in range(n):
            if bt.content[i] == bt.content[j] and bt.height[i] > bt.height[j]:
                r = Monomial.x(i + 1) / Monomial.x(j + 1)
                den.append(r)
                den.append(r * Monomial.hbar())
    pairs = [(Monomial.x(bt.root + 1), _kaehler_multi(bt, tree, None))]
    for k, (p, c) in enumerate(tree.edges):
        pairs.append((_edge_monomial(bt, p, c), _kaehler_multi(bt, tree, k)))
    return TreeTermSpec(tuple(keyed.values()), tuple(den), tuple(pairs), 1)


# -- compiled atoms and the evaluation engine -----------------------------------


def _compile_mono(m: Monomial):
    """Split a monomial into Chern-root support and base exponents (doubled)."""
    xsup = []
    base = []
    for g, e2 in m.doubled().items():
        if g.startswith("x"):
            xsup.append((int(g[1:]) - 1, e2))
        else:
            base.append((g, e2))
    return tuple(sorted(xsup)), tuple(sorted(base))


@dataclass(frozen=True)
class CompiledTerm:
    """One permutation-independent tree term, ready for substitution.

    kind: "theta" (elliptic) or "ahat" (K-theory); powers are monomial power
    atoms (K-theory slope factors), each (atom, doubled exponent).
    """

    kind: str
    num: tuple
    den: tuple
    powers: tuple = ()
    prefactor: complex = 1.0


def compile_term(spec: TreeTermSpec, kind: str = "theta") -> CompiledTerm:
    num = [_compile_mono(m) for m in spec.numerator]
    den = [_compile_mono(m) for m in spec.denominator]
    for u, k in spec.kaehler_pairs:
        num.append(_compile_mono(u * k))
        den.append(_compile_mono(k))
    return CompiledTerm(kind, tuple(num), tuple(den), (), complex(spec.sign))


def elliptic_terms(lam: Partition, bt: BoxTable | None = None) -> list[CompiledTerm]:
    bt = bt or box_table(lam)
    return [compile_term(combined_term_spec(lam, t, bt)) for t in upsilon_trees(lam, bt)]


def f_terms(lam: Partition, bt: BoxTable | None = None) -> list[CompiledTerm]:
    bt = bt or box_table(lam)
    return [compile_term(f_term_spec(lam, t, bt)) for t in upsilon_trees(lam, bt)]


class Substitution:
    """x_slot -> phi^mu_{sigma(slot)} * e^{s d_{sigma(slot)}} in doubled units."""

    __slots__ = ("a2", "h2", "d")

    def __init__(self, mu_bt: BoxTable, sigma, directions):
        self.a2 = [2 * mu_bt.content[sigma[k]] for k in range(mu_bt.n)]
        self.h2 = [-2 * mu_bt.height[sigma[k]] for k in range(mu_bt.n)]
        self.d = [directions[sigma[k]] for k in range(mu_bt.n)]

    def resolve(self, atom):
        xsup, base = atom
        a2 = h2 = 0
        l2 = 0
        for sl, e2 in xsup:
            a2 += e2 * self.a2[sl]
            h2 += e2 * self.h2[sl]
            l2 += e2 * self.d[sl]
        ext = []
        for g, e2 in base:
            if g == "a":
                a2 += 2 * e2
            elif g == "hbar_half":
                h2 += 2 * e2
            else:
                ext.append((g, e2))
        # a2/h2 are accumulated in 4x units (doubled atom exponents times
        # doubled box exponents); halving returns them to doubled units
        key = []
        if a2:
            key.append(("a", a2 // 2))
        if h2:
            key.append(("hbar_half", h2 // 2))
        key.extend(ext)
        return tuple(sorted(key)), 0.5 * l2


def _resolve_all(sub: Substitution, term: CompiledTerm):
    num = [sub.resolve(a) for a in term.num]
    den = [sub.resolve(a) for a in term.den]
    val = sum(1 for k, _ in num if not k) - sum(1 for k, _ in den if not k)
    return num, den, val


class WindowAccumulator:
    """Laurent coefficients of a sum of jets, with cancellation diagnostics."""

    def __init__(self):
        self.coeff = {}
        self.abssum = {}
        self.max_pole = 0

    def add_scalar(self, x: complex):
        self.coeff[0] = self.coeff.get(0, 0j) + x
        self.abssum[0] = self.abssum.get(0, 0.0) + abs(x)

    def add_jet(self, val: int, coeffs):
        self.max_pole = max(self.max_pole, -val)
        for k, ck in enumerate(coeffs):
            o = val + k
            if o > 0:
                break
            self.coeff[o] = self.coeff.get(o, 0j) + ck
            self.abssum[o] = self.abssum.get(o, 0.0) + abs(ck)

    def finish(self, lam=None, mu=None):
        s0 = self.coeff.get(0, 0j)
        max_resid = 0.0
        worst_order = 0
        for o, c in self.coeff.items():
            if o >= 0:
                continue
            scale = max(self.abssum.get(o, 0.0), abs(s0), 1e-300)
            rel = abs(c) / scale
            if rel > max_resid:
                max_resid, worst_order = rel, o
        if max_resid > RESIDUAL_TOL:
            raise ResidualPoleError(lam, mu, worst_order, max_resid)
        return s0, {"max_pole_order": self.max_pole, "max_cancel_residual": max_resid}


def _scalar_atom(ctx: GeneratorContext, kind: str, key, slope):
    if kind == "theta":
        if not key:
            return slope * ctx.q_euler * ctx.q_euler
        return ctx.theta_key(key)
    if not key:
        return complex(slope)
    return ctx.ahat_from_log(ctx.log_sum(dict(key)))


def _jet_atom(ctx: GeneratorContext, kind: str, key, slope, order):
    if kind == "theta":
        return ctx.theta_jet(key, slope, order)
    return ctx.ahat_jet(key, slope, order)


def eval_term_restricted(ctx: GeneratorContext, term: CompiledTerm,
                         sub: Substitution, acc: WindowAccumulator):
    num, den, val = _resolve_all(sub, term)
    if val > 0:
        return
    if val == 0:
        prod = term.prefactor
        nd = len(den)
        for k, (key, slope) in enumerate(num):
            prod *= _scalar_atom(ctx, term.kind, key, slope)
            if k < nd:
                prod /= _scalar_atom(ctx, term.kind, *den[k])
        for k in range(len(num), nd):
            prod /= _scalar_atom(ctx, term.kind, *den[k])
        for atom, kappa2 in term.powers:
            key, slope = sub.resolve(atom)
            logc = ctx.log_sum(dict(key)) if key else 0j
            prod *= cmath.exp(0.5 * kappa2 * logc)
        acc.add_scalar(prod)
        return
    order = 1 - val
    if order > ctx.jet_order:
        raise RuntimeError(
            f"term pole order {-val} exceeds jet_order {ctx.jet_order}; "
            "raise jet_order in the context")
    jet = Jet.constant(term.prefactor, order)
    nd = len(den)
    for k, (key, slope) in enumerate(num):
        jet = jet * _jet_atom(ctx, term.kind, key, slope, order)
        if k < nd:
            jet = jet / _jet_atom(ctx, term.kind, *den[k], order)
    for k in range(len(num), nd):
        jet = jet / _jet_atom(ctx, term.kind, *den[k], order)
    for atom, kappa2 in term.powers:
        key, slope = sub.resolve(atom)
        jet = jet * ctx.power_jet(key, kappa2, slope, order)
    acc.add_jet(jet.val, jet.c)


def restricted_sum(ctx: GeneratorContext, terms, mu_bt: BoxTable,
                   directions=None, lam=None, sigmas=None):
    """Sum the given tree terms over permutations at x = phi^mu e^{s d};
    returns (s^0 coefficient, diagnostics)."""
    n = mu_bt.n
    directions = directions or tuple(range(1, n + 1))
    acc = WindowAccumulator()
    if sigmas is None:
        sigmas = permutations(range(n))
    for sigma in sigmas:
        sub = Substitution(mu_bt, sigma, directions)
        for term in terms:
            eval_term_restricted(ctx, term, sub, acc)
    return acc.finish(lam, mu_bt.partition)


# -- elliptic operations ---------------------------------------------------------


def _x_logs(ctx: GeneratorContext, x_values, x_logs=None):
    if x_logs is not None:
        return list(x_logs)
    return [cmath.log(x) for x in x_values]


def _check_generic_x(ctx: GeneratorContext, x_values):
    hbar = ctx.values["hbar_half"] ** 2
    n = len(x_values)
    for i in range(n):
        if x_values[i] == 0:
            raise NonGenericArgumentError("x values must be nonzero")
        for j in range(n):
            if i == j:
                continue
            r = x_values[i] / x_values[j]
            if abs(r - 1) < 1e-10 or abs(r * hbar - 1) < 1e-10 or abs(r / hbar - 1) < 1e-10:
                raise NonGenericArgumentError(
                    f"x_{i + 1}/x_{j + 1} too close to 1 or hbar^{{+-1}}")


def eval_term_generic(ctx: GeneratorContext, term: CompiledTerm, logs) -> complex:
    """Evaluate a compiled term at explicit Chern-root logarithms."""
    scal = {"theta": ctx.theta_from_log, "ahat": ctx.ahat_from_log}[term.kind]

    def value(atom):
        xsup, base = atom
        ls = ctx.log_sum(dict(base))
        for sl, e2 in xsup:
            ls += 0.5 * e2 * logs[sl]
        return scal(ls)

    prod = term.prefactor
    nd = len(term.den)
    for k, atom in enumerate(term.num):
        prod *= value(atom)
        if k < nd:
            prod /= value(term.den[k])
    for k in range(len(term.num), nd):
        prod /= value(term.den[k])
    for atom, kappa2 in term.powers:
        xsup, base = atom
        ls = ctx.log_sum(dict(base))
        for sl, e2 in xsup:
            ls += 0.5 * e2 * logs[sl]
        prod *= cmath.exp(0.5 * kappa2 * ls)
    return prod


def stab_offshell_eval(ctx: GeneratorContext, lam: Partition, x_values,
                       x_logs=None) -> complex:
    """Sym(S^Ell sum_trees W^Ell) at explicit generic Chern roots."""
    bt = box_table(lam)
    if len(x_values) != bt.n:
        raise ValueError(f"need {bt.n} Chern roots, got {len(x_values)}")
    _check_generic_x(ctx, x_values)
    logs = _x_logs(ctx, x_values, x_logs)
    terms = elliptic_terms(lam, bt)
    total = 0j
    for sigma in permutations(range(bt.n)):
        slogs = [logs[sigma[k]] for k in range(bt.n)]
        for term in terms:
            total += eval_term_generic(ctx, term, slogs)
    return total


def stab_restriction(ctx: GeneratorContext, lam: Partition, mu: Partition,
                     directions=None, with_diagnostics: bool = False):
    """T_{lam,mu}: the symmetrized sum at x = phi^mu, via jets."""
    if lam.n != mu.n:
        raise ValueError("partitions must have equal size")
    value, diag = restricted_sum(ctx, elliptic_terms(lam), box_table(mu),
                                 directions, lam=lam)
    return (value, diag) if with_diagnostics else value


@dataclass
class RestrictionMatrix:
    n: int
    kind: str
    seed: int
    order: list[Partition]
    entries: list[list[complex]]
    diagnostics: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def entry(self, lam: Partition, mu: Partition) -> complex:
        return self.entries[self.order.index(lam)][self.order.index(mu)]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind,
            "seed": self.seed,
            "partitions": [str(p) for p in self.order],
            "entries": [[[e.real, e.imag] for e in row] for row in self.entries],
            "diagnostics": self.diagnostics,
            **({"meta": self.meta} if self.meta else {}),
        }


def restriction_matrix(ctx: GeneratorContext, n: int,
                       limit: int | None = None) -> RestrictionMatrix:
    """All elliptic restrictions T_{lam,mu} for partitions of n."""
    from .partitions import enumerate_partitions, matrix_max_n

    limit = matrix_max_n(ELL_MATRIX_MAX_N) if limit is None else limit
    if not 1 <= n <= limit:
        raise ValueError(f"n={n} out of range [1, {limit}] for elliptic matrices")
    parts = enumerate_partitions(n, limit=max(n, 8))
    tables = {p: box_table(p) for p in parts}
    terms = {p: elliptic_terms(p, tables[p]) for p in parts}
    entries = []
    max_pole = 0
    max_resid = 0.0
    for lam in parts:
        row = []
        for mu in parts:
            v, diag = restricted_sum(ctx, terms[lam], tables[mu], lam=lam)
            max_pole = max(max_pole, diag["max_pole_order"])
            max_resid = max(max_resid, diag["max_cancel_residual"])
            row.append(v)
        entries.append(row)
    return RestrictionMatrix(n, "elliptic", ctx.seed, parts, entries,
                             {"max_pole_order": max_pole,
                              "max_cancel_residual": max_resid})


def mat_o1_diagonal(ctx: GeneratorContext, parts) -> list[complex]:
    """diag(prod_i phi^lam_i): multiplication by O(1) in the fixed basis."""
    out = []
    for p in parts:
        bt = box_table(p)
        m = Monomial.one()
        for ch in box_characters(bt):
            m = m * ch
        out.append(ctx.monomial_value(m))
    return out


def diagonal_oracle(ctx: GeneratorContext, lam: Partition) -> complex:
    """prod_boxes theta(t1^{-leg} t2^{arm+1}) (the repelling tangent weights)."""
    bt = box_table(lam)
    val = 1.0 + 0j
    for a, l in zip(bt.arm, bt.leg):
        m = Monomial.t1() ** (-l) * Monomial.t2() ** (a + 1)
        val *= ctx.theta_key(m.key())
    return val


# -- the S_lambda permutation group and F ----------------------------------------


def content_groups(bt: BoxTable) -> list[list[int]]:
    groups = {}
    for k, c in enumerate(bt.content):
        groups.setdefault(c, []).append(k)
    return [groups[c] for c in sorted(groups)]


def s_lambda_permutations(bt: BoxTable):
    """All permutations of canonical indices preserving box contents."""
    from itertools import product

    groups = content_groups(bt)
    for combo in product(*[list(permutations(g)) for g in groups]):
        sigma = list(range(bt.n))
        for g, perm in zip(groups, combo):
            for src, dst in zip(g, perm):
                sigma[src] = dst
        yield tuple(sigma)


def f_lambda_eval(ctx: GeneratorContext, lam: Partition, sigma,
                  directions=None) -> complex:
    """F^sigma at x = phi^lam (jet-regularized); 1 for sigma=id, else 0."""
    bt = box_table(lam)
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(bt.n)):
        raise ValueError("sigma must be a permutation of 0..n-1")
    for k in range(bt.n):
        if bt.content[sigma[k]] != bt.content[k]:
            raise ValueError("sigma must preserve box contents")
    value, _ = restricted_sum(ctx, f_terms(lam, bt), bt, directions,
                              lam=lam, sigmas=[sigma])
    return value
