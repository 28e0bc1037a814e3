"""Skeleton graph of a partition, L-shaped subgraphs, the distinguished set
of 2^m spanning trees, and the w/v/kappa edge statistics.

Trees are rooted at the box (1,1) with every edge oriented away from the
root; an edge is stored as (parent, child) in 0-based canonical box indices.
The head of an edge is its child box, the tail its parent.  In a tree
(parent, child) the z-weight w is the number of boxes in the subtree hanging
off the child, and the hbar-weight v accumulates the beta values over that
subtree.  kappa counts edges pointing down (child row < parent row) or left
(child column < parent column).
"""

from __future__ import annotations

from dataclasses import dataclass

from .partitions import BoxTable, Partition, box_table


@dataclass(frozen=True)
class Skeleton:
    """All adjacency edges, as 0-based canonical index pairs (u, v), u < v."""

    edges: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.edges)

    def to_json(self, bt: BoxTable) -> list:
        return [[list(bt.boxes[u]), list(bt.boxes[v])] for u, v in self.edges]


@dataclass(frozen=True)
class LShape:
    """Two edges (i,j)-(i+1,j) and (i+1,j)-(i+1,j+1), sharing the box (i+1,j)."""

    delta1: tuple[tuple[int, int], tuple[int, int]]
    delta2: tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class LambdaTree:
    """Spanning tree rooted at (1,1); edges sorted by child canonical index."""

    edges: tuple[tuple[int, int], ...]  # (parent, child), 0-based canonical

    def parent_map(self) -> dict:
        return {c: p for p, c in self.edges}

    def children(self, v: int) -> list[int]:
        return [c for p, c in self.edges if p == v]

    def edge_set(self) -> frozenset:
        return frozenset(frozenset(e) for e in self.edges)


@dataclass(frozen=True)
class TreeWeights:
    w: tuple[int, ...]
    v: tuple[int, ...]
    v_root: int
    kappa: int

    def to_json(self) -> dict:
        return {"w": list(self.w), "v": list(self.v),
                "v_root": self.v_root, "kappa": self.kappa}


def skeleton(lam: Partition, bt: BoxTable | None = None) -> Skeleton:
    bt = bt or box_table(lam)
    pos = {b: k for k, b in enumerate(bt.boxes)}
    edges = set()
    for (i, j), k in pos.items():
        for nb in ((i + 1, j), (i, j + 1)):
            if nb in pos:
                edges.add(tuple(sorted((k, pos[nb]))))
    return Skeleton(tuple(sorted(edges)))


def l_shapes(lam: Partition, bt: BoxTable | None = None) -> list[LShape]:
    """All L-shaped subgraphs, row-major in the base box (i,j)."""
    bt = bt or box_table(lam)
    boxes = set(bt.boxes)
    out = []
    for i, j in sorted(boxes):
        if (i + 1, j + 1) in boxes:
            out.append(LShape(((i, j), (i + 1, j)), ((i + 1, j), (i + 1, j + 1))))
    return out


def _tree_from_edges(bt: BoxTable, undirected: set) -> LambdaTree:
    """Orient an undirected spanning edge set away from the root."""
    n = bt.n
    adj = {k: [] for k in range(n)}
    for u, v in undirected:
        adj[u].append(v)
        adj[v].append(u)
    root = bt.root
    parent = {}
    seen = {root}
    stack = [root]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                parent[v] = u
                stack.append(v)
    if len(seen) != n:
        raise RuntimeError("internal error: edge set does not span the diagram")
    edges = tuple((parent[c], c) for c in sorted(parent))
    if len(edges) != n - 1:
        raise RuntimeError("internal error: edge set is not a tree")
    return LambdaTree(edges)


def upsilon_trees(lam: Partition, bt: BoxTable | None = None) -> list[LambdaTree]:
    """The 2^m distinguished trees: drop one edge of each L-shape from the
    skeleton.  Tree number b drops delta2 of L-shape k when bit k of b is 0
    and delta1 when it is 1, so the first tree keeps all vertical edges."""
    bt = bt or box_table(lam)
    pos = {b: k for k, b in enumerate(bt.boxes)}
    skel = {tuple(sorted(e)) for e in skeleton(lam, bt).edges}
    shapes = l_shapes(lam, bt)
    m = len(shapes)
    out = []
    for b in range(1 << m):
        removed = set()
        for k, sh in enumerate(shapes):
            d = sh.delta1 if (b >> k) & 1 else sh.delta2
            removed.add(tuple(sorted((pos[d[0]], pos[d[1]]))))
        out.append(_tree_from_edges(bt, skel - removed))
    assert len({t.edge_set() for t in out}) == len(out)
    return out


def tree_weights(lam: Partition, tree: LambdaTree, bt: BoxTable | None = None) -> TreeWeights:
    bt = bt or box_table(lam)
    children = {}
    for p, c in tree.edges:
        children.setdefault(p, []).append(c)

    subtree_w = {}
    subtree_v = {}

    def rec(v):
        w, vv = 1, bt.beta[v]
        for c in children.get(v, []):
            rec(c)
            w += subtree_w[c]
            vv += subtree_v[c]
        subtree_w[v] = w
        subtree_v[v] = vv

    rec(bt.root)
    w = tuple(subtree_w[c] for _, c in tree.edges)
    v = tuple(subtree_v[c] for _, c in tree.edges)
    v_root = subtree_v[bt.root]
    kappa = 0
    for p, c in tree.edges:
        (ip, jp), (ic, jc) = bt.boxes[p], bt.boxes[c]
        if ic < ip or jc < jp:
            kappa += 1
    assert subtree_w[bt.root] == bt.n
    assert all(1 <= we <= bt.n - 1 for we in w)
    return TreeWeights(w, v, v_root, kappa)


def tree_to_json(bt: BoxTable, tree: LambdaTree, weights: TreeWeights) -> dict:
    return {
        "edges": [[list(bt.boxes[p]), list(bt.boxes[c])] for p, c in tree.edges],
        **weights.to_json(),
    }
