from hilbstab.partitions import Partition, box_table, enumerate_partitions
from hilbstab.trees import (l_shapes, skeleton, tree_to_json, tree_weights,
                            upsilon_trees)


def brute_adjacency_count(lam):
    boxes = set(lam.boxes())
    count = 0
    for i, j in boxes:
        if (i + 1, j) in boxes:
            count += 1
        if (i, j + 1) in boxes:
            count += 1
    return count


def is_spanning_tree(n, undirected_edges):
    """Union-find validation."""
    if len(undirected_edges) != n - 1:
        return False
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in undirected_edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return len({find(k) for k in range(n)}) == 1


def test_skeleton_examples():
    assert len(skeleton(Partition((1,)))) == 0
    sk = skeleton(Partition((2, 2)))
    assert len(sk) == 4
    # brute-force count: (4,2,1) has 7 adjacencies (one 2x2 square -> 1 cycle)
    lam = Partition((4, 2, 1))
    assert brute_adjacency_count(lam) == 7
    assert len(skeleton(lam)) == 7
    assert len(skeleton(lam)) - (lam.n - 1) == 1  # independent cycles
    for n in range(1, 8):
        for lam in enumerate_partitions(n):
            sk = skeleton(lam)
            assert len(sk) == brute_adjacency_count(lam)
            rows = len(lam.parts)
            cols = lam.parts[0]
            assert len(sk) == 2 * lam.n - rows - cols


def test_l_shapes_counts():
    assert len(l_shapes(Partition((2, 2)))) == 1
    assert [b for b in l_shapes(Partition((2, 2)))[0].delta1[0]] == [1, 1]
    assert len(l_shapes(Partition((3, 1, 1)))) == 0
    assert len(l_shapes(Partition((3, 2)))) == 1
    for n in range(1, 8):
        for lam in enumerate_partitions(n):
            bt = box_table(lam)
            m = sum(d - 1 for d in bt.diag_counts.values())
            assert len(l_shapes(lam)) == m


def test_upsilon_trees_22():
    lam = Partition((2, 2))
    bt = box_table(lam)
    trees = upsilon_trees(lam)
    assert len(trees) == 2
    # boxes: 0=(1,2), 1=(2,2), 2=(1,1) root, 3=(2,1)
    def edges_as_boxes(t):
        return {(bt.boxes[p], bt.boxes[c]) for p, c in t.edges}

    branched = {((1, 1), (1, 2)), ((1, 2), (2, 2)), ((1, 1), (2, 1))}
    chain = {((1, 1), (1, 2)), ((1, 2), (2, 2)), ((2, 2), (2, 1))}
    assert edges_as_boxes(trees[0]) == branched
    assert edges_as_boxes(trees[1]) == chain


def test_upsilon_counts_and_validity():
    """|Upsilon| = 2^m for all n <= 7, every tree spanning and distinct."""
    for n in range(1, 8):
        for lam in enumerate_partitions(n):
            bt = box_table(lam)
            m = sum(d - 1 for d in bt.diag_counts.values())
            trees = upsilon_trees(lam, bt)
            assert len(trees) == 2 ** m
            if lam.is_hook():
                assert len(trees) == 1
            seen = set()
            skel = {frozenset(e) for e in skeleton(lam, bt).edges}
            for t in trees:
                undirected = [tuple(sorted((p, c))) for p, c in t.edges]
                assert is_spanning_tree(bt.n, undirected)
                assert all(frozenset(e) in skel for e in undirected)
                key = frozenset(map(frozenset, undirected))
                assert key not in seen
                seen.add(key)


def test_upsilon_contains_non_lshape_edges():
    for n in range(2, 7):
        for lam in enumerate_partitions(n):
            bt = box_table(lam)
            pos = {b: k for k, b in enumerate(bt.boxes)}
            shape_edges = set()
            for sh in l_shapes(lam, bt):
                for d in (sh.delta1, sh.delta2):
                    shape_edges.add(frozenset((pos[d[0]], pos[d[1]])))
            mandatory = {frozenset(e) for e in skeleton(lam, bt).edges} - shape_edges
            for t in upsilon_trees(lam, bt):
                got = {frozenset((p, c)) for p, c in t.edges}
                assert mandatory <= got


def test_tree_weights_22():
    lam = Partition((2, 2))
    bt = box_table(lam)
    trees = upsilon_trees(lam, bt)
    w0 = tree_weights(lam, trees[0], bt)
    assert (w0.w, w0.v, w0.v_root, w0.kappa) == ((2, 1, 1), (1, 0, 0), 1, 0)
    w1 = tree_weights(lam, trees[1], bt)
    assert (w1.w, w1.v, w1.v_root, w1.kappa) == ((3, 2, 1), (1, 0, 0), 1, 1)


def test_tree_weights_single_box():
    lam = Partition((1,))
    bt = box_table(lam)
    (tree,) = upsilon_trees(lam, bt)
    w = tree_weights(lam, tree, bt)
    assert w.w == () and w.v == ()
    assert w.v_root == bt.beta[0]
    assert w.kappa == 0


def test_weight_sums_and_subtree_split():
    for n in range(2, 7):
        for lam in enumerate_partitions(n):
            bt = box_table(lam)
            for t in upsilon_trees(lam, bt):
                w = tree_weights(lam, t, bt)
                root_edges = [k for k, (p, _) in enumerate(t.edges) if p == bt.root]
                assert sum(w.w[k] for k in root_edges) == n - 1
                assert all(1 <= we <= n - 1 for we in w.w)
                # removing an edge splits the boxes into (w_e, n - w_e)
                for k, (p, c) in enumerate(t.edges):
                    children = {}
                    for pp, cc in t.edges:
                        children.setdefault(pp, []).append(cc)
                    stack, cnt = [c], 0
                    while stack:
                        v = stack.pop()
                        cnt += 1
                        stack.extend(children.get(v, []))
                    assert cnt == w.w[k]


def test_hooks_have_kappa_zero():
    for n in range(1, 8):
        for lam in enumerate_partitions(n):
            if not lam.is_hook():
                continue
            bt = box_table(lam)
            (tree,) = upsilon_trees(lam, bt)
            assert tree_weights(lam, tree, bt).kappa == 0


def test_tree_json():
    lam = Partition((2, 2))
    bt = box_table(lam)
    trees = upsilon_trees(lam, bt)
    data = tree_to_json(bt, trees[0], tree_weights(lam, trees[0], bt))
    assert data["w"] == [2, 1, 1]
    assert data["edges"][0] == [[1, 1], [1, 2]]
