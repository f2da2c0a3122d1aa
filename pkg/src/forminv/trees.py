"""Rooted-tree combinatorics for the tree-expansion inversion formula and
the formal flow.

Trees are kept in a canonical form (children recursively sorted by size,
then by canonical encoding), so each isomorphism class has exactly one
representative and the parenthesis encoding is a usable dictionary key.
The automorphism order, the labeled differential polynomials, and the
strict order polynomial are all computed against that canonical form.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .errors import DimensionMismatch
from .rat import ONE, Rat
from .series import INF, MSeries, PolyMap
from .tpoly import TPoly


class RootedTree:
    """Canonical rooted tree.  `key` is the parenthesis encoding, e.g.
    "(()())" for a root with two leaf children; `aut` is the order of the
    root-preserving automorphism group."""

    __slots__ = ("children", "size", "aut", "key")

    def __init__(self, children: Iterable["RootedTree"] = ()):
        children = tuple(sorted(children, key=lambda c: (c.size, c.key)))
        self.children = children
        self.size = 1 + sum(c.size for c in children)
        aut = 1
        run_key, run_len = None, 0
        for c in children:
            aut *= c.aut
            if c.key == run_key:
                run_len += 1
            else:
                run_key, run_len = c.key, 1
            aut *= run_len
        self.aut = aut
        self.key = "(" + "".join(c.key for c in children) + ")"

    @classmethod
    def leaf(cls) -> "RootedTree":
        return cls(())

    @classmethod
    def chain(cls, size: int) -> "RootedTree":
        t = cls.leaf()
        for _ in range(size - 1):
            t = cls((t,))
        return t

    @classmethod
    def star(cls, leaves: int) -> "RootedTree":
        return cls(tuple(cls.leaf() for _ in range(leaves)))

    @classmethod
    def from_key(cls, key: str) -> "RootedTree":
        pos = 0

        def parse():
            nonlocal pos
            if key[pos] != "(":
                raise ValueError(f"bad tree encoding at {pos}: {key!r}")
            pos += 1
            kids = []
            while key[pos] == "(":
                kids.append(parse())
            if key[pos] != ")":
                raise ValueError(f"bad tree encoding at {pos}: {key!r}")
            pos += 1
            return cls(tuple(kids))

        t = parse()
        if pos != len(key):
            raise ValueError(f"trailing characters in tree encoding {key!r}")
        return t

    def vertices(self):
        """Parent indices in preorder (root = index 0, parent[0] = -1)."""
        parents = [-1]

        def walk(t, my_index):
            for c in t.children:
                idx = len(parents)
                parents.append(my_index)
                walk(c, idx)

        walk(self, 0)
        return parents

    def __eq__(self, other):
        return isinstance(other, RootedTree) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"RootedTree({self.key}, size={self.size}, aut={self.aut})"


def enumerate_trees(max_size: int) -> dict[int, list[RootedTree]]:
    """All rooted trees with 1..max_size vertices, one canonical
    representative per isomorphism class, grouped by size, each group in
    deterministic (encoding) order.  Counts follow 1, 1, 2, 4, 9, 20, 48, ...
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    by_size: dict[int, list[RootedTree]] = {1: [RootedTree.leaf()]}
    for s in range(2, max_size + 1):
        found: list[RootedTree] = []
        acc: list[RootedTree] = []

        # children chosen with non-increasing (size, index) keys, so every
        # multiset of smaller trees is produced exactly once
        def rec(remaining, size_cap, idx_cap):
            if remaining == 0:
                found.append(RootedTree(tuple(acc)))
                return
            for sz in range(min(remaining, size_cap), 0, -1):
                pool = by_size[sz]
                top = idx_cap if sz == size_cap else len(pool) - 1
                for idx in range(min(top, len(pool) - 1), -1, -1):
                    acc.append(pool[idx])
                    rec(remaining - sz, sz, idx)
                    acc.pop()

        rec(s - 1, s - 1, len(by_size[s - 1]) - 1)
        by_size[s] = sorted(found, key=lambda t: t.key)
    return by_size


def aut_order(tree: RootedTree) -> int:
    """Order of the root-preserving automorphism group."""
    return tree.aut


# -- strict order polynomials -----------------------------------------------


def strict_order_count(tree: RootedTree, m: int) -> int:
    """Number of maps sigma: V(T) -> {1..m} that are strictly increasing
    away from the root (x below y implies sigma(x) < sigma(y)).

    Dynamic programming over the tree: for each vertex the vector of counts
    by assigned value, children combined by suffix sums.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return 0

    def vec(t: RootedTree):
        if not t.children:
            return [1] * m
        out = [1] * m
        for c in t.children:
            child = vec(c)
            # suffix[r] = number of child maps with sigma(child root) > r+1
            suffix = [0] * m
            acc = 0
            for r in range(m - 1, -1, -1):
                suffix[r] = acc
                acc += child[r]
            out = [a * b for a, b in zip(out, suffix)]
        return out

    return sum(vec(tree))


@lru_cache(maxsize=None)
def order_polynomial(tree: RootedTree) -> TPoly:
    """The unique degree-|T| polynomial agreeing with strict_order_count at
    m = 0..|T|, by exact interpolation.  Satisfies value 0 at 1 for trees
    with >= 2 vertices and (-1)^{|T|} at -1."""
    points = [(m, strict_order_count(tree, m)) for m in range(tree.size + 1)]
    return TPoly.interpolate(points)


# -- labeled tree polynomials -------------------------------------------------


class TreePolyCache:
    """Bottom-up evaluation of labeled tree sums against a fixed H, shared
    across trees so isomorphic subtrees are computed once.

    For a subtree S with root label j, q(S, j) is the sum over all
    labelings of S with that root label of the product over vertices v of
    H_{l(v)} differentiated once per child of v, in the child's label.
    Children are folded in one at a time, grouping partial label multisets
    so each distinct mixed partial of H_j is multiplied in once.  Zero
    factors prune the enumeration.
    """

    def __init__(self, h: PolyMap, cap=None):
        self.h = h
        self.n = h.n
        self.cap = cap
        self._q: dict = {}
        self._deriv: dict = {}

    def deriv(self, i: int, alpha: tuple) -> MSeries:
        """Mixed partial of H_i by the (sorted) tuple of variable indices."""
        if not alpha:
            return self.h.components[i]
        key = (i, alpha)
        hit = self._deriv.get(key)
        if hit is None:
            hit = self.deriv(i, alpha[:-1]).diff(alpha[-1])
            self._deriv[key] = hit
        return hit

    def labeled_root_sum(self, tree: RootedTree, i: int) -> MSeries:
        key = (tree.key, i)
        hit = self._q.get(key)
        if hit is not None:
            return hit
        zero = MSeries.zero(self.n, INF if self.cap is None else self.cap)
        states = {(): MSeries.const(self.n, ONE)}
        for child in tree.children:
            child_vec = [self.labeled_root_sum(child, k) for k in range(self.n)]
            new: dict = {}
            for alpha, partial in states.items():
                for k in range(self.n):
                    q = child_vec[k]
                    if q.is_zero():
                        continue
                    prod = partial.mul(q, cap=self.cap)
                    if prod.is_zero():
                        continue
                    key2 = tuple(sorted(alpha + (k,)))
                    acc = new.get(key2)
                    new[key2] = prod if acc is None else acc + prod
            states = new
            if not states:
                break
        total = zero
        for alpha, weight in states.items():
            d = self.deriv(i, alpha)
            if d.is_zero():
                continue
            total = total + weight.mul(d, cap=self.cap)
        self._q[key] = total
        return total

    def tree_poly(self, tree: RootedTree, i: int) -> MSeries:
        return self.labeled_root_sum(tree, i).scale(Rat(1, tree.aut))


def tree_poly(tree: RootedTree, h: PolyMap, i: int, cap=None) -> MSeries:
    """The i-th component of the tree's differential polynomial: the sum of
    the labeled products over all labelings fixing the root label i,
    divided by the automorphism order."""
    if not 0 <= i < h.n:
        raise DimensionMismatch(f"root label {i} out of range for n={h.n}")
    return TreePolyCache(h, cap=cap).tree_poly(tree, i)


def labeled_rooted_tree_identity(max_size: int) -> bool:
    """Cayley consistency: sum over trees of size s of s!/|Aut(T)| must be
    s^{s-1} (the number of labeled rooted trees).  Used as a self-check."""
    import math

    by_size = enumerate_trees(max_size)
    for s, trees in by_size.items():
        total = sum(Rat(math.factorial(s), t.aut) for t in trees)
        if total != s ** (s - 1):
            return False
    return True
