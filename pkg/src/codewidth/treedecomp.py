"""Leaf-labelled cubic trees and constraint complexity of tree realizations.

Node numbering: the leaf carrying coordinate ``j`` is node ``j``; internal
nodes are ``n, n+1, ..., 2n-3`` in creation order: ``n`` is the centre of
the starting star on leaves 0, 1, 2, and ``n + j - 2`` is created when leaf
``j`` is attached.
"""

from __future__ import annotations

import os
import random
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .codes import LinearCode, UProfile, mask_to_list
from .errors import InvalidParamsError, NotInternalError, SizeMismatchError, TooLargeError
from .trellis import CoordinateOrder, trelliswidth_exhaustive

ENUMERATION_GATE = 10
TREEWIDTH_GATE = 8


@dataclass(frozen=True, eq=False)
class CubicTree:
    num_leaves: int
    edges: tuple[tuple[int, int], ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        n = self.num_leaves
        nodes = 2 * n - 2 if n >= 2 else 1
        if len(self.edges) != nodes - 1:
            raise ValueError(f"a cubic tree with {n} leaves has {nodes - 1} edges, got {len(self.edges)}")
        deg = [0] * nodes
        for a, b in self.edges:
            if not (0 <= a < nodes and 0 <= b < nodes) or a == b:
                raise ValueError(f"bad edge {(a, b)}")
            deg[a] += 1
            deg[b] += 1
        for v in range(nodes):
            want = (1 if n >= 2 else 0) if v < n else 3
            if deg[v] != want:
                raise ValueError(f"node {v} has degree {deg[v]}, expected {want}")
        # n - 1 edges on n nodes plus connectivity means acyclic
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in self.adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != nodes:
            raise ValueError("edges do not form a connected tree")

    @classmethod
    def from_edges(cls, n: int, edges) -> CubicTree:
        return cls(n, tuple(sorted(tuple(sorted(e)) for e in edges)))

    @property
    def n(self) -> int:
        return self.num_leaves

    @property
    def num_nodes(self) -> int:
        return 2 * self.num_leaves - 2 if self.num_leaves >= 2 else 1

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(x)) for x in adj)

    @property
    def internal_nodes(self) -> range:
        return range(self.num_leaves, self.num_nodes)

    @property
    def full_mask(self) -> int:
        return (1 << self.num_leaves) - 1

    @cached_property
    def _side_masks(self) -> dict[tuple[int, int], int]:
        """(v, u) -> leaves in the component of T - vu that contains u."""
        n = self.num_leaves
        full = self.full_mask
        below: dict[int, int] = {}
        parent = {0: -1}
        order = [0]
        for v in order:
            for u in self.adjacency[v]:
                if u != parent[v]:
                    parent[u] = v
                    order.append(u)
        for v in reversed(order):
            m = 1 << v if v < n else 0
            for u in self.adjacency[v]:
                if u != parent[v]:
                    m |= below[u]
            below[v] = m
        sides = {}
        for v in order[1:]:
            p = parent[v]
            sides[(p, v)] = below[v]
            sides[(v, p)] = full ^ below[v]
        return sides

    def branch_masks(self, v: int) -> tuple[int, ...]:
        return tuple(self._side_masks[(v, u)] for u in self.adjacency[v])

    def splits(self) -> frozenset[int]:
        """Leaf bipartitions induced by the edges, each as the side without leaf 0.

        A leaf-labelled tree is determined by this set, so it serves as a
        canonical form.
        """
        full = self.full_mask
        out = set()
        for (v, u), m in self._side_masks.items():
            if not m & 1:
                out.add(m)
        out.discard(0)
        out.discard(full)
        return frozenset(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CubicTree):
            return NotImplemented
        return self.num_leaves == other.num_leaves and self.splits() == other.splits()

    def __hash__(self) -> int:
        return hash((self.num_leaves, self.splits()))

    def __str__(self) -> str:
        return tree_to_string(self)


@dataclass(frozen=True)
class NodeSplit:
    """The three leaf sets hanging off an internal node, smallest first."""

    node: int
    masks: tuple[int, int, int]

    @property
    def counts(self) -> tuple[int, int, int]:
        return tuple(m.bit_count() for m in self.masks)

    @property
    def leafsets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(mask_to_list(m)) for m in self.masks)


@dataclass(frozen=True)
class WidthReport:
    treewidth: int
    trelliswidth: int
    witness_tree: CubicTree
    witness_order: CoordinateOrder
    node_kappas: dict[int, int]

    def __post_init__(self):
        if self.treewidth > self.trelliswidth:
            raise AssertionError(f"treewidth {self.treewidth} exceeds trelliswidth {self.trelliswidth}")


# -- construction ---------------------------------------------------------

def star_tree() -> CubicTree:
    return CubicTree(3, ((0, 3), (1, 3), (2, 3)))


def _enumerate_edges(n: int) -> Iterator[list[tuple[int, int]]]:
    def grow(edges: list[tuple[int, int]], leaf: int):
        if leaf == n:
            yield edges
            return
        w = n + leaf - 2
        edges = sorted(edges)
        for idx, (a, b) in enumerate(edges):
            rest = edges[:idx] + edges[idx + 1:]
            yield from grow(rest + [(a, w), (b, w), (leaf, w)], leaf + 1)

    yield from grow([(0, n), (1, n), (2, n)], 3)


def cubic_tree_enumerate(n: int, force: bool = False) -> Iterator[CubicTree]:
    """Every leaf-labelled cubic tree with n leaves, each once: (2n-5)!! trees."""
    if n < 3:
        raise InvalidParamsError(f"cubic tree enumeration needs n >= 3, got {n}")
    if n > ENUMERATION_GATE and not force:
        raise TooLargeError("cubic_tree_enumerate", n, ENUMERATION_GATE)
    for edges in _enumerate_edges(n):
        yield CubicTree.from_edges(n, edges)


def double_factorial(x: int) -> int:
    out = 1
    while x > 1:
        out *= x
        x -= 2
    return out


def random_cubic_tree(n: int, rng: random.Random) -> CubicTree:
    """Uniform over leaf-labelled cubic trees: each tree has exactly one
    attachment history, and every history is equally likely."""
    if n < 3:
        raise InvalidParamsError(f"need n >= 3, got {n}")
    edges = [(0, n), (1, n), (2, n)]
    for leaf in range(3, n):
        w = n + leaf - 2
        a, b = edges.pop(rng.randrange(len(edges)))
        edges += [(a, w), (b, w), (leaf, w)]
    return CubicTree.from_edges(n, edges)


def caterpillar(n: int, labels: Sequence[int] | None = None) -> CubicTree:
    """Spine of n-2 internal nodes; leaves placed left to right in ``labels`` order."""
    if n < 3:
        raise InvalidParamsError(f"need n >= 3, got {n}")
    labels = list(range(n)) if labels is None else list(labels)
    spine = list(range(n, 2 * n - 2))
    edges = [(labels[0], spine[0]), (labels[1], spine[0])]
    for i in range(1, n - 2):
        edges.append((spine[i - 1], spine[i]))
        edges.append((labels[i + 1], spine[i]))
    edges.append((labels[n - 1], spine[-1]))
    return CubicTree.from_edges(n, edges)


# -- per-node quantities --------------------------------------------------

def node_split(T: CubicTree, v: int) -> NodeSplit:
    if v not in T.internal_nodes:
        raise NotInternalError(f"node {v} is not internal")
    masks = sorted(T.branch_masks(v), key=lambda m: (m.bit_count(), m))
    return NodeSplit(v, tuple(masks))


def _check_sizes(C: LinearCode, T: CubicTree) -> None:
    if C.n != T.num_leaves:
        raise SizeMismatchError(f"code length {C.n} != tree leaves {T.num_leaves}")


def kappa_node(C: LinearCode, T: CubicTree, v: int) -> int:
    """Dimension of the local constraint code at internal node v."""
    _check_sizes(C, T)
    if v not in T.internal_nodes:
        raise NotInternalError(f"node {v} is not internal")
    return C.k - sum(C.dim_shortened_mask(m) for m in T.branch_masks(v))


def kappa_leaf(C: LinearCode, i: int) -> int:
    """kappa_v at the leaf carrying coordinate i: k - dim C_{I - {i}}.

    It does not depend on the tree; it is 1 unless coordinate i is zero on
    every codeword.
    """
    if not 0 <= i < C.n:
        raise NotInternalError(f"coordinate {i} outside [0, {C.n})")
    return C.k - C.dim_shortened_mask(C.full_mask ^ 1 << i)


def leaf_floor(C: LinearCode) -> int:
    """Largest leaf kappa_v; a lower bound on every constraint complexity once n >= 2."""
    return max(kappa_leaf(C, i) for i in range(C.n))


def node_kappas(C: LinearCode, T: CubicTree) -> dict[int, int]:
    """kappa_v for every node of T, leaves included."""
    _check_sizes(C, T)
    if T.num_leaves == 1:
        return {0: C.k}
    out = {i: kappa_leaf(C, i) for i in range(T.num_leaves)}
    out.update((v, kappa_node(C, T, v)) for v in T.internal_nodes)
    return out


def constraint_complexity(C: LinearCode, T: CubicTree) -> int:
    """Max of kappa_v over all nodes of T, leaves included.

    The leaves only decide the value when every internal node has kappa_v = 0,
    which happens for the full space.  A single-coordinate code has one node
    and no edges, so kappa = k.
    """
    return max(node_kappas(C, T).values())


def kappa_lower_bound(U: UProfile, split: NodeSplit) -> int:
    n1, n2, n3 = split.counts
    if n1 + n2 + n3 != U.n:
        raise SizeMismatchError(f"split counts {split.counts} do not sum to n = {U.n}")
    return U.k - (U[n1] + U[n2] + U[n3])


# -- exhaustive treewidth -------------------------------------------------

def _scan(C: LinearCode, n: int, worker: int, workers: int) -> tuple[int, int, list]:
    """Best (value, stream index, edges) over stream indices == worker mod workers."""
    k = C.k
    dim = C.dim_shortened_mask
    floor = leaf_floor(C)
    best, best_idx, best_edges = k + 1, -1, None
    for idx, edges in enumerate(_enumerate_edges(n)):
        if idx % workers != worker:
            continue
        T = CubicTree.from_edges(n, edges)
        worst = floor
        for v in T.internal_nodes:
            kv = k - sum(dim(m) for m in T.branch_masks(v))
            if kv > worst:
                worst = kv
                if worst >= best:
                    break
        if worst < best:
            best, best_idx, best_edges = worst, idx, list(T.edges)
    return best, best_idx, best_edges


def treewidth_exhaustive(C: LinearCode, workers: int = 1, force: bool = False) -> tuple[int, CubicTree]:
    """Least constraint complexity over all cubic trees with the coordinates on the leaves.

    Enumerating leaf-labelled trees covers every (topology, labelling) pair.
    The witness is the first optimal tree in enumeration order, whatever
    ``workers`` is.
    """
    n = C.n
    if n > TREEWIDTH_GATE and not force:
        raise TooLargeError("treewidth_exhaustive", n, TREEWIDTH_GATE)
    if n < 3:
        # one tree only: a single node, or an edge between two leaves
        T = CubicTree(n, ((0, 1),)) if n == 2 else CubicTree(1, ())
        return constraint_complexity(C, T), T
    if workers is None or workers < 1:
        workers = os.cpu_count() or 1
    if workers == 1:
        results = [_scan(C, n, 0, 1)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan, [C] * workers, [n] * workers, range(workers), [workers] * workers))
    value, _, edges = min((r for r in results if r[2] is not None), key=lambda r: (r[0], r[1]))
    return value, CubicTree.from_edges(n, edges)


def width_report(C: LinearCode, workers: int = 1, force: bool = False) -> WidthReport:
    tw, tree = treewidth_exhaustive(C, workers=workers, force=force)
    tl, order = trelliswidth_exhaustive(C, force=force)
    kappas = node_kappas(C, tree)
    return WidthReport(tw, tl, tree, order, kappas)


# -- separators -----------------------------------------------------------

def jordan_separator(T: CubicTree) -> int:
    """Smallest internal node whose three branches each carry at most n/2 leaves."""
    n = T.num_leaves
    for v in T.internal_nodes:
        if all(2 * m.bit_count() <= n for m in T.branch_masks(v)):
            return v
    raise AssertionError(f"no node with all branches <= n/2 in {tree_to_string(T)}")


def edge_separator_vstar(T: CubicTree) -> tuple[int, NodeSplit]:
    """Among nodes whose largest branch has between n/2 and 2n/3 leaves, the one
    with the largest such branch (smallest id on ties).

    Needs n >= 4: the 3-leaf star has only the split (1, 1, 1), so no internal
    node qualifies there.
    """
    n = T.num_leaves
    if n < 4:
        raise InvalidParamsError(f"no internal node has n/2 <= n_3 <= 2n/3 when n = {n}; need n >= 4")
    best = None
    for v in T.internal_nodes:
        split = node_split(T, v)
        n3 = split.counts[2]
        if 2 * n3 >= n and 3 * n3 <= 2 * n and (best is None or n3 > best.counts[2]):
            best = split
    if best is None:
        raise AssertionError(f"no node with n/2 <= n_3 <= 2n/3 in {tree_to_string(T)}")
    return best.node, best


# -- serialization --------------------------------------------------------

def tree_to_string(T: CubicTree) -> str:
    """Nested parentheses rooted at the internal neighbour of leaf 0.

    The root lists three children, every other internal node two; children
    are ordered by their smallest leaf label.
    """
    n = T.num_leaves
    if n < 3:
        return "(" + ",".join(map(str, range(n))) + ")"
    root = T.adjacency[0][0]
    low: dict[int, int] = {}

    def lowest(v: int, parent: int) -> int:
        if v < n:
            return v
        if (v, parent) not in low:
            low[(v, parent)] = min(lowest(u, v) for u in T.adjacency[v] if u != parent)
        return low[(v, parent)]

    def render(v: int, parent: int) -> str:
        if v < n:
            return str(v)
        kids = sorted((u for u in T.adjacency[v] if u != parent), key=lambda u: lowest(u, v))
        return "(" + ",".join(render(u, v) for u in kids) + ")"

    return render(root, -1)


_TOKEN = re.compile(r"\s*(\(|\)|,|\d+)")


def tree_from_string(text: str) -> CubicTree:
    """Inverse of :func:`tree_to_string`; internal ids follow preorder."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ValueError(f"unexpected character {text[pos]!r} at offset {pos}")
        tokens.append(mt.group(1))
        pos = mt.end()
    it = iter(enumerate(tokens))

    def take() -> str:
        try:
            return next(it)[1]
        except StopIteration:
            raise ValueError("unexpected end of tree string") from None

    def parse_item():
        tok = take()
        if tok == "(":
            kids = [parse_item()]
            while (tok := take()) == ",":
                kids.append(parse_item())
            if tok != ")":
                raise ValueError(f"expected ')' got {tok!r}")
            return kids
        if tok.isdigit():
            return int(tok)
        raise ValueError(f"unexpected token {tok!r}")

    tree = parse_item()
    if next(it, None) is not None:
        raise ValueError("trailing characters after tree")
    leaves: list[int] = []

    def collect(x):
        if isinstance(x, int):
            leaves.append(x)
        else:
            for y in x:
                collect(y)

    collect(tree)
    n = len(leaves)
    if sorted(leaves) != list(range(n)):
        raise ValueError(f"leaf labels must be exactly 0..{n - 1}, got {sorted(leaves)}")
    if n < 3:
        if not isinstance(tree, list) or any(isinstance(x, list) for x in tree):
            raise ValueError("a tree with fewer than 3 leaves is written as a flat tuple")
        return CubicTree(n, ((0, 1),)) if n == 2 else CubicTree(1, ())
    if not isinstance(tree, list) or len(tree) != 3:
        raise ValueError("the root of a cubic tree must have exactly three children")
    edges = []
    counter = iter(range(n, 2 * n - 2))

    def build(x, is_root=False) -> int:
        if isinstance(x, int):
            return x
        if not is_root and len(x) != 2:
            raise ValueError(f"internal node with {len(x)} children (expected 2)")
        v = next(counter)
        for y in x:
            edges.append((v, build(y)))
        return v

    build(tree, is_root=True)
    return CubicTree.from_edges(n, edges)
