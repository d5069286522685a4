"""Connected components and the isolated class-1 pair count of a K-out graph."""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

from .sampler import KOutGraph


@nb.njit(cache=True, nogil=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@nb.njit(cache=True, nogil=True)
def _union_find(n, src, dst):
    """Union-by-size over arcs; returns (root per node, number of components)."""
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    comps = n
    for e in range(src.size):
        a = _find(parent, src[e])
        b = _find(parent, dst[e])
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
        comps -= 1
    for v in range(n):
        _find(parent, v)
    return parent, comps


@nb.njit(cache=True, nogil=True)
def _count_mutual(ptr, idx):
    """Number of unordered pairs that selected each other."""
    n = ptr.size - 1
    mutual = 0
    for v in range(n):
        for p in range(ptr[v], ptr[v + 1]):
            u = idx[p]
            if u <= v:
                continue
            # binary search for v in u's sorted selections
            lo = ptr[u]
            hi = ptr[u + 1]
            while lo < hi:
                mid = (lo + hi) // 2
                if idx[mid] < v:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < ptr[u + 1] and idx[lo] == v:
                mutual += 1
    return mutual


class DisjointSet:
    """Union-find over ``range(n)`` with union by size and path compression.

    The pure-Python twin of the compiled kernel used by :func:`census`;
    handy for incremental use and as a cross-check in tests.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.num_components = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        self.num_components -= 1
        return True

    def component_sizes(self) -> list[int]:
        return sorted((self.size[v] for v in range(len(self.parent))
                       if self.parent[v] == v), reverse=True)


@dataclass(frozen=True)
class ComponentCensus:
    connected: bool
    component_sizes: tuple[int, ...]
    num_components: int
    y_count: int


def component_labels(graph: KOutGraph) -> tuple[np.ndarray, int]:
    """Root label per node and the number of components."""
    src, dst = graph.arcs
    return _union_find(graph.n, src, dst)


def census(graph: KOutGraph) -> ComponentCensus:
    """Exact component structure; sizes sorted descending."""
    roots, comps = component_labels(graph)
    sizes = np.bincount(roots, minlength=graph.n)
    sizes = np.sort(sizes[sizes > 0])[::-1]
    return ComponentCensus(
        connected=comps == 1,
        component_sizes=tuple(int(s) for s in sizes),
        num_components=int(comps),
        y_count=count_isolated_pairs(graph),
    )


def count_isolated_pairs(graph: KOutGraph) -> int:
    """Pairs {i, j} of class-1 nodes with Gamma_i = {j}, Gamma_j = {i}, and
    no other node selecting either of them.

    Counted straight from the selection sets, without components. For
    ``n == 2`` the single pair is the whole graph and is still counted.
    """
    out_deg = graph.out_degree
    in_deg = np.bincount(graph.sel_idx, minlength=graph.n)
    cand = np.flatnonzero((graph.classes == 0) & (out_deg == 1) & (in_deg == 1))
    if cand.size < 2:
        return 0
    partner = graph.sel_idx[graph.sel_ptr[cand]]
    ok = (partner > cand) & (graph.classes[partner] == 0) & (out_deg[partner] == 1)
    ok &= in_deg[partner] == 1
    ok &= graph.sel_idx[graph.sel_ptr[partner]] == cand
    return int(np.count_nonzero(ok))


def isolated_pairs_from_components(graph: KOutGraph) -> int:
    """Same count as :func:`count_isolated_pairs`, via size-2 components."""
    roots, _ = component_labels(graph)
    sizes = np.bincount(roots, minlength=graph.n)
    in_pair = sizes[roots] == 2
    class1_per_root = np.bincount(roots[in_pair & (graph.classes == 0)],
                                  minlength=graph.n)
    return int(np.count_nonzero((sizes == 2) & (class1_per_root == 2)))


def num_edges(graph: KOutGraph) -> int:
    """Undirected edge count: arcs minus mutually selecting pairs."""
    return int(graph.sel_idx.size - _count_mutual(graph.sel_ptr, graph.sel_idx))
