"""Sampling realizations of H(n; mu, K).

Selections are kept in CSR layout: node ``v`` selected
``sel_idx[sel_ptr[v]:sel_ptr[v + 1]]``, sorted ascending. The undirected
adjacency (u ~ v iff either selected the other) is derived from it on demand.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, TextIO

import numpy as np

from .params import ModelParams
from .rng import STREAM_CLASSES, STREAM_SELECTIONS, SeedSpec

# above this fraction of the pool, shuffle instead of redrawing duplicates
DENSE_FRACTION = 1 / 8

DUMP_HEADER = "# kout v1 n={n}"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class KOutGraph:
    n: int
    classes: np.ndarray
    sel_ptr: np.ndarray
    sel_idx: np.ndarray

    def selections(self, v: int) -> np.ndarray:
        return self.sel_idx[self.sel_ptr[v]:self.sel_ptr[v + 1]]

    @property
    def out_degree(self) -> np.ndarray:
        return np.diff(self.sel_ptr)

    @property
    def arcs(self) -> tuple[np.ndarray, np.ndarray]:
        """Directed selection pairs ``(v, u)`` with ``u`` in Gamma_v."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.out_degree)
        return src, self.sel_idx

    @cached_property
    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """Deduplicated undirected adjacency as ``(ptr, idx)`` CSR arrays."""
        src, dst = self.arcs
        both_src = np.concatenate([src, dst])
        both_dst = np.concatenate([dst, src])
        code = np.unique(both_src * self.n + both_dst)
        rows, cols = np.divmod(code, self.n)
        ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=self.n), out=ptr[1:])
        return _readonly(ptr), _readonly(cols)

    def neighbors(self, v: int) -> np.ndarray:
        ptr, idx = self.adjacency
        return idx[ptr[v]:ptr[v + 1]]

    @property
    def degree(self) -> np.ndarray:
        return np.diff(self.adjacency[0])

    @property
    def num_edges(self) -> int:
        return int(self.adjacency[1].size // 2)

    def edges(self) -> Iterable[tuple[int, int]]:
        ptr, idx = self.adjacency
        for u in range(self.n):
            for v in idx[ptr[u]:ptr[u + 1]]:
                if u < v:
                    yield u, int(v)


def sample_classes(params: ModelParams, seed: SeedSpec) -> np.ndarray:
    """Independent 0-based class labels, class ``i`` with probability ``mu[i]``."""
    if params.r == 1:
        return np.zeros(params.n, dtype=np.int64)
    rng = seed.generator(STREAM_CLASSES)
    cum = np.cumsum(params.mu)
    cum[-1] = np.inf
    return np.searchsorted(cum, rng.random(params.n), side="right").astype(np.int64)


def uniform_subsets(rng: np.random.Generator, m: int, pool: int, k: int) -> np.ndarray:
    """Draw ``m`` independent uniform ``k``-subsets of ``range(pool)``.

    Returns an ``(m, k)`` array, each row sorted ascending.
    """
    if k > pool:
        raise ValueError(f"cannot pick {k} of {pool}")
    if m == 0 or k == 0:
        return np.empty((m, k), dtype=np.int64)
    if k > DENSE_FRACTION * pool:
        rows = np.broadcast_to(np.arange(pool, dtype=np.int64), (m, pool))
        out = rng.permuted(rows, axis=1)[:, :k]
        out.sort(axis=1)
        return out
    # draw with replacement, then redraw repeated entries until all distinct;
    # each round depends only on the distinct values so far, so the result
    # is invariant under relabeling the pool and hence uniform
    out = rng.integers(0, pool, size=(m, k))
    out.sort(axis=1)
    while k > 1:
        rows, cols = np.nonzero(out[:, 1:] == out[:, :-1])
        if rows.size == 0:
            break
        out[rows, cols + 1] = rng.integers(0, pool, size=rows.size)
        touched = np.unique(rows)
        out[touched] = np.sort(out[touched], axis=1)
    return out


def sample_selections(params: ModelParams, classes: np.ndarray,
                      seed: SeedSpec) -> tuple[np.ndarray, np.ndarray]:
    """Uniform ``K[t_v]``-subsets of ``V - {v}`` for every node, in CSR form."""
    n = params.n
    classes = np.asarray(classes)
    if classes.shape != (n,):
        raise ValueError(f"expected {n} class labels, got shape {classes.shape}")
    ks = np.asarray(params.k, dtype=np.int64)
    counts = ks[classes]
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    idx = np.empty(ptr[-1], dtype=np.int64)
    rng = seed.generator(STREAM_SELECTIONS)
    for cls, k in enumerate(params.k):
        nodes = np.flatnonzero(classes == cls)
        if nodes.size == 0:
            continue
        picks = uniform_subsets(rng, nodes.size, n - 1, k)
        # shift positions past v itself; sortedness is preserved
        picks += picks >= nodes[:, None]
        idx[ptr[nodes][:, None] + np.arange(k)] = picks
    return ptr, idx


def build_graph(params: ModelParams, seed: SeedSpec) -> KOutGraph:
    classes = sample_classes(params, seed)
    ptr, idx = sample_selections(params, classes, seed)
    return KOutGraph(params.n, _readonly(classes), _readonly(ptr), _readonly(idx))


def graph_from_selections(classes: Iterable[int],
                          selections: Iterable[Iterable[int]]) -> KOutGraph:
    """Assemble a graph from explicit 0-based classes and selection sets."""
    classes = np.asarray(list(classes), dtype=np.int64)
    sels = [sorted(int(u) for u in s) for s in selections]
    n = classes.size
    if len(sels) != n:
        raise ValueError(f"{n} class labels but {len(sels)} selection sets")
    for v, s in enumerate(sels):
        if len(set(s)) != len(s) or v in s or any(not 0 <= u < n for u in s):
            raise ValueError(f"invalid selection set for node {v}: {s}")
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum([len(s) for s in sels], out=ptr[1:])
    idx = np.fromiter((u for s in sels for u in s), dtype=np.int64, count=ptr[-1])
    return KOutGraph(n, _readonly(classes), _readonly(ptr), _readonly(idx))


def dump_graph(graph: KOutGraph, out: TextIO) -> None:
    """Write the tab-separated debug format; classes are 1-based."""
    out.write(DUMP_HEADER.format(n=graph.n) + "\n")
    for v in range(graph.n):
        sel = ",".join(str(u) for u in graph.selections(v))
        out.write(f"{v}\t{int(graph.classes[v]) + 1}\t{sel}\n")


def dumps_graph(graph: KOutGraph) -> str:
    buf = io.StringIO()
    dump_graph(graph, buf)
    return buf.getvalue()


def load_graph(src: TextIO) -> KOutGraph:
    header = src.readline().strip()
    if not header.startswith("# kout v1 n="):
        raise ValueError(f"not a kout v1 dump: {header!r}")
    n = int(header.split("n=", 1)[1])
    classes = [0] * n
    sels: list[list[int]] = [[] for _ in range(n)]
    seen = 0
    for line in src:
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        node, cls, sel = line.split("\t")
        v = int(node)
        classes[v] = int(cls) - 1
        sels[v] = [int(u) for u in sel.split(",")] if sel else []
        seen += 1
    if seen != n:
        raise ValueError(f"header says n={n} but found {seen} node lines")
    return graph_from_selections(classes, sels)
