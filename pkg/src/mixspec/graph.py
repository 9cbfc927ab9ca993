"""Graph storage, edge-list ingestion and triangle enumeration.

A :class:`Graph` is an immutable, undirected, unweighted simple graph kept in
compressed sparse row form.  :func:`enumerate_triangles` lists every triangle
once and derives the triangle adjacency matrix ``wt`` (entry ``(i, j)`` is the
number of triangles containing both ``i`` and ``j``) together with its row
sums ``dt``.
"""

from __future__ import annotations

import hashlib
import io
import logging
import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import EmptyGraphError, ParseError

log = logging.getLogger(__name__)


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph on nodes ``0..n-1``.

    ``indptr``/``indices`` hold the sorted, symmetric neighbor lists.  ``ids``
    maps each internal node to the identifier it had in the source data.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    ids: np.ndarray
    dropped_self_loops: int = 0

    def __post_init__(self):
        object.__setattr__(self, "indptr", _frozen(self.indptr))
        object.__setattr__(self, "indices", _frozen(self.indices))
        object.__setattr__(self, "ids", _frozen(self.ids))

    @classmethod
    def from_edges(cls, edges, n=None, ids=None, dropped_self_loops=0):
        """Build from an ``(m, 2)`` array of internal node pairs.

        Duplicates, reversed pairs and self-loops are removed.
        """
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        loops = e[:, 0] == e[:, 1]
        e = e[~loops]
        if n is None:
            n = int(e.max()) + 1 if e.size else 0
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint outside 0..n-1")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        keys = np.unique(lo * n + hi)
        lo, hi = keys // n, keys % n
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        a = sp.csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
        a.sort_indices()
        if ids is None:
            ids = np.arange(n)
        return cls(
            n=int(n),
            indptr=a.indptr.astype(np.int64),
            indices=a.indices.astype(np.int64),
            ids=np.asarray(ids),
            dropped_self_loops=int(dropped_self_loops) + int(loops.sum()),
        )

    @property
    def m(self) -> int:
        return int(self.indices.size // 2)

    def neighbors(self, i):
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def degrees(self):
        return np.diff(self.indptr)

    def edges(self):
        """Each undirected edge once, as an ``(m, 2)`` array with ``i < j``."""
        rows = np.repeat(np.arange(self.n), self.degrees())
        keep = rows < self.indices
        return np.column_stack([rows[keep], self.indices[keep]])

    def adjacency(self):
        """Unweighted adjacency matrix ``W`` as CSR float64."""
        data = np.ones(self.indices.size)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def has_edge(self, i, j) -> bool:
        nb = self.neighbors(i)
        k = np.searchsorted(nb, j)
        return bool(k < nb.size and nb[k] == j)

    def subgraph(self, nodes):
        """Induced subgraph on ``nodes`` (kept in the given order)."""
        nodes = np.asarray(nodes, dtype=np.int64)
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[nodes] = np.arange(nodes.size)
        e = self.edges()
        e = remap[e]
        e = e[(e >= 0).all(axis=1)]
        return Graph.from_edges(e, n=nodes.size, ids=self.ids[nodes])

    def index_of(self, original_ids):
        """Internal indices for a sequence of original identifiers."""
        lookup = {v: i for i, v in enumerate(self.ids.tolist())}
        out = []
        for v in original_ids:
            try:
                out.append(lookup[v])
            except KeyError:
                raise KeyError(f"unknown node id {v!r}") from None
        return np.asarray(out, dtype=np.int64)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(np.int64(self.n).tobytes())
        h.update(self.indptr.astype(np.int64).tobytes())
        h.update(self.indices.astype(np.int64).tobytes())
        return h.hexdigest()

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _open_text(source):
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode())
    if isinstance(source, (str, os.PathLike)):
        return open(source, encoding="utf-8")
    if isinstance(source, io.TextIOBase):
        return source
    # binary stream
    return io.TextIOWrapper(source, encoding="utf-8")


def load_edge_list(source) -> Graph:
    """Parse a whitespace-separated integer edge list.

    ``source`` may be a path, raw bytes or an open (text or binary) stream.
    Lines starting with ``#`` and blank lines are skipped.  Node ids are
    remapped to ``0..n-1`` in order of first appearance; duplicate and
    reversed edges collapse and self-loops are dropped with a warning.
    """
    fh = _open_text(source)
    close = isinstance(source, (str, os.PathLike))
    ids: dict[int, int] = {}
    pairs = []
    try:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            tok = s.split()
            if len(tok) < 2:
                raise ParseError(f"expected two node ids, got {s!r}", lineno)
            try:
                a, b = int(tok[0]), int(tok[1])
            except ValueError:
                raise ParseError(f"non-integer token in {s!r}", lineno) from None
            for v in (a, b):
                if v not in ids:
                    ids[v] = len(ids)
            pairs.append((ids[a], ids[b]))
    finally:
        if close:
            fh.close()
    if not pairs:
        raise EmptyGraphError("edge list contains no edges")
    e = np.asarray(pairs, dtype=np.int64)
    loops = int((e[:, 0] == e[:, 1]).sum())
    if loops:
        warnings.warn(f"dropped {loops} self-loop(s)", stacklevel=2)
    # a node that only carried a self-loop stays as an isolated node
    return Graph.from_edges(e, n=len(ids), ids=np.fromiter(ids.keys(), dtype=np.int64, count=len(ids)))


def write_edge_list(g: Graph, path, original_ids=True):
    e = g.edges()
    if original_ids:
        e = g.ids[e]
    with open(path, "w", encoding="utf-8") as fh:
        for a, b in e:
            fh.write(f"{a} {b}\n")


@dataclass(frozen=True, eq=False)
class TriangleIndex:
    """All triangles of a graph plus the derived triangle adjacency.

    ``triangles`` is a ``(t, 3)`` array of node triples with ``i < j < k``,
    sorted lexicographically.  ``wt`` is the symmetric CSR matrix of per-pair
    triangle counts and ``dt`` its row sums.
    """

    n: int
    triangles: np.ndarray
    wt: sp.csr_matrix = field(repr=False)
    dt: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "triangles", _frozen(self.triangles))
        object.__setattr__(self, "dt", _frozen(self.dt))

    def __len__(self):
        return int(self.triangles.shape[0])

    def incidence(self):
        """Node-to-triangle incidence as CSR ``(n, t)`` 0/1 matrix."""
        t = len(self)
        rows = self.triangles.ravel()
        cols = np.repeat(np.arange(t), 3)
        return sp.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(self.n, t))

    def counts(self):
        """Number of triangles at each node (``dt / 2``)."""
        return np.bincount(self.triangles.ravel(), minlength=self.n)

    def count_within(self, mask) -> int:
        """Triangles with all three vertices inside the boolean ``mask``."""
        mask = np.asarray(mask, dtype=bool)
        if not len(self):
            return 0
        return int(mask[self.triangles].all(axis=1).sum())


def _wt_from_triples(tri, n):
    if tri.size:
        i, j, k = tri[:, 0], tri[:, 1], tri[:, 2]
        rows = np.concatenate([i, j, i, k, j, k])
        cols = np.concatenate([j, i, k, i, k, j])
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    wt = sp.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))
    wt.sum_duplicates()
    wt.sort_indices()
    dt = np.asarray(wt.sum(axis=1)).ravel()
    return wt, dt


def enumerate_triangles(g: Graph) -> TriangleIndex:
    """List each triangle once with the degree-ordered forward algorithm.

    Edges are oriented from lower to higher (degree, id) rank, so every
    triangle is discovered exactly once by intersecting out-neighborhoods.
    """
    n = g.n
    deg = g.degrees()
    rank = np.empty(n, dtype=np.int64)
    rank[np.lexsort((np.arange(n), deg))] = np.arange(n)
    out = []
    for u in range(n):
        nb = g.neighbors(u)
        out.append(set(nb[rank[nb] > rank[u]].tolist()))
    found = []
    for u in range(n):
        ou = out[u]
        for v in ou:
            common = ou & out[v]
            for w in common:
                found.append((u, v, w))
    tri = np.sort(np.asarray(found, dtype=np.int64).reshape(-1, 3), axis=1)
    if tri.size:
        tri = tri[np.lexsort((tri[:, 2], tri[:, 1], tri[:, 0]))]
    wt, dt = _wt_from_triples(tri, n)
    return TriangleIndex(n=n, triangles=tri, wt=wt, dt=dt)


def degree_vector(w) -> np.ndarray:
    """Row sums of a (symmetric) weight matrix."""
    return np.asarray(w.sum(axis=1), dtype=float).ravel()


def save_triangle_index(ti: TriangleIndex, path):
    np.savez_compressed(path, n=np.int64(ti.n), triangles=ti.triangles)


def load_triangle_index(path) -> TriangleIndex:
    with np.load(path) as z:
        n = int(z["n"])
        tri = np.asarray(z["triangles"], dtype=np.int64).reshape(-1, 3)
    wt, dt = _wt_from_triples(tri, n)
    return TriangleIndex(n=n, triangles=tri, wt=wt, dt=dt)


def cached_triangles(g: Graph, cache_dir) -> TriangleIndex:
    """Enumerate triangles, reusing an on-disk cache keyed by the graph hash."""
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"triangles-{g.content_hash()[:32]}.npz"
    if path.exists():
        log.debug("triangle cache hit %s", path)
        return load_triangle_index(path)
    ti = enumerate_triangles(g)
    save_triangle_index(ti, path)
    return ti
