"""Cut, volume and association primitives, cut criteria and sweep cuts.

Node sets are boolean masks over ``0..n-1`` (any iterable of node indices is
accepted and converted).  Edge quantities carry the suffix ``2`` and triangle
quantities the suffix ``3``:

* ``cut2``: edge weight between ``S`` and its complement;
* ``vol2``: total degree of ``S``;
* ``assoc2``: total degree inside the subgraph induced by ``S``;
* ``cut3``: triangles with vertices on both sides;
* ``vol3``: triangle endpoints in ``S``;
* ``assoc3``: triangle endpoints of triangles lying entirely in ``S``
  (three per such triangle).

A sweep evaluates every prefix of a node ordering.  All prefix statistics are
obtained from difference arrays in ``O(n + m + t)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, UndefinedCriterionError
from .graph import Graph, TriangleIndex, degree_vector
from .operators import check_lambda, mixed_adjacency


class Criterion(str, Enum):
    CON2 = "con2"
    CON3 = "con3"
    CONX = "conx"
    CONGX = "congx"
    NCUT2 = "ncut2"
    NCUT3 = "ncut3"
    NASS2 = "nass2"
    NASS3 = "nass3"
    EXP2 = "exp2"
    EXP3 = "exp3"

    @property
    def maximize(self) -> bool:
        return self in (Criterion.NASS2, Criterion.NASS3)

    @property
    def direction(self) -> str:
        return "maximize" if self.maximize else "minimize"

    def better(self, a, b) -> bool:
        """Whether value ``a`` strictly beats ``b``."""
        return a > b if self.maximize else a < b

    def __str__(self):
        return self.value


ALL_CRITERIA = tuple(Criterion)
TIE_TOL = 1e-12


def as_mask(s, n) -> np.ndarray:
    s = np.asarray(s)
    if s.dtype == bool:
        if s.shape != (n,):
            raise DomainError(f"mask has shape {s.shape}, expected ({n},)")
        return s
    mask = np.zeros(n, dtype=bool)
    mask[s.astype(np.int64)] = True
    return mask


def _matrix(w):
    if isinstance(w, Graph):
        return w.adjacency()
    return sp.csr_matrix(w, dtype=float)


def cut2(s, w) -> float:
    w = _matrix(w)
    x = as_mask(s, w.shape[0]).astype(float)
    return float(x @ (w @ (1.0 - x)))


def vol2(s, w) -> float:
    w = _matrix(w)
    return float(degree_vector(w)[as_mask(s, w.shape[0])].sum())


def assoc2(s, w) -> float:
    w = _matrix(w)
    x = as_mask(s, w.shape[0]).astype(float)
    return float(x @ (w @ x))


def _members(s, ti):
    mask = as_mask(s, ti.n)
    if not len(ti):
        return np.zeros(0, dtype=np.int64)
    return mask[ti.triangles].sum(axis=1)


def cut3(s, ti: TriangleIndex) -> int:
    k = _members(s, ti)
    return int(((k > 0) & (k < 3)).sum())


def vol3(s, ti: TriangleIndex) -> int:
    return int(_members(s, ti).sum())


def assoc3(s, ti: TriangleIndex) -> int:
    return int(3 * (_members(s, ti) == 3).sum())


@dataclass(frozen=True, eq=False)
class CutContext:
    """Everything a criterion needs: the graph, its triangles and ``lam``.

    ``lam`` only matters for the mixed criteria ``conx`` and ``congx``.
    """

    graph: Graph
    triangles: TriangleIndex
    lam: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "lam", check_lambda(self.lam))

    @property
    def n(self):
        return self.graph.n

    @cached_property
    def w(self):
        return self.graph.adjacency()

    @cached_property
    def wx(self):
        return mixed_adjacency(self.graph, self.triangles, self.lam)

    @cached_property
    def degrees(self):
        return self.graph.degrees().astype(float)

    @cached_property
    def dx(self):
        return degree_vector(self.wx)

    def with_lambda(self, lam):
        return CutContext(self.graph, self.triangles, lam)


def _stats_for_set(mask, ctx: CutContext):
    n = ctx.n
    x = mask.astype(float)
    k = _members(mask, ctx.triangles)
    t = len(ctx.triangles)
    deg = ctx.degrees
    return dict(
        size=float(mask.sum()),
        size_c=float(n - mask.sum()),
        cut2=float(x @ (ctx.w @ (1.0 - x))),
        vol2=float(deg[mask].sum()),
        vol2_c=float(deg[~mask].sum()),
        cut3=float(((k > 0) & (k < 3)).sum()),
        vol3=float(k.sum()),
        vol3_c=float(3 * t - k.sum()),
        assoc3=float(3 * (k == 3).sum()),
        assoc3_c=float(3 * (k == 0).sum()),
        cutgx=float(x @ (ctx.wx @ (1.0 - x))),
        volgx=float(ctx.dx[mask].sum()),
        volgx_c=float(ctx.dx[~mask].sum()),
    )


def _ratio(num, den):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    out = np.full(np.broadcast(num, den).shape, np.nan)
    np.divide(num, den, out=out, where=den > 0)
    return out


def _evaluate(c: Criterion, q, lam):
    """Criterion value from precomputed statistics (scalars or arrays)."""
    c = Criterion(c)
    if c is Criterion.CON2:
        return _ratio(q["cut2"], np.minimum(q["vol2"], q["vol2_c"]))
    if c is Criterion.CON3:
        return _ratio(q["cut3"], np.minimum(q["vol3"], q["vol3_c"]))
    if c is Criterion.CONX:
        cx = (1 - lam) * q["cut3"] + lam * q["cut2"]
        vx = (1 - lam) * q["vol3"] + lam * q["vol2"]
        vxc = (1 - lam) * q["vol3_c"] + lam * q["vol2_c"]
        return _ratio(cx, np.minimum(vx, vxc))
    if c is Criterion.CONGX:
        return _ratio(q["cutgx"], np.minimum(q["volgx"], q["volgx_c"]))
    if c is Criterion.NCUT2:
        return _ratio(q["cut2"], q["vol2"]) + _ratio(q["cut2"], q["vol2_c"])
    if c is Criterion.NCUT3:
        return _ratio(q["cut3"], q["vol3"]) + _ratio(q["cut3"], q["vol3_c"])
    if c is Criterion.NASS2:
        a = np.asarray(q["vol2"]) - q["cut2"]
        ac = np.asarray(q["vol2_c"]) - q["cut2"]
        return _ratio(a, q["vol2"]) + _ratio(ac, q["vol2_c"])
    if c is Criterion.NASS3:
        return _ratio(q["assoc3"], q["vol3"]) + _ratio(q["assoc3_c"], q["vol3_c"])
    if c is Criterion.EXP2:
        return _ratio(q["cut2"], np.minimum(q["size"], q["size_c"]))
    if c is Criterion.EXP3:
        return _ratio(q["cut3"], np.minimum(q["size"], q["size_c"]))
    raise ValueError(c)


def criterion_value(c, s, ctx: CutContext) -> float:
    """Value of criterion ``c`` on node set ``s``.

    Raises :class:`UndefinedCriterionError` when a denominator vanishes,
    including the trivial sets ``S = {}`` and ``S = V``.
    """
    c = Criterion(c)
    mask = as_mask(s, ctx.n)
    val = float(_evaluate(c, _stats_for_set(mask, ctx), ctx.lam))
    if not 0 < mask.sum() < ctx.n or np.isnan(val):
        raise UndefinedCriterionError(c, np.flatnonzero(mask).tolist())
    return val


@dataclass
class PrefixStats:
    """Statistics of every prefix ``T_u`` (``u = 1..n-1``) of an ordering."""

    order: np.ndarray
    lam: float
    q: dict = field(repr=False)


def _edge_prefix_cut(pos, rows, cols, weights, n):
    lo = np.minimum(pos[rows], pos[cols])
    hi = np.maximum(pos[rows], pos[cols])
    diff = np.bincount(lo + 1, weights=weights, minlength=n + 1)
    diff -= np.bincount(hi + 1, weights=weights, minlength=n + 1)
    return np.cumsum(diff)[1:n]


def _upper(w):
    u = sp.triu(w, k=1).tocoo()
    return u.row.astype(np.int64), u.col.astype(np.int64), u.data.astype(float)


def prefix_stats(order, ctx: CutContext, mixed=True) -> PrefixStats:
    order = np.asarray(order, dtype=np.int64)
    n = ctx.n
    if n < 2:
        raise DomainError("sweep needs at least two nodes")
    if order.shape != (n,) or not np.array_equal(np.sort(order), np.arange(n)):
        raise DomainError("order must be a permutation of all nodes")
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    u = np.arange(1, n, dtype=float)

    r, c, wts = _upper(ctx.w)
    deg = ctx.degrees
    vol2_prefix = np.cumsum(deg[order])[:-1]
    q = dict(
        size=u,
        size_c=n - u,
        cut2=_edge_prefix_cut(pos, r, c, wts, n),
        vol2=vol2_prefix,
        vol2_c=deg.sum() - vol2_prefix,
    )

    tri = ctx.triangles.triangles
    t = tri.shape[0]
    if t:
        p = np.sort(pos[tri], axis=1)
        diff = np.bincount(p[:, 0] + 1, minlength=n + 1) - np.bincount(p[:, 2] + 1, minlength=n + 1)
        q["cut3"] = np.cumsum(diff)[1:n].astype(float)
        inside = np.cumsum(np.bincount(p[:, 2] + 1, minlength=n + 1))[1:n]
        started = np.cumsum(np.bincount(p[:, 0], minlength=n))[: n - 1]
        q["assoc3"] = 3.0 * inside
        q["assoc3_c"] = 3.0 * (t - started)
        cnt = ctx.triangles.counts().astype(float)
        v3 = np.cumsum(cnt[order])[:-1]
        q["vol3"] = v3
        q["vol3_c"] = 3.0 * t - v3
    else:
        zero = np.zeros(n - 1)
        q.update(cut3=zero, assoc3=zero, assoc3_c=zero, vol3=zero, vol3_c=zero)

    if mixed:
        r, c, wts = _upper(ctx.wx)
        dx = ctx.dx
        vx = np.cumsum(dx[order])[:-1]
        q["cutgx"] = _edge_prefix_cut(pos, r, c, wts, n)
        q["volgx"] = vx
        q["volgx_c"] = dx.sum() - vx
    return PrefixStats(order=order, lam=ctx.lam, q=q)


@dataclass
class SweepCurve:
    """Criterion value at every prefix of ``order``.

    ``values[u - 1]`` belongs to the prefix of length ``u``; undefined prefixes
    hold NaN.  ``best_u`` is the optimizing prefix length (the smallest one on
    ties).
    """

    criterion: Criterion
    order: np.ndarray
    values: np.ndarray
    best_u: int
    best_value: float

    @property
    def best_set(self) -> np.ndarray:
        return np.sort(self.order[: self.best_u])

    def partition_labels(self) -> np.ndarray:
        labels = np.ones(self.order.size, dtype=np.int64)
        labels[self.order[: self.best_u]] = 0
        return labels

    def to_csv(self, fh=None):
        """Write ``u,<criterion>`` rows; returns the text when ``fh`` is None."""
        out = io.StringIO() if fh is None else fh
        wr = csv.writer(out, lineterminator="\n")
        wr.writerow(["u", str(self.criterion)])
        for u, v in enumerate(self.values, start=1):
            wr.writerow([u, "" if np.isnan(v) else repr(float(v))])
        if fh is None:
            return out.getvalue()


def curve_from_stats(c, stats: PrefixStats) -> SweepCurve:
    c = Criterion(c)
    vals = np.asarray(_evaluate(c, stats.q, stats.lam), dtype=float)
    if np.all(np.isnan(vals)):
        raise UndefinedCriterionError(c, [], reason="undefined on every prefix")
    opt = np.nanmax(vals) if c.maximize else np.nanmin(vals)
    # prefix sums accumulate round-off, so near-equal values count as ties
    tied = np.abs(vals - opt) <= TIE_TOL * max(1.0, abs(opt))
    best = int(np.flatnonzero(tied)[0])
    return SweepCurve(criterion=c, order=stats.order, values=vals, best_u=best + 1, best_value=float(vals[best]))


def sweep_cut(order, c, ctx: CutContext) -> SweepCurve:
    """Best prefix of ``order`` under criterion ``c``."""
    c = Criterion(c)
    stats = prefix_stats(order, ctx, mixed=c is Criterion.CONGX)
    return curve_from_stats(c, stats)


def sweep_all(order, criteria, ctx: CutContext) -> dict:
    """Sweep one ordering under several criteria, sharing prefix statistics.

    Criteria undefined on every prefix are left out of the result.
    """
    criteria = [Criterion(c) for c in criteria]
    stats = prefix_stats(order, ctx, mixed=Criterion.CONGX in criteria)
    out = {}
    for c in criteria:
        try:
            out[c] = curve_from_stats(c, stats)
        except UndefinedCriterionError:
            continue
    return out
