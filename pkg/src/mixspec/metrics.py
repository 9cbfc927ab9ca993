"""Partition comparison: mis-clustered nodes, edges and triangles, NMI, and
the ground-truth-aware optimal cut of an ordering.

The structure-aware errors match candidate clusters to ground-truth clusters
with the permutation that preserves the most nodes (or edges, or
triangles).  That matching is a linear assignment problem and is solved
exactly with the Hungarian method; the smaller partition is padded with empty
clusters so both sides share one index set.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DomainError
from .graph import Graph, TriangleIndex

METRICS = ("n", "e", "t")


def _labels(p):
    labels = getattr(p, "labels", p)
    return np.asarray(labels, dtype=np.int64)


def _compact(labels):
    _, inv = np.unique(labels, return_inverse=True)
    return inv.ravel()


def _pair(truth, cand):
    a, b = _labels(truth), _labels(cand)
    if a.shape != b.shape:
        raise DomainError(f"partitions cover {a.size} and {b.size} nodes")
    return _compact(a), _compact(b)


def _best_assignment(overlap):
    """Maximum-weight matching on a (padded, square) overlap matrix."""
    k = max(overlap.shape)
    sq = np.zeros((k, k))
    sq[: overlap.shape[0], : overlap.shape[1]] = overlap
    rows, cols = linear_sum_assignment(sq, maximize=True)
    return float(sq[rows, cols].sum()), dict(zip(rows.tolist(), cols.tolist()))


def _contingency(a, b):
    ka, kb = a.max() + 1, b.max() + 1
    m = np.zeros((ka, kb))
    np.add.at(m, (a, b), 1.0)
    return m


def epsilon_nodes(truth, cand, raw=False):
    """Number of mis-clustered nodes under the best cluster matching.

    Returns ``(value, assignment)`` where ``assignment`` maps truth cluster
    index to candidate cluster index (indices beyond a partition's size are
    padding).  The summed symmetric differences over matched pairs count
    every misplaced node twice; ``raw=True`` returns that sum instead.
    """
    a, b = _pair(truth, cand)
    best, sigma = _best_assignment(_contingency(a, b))
    missed = int(round(a.size - best))
    return (2 * missed if raw else missed), sigma


def _structure_overlap(a, b, members):
    """Per (truth, candidate) cluster pair: structures inside both."""
    ka, kb = a.max() + 1, b.max() + 1
    m = np.zeros((ka, kb))
    if members.size == 0:
        return m, 0
    ta, tb = a[members], b[members]
    same_a = (ta == ta[:, :1]).all(axis=1)
    same_b = (tb == tb[:, :1]).all(axis=1)
    inside = same_a & same_b
    np.add.at(m, (ta[inside, 0], tb[inside, 0]), 1.0)
    return m, int(same_a.sum())


def _structures(counter, graph, triangles):
    if counter in ("edge", "e"):
        if graph is None:
            raise DomainError("edge errors need the graph")
        return graph.edges()
    if counter in ("triangle", "t"):
        if triangles is None:
            raise DomainError("triangle errors need the triangle index")
        return triangles.triangles
    raise DomainError(f"unknown structure counter {counter!r}")


def epsilon_structures(truth, cand, counter, graph: Graph | None = None, triangles: TriangleIndex | None = None):
    """Mis-clustered edges (``counter="edge"``) or triangles (``"triangle"``).

    Structures inside a ground-truth cluster that do not stay together inside
    the matched candidate cluster, for the matching that keeps the most.
    Returns ``(value, assignment)``.
    """
    a, b = _pair(truth, cand)
    members = np.asarray(_structures(counter, graph, triangles), dtype=np.int64)
    overlap, total = _structure_overlap(a, b, members)
    best, sigma = _best_assignment(overlap)
    return int(round(total - best)), sigma


def entropy(labels) -> float:
    p = np.bincount(_compact(_labels(labels))) / len(_labels(labels))
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def mutual_information(x, y) -> float:
    a, b = _pair(x, y)
    n = a.size
    joint = _contingency(a, b) / n
    pa = joint.sum(axis=1, keepdims=True)
    pb = joint.sum(axis=0, keepdims=True)
    nz = joint > 0
    return float((joint[nz] * np.log(joint[nz] / (pa @ pb)[nz])).sum())


def nmi(truth, cand) -> float:
    """``2 I / (H(truth) + H(cand))`` with natural logs, clamped to [0, 1].

    Two single-cluster partitions have zero entropies; they score 1.
    """
    a, b = _pair(truth, cand)
    ha, hb = entropy(a), entropy(b)
    if ha + hb == 0:
        return 1.0
    val = 2.0 * mutual_information(a, b) / (ha + hb)
    return float(min(1.0, max(0.0, val)))


@dataclass
class EvalReport:
    eps_n: float
    eps_e: float
    eps_t: float
    nmi: float
    assignment: dict = field(default_factory=dict)

    def to_json(self, **kw):
        return json.dumps(asdict(self), **kw)

    def to_csv(self, header=True):
        out = io.StringIO()
        wr = csv.writer(out, lineterminator="\n")
        if header:
            wr.writerow(["eps_n", "eps_e", "eps_t", "nmi"])
        wr.writerow([self.eps_n, self.eps_e, self.eps_t, repr(self.nmi)])
        return out.getvalue()


def evaluate(truth, cand, graph: Graph, triangles: TriangleIndex) -> EvalReport:
    en, sn = epsilon_nodes(truth, cand)
    ee, se = epsilon_structures(truth, cand, "edge", graph=graph)
    et, st = epsilon_structures(truth, cand, "triangle", triangles=triangles)
    return EvalReport(
        eps_n=en, eps_e=ee, eps_t=et, nmi=nmi(truth, cand),
        assignment={"n": sn, "e": se, "t": st},
    )


def metric_value(metric, truth, cand, graph=None, triangles=None) -> float:
    metric = metric.lower()
    if metric in ("n", "eps_n", "nodes"):
        return epsilon_nodes(truth, cand)[0]
    if metric in ("e", "eps_e", "edges"):
        return epsilon_structures(truth, cand, "edge", graph=graph)[0]
    if metric in ("t", "eps_t", "triangles"):
        return epsilon_structures(truth, cand, "triangle", triangles=triangles)[0]
    if metric == "nmi":
        return nmi(truth, cand)
    raise DomainError(f"unknown metric {metric!r}")


@dataclass
class OcutReport:
    metric: str
    best_u: int
    value: float
    curve: np.ndarray = field(repr=False)

    def to_dict(self):
        return {"metric": self.metric, "best_u": self.best_u, "value": self.value, "curve": self.curve.tolist()}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self, header=True):
        out = io.StringIO()
        wr = csv.writer(out, lineterminator="\n")
        if header:
            wr.writerow(["metric", "best_u", "value"])
        wr.writerow([self.metric, self.best_u, self.value])
        return out.getvalue()


def _prefix_overlaps(order, truth, members):
    """Overlap matrices ``(n-1, k, 2)`` of truth clusters with ``{T_u, rest}``."""
    n = order.size
    k = truth.max() + 1
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    if members is None:  # nodes
        first = np.zeros((n + 1, k))
        np.add.at(first, (pos + 1, truth), 1.0)
        inside = np.cumsum(first, axis=0)[1:n]
        total = np.bincount(truth, minlength=k).astype(float)
        return np.stack([inside, total - inside], axis=2)
    if members.size == 0:
        return np.zeros((n - 1, k, 2))
    tl = truth[members]
    same = (tl == tl[:, :1]).all(axis=1)
    mem, lab = members[same], tl[same, 0]
    p = pos[mem]
    lo, hi = p.min(axis=1), p.max(axis=1)
    # inside the prefix once u > hi; inside the rest while u <= lo
    a = np.zeros((n + 1, k))
    np.add.at(a, (hi + 1, lab), 1.0)
    in_prefix = np.cumsum(a, axis=0)[1:n]
    b = np.zeros((n + 1, k))
    np.add.at(b, (lo + 1, lab), 1.0)
    started = np.cumsum(b, axis=0)[1:n]  # members with lo < u
    total = np.bincount(lab, minlength=k).astype(float)
    return np.stack([in_prefix, total - started], axis=2)


def ocut(order, truth, metric="n", graph: Graph | None = None, triangles: TriangleIndex | None = None) -> OcutReport:
    """Smallest error over every prefix split ``{T_u, V - T_u}`` of ``order``.

    Uses the ground truth instead of a cut criterion, so it bounds from below
    what any sweep over the same ordering can reach.
    """
    order = np.asarray(order, dtype=np.int64)
    t = _compact(_labels(truth))
    if order.size != t.size:
        raise DomainError("ordering and truth cover different node counts")
    metric = metric.lower()[:1] if metric.lower() != "nmi" else "nmi"
    if metric == "n":
        members = None
        total = float(t.size)
    elif metric in ("e", "t"):
        members = np.asarray(_structures(metric, graph, triangles), dtype=np.int64)
        tl = t[members] if members.size else np.zeros((0, 1), dtype=np.int64)
        total = float((tl == tl[:, :1]).all(axis=1).sum()) if members.size else 0.0
    else:
        raise DomainError(f"Ocut metric must be one of {METRICS}")
    ov = _prefix_overlaps(order, t, members)
    curve = np.empty(order.size - 1)
    for u in range(order.size - 1):
        curve[u] = total - _best_assignment(ov[u])[0]
    best = int(np.argmin(curve))
    return OcutReport(metric=metric, best_u=best + 1, value=float(curve[best]), curve=curve)
