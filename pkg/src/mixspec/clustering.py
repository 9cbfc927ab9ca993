"""End-to-end clustering: the two mixed-order methods, their single-order
special cases, and multiway clustering of spectral embeddings.

Bi-partitioning sorts nodes by one eigenvector and sweeps the ordering with a
cut criterion.  Method tags:

========  =====================  ================
tag       operator               fixed ``lam``
========  =====================  ================
``gl``    mixed Laplacian L_X    caller's choice
``rw``    mixed similarity H     caller's choice
``shi``   H (edges only = P)     1
``ng``    L_X (edges only = L)   1
``msc``   L_X (triangles only)   0
``stsc``  H (triangles only = A) 0
========  =====================  ================

The pseudo-criterion ``"km"`` replaces the sweep by 2-means on the embedding.
"""

from __future__ import annotations

import json
import logging
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.csgraph as csgraph

from .cuts import Criterion, CutContext, SweepCurve, criterion_value, sweep_all
from .errors import DisconnectedGraphError, DomainError, UndefinedCriterionError
from .graph import Graph, TriangleIndex
from .operators import build_gl, build_rw, check_lambda
from .spectral import largest_eigenpairs, smallest_eigenpairs_sym

log = logging.getLogger(__name__)

DEFAULT_SEED = 42
KMEANS = "km"

# method tag -> (operator family, fixed lambda or None)
METHODS = {
    "gl": ("gl", None),
    "rw": ("rw", None),
    "shi": ("rw", 1.0),
    "ng": ("gl", 1.0),
    "msc": ("gl", 0.0),
    "stsc": ("rw", 0.0),
}


def resolve_method(method, lam=None):
    try:
        family, fixed = METHODS[method]
    except KeyError:
        raise DomainError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    if fixed is not None:
        return family, fixed
    if lam is None:
        raise DomainError(f"method {method!r} needs a mixing parameter")
    return family, check_lambda(lam)


@dataclass(frozen=True, eq=False)
class Partition:
    """Assignment of nodes ``0..n-1`` to clusters ``0..k-1``, none empty."""

    labels: np.ndarray
    k: int

    @classmethod
    def from_labels(cls, labels):
        _, compact = np.unique(np.asarray(labels), return_inverse=True)
        compact = compact.astype(np.int64).ravel()
        compact.setflags(write=False)
        return cls(labels=compact, k=int(compact.max()) + 1 if compact.size else 0)

    @classmethod
    def from_sets(cls, sets, n):
        labels = np.full(n, -1, dtype=np.int64)
        for c, s in enumerate(sets):
            labels[np.asarray(list(s), dtype=np.int64)] = c
        if (labels < 0).any():
            raise DomainError("sets do not cover every node")
        return cls.from_labels(labels)

    @property
    def n(self):
        return int(self.labels.size)

    def clusters(self):
        return [np.flatnonzero(self.labels == c) for c in range(self.k)]

    def sizes(self):
        return np.bincount(self.labels, minlength=self.k)


@dataclass
class ClusterRun:
    partition: Partition
    method: str
    lam: float
    criterion: str
    seed: int
    value: float = float("nan")
    curve: SweepCurve | None = field(default=None, repr=False)
    diagnostics: dict = field(default_factory=dict, repr=False)

    def to_dict(self, graph: Graph | None = None):
        ids = graph.ids.tolist() if graph is not None else list(range(self.partition.n))
        return {
            "method": self.method,
            "lambda": self.lam,
            "criterion": self.criterion,
            "criterion_value": None if np.isnan(self.value) else self.value,
            "seed": self.seed,
            "k": self.partition.k,
            "nodes": ids,
            "labels": self.partition.labels.tolist(),
            "diagnostics": _jsonable(self.diagnostics),
        }

    def to_json(self, graph: Graph | None = None, **kw):
        return json.dumps(self.to_dict(graph), **kw)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


@dataclass
class Ordering:
    """Sorted nodes and the eigen data behind them."""

    order: np.ndarray
    scores: np.ndarray
    eigenvalues: np.ndarray
    diagnostics: dict


def _gl_components(wx):
    ncomp, comp = csgraph.connected_components(wx, directed=False)
    return ncomp, comp


def spectral_ordering(g: Graph, ti: TriangleIndex, family: str, lam, seed=DEFAULT_SEED, fill="zero") -> Ordering:
    """Node ordering from the second eigenvector of the chosen operator.

    ``gl``: ascending entries of ``D_X^-1/2 v`` for the second-smallest
    eigenvector ``v`` of ``L_X``.  ``rw``: ascending entries of the
    second-largest (by real part) eigenvector of ``H``.
    Raises :class:`DisconnectedGraphError` when ``G_X`` is disconnected.
    """
    t0 = time.perf_counter()
    diag = {}
    if family == "gl":
        op = build_gl(g, ti, lam)
        t1 = time.perf_counter()
        ncomp, _ = _gl_components(op.wx)
        if ncomp > 1:
            raise DisconnectedGraphError(ncomp)
        eig = smallest_eigenpairs_sym(op.lx, 2, seed=seed)
        scores = eig.vectors[:, 1] / np.sqrt(op.dx)
    elif family == "rw":
        op = build_rw(g, ti, lam, fill=fill)
        t1 = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            eig = largest_eigenpairs(op.h, 2, seed=seed)
        scores = eig.vectors[:, 1]
        diag["zero_rows"] = int(op.zero_rows.size)
    else:
        raise DomainError(f"unknown operator family {family!r}")
    t2 = time.perf_counter()
    diag.update(
        eigenvalues=eig.values.tolist(),
        residuals=eig.residuals.tolist(),
        solver=eig.solver,
        eigen_warnings=list(eig.warnings),
        timings={"operator": t1 - t0, "eigensolve": t2 - t1},
    )
    order = np.argsort(scores, kind="stable")
    return Ordering(order=order, scores=scores, eigenvalues=eig.values, diagnostics=diag)


def _component_split(g, ti, lam, criteria, method, seed):
    """Bi-partition of a disconnected mixed graph along its components.

    Returned only for criteria the split optimizes outright (zero cut, or
    perfect association); ``None`` otherwise.
    """
    from .operators import mixed_adjacency

    wx = mixed_adjacency(g, ti, lam)
    ncomp, comp = _gl_components(wx)
    mask = comp == comp[0]
    ctx = CutContext(g, ti, lam)
    runs = {}
    for c in criteria:
        c = Criterion(c)
        try:
            v = criterion_value(c, mask, ctx)
        except UndefinedCriterionError:
            continue
        ideal = 2.0 if c.maximize else 0.0
        if abs(v - ideal) <= 1e-12:
            labels = np.where(mask, 0, 1)
            runs[c] = ClusterRun(
                Partition.from_labels(labels), method, lam, c.value, seed, value=v,
                diagnostics={"component_split": True, "n_components": int(ncomp)},
            )
    return runs


def bipartition_all(g, ti, method, lam=None, criteria=tuple(Criterion), seed=DEFAULT_SEED, fill="zero") -> dict:
    """Sweep one spectral ordering under several criteria.

    Returns ``{criterion tag: ClusterRun}``; ``"km"`` in ``criteria`` adds a
    2-means run on the same operator.
    """
    family, lam = resolve_method(method, lam)
    want_km = KMEANS in [str(c) for c in criteria]
    crits = [Criterion(c) for c in criteria if str(c) != KMEANS]
    out = {}
    try:
        ordering = spectral_ordering(g, ti, family, lam, seed=seed, fill=fill)
    except DisconnectedGraphError:
        split = _component_split(g, ti, lam, crits, method, seed)
        if not split and crits:
            raise
        out.update({c.value: r for c, r in split.items()})
        if want_km:
            out[KMEANS] = multiway(g, ti, method, lam, 2, seed=seed)
        return out
    ctx = CutContext(g, ti, lam)
    t0 = time.perf_counter()
    curves = sweep_all(ordering.order, crits, ctx)
    sweep_time = time.perf_counter() - t0
    for c, curve in curves.items():
        diag = dict(ordering.diagnostics)
        diag["timings"] = dict(diag["timings"], sweep=sweep_time)
        out[c.value] = ClusterRun(
            Partition.from_labels(curve.partition_labels()), method, lam, c.value, seed,
            value=curve.best_value, curve=curve, diagnostics=diag,
        )
    if want_km:
        out[KMEANS] = multiway(g, ti, method, lam, 2, seed=seed)
    return out


def bipartition(g, ti, method, lam=None, criterion=Criterion.CON2, seed=DEFAULT_SEED, fill="zero") -> ClusterRun:
    runs = bipartition_all(g, ti, method, lam, [criterion], seed=seed, fill=fill)
    key = str(Criterion(criterion)) if str(criterion) != KMEANS else KMEANS
    if key not in runs:
        raise UndefinedCriterionError(criterion, [], reason="undefined on every sweep prefix")
    return runs[key]


def mosc_gl(g, ti, lam, criterion=Criterion.CONGX, seed=DEFAULT_SEED) -> ClusterRun:
    """Mixed-order Laplacian bi-partition."""
    return bipartition(g, ti, "gl", lam, criterion, seed)


def mosc_rw(g, ti, lam, criterion=Criterion.CON2, seed=DEFAULT_SEED, fill="zero") -> ClusterRun:
    """Mixed-order random-walk bi-partition."""
    return bipartition(g, ti, "rw", lam, criterion, seed, fill=fill)


def sc_shi(g, ti, criterion=Criterion.NCUT2, seed=DEFAULT_SEED) -> ClusterRun:
    return bipartition(g, ti, "shi", None, criterion, seed)


def sc_ng(g, ti, k=2, criterion=KMEANS, seed=DEFAULT_SEED) -> ClusterRun:
    """Row-normalized Laplacian embedding + k-means, or a sweep when
    ``criterion`` names a cut criterion (``k`` must then be 2)."""
    if criterion == KMEANS:
        return multiway(g, ti, "ng", None, k, seed=seed)
    if k != 2:
        raise DomainError("sweep cuts produce two clusters")
    return bipartition(g, ti, "ng", None, criterion, seed)


def msc(g, ti, criterion=Criterion.CON3, seed=DEFAULT_SEED) -> ClusterRun:
    return bipartition(g, ti, "msc", None, criterion, seed)


def stsc(g, ti, criterion=Criterion.CON3, seed=DEFAULT_SEED) -> ClusterRun:
    return bipartition(g, ti, "stsc", None, criterion, seed)


def kmeans(points, k, seed=DEFAULT_SEED, restarts=20, max_iter=300) -> np.ndarray:
    """Lloyd's k-means with k-means++ seeding, best of ``restarts`` by inertia."""
    from sklearn.cluster import KMeans
    from sklearn.exceptions import ConvergenceWarning

    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if not 1 <= k <= points.shape[0]:
        raise DomainError(f"k={k} must lie in 1..{points.shape[0]}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        km = KMeans(
            n_clusters=k, init="k-means++", n_init=restarts, max_iter=max_iter,
            random_state=seed, algorithm="lloyd",
        ).fit(points)
    return km.labels_.astype(np.int64)


def embedding(g, ti, method, lam, k, seed=DEFAULT_SEED, fill="zero"):
    """Spectral node embedding used for multiway clustering."""
    family, lam = resolve_method(method, lam)
    if not 1 <= k <= g.n:
        raise DomainError(f"k={k} must lie in 1..{g.n}")
    if family == "gl":
        op = build_gl(g, ti, lam)
        eig = smallest_eigenpairs_sym(op.lx, k, seed=seed)
        x = eig.vectors.copy()
        nrm = np.linalg.norm(x, axis=1)
        np.divide(x, nrm[:, None], out=x, where=nrm[:, None] > 0)
    else:
        op = build_rw(g, ti, lam, fill=fill)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            eig = largest_eigenpairs(op.h, k, seed=seed)
        x = eig.vectors
    return x, eig


def multiway(g, ti, method, lam, k, seed=DEFAULT_SEED, restarts=20, fill="zero") -> ClusterRun:
    """k-way clustering of the first ``k`` eigenvectors.

    Laplacian methods take the ``k`` smallest eigenvectors of ``L_X`` with
    rows scaled to unit length; random-walk methods take the ``k`` largest
    eigenvectors of ``H`` as they are.
    """
    if k < 2:
        raise DomainError("multiway clustering needs k >= 2")
    if k > g.n:
        raise DomainError(f"k={k} exceeds the number of nodes {g.n}")
    family, lam = resolve_method(method, lam)
    t0 = time.perf_counter()
    x, eig = embedding(g, ti, method, lam, k, seed=seed, fill=fill)
    t1 = time.perf_counter()
    labels = kmeans(x, k, seed=seed, restarts=restarts)
    t2 = time.perf_counter()
    part = Partition.from_labels(labels)
    diag = {
        "eigenvalues": eig.values.tolist(),
        "solver": eig.solver,
        "eigen_warnings": list(eig.warnings),
        "requested_k": k,
        "empty_clusters": k - part.k,
        "timings": {"embedding": t1 - t0, "kmeans": t2 - t1},
    }
    return ClusterRun(part, method, lam, KMEANS, seed, diagnostics=diag)


def run_method(g, ti, method, lam=None, criterion=KMEANS, k=2, seed=DEFAULT_SEED) -> ClusterRun:
    """Dispatch to a sweep cut or to k-means depending on ``criterion``."""
    if criterion == KMEANS or k > 2:
        return multiway(g, ti, method, lam, k, seed=seed)
    return bipartition(g, ti, method, lam, criterion, seed=seed)
