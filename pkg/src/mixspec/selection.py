"""Choosing the mixing parameter ``lam`` from a grid.

Three modes:

* ``cut-criterion``: bi-partition at each grid value and keep the one whose
  partition scores best under a cut criterion on the input graph;
* ``triangle-density``: k-way cluster at each grid value and keep the one
  maximizing the summed per-cluster triangle density
  ``sum_c triangles(S_c) / |S_c|``;
* ``oracle``: keep the value with the smallest error against a known ground
  truth.  Reference only; it peeks at the answer.

Ties go to the smaller ``lam`` (more triangle weight).
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .clustering import DEFAULT_SEED, KMEANS, ClusterRun, bipartition, multiway
from .cuts import Criterion, CutContext, criterion_value
from .errors import DomainError, MixspecError
from .graph import TriangleIndex
from .metrics import metric_value
from .operators import check_lambda

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LambdaGrid:
    values: tuple = tuple(round(0.1 * i, 1) for i in range(11))

    def __post_init__(self):
        vals = tuple(check_lambda(v) for v in self.values)
        if not vals:
            raise DomainError("lambda grid is empty")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise DomainError("lambda grid must be strictly ascending")
        object.__setattr__(self, "values", vals)

    @classmethod
    def parse(cls, text):
        return cls(tuple(float(v) for v in str(text).split(",")))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


DEFAULT_GRID = LambdaGrid()


@dataclass
class SelectionReport:
    mode: str
    scores: dict
    chosen: float
    maximize: bool
    run: ClusterRun | None = field(default=None, repr=False)
    runs: dict = field(default_factory=dict, repr=False)
    notes: list = field(default_factory=list)

    def to_csv(self):
        out = io.StringIO()
        wr = csv.writer(out, lineterminator="\n")
        wr.writerow(["lambda", "score"])
        for lam, s in self.scores.items():
            wr.writerow([lam, repr(float(s))])
        return out.getvalue()

    def to_dict(self):
        return {
            "mode": self.mode,
            "chosen": self.chosen,
            "direction": "maximize" if self.maximize else "minimize",
            "scores": {str(k): float(v) for k, v in self.scores.items()},
            "notes": list(self.notes),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _pick(scores, maximize):
    best = None
    for lam in sorted(scores):
        s = scores[lam]
        if best is None or (s > scores[best] if maximize else s < scores[best]):
            best = lam
    return best


def auto_lambda_cut(g, ti, method, criterion, grid=DEFAULT_GRID, seed=DEFAULT_SEED, score_lambda=0.5) -> SelectionReport:
    """Grid value whose sweep-cut partition best satisfies ``criterion``.

    Each partition is rescored on the input graph; the mixed criteria use the
    fixed ``score_lambda`` so scores stay comparable across the grid.
    """
    c = Criterion(criterion)
    ctx = CutContext(g, ti, score_lambda)
    scores, runs, notes = {}, {}, []
    for lam in grid:
        try:
            run = bipartition(g, ti, method, lam, c, seed=seed)
            mask = run.partition.labels == 0
            scores[lam] = criterion_value(c, mask, ctx)
            runs[lam] = run
        except MixspecError as exc:
            notes.append(f"lambda={lam} excluded: {exc}")
    if not scores:
        raise DomainError(f"criterion {c} undefined at every grid value: {notes}")
    chosen = _pick(scores, c.maximize)
    return SelectionReport("cut-criterion", scores, chosen, c.maximize, runs[chosen], runs, notes)


def triangle_density(partition, ti: TriangleIndex) -> float:
    """``sum over clusters of (triangles inside the cluster) / cluster size``."""
    labels = np.asarray(getattr(partition, "labels", partition))
    if not len(ti):
        return 0.0
    tl = labels[ti.triangles]
    inside = (tl == tl[:, :1]).all(axis=1)
    k = labels.max() + 1
    per = np.bincount(tl[inside, 0], minlength=k).astype(float)
    sizes = np.bincount(labels, minlength=k).astype(float)
    return float(np.sum(per[sizes > 0] / sizes[sizes > 0]))


def auto_lambda_density(g, ti, method, k, grid=DEFAULT_GRID, seed=DEFAULT_SEED, restarts=20) -> SelectionReport:
    """Grid value whose k-means partition has the largest triangle density."""
    scores, runs, notes = {}, {}, []
    for lam in grid:
        try:
            run = multiway(g, ti, method, lam, k, seed=seed, restarts=restarts)
        except MixspecError as exc:
            notes.append(f"lambda={lam} excluded: {exc}")
            continue
        if run.partition.k < k:
            notes.append(f"lambda={lam}: {k - run.partition.k} empty cluster(s), scored on the rest")
        scores[lam] = triangle_density(run.partition, ti)
        runs[lam] = run
    if not scores:
        raise DomainError(f"no grid value produced a clustering: {notes}")
    chosen = _pick(scores, True)
    return SelectionReport("triangle-density", scores, chosen, True, runs[chosen], runs, notes)


def oracle_lambda(
    g, ti, method, truth, metric="n", grid=DEFAULT_GRID, criterion=KMEANS, k=2, seed=DEFAULT_SEED
) -> SelectionReport:
    """Grid value with the smallest error (largest NMI) against ``truth``."""
    maximize = metric.lower() == "nmi"
    scores, runs, notes = {}, {}, []
    for lam in grid:
        try:
            if criterion == KMEANS or k > 2:
                run = multiway(g, ti, method, lam, k, seed=seed)
            else:
                run = bipartition(g, ti, method, lam, criterion, seed=seed)
        except MixspecError as exc:
            notes.append(f"lambda={lam} excluded: {exc}")
            continue
        scores[lam] = metric_value(metric, truth, run.partition, graph=g, triangles=ti)
        runs[lam] = run
    if not scores:
        raise DomainError(f"no grid value produced a clustering: {notes}")
    chosen = _pick(scores, maximize)
    return SelectionReport("oracle", scores, chosen, maximize, runs[chosen], runs, notes)
