"""Benchmark harness: paired-community extraction and report assembly.

``run_benchmark`` clusters every configured network with every method,
lambda mode and criterion, scores each partition against the ground truth,
and writes

* ``grid.csv``: one row per (network, method, mode, criterion);
* ``best.csv``: per (network, method, mode, metric) the best criterion, the
  way the comparison tables report results;
* ``report.json``: both tables plus per-run failures;
* ``timings.csv``: wall-clock per phase (not byte-stable).

Paired-network suites are averaged over their networks per criterion before
the best criterion is picked.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .clustering import DEFAULT_SEED, KMEANS, METHODS, Partition, bipartition_all, multiway
from .cuts import Criterion, CutContext, criterion_value
from .datasets import load_dataset, load_truth, read_labels, with_labelled_nodes
from .errors import ConfigError, DomainError, MixspecError
from .graph import Graph, TriangleIndex, enumerate_triangles, load_edge_list
from .metrics import evaluate
from .selection import DEFAULT_GRID, LambdaGrid, triangle_density

log = logging.getLogger(__name__)

METRIC_KEYS = ("nmi", "eps_n", "eps_e", "eps_t")
GRID_COLUMNS = ["network", "method", "mode", "criterion", "lambda", *METRIC_KEYS, "status"]
BEST_COLUMNS = ["network", "method", "mode", "metric", "value", "criterion"]


# ---------------------------------------------------------------------------
# paired communities


@dataclass
class PairedNetwork:
    graph: Graph
    truth: Partition
    source: str
    communities: tuple
    interaction_edges: int


def load_communities(path, graph: Graph | None = None):
    """One community per line of whitespace-separated original node ids.

    With ``graph`` given, ids are translated to internal indices and an
    unknown id raises :class:`DomainError`.
    """
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            out.append([int(t) for t in s.split()])
    if graph is None:
        return [np.asarray(c, dtype=np.int64) for c in out]
    try:
        return [np.unique(graph.index_of(c)) for c in out]
    except KeyError as exc:
        raise DomainError(f"community references {exc.args[0]}") from None


def extract_paired_communities(
    g: Graph, communities, top_k=500, max_size=200, ti: TriangleIndex | None = None, source="network"
):
    """Build bi-partition benchmark networks from overlapping communities.

    1. Among communities with at most ``max_size`` nodes, keep the ``top_k``
       with the highest triangle density (triangles inside per node).
    2. Pair each with the community sharing the most edges with it; nodes of
       the partner that also belong to the first community stay with the
       first.  Communities with no outgoing edges are skipped.

    ``communities`` hold internal node indices.  Returns ``(pairs, notes)``.
    """
    ti = enumerate_triangles(g) if ti is None else ti
    comms = [np.unique(np.asarray(c, dtype=np.int64)) for c in communities]
    for c in comms:
        if c.size and (c.min() < 0 or c.max() >= g.n):
            raise DomainError("community references a node outside the graph")
    notes = []
    eligible = [i for i, c in enumerate(comms) if 0 < c.size <= max_size]
    dens = {}
    for i in eligible:
        mask = np.zeros(g.n, dtype=bool)
        mask[comms[i]] = True
        dens[i] = ti.count_within(mask) / comms[i].size
    top = sorted(eligible, key=lambda i: (-dens[i], i))[:top_k]

    # node -> communities containing it
    owner_rows = np.concatenate([c for c in comms]) if comms else np.zeros(0, dtype=np.int64)
    owner_cols = np.concatenate([np.full(c.size, i) for i, c in enumerate(comms)]) if comms else owner_rows
    order = np.argsort(owner_rows, kind="stable")
    owner_rows, owner_cols = owner_rows[order], owner_cols[order]
    starts = np.searchsorted(owner_rows, np.arange(g.n + 1))

    pairs = []
    for a in top:
        in_a = np.zeros(g.n, dtype=bool)
        in_a[comms[a]] = True
        cross = np.zeros(len(comms), dtype=np.int64)
        for u in comms[a]:
            for v in g.neighbors(u):
                if in_a[v]:
                    continue
                cross[owner_cols[starts[v] : starts[v + 1]]] += 1
        cross[a] = 0
        if cross.max(initial=0) == 0:
            notes.append(f"community {a}: no edges to any other community, skipped")
            continue
        b = int(np.argmax(cross))
        rest = comms[b][~in_a[comms[b]]]
        nodes = np.concatenate([comms[a], rest])
        labels = np.concatenate([np.zeros(comms[a].size, dtype=np.int64), np.ones(rest.size, dtype=np.int64)])
        pairs.append(
            PairedNetwork(
                graph=g.subgraph(nodes),
                truth=Partition.from_labels(labels),
                source=source,
                communities=(a, b),
                interaction_edges=int(cross[b]),
            )
        )
    return pairs, notes


def write_paired(pairs, out_dir):
    from .datasets import write_labels
    from .graph import write_edge_list

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for i, p in enumerate(pairs):
        stem = f"pair{i:04d}"
        write_edge_list(p.graph, out_dir / f"{stem}.edges")
        write_labels(out_dir / f"{stem}.truth", p.graph, p.truth.labels)
        summary.append({
            "name": stem, "communities": list(p.communities), "n": p.graph.n, "m": p.graph.m,
            "interaction_edges": p.interaction_edges,
        })
    return summary


# ---------------------------------------------------------------------------
# configuration


@dataclass
class NetworkSpec:
    name: str
    graph: Graph
    truth: Partition | None
    k: int
    suite: str


@dataclass
class BenchConfig:
    networks: list = field(default_factory=list)  # of dicts, see from_dict
    methods: tuple = tuple(METHODS)
    modes: tuple = ("0.5", "auto", "oracle")
    criteria: tuple = tuple(c.value for c in Criterion) + (KMEANS,)
    grid: LambdaGrid = DEFAULT_GRID
    seed: int = DEFAULT_SEED
    output_dir: Path = Path("bench-out")
    workers: int = 1
    base_dir: Path = Path(".")

    @classmethod
    def from_dict(cls, d, base_dir="."):
        base = Path(base_dir)
        d = dict(d)
        crit = d.get("criteria", ["all"])
        if crit == "all" or crit == ["all"]:
            crit = [c.value for c in Criterion] + [KMEANS]
        cfg = cls(
            networks=list(d.get("networks", [])),
            methods=tuple(d.get("methods", METHODS)),
            modes=tuple(str(m) for m in d.get("lambda_modes", d.get("modes", ("0.5", "auto", "oracle")))),
            criteria=tuple(crit),
            grid=LambdaGrid(tuple(d["grid"])) if "grid" in d else DEFAULT_GRID,
            seed=int(d.get("seed", DEFAULT_SEED)),
            output_dir=base / d.get("output_dir", "bench-out"),
            workers=int(d.get("workers", 1)),
            base_dir=base,
        )
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path):
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh), base_dir=path.parent)

    def _path(self, p):
        p = Path(p)
        return p if p.is_absolute() else self.base_dir / p

    def validate(self):
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}")
        for c in self.criteria:
            if c != KMEANS:
                try:
                    Criterion(c)
                except ValueError:
                    raise ConfigError(f"unknown criterion {c!r}") from None
        for mode in self.modes:
            if mode not in ("auto", "oracle"):
                try:
                    lam = float(mode)
                except ValueError:
                    raise ConfigError(f"unknown lambda mode {mode!r}") from None
                if not 0 <= lam <= 1:
                    raise ConfigError(f"lambda {lam} outside [0, 1]")
        if not self.networks:
            raise ConfigError("no networks configured")
        for net in self.networks:
            if "dataset" in net:
                continue
            if "communities" in net:
                for key in ("graph", "communities"):
                    if not self._path(net[key]).exists():
                        raise ConfigError(f"{key} file {net[key]} does not exist")
                continue
            if "graph" not in net:
                raise ConfigError(f"network entry {net} has no graph")
            if not self._path(net["graph"]).exists():
                raise ConfigError(f"graph file {net['graph']} does not exist")
            if "truth" in net and not self._path(net["truth"]).exists():
                raise ConfigError(f"truth file {net['truth']} does not exist")
            if "truth" not in net and "oracle" in self.modes:
                raise ConfigError(f"oracle mode needs ground truth for {net.get('name', net['graph'])}")

    def resolve_networks(self):
        """Expand configured entries into concrete :class:`NetworkSpec` objects."""
        out = []
        for net in self.networks:
            if "dataset" in net:
                g, truth = load_dataset(net["dataset"], net.get("data_dir"))
                out.append(NetworkSpec(net.get("name", net["dataset"]), g, truth, int(net.get("k", truth.k)), net.get("name", net["dataset"])))
            elif "communities" in net:
                g = load_edge_list(self._path(net["graph"]))
                comms = load_communities(self._path(net["communities"]), g)
                name = net.get("name", Path(net["graph"]).stem)
                pairs, notes = extract_paired_communities(
                    g, comms, int(net.get("top", 500)), int(net.get("max_size", 200)), source=name
                )
                for note in notes:
                    log.info(note)
                for i, p in enumerate(pairs):
                    out.append(NetworkSpec(f"{name}/{i:04d}", p.graph, p.truth, 2, name))
            else:
                g = load_edge_list(self._path(net["graph"]))
                truth = None
                if "truth" in net:
                    labels_path = self._path(net["truth"])
                    g = with_labelled_nodes(g, read_labels(labels_path))
                    truth = load_truth(labels_path, g)
                name = net.get("name", Path(net["graph"]).stem)
                k = int(net.get("k", truth.k if truth is not None else 2))
                out.append(NetworkSpec(name, g, truth, k, name))
        return out


# ---------------------------------------------------------------------------
# running


def _scores(truth, part, g, ti):
    if truth is None:
        return {k: math.nan for k in METRIC_KEYS}
    rep = evaluate(truth, part, g, ti)
    return {"nmi": rep.nmi, "eps_n": float(rep.eps_n), "eps_e": float(rep.eps_e), "eps_t": float(rep.eps_t)}


def _lambda_runs(net, ti, method, lam, criteria, seed):
    """``{criterion: (run, scores)}`` for one lambda, plus error notes."""
    out, errors = {}, []
    if net.k > 2:
        try:
            run = multiway(net.graph, ti, method, lam, net.k, seed=seed)
            out[KMEANS] = (run, _scores(net.truth, run.partition, net.graph, ti))
        except MixspecError as exc:
            errors.append((KMEANS, str(exc)))
        return out, errors
    try:
        runs = bipartition_all(net.graph, ti, method, lam, criteria, seed=seed)
    except MixspecError as exc:
        return out, [("*", str(exc))]
    for c in criteria:
        if c in runs:
            out[c] = (runs[c], _scores(net.truth, runs[c].partition, net.graph, ti))
        else:
            errors.append((c, "criterion undefined on every prefix"))
    return out, errors


def _row(net, method, mode, crit, lam, scores, status="ok"):
    return {
        "network": net.name, "method": method, "mode": mode, "criterion": crit,
        "lambda": lam, **scores, "status": status,
    }


def _nan_scores():
    return {k: math.nan for k in METRIC_KEYS}


def run_network(net: NetworkSpec, methods, modes, criteria, grid, seed):
    """All grid rows for one network, in a fixed order."""
    rows, timings = [], []
    t0 = time.perf_counter()
    ti = enumerate_triangles(net.graph)
    timings.append({"network": net.name, "phase": "triangles", "seconds": time.perf_counter() - t0})
    criteria = list(criteria) if net.k == 2 else [KMEANS]
    for method in methods:
        family, fixed = METHODS[method]
        cache = {}

        def at(lam):
            if lam not in cache:
                t = time.perf_counter()
                cache[lam] = _lambda_runs(net, ti, method, lam, criteria, seed)
                timings.append({"network": net.name, "phase": f"{method}@{lam}", "seconds": time.perf_counter() - t})
            return cache[lam]

        mode_list = ["fixed"] if fixed is not None else list(modes)
        for mode in mode_list:
            if mode in ("fixed",) or mode not in ("auto", "oracle"):
                lam = fixed if fixed is not None else float(mode)
                runs, errors = at(lam)
                label = "fixed" if fixed is not None else f"{lam:g}"
                for c in criteria:
                    if c in runs:
                        rows.append(_row(net, method, label, c, lam, runs[c][1]))
                    else:
                        msg = next((e for cc, e in errors if cc in (c, "*")), "failed")
                        rows.append(_row(net, method, label, c, lam, _nan_scores(), f"error: {msg}"))
            elif mode == "auto":
                rows.extend(_auto_rows(net, ti, method, criteria, grid, at))
            else:
                if net.truth is None:
                    raise ConfigError(f"oracle mode needs ground truth for {net.name}")
                rows.extend(_oracle_rows(net, method, criteria, grid, at))
    return rows, timings


def _auto_rows(net, ti, method, criteria, grid, at):
    rows = []
    ctx = CutContext(net.graph, ti, 0.5)
    for c in criteria:
        scores = {}
        for lam in grid:
            runs, _ = at(lam)
            if c not in runs:
                continue
            part = runs[c][0].partition
            if c == KMEANS:
                scores[lam] = triangle_density(part, ti)
            else:
                try:
                    scores[lam] = criterion_value(c, part.labels == 0, ctx)
                except MixspecError:
                    continue
        if not scores:
            rows.append(_row(net, method, "auto", c, math.nan, _nan_scores(), "error: no admissible lambda"))
            continue
        maximize = c == KMEANS or Criterion(c).maximize
        best = None
        for lam in sorted(scores):
            if best is None or (scores[lam] > scores[best] if maximize else scores[lam] < scores[best]):
                best = lam
        rows.append(_row(net, method, "auto", c, best, at(best)[0][c][1]))
    return rows


def _oracle_rows(net, method, criteria, grid, at):
    rows = []
    for c in criteria:
        cands = [(lam, at(lam)[0][c][1]) for lam in grid if c in at(lam)[0]]
        if not cands:
            rows.append(_row(net, method, "oracle", c, math.nan, _nan_scores(), "error: no admissible lambda"))
            continue
        best = {}
        for key in METRIC_KEYS:
            pick = max if key == "nmi" else min
            best[key] = pick(s[key] for _, s in cands)
        rows.append(_row(net, method, "oracle", c, math.nan, best))
    return rows


def best_table(rows):
    """Best criterion per (network, method, mode, metric); ties keep the
    first criterion in grid order."""
    groups = {}
    for r in rows:
        if r["status"] != "ok":
            continue
        groups.setdefault((r["network"], r["method"], r["mode"]), []).append(r)
    out = []
    for (net, method, mode), rs in groups.items():
        for key in METRIC_KEYS:
            vals = [(r[key], r["criterion"]) for r in rs if not math.isnan(r[key])]
            if not vals:
                continue
            pick = None
            for v, c in vals:
                if pick is None or (v > pick[0] if key == "nmi" else v < pick[0]):
                    pick = (v, c)
            out.append({"network": net, "method": method, "mode": mode, "metric": key, "value": pick[0], "criterion": pick[1]})
    return out


def average_suites(rows, suite_of):
    """Average ok rows over the networks of each suite (per method, mode, criterion)."""
    acc = {}
    for r in rows:
        suite = suite_of[r["network"]]
        if suite == r["network"] or r["status"] != "ok":
            continue
        key = (suite, r["method"], r["mode"], r["criterion"])
        acc.setdefault(key, []).append(r)
    out = []
    for (suite, method, mode, crit), rs in acc.items():
        scores = {k: float(np.mean([r[k] for r in rs])) for k in METRIC_KEYS}
        out.append({"network": suite, "method": method, "mode": mode, "criterion": crit, "lambda": math.nan, **scores, "status": "ok"})
    return out


def _fmt(v):
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return v


def _write_csv(path, rows, columns):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        wr.writeheader()
        for r in rows:
            wr.writerow({k: _fmt(r.get(k)) for k in columns})


def run_benchmark(cfg: BenchConfig):
    """Run the configured suite and write the report files.

    Per-run failures become ``error:`` rows and never stop the suite.
    Returns a dict with the rows and the written paths.
    """
    nets = cfg.resolve_networks()
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def task(net):
        return run_network(net, cfg.methods, cfg.modes, cfg.criteria, cfg.grid, cfg.seed)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(task, nets))
    else:
        results = [task(net) for net in nets]

    rows = [r for res in results for r in res[0]]
    timings = [t for res in results for t in res[1]]
    suite_of = {n.name: n.suite for n in nets}
    summary_rows = [r for r in rows if suite_of[r["network"]] == r["network"]] + average_suites(rows, suite_of)
    best = best_table(summary_rows)

    paths = {
        "grid": out_dir / "grid.csv",
        "best": out_dir / "best.csv",
        "report": out_dir / "report.json",
        "timings": out_dir / "timings.csv",
    }
    _write_csv(paths["grid"], rows, GRID_COLUMNS)
    _write_csv(paths["best"], best, BEST_COLUMNS)
    _write_csv(paths["timings"], timings, ["network", "phase", "seconds"])
    failures = [r for r in rows if r["status"] != "ok"]
    with open(paths["report"], "w", encoding="utf-8") as fh:
        json.dump(
            {"grid": [{k: _fmt(v) for k, v in r.items()} for r in summary_rows],
             "best": best, "failures": [{k: _fmt(v) for k, v in r.items()} for r in failures]},
            fh, indent=1, sort_keys=True,
        )
    return {"rows": rows, "best": best, "paths": paths, "failures": failures}
