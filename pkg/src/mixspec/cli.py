"""``mixspec`` command-line interface.

Every subcommand writes its result to stdout and exits 0.  Failures exit 1
with a single JSON object ``{"error": <type>, "message": ...}`` on stderr.
A ``--graph`` argument is an edge-list path or the name of a known network
(``zachary`` ships with the package).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bench import BenchConfig, extract_paired_communities, load_communities, run_benchmark, write_paired
from .clustering import DEFAULT_SEED, KMEANS, METHODS, Partition, bipartition_all, multiway, resolve_method, spectral_ordering
from .cuts import Criterion, CutContext, sweep_cut
from .datasets import KNOWN, load_dataset, load_truth, read_labels, with_labelled_nodes
from .errors import DomainError, MixspecError
from .graph import cached_triangles, enumerate_triangles, load_edge_list
from .metrics import evaluate, ocut
from .selection import DEFAULT_GRID, LambdaGrid, auto_lambda_cut, auto_lambda_density, oracle_lambda

log = logging.getLogger("mixspec")


def _load(args, need_truth=False):
    """``(graph, truth or None)`` from ``--graph`` / ``--truth``."""
    src = args.graph
    truth = None
    if not Path(src).exists() and src.lower() in KNOWN:
        g, named_truth = load_dataset(src)
        truth = named_truth
    else:
        g = load_edge_list(src)
    if getattr(args, "truth", None):
        g = with_labelled_nodes(g, read_labels(args.truth))
        truth = load_truth(args.truth, g)
    if need_truth and truth is None:
        raise DomainError("this command needs --truth")
    return g, truth


def _triangles(g, args):
    cache = getattr(args, "cache", None)
    return cached_triangles(g, cache) if cache else enumerate_triangles(g)


def _criteria(text, k):
    if k > 2:
        return [KMEANS]
    if text == "all":
        return [c.value for c in Criterion] + [KMEANS]
    out = []
    for tok in text.split(","):
        if tok != KMEANS:
            Criterion(tok)
        out.append(tok)
    return out


def _emit(obj, fmt, rows=None, columns=None):
    if fmt == "json":
        print(json.dumps(obj, indent=1, sort_keys=True))
        return
    out = io.StringIO()
    wr = csv.writer(out, lineterminator="\n")
    wr.writerow(columns)
    wr.writerows(rows)
    sys.stdout.write(out.getvalue())


# ---------------------------------------------------------------------------


def cmd_triangles(args):
    g, _ = _load(args)
    ti = _triangles(g, args)
    if args.out == "csv":
        ids = g.ids
        _emit(None, "csv", [ids[t].tolist() for t in ti.triangles], ["a", "b", "c"])
    else:
        _emit({"nodes": g.n, "edges": g.m, "triangles": len(ti),
               "per_node": dict(zip(map(str, g.ids.tolist()), ti.counts().tolist()))}, "json")


def _lambda_value(args):
    if args.lam in ("auto", "oracle"):
        return args.lam
    try:
        return float(args.lam)
    except ValueError:
        raise DomainError(f"--lambda must be a number, 'auto' or 'oracle', got {args.lam!r}") from None


def cmd_cluster(args):
    g, truth = _load(args, need_truth=args.lam == "oracle")
    ti = _triangles(g, args)
    lam = _lambda_value(args)
    grid = LambdaGrid.parse(args.grid) if args.grid else DEFAULT_GRID
    family, fixed = METHODS.get(args.method, (None, None))
    criteria = _criteria(args.criterion, args.k)
    selection = {}
    runs = {}
    if fixed is not None or not isinstance(lam, str):
        the_lam = fixed if fixed is not None else lam
        if args.k > 2:
            runs[KMEANS] = multiway(g, ti, args.method, the_lam, args.k, seed=args.seed)
        else:
            runs = bipartition_all(g, ti, args.method, the_lam, criteria, seed=args.seed)
    else:
        for c in criteria:
            try:
                if lam == "auto":
                    rep = (auto_lambda_density(g, ti, args.method, args.k, grid, args.seed) if c == KMEANS
                           else auto_lambda_cut(g, ti, args.method, c, grid, args.seed))
                else:
                    rep = oracle_lambda(g, ti, args.method, truth, args.metric, grid, c, args.k, args.seed)
            except MixspecError as exc:
                log.warning("criterion %s skipped: %s", c, exc)
                continue
            runs[c] = rep.run
            selection[c] = rep.to_dict()
    if not runs:
        raise DomainError("no criterion produced a partition")
    results = []
    for c in criteria:
        if c not in runs:
            continue
        d = runs[c].to_dict(g)
        if c in selection:
            d["selection"] = selection[c]
        if truth is not None:
            rep = evaluate(truth, runs[c].partition, g, ti)
            d["eval"] = {"eps_n": rep.eps_n, "eps_e": rep.eps_e, "eps_t": rep.eps_t, "nmi": rep.nmi}
        results.append(d)
    if args.out == "json":
        _emit(results[0] if len(results) == 1 else results, "json")
    else:
        cols = ["node"] + [d["criterion"] for d in results]
        rows = [[node] + [d["labels"][i] for d in results] for i, node in enumerate(g.ids.tolist())]
        _emit(None, "csv", rows, cols)


def cmd_sweep(args):
    g, _ = _load(args)
    ti = _triangles(g, args)
    family, lam = resolve_method(args.method, float(args.lam) if METHODS[args.method][1] is None else None)
    ordering = spectral_ordering(g, ti, family, lam, seed=args.seed)
    curve = sweep_cut(ordering.order, Criterion(args.criterion), CutContext(g, ti, lam))
    if args.emit_curve:
        sys.stdout.write(curve.to_csv())
        return
    _emit({
        "method": args.method, "lambda": lam, "criterion": curve.criterion.value,
        "best_u": curve.best_u, "value": curve.best_value,
        "prefix": g.ids[curve.best_set].tolist(),
    }, "json")


def cmd_eval(args):
    g, truth = _load(args, need_truth=True)
    ti = _triangles(g, args)
    labels = read_labels(args.labels)
    missing = [v for v in g.ids.tolist() if v not in labels]
    if missing:
        raise DomainError(f"{len(missing)} nodes have no candidate label, e.g. {missing[:5]}")
    cand = Partition.from_labels(np.asarray([labels[v] for v in g.ids.tolist()]))
    rep = evaluate(truth, cand, g, ti)
    if args.out == "csv":
        sys.stdout.write(rep.to_csv())
    else:
        _emit({"eps_n": rep.eps_n, "eps_e": rep.eps_e, "eps_t": rep.eps_t, "nmi": rep.nmi}, "json")


def cmd_ocut(args):
    g, truth = _load(args, need_truth=True)
    ti = _triangles(g, args)
    family, lam = resolve_method(args.method, float(args.lam) if METHODS[args.method][1] is None else None)
    ordering = spectral_ordering(g, ti, family, lam, seed=args.seed)
    rep = ocut(ordering.order, truth, args.metric, graph=g, triangles=ti)
    if args.out == "csv":
        sys.stdout.write(rep.to_csv())
    else:
        d = rep.to_dict()
        if not args.emit_curve:
            d.pop("curve")
        _emit(d, "json")


def cmd_extract_pairs(args):
    g, _ = _load(args)
    comms = load_communities(args.communities, g)
    pairs, notes = extract_paired_communities(g, comms, args.top, args.max_size, source=Path(args.graph).stem)
    if args.out_dir:
        summary = write_paired(pairs, args.out_dir)
    else:
        summary = [{"communities": list(p.communities), "n": p.graph.n, "m": p.graph.m,
                    "interaction_edges": p.interaction_edges} for p in pairs]
    _emit({"pairs": len(pairs), "networks": summary, "notes": notes}, "json")


def cmd_bench(args):
    cfg = BenchConfig.load(args.config)
    if args.output_dir:
        cfg.output_dir = Path(args.output_dir)
    if args.workers:
        cfg.workers = args.workers
    res = run_benchmark(cfg)
    _emit({"rows": len(res["rows"]), "failures": len(res["failures"]),
           "files": {k: str(v) for k, v in res["paths"].items()}}, "json")


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="mixspec", description="Mixed-order spectral clustering toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp, truth=False, truth_required=False):
        sp.add_argument("--graph", required=True, help="edge-list path or known network name")
        if truth:
            sp.add_argument("--truth", required=truth_required, help="'node label' ground-truth file")
        sp.add_argument("--cache", help="directory for cached triangle indexes")

    def method_args(sp):
        sp.add_argument("--method", choices=sorted(METHODS), default="gl")
        sp.add_argument("--lambda", dest="lam", default="0.5")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sp = sub.add_parser("triangles", help="enumerate triangles")
    sp.add_argument("graph")
    sp.add_argument("--cache")
    sp.add_argument("--out", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_triangles)

    sp = sub.add_parser("cluster", help="cluster a network")
    graph_args(sp, truth=True)
    method_args(sp)
    sp.add_argument("--criterion", default="all", help="criterion tag, comma list, 'km' or 'all'")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--grid", help="comma-separated lambda grid for auto/oracle")
    sp.add_argument("--metric", default="n", choices=("n", "e", "t", "nmi"), help="oracle target")
    sp.add_argument("--out", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_cluster)

    sp = sub.add_parser("sweep", help="sweep one spectral ordering")
    graph_args(sp)
    method_args(sp)
    sp.add_argument("--criterion", default=Criterion.CONGX.value, choices=[c.value for c in Criterion])
    sp.add_argument("--emit-curve", action="store_true", help="write the whole prefix curve as CSV")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("eval", help="score a clustering against ground truth")
    graph_args(sp, truth=True)
    sp.add_argument("--labels", required=True, help="'node label' candidate file")
    sp.add_argument("--out", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("ocut", help="ground-truth optimal prefix of a spectral ordering")
    graph_args(sp, truth=True)
    method_args(sp)
    sp.add_argument("--metric", choices=("n", "e", "t"), default="n")
    sp.add_argument("--emit-curve", action="store_true")
    sp.add_argument("--out", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_ocut)

    sp = sub.add_parser("extract-pairs", help="build paired-community networks")
    graph_args(sp)
    sp.add_argument("--communities", required=True)
    sp.add_argument("--top", type=int, default=500)
    sp.add_argument("--max-size", type=int, default=200)
    sp.add_argument("--out-dir")
    sp.set_defaults(func=cmd_extract_pairs)

    sp = sub.add_parser("bench", help="run a benchmark configuration")
    sp.add_argument("--config", required=True)
    sp.add_argument("--output-dir")
    sp.add_argument("--workers", type=int)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        args.func(args)
    except (MixspecError, OSError, ValueError, KeyError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        line = getattr(exc, "line", None)
        if line is not None:
            record["line"] = line
        sys.stderr.write(json.dumps(record) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
