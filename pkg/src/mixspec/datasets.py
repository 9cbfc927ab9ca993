"""Network and ground-truth file loading.

Graphs are whitespace-separated edge lists; ground truth is a two-column
``node label`` file keyed by the original node ids.  The Zachary karate club
ships with the package.  Other networks are looked up by name in a data
directory (argument, or the ``MIXSPEC_DATA`` environment variable) as
``<name>.edges`` plus ``<name>.truth``.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

import numpy as np

from .clustering import Partition
from .errors import DatasetNotFoundError, DomainError, ParseError
from .graph import Graph, load_edge_list

# name -> (expected n, expected m, number of clusters)
KNOWN = {
    "zachary": (34, 78, 2),
    "dolphin": (62, 159, 2),
    "polbooks": (105, 441, 3),
    "football": (115, 613, 12),
    "pblogs": (1490, 16716, 2),
}


def read_labels(path) -> dict:
    """Parse a ``node label`` file into ``{original id: label string}``."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            tok = s.split()
            if len(tok) < 2:
                raise ParseError(f"expected 'node label', got {s!r}", lineno)
            try:
                node = int(tok[0])
            except ValueError:
                raise ParseError(f"non-integer node id {tok[0]!r}", lineno) from None
            out[node] = tok[1]
    return out


def load_truth(path, graph: Graph) -> Partition:
    """Ground-truth partition aligned with ``graph``'s internal node order."""
    labels = read_labels(path)
    missing = [v for v in graph.ids.tolist() if v not in labels]
    if missing:
        raise DomainError(f"{len(missing)} graph nodes have no label, e.g. {missing[:5]}")
    return Partition.from_labels(np.asarray([labels[v] for v in graph.ids.tolist()]))


def write_labels(path, graph: Graph, labels):
    with open(path, "w", encoding="utf-8") as fh:
        for node, lab in zip(graph.ids.tolist(), np.asarray(labels).tolist()):
            fh.write(f"{node} {lab}\n")


def load_zachary():
    """The karate club graph and its two-faction split."""
    root = resources.files("mixspec") / "data"
    with resources.as_file(root / "zachary.edges") as p:
        g = load_edge_list(p)
    with resources.as_file(root / "zachary.truth") as p:
        truth = load_truth(p, g)
    return g, truth


def data_dir(path=None) -> Path | None:
    if path is not None:
        return Path(path)
    env = os.environ.get("MIXSPEC_DATA")
    return Path(env) if env else None


def load_dataset(name, path=None):
    """``(graph, truth)`` for a named benchmark network."""
    name = name.lower()
    if name == "zachary" and path is None and data_dir() is None:
        return load_zachary()
    root = data_dir(path)
    if root is None:
        raise DatasetNotFoundError(
            f"network {name!r} is not bundled; set MIXSPEC_DATA to a directory "
            f"holding {name}.edges and {name}.truth"
        )
    edges, truth = root / f"{name}.edges", root / f"{name}.truth"
    if not edges.exists() or not truth.exists():
        if name == "zachary":
            return load_zachary()
        raise DatasetNotFoundError(f"missing {edges} or {truth}")
    g = with_labelled_nodes(load_edge_list(edges), read_labels(truth))
    return g, load_truth(truth, g)


def with_labelled_nodes(g: Graph, labels: dict) -> Graph:
    """Append nodes that appear only in the label file as isolated nodes."""
    known = set(g.ids.tolist())
    extra = [v for v in labels if v not in known]
    if not extra:
        return g
    ids = np.concatenate([g.ids, np.asarray(extra, dtype=g.ids.dtype)])
    return Graph.from_edges(g.edges(), n=ids.size, ids=ids, dropped_self_loops=g.dropped_self_loops)


def convert_gml(gml_path, out_dir, name, truth_attr="value"):
    """Write ``<name>.edges``/``<name>.truth`` from a GML network file.

    Directed or multi-edge input is collapsed to a simple undirected graph.
    Needs networkx.
    """
    import networkx as nx

    g = nx.read_gml(gml_path, label="id")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / f"{name}.edges", "w", encoding="utf-8") as fh:
        seen = set()
        for u, v in g.edges():
            if u == v:
                continue
            key = (min(u, v), max(u, v))
            if key not in seen:
                seen.add(key)
                fh.write(f"{key[0]} {key[1]}\n")
    with open(out_dir / f"{name}.truth", "w", encoding="utf-8") as fh:
        for node, attrs in g.nodes(data=True):
            fh.write(f"{node} {str(attrs[truth_attr]).replace(' ', '_')}\n")
