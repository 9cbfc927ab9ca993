"""Build two-community test networks from overlapping communities and benchmark on them."""

import json
import sys
import tempfile
from pathlib import Path

import numpy as np

from mixspec import Graph
from mixspec.bench import BenchConfig, extract_paired_communities, run_benchmark
from mixspec.graph import write_edge_list

rng = np.random.default_rng(0)
n, size = 400, 25
block = np.arange(n) // size
iu, ju = np.triu_indices(n, 1)
keep = rng.random(iu.size) < np.where(block[iu] == block[ju], 0.35, 0.004)
g = Graph.from_edges(np.column_stack([iu[keep], ju[keep]]), n=n)
# each community is a block plus three nodes of the next one
comms = [sorted(set(np.flatnonzero(block == b)) | set(np.flatnonzero(block == (b + 1) % 16)[:3])) for b in range(16)]

pairs, notes = extract_paired_communities(g, comms, top_k=5, max_size=40)
for p in pairs:
    print(f"communities {p.communities}: {p.graph.n} nodes, {p.graph.m} edges, {p.interaction_edges} between")

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
write_edge_list(g, out / "planted.edges")
(out / "planted.cmty").write_text("\n".join(" ".join(map(str, c)) for c in comms) + "\n")
cfg = {
    "networks": [{"name": "planted", "graph": "planted.edges", "communities": "planted.cmty", "top": 5, "max_size": 40}],
    "methods": ["gl", "rw", "shi"],
    "lambda_modes": ["0.5", "auto"],
    "criteria": ["con2", "con3", "ncut3", "km"],
    "output_dir": "results",
}
(out / "bench.json").write_text(json.dumps(cfg, indent=1))
res = run_benchmark(BenchConfig.load(out / "bench.json"))
print((out / "results" / "best.csv").read_text())
