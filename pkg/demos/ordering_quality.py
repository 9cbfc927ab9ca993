"""How good could a sweep be?  Compare the best prefix under ground truth with each criterion."""

from mixspec import Criterion, CutContext, enumerate_triangles, load_zachary, ocut, spectral_ordering, sweep_all
from mixspec.metrics import metric_value

g, truth = load_zachary()
ti = enumerate_triangles(g)
for method, lam in (("gl", 0.1), ("gl", 0.5), ("rw", 1.0)):
    order = spectral_ordering(g, ti, method, lam).order
    floor = ocut(order, truth, "t", graph=g, triangles=ti)
    curves = sweep_all(order, list(Criterion), CutContext(g, ti, lam))
    got = {c.value: metric_value("t", truth, cv.partition_labels(), g, ti) for c, cv in curves.items()}
    best = min(got, key=got.get)
    print(f"{method} lambda={lam}: lowest reachable triangle error {floor.value:g} at prefix {floor.best_u}; "
          f"best criterion {best} reaches {got[best]:g}")
