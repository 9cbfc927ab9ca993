"""Pick the mixing weight three ways: by cut score, by triangle density, and with ground truth."""

from mixspec import LambdaGrid, auto_lambda_cut, auto_lambda_density, enumerate_triangles, evaluate, load_zachary, oracle_lambda

g, truth = load_zachary()
ti = enumerate_triangles(g)
grid = LambdaGrid.parse("0.1,0.3,0.5,0.7,0.9,1.0")

cut = auto_lambda_cut(g, ti, "rw", "con2", grid)
dens = auto_lambda_density(g, ti, "gl", 2, grid)
orc = oracle_lambda(g, ti, "gl", truth, "t", grid, criterion="con3")

for name, rep in (("cut score", cut), ("triangle density", dens), ("oracle", orc)):
    ev = evaluate(truth, rep.run.partition, g, ti)
    scores = ", ".join(f"{lam}:{s:.3g}" for lam, s in rep.scores.items())
    print(f"{name:<17} chose {rep.chosen}  nmi={ev.nmi:.3f}  [{scores}]")
