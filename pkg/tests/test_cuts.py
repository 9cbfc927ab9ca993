import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixspec import Criterion, CutContext, Graph, UndefinedCriterionError, criterion_value, enumerate_triangles, sweep_all, sweep_cut
from mixspec.cuts import as_mask, assoc2, assoc3, cut2, cut3, vol2, vol3
from oracles import criterion_reference, dense_adjacency, random_graph_edges, triangle_adjacency, triangle_list

ALL = [c.value for c in Criterion]


def test_direction():
    assert {c.value for c in Criterion if c.maximize} == {"nass2", "nass3"}
    assert Criterion.NASS2.better(2, 1) and Criterion.CON2.better(1, 2)


def test_edge_primitives_k4(k4):
    g, _ = k4
    assert (cut2([0], g), vol2([0], g), assoc2([0], g)) == (3, 3, 0)
    assert (cut2([0, 1], g), vol2([0, 1], g), assoc2([0, 1], g)) == (4, 6, 2)
    assert cut2(np.ones(4, dtype=bool), g) == 0


def test_triangle_primitives(k3, k4):
    g, ti = k4
    assert (cut3([0], ti), vol3([0], ti), vol3([1, 2, 3], ti)) == (3, 3, 9)
    assert criterion_value("con3", [0], CutContext(g, ti)) == 1
    g3, t3 = k3
    assert (cut3([0], t3), vol3([0], t3)) == (1, 1)
    assert criterion_value("con3", [0], CutContext(g3, t3)) == 1
    c4 = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    tc = enumerate_triangles(c4)
    assert (cut3([0, 1], tc), vol3([0, 1], tc)) == (0, 0)
    assert assoc3([0, 1, 2], ti) == 3 and assoc3([0, 1, 2, 3], ti) == 12


def test_criterion_examples_k4(k4):
    g, ti = k4
    ctx = CutContext(g, ti, 0.5)
    assert criterion_value("con2", [0, 1], ctx) == pytest.approx(2 / 3)
    assert criterion_value("ncut2", [0, 1], ctx) == pytest.approx(4 / 3)
    assert criterion_value("ncut2", [0, 1], ctx) == pytest.approx(2 - criterion_value("nass2", [0, 1], ctx))
    one = CutContext(g, ti, 1.0)
    for s in ([0], [0, 1], [1, 2, 3]):
        assert criterion_value("conx", s, one) == pytest.approx(criterion_value("con2", s, one))


def test_undefined_sets(k4, barbell):
    g, ti = k4
    ctx = CutContext(g, ti)
    for s in ([], [0, 1, 2, 3]):
        with pytest.raises(UndefinedCriterionError):
            criterion_value("con2", s, ctx)
    c4 = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    with pytest.raises(UndefinedCriterionError) as info:
        criterion_value("con3", [0], CutContext(c4, enumerate_triangles(c4)))
    assert info.value.criterion == "con3" and info.value.nodes == [0]


def test_mask_validation():
    with pytest.raises(Exception):
        as_mask(np.ones(3, dtype=bool), 4)


def test_sweep_k2():
    g = Graph.from_edges([(0, 1)])
    curve = sweep_cut([0, 1], "con2", CutContext(g, enumerate_triangles(g)))
    assert curve.values.tolist() == [1.0] and curve.best_u == 1


def test_sweep_two_triangles(barbell):
    g, ti = barbell
    ctx = CutContext(g, ti, 0.5)
    order = np.array([0, 1, 2, 3, 4, 5])
    c2 = sweep_cut(order, "con2", ctx)
    assert c2.best_set.tolist() == [0, 1, 2] and cut2(c2.best_set, g) == 1
    c3 = sweep_cut(order, "con3", ctx)
    assert c3.best_set.tolist() == [0, 1, 2] and c3.best_value == 0
    assert c3.partition_labels().tolist() == [0, 0, 0, 1, 1, 1]


def test_sweep_ties_pick_smallest_prefix():
    # the star sweep ties at u=1 and u=2; the earlier prefix wins
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3)])
    curve = sweep_cut([0, 1, 2, 3], "exp2", CutContext(g, enumerate_triangles(g)))
    assert curve.values.tolist() == [1.0, 0.5, 1.0]
    curve = sweep_cut([0, 1, 2, 3], "ncut2", CutContext(g, enumerate_triangles(g)))
    assert curve.best_u == 2
    star = Graph.from_edges([(0, 1), (0, 2), (0, 3)])
    curve = sweep_cut([1, 2, 3, 0], "exp2", CutContext(star, enumerate_triangles(star)))
    assert curve.values.tolist() == [1.0, 1.0, 3.0] and curve.best_u == 1


def test_sweep_all_undefined_everywhere():
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    ctx = CutContext(g, enumerate_triangles(g))
    with pytest.raises(UndefinedCriterionError):
        sweep_cut([0, 1, 2, 3], "con3", ctx)
    out = sweep_all([0, 1, 2, 3], ["con2", "con3"], ctx)
    assert set(out) == {Criterion.CON2}


def test_sweep_rejects_bad_order(k4):
    from mixspec import DomainError

    with pytest.raises(DomainError):
        sweep_cut([0, 1, 1, 3], "con2", CutContext(*k4))


def test_curve_csv(barbell):
    curve = sweep_cut(np.arange(6), "con3", CutContext(*barbell))
    text = curve.to_csv()
    lines = text.splitlines()
    assert lines[0] == "u,con3" and len(lines) == 6
    buf = io.StringIO()
    curve.to_csv(buf)
    assert buf.getvalue() == text


def _naive_curve(name, w, tris, order, lam, wt=None):
    n = len(order)
    vals = []
    for u in range(1, n):
        s = np.zeros(n, dtype=bool)
        s[order[:u]] = True
        vals.append(criterion_reference(name, w, tris, s, lam, wt=wt))
    return np.array(vals)


def test_sweep_matches_naive_recomputation():
    rng = np.random.default_rng(7)
    for trial in range(12):
        n = 200 if trial == 0 else int(rng.integers(2, 40))
        p = rng.uniform(0.05, 0.6) if n < 60 else 0.04
        edges = random_graph_edges(rng, n, p)
        g = Graph.from_edges(edges, n=n)
        ti = enumerate_triangles(g)
        lam = float(rng.choice([0.0, 0.3, 0.5, 1.0]))
        ctx = CutContext(g, ti, lam)
        w = dense_adjacency(n, edges)
        tris = [tuple(t) for t in ti.triangles.tolist()]
        wt = triangle_adjacency(w)
        order = rng.permutation(n)
        curves = sweep_all(order, ALL, ctx)
        for name in ALL:
            ref = _naive_curve(name, w, tris, order, lam, wt)
            if np.all(np.isnan(ref)):
                assert Criterion(name) not in curves
                continue
            got = curves[Criterion(name)].values
            np.testing.assert_allclose(got, ref, atol=1e-12, equal_nan=True)
            opt = np.nanmax(ref) if Criterion(name).maximize else np.nanmin(ref)
            first = int(np.flatnonzero(np.abs(ref - opt) <= 1e-12 * max(1.0, abs(opt)))[0])
            assert curves[Criterion(name)].best_u == first + 1


@st.composite
def graph_subset(draw):
    n = draw(st.integers(3, 10))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    mask = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    lam = draw(st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0]))
    return n, [p for p, k in zip(pairs, keep) if k], np.array(mask), lam


@settings(max_examples=150, deadline=None)
@given(graph_subset())
def test_criterion_value_matches_reference(data):
    n, edges, mask, lam = data
    g = Graph.from_edges(edges, n=n)
    ti = enumerate_triangles(g)
    ctx = CutContext(g, ti, lam)
    w = dense_adjacency(n, edges)
    tris = triangle_list(w)
    for name in ALL:
        ref = criterion_reference(name, w, tris, mask, lam)
        if np.isnan(ref) or not 0 < mask.sum() < n:
            with pytest.raises(UndefinedCriterionError):
                criterion_value(name, mask, ctx)
        else:
            assert criterion_value(name, mask, ctx) == pytest.approx(ref, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(graph_subset())
def test_cut_identity_and_ncut3_relation(data):
    n, edges, mask, lam = data
    g = Graph.from_edges(edges, n=n)
    ti = enumerate_triangles(g)
    comp = ~mask
    v, vc = vol3(mask, ti), vol3(comp, ti)
    a, ac = assoc3(mask, ti), assoc3(comp, ti)
    assert cut3(mask, ti) * 3 == (v - a) + (vc - ac)
    if v > 0 and vc > 0 and 0 < mask.sum() < n:
        ctx = CutContext(g, ti, lam)
        lhs = criterion_value("ncut3", mask, ctx)
        rhs = 2 / 3 - criterion_value("nass3", mask, ctx) / 3 + ((vc - ac) / v + (v - a) / vc) / 3
        assert abs(lhs - rhs) <= 1e-12
