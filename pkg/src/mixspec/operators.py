"""Spectral operators built from edges, triangles, or a mix of both.

Laplacian side: the mixed adjacency ``W_X = (1-lam) W_T + lam W`` and its
normalized Laplacian.  Random-walk side: the edge transition matrix
``P = D^-1 W``, the triangle similarity ``A`` obtained by averaging the slices
of the second-order transition tensor, and ``H = (1-lam) A + lam P``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, IsolatedNodeError
from .graph import Graph, TriangleIndex, degree_vector


def check_lambda(lam) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"mixing parameter must lie in [0, 1], got {lam}")
    return lam


def normalized_laplacian(w) -> sp.csr_matrix:
    """``D^-1/2 (D - W) D^-1/2`` for a symmetric nonnegative ``w``."""
    w = sp.csr_matrix(w, dtype=float)
    d = degree_vector(w)
    zero = np.flatnonzero(d <= 0)
    if zero.size:
        raise IsolatedNodeError(zero[0])
    s = sp.diags(1.0 / np.sqrt(d))
    lap = sp.diags(d) - w
    out = (s @ lap @ s).tocsr()
    out.sum_duplicates()
    out.sort_indices()
    return out


def mixed_adjacency(g: Graph, ti: TriangleIndex, lam) -> sp.csr_matrix:
    lam = check_lambda(lam)
    wx = (1.0 - lam) * ti.wt + lam * g.adjacency()
    wx = sp.csr_matrix(wx)
    wx.eliminate_zeros()
    wx.sort_indices()
    return wx


@dataclass(frozen=True, eq=False)
class MixedOperatorGL:
    lam: float
    wx: sp.csr_matrix = field(repr=False)
    dx: np.ndarray = field(repr=False)
    lx: sp.csr_matrix = field(repr=False)


def build_gl(g: Graph, ti: TriangleIndex, lam) -> MixedOperatorGL:
    """Mixed-order adjacency, degrees and normalized Laplacian."""
    lam = check_lambda(lam)
    wx = mixed_adjacency(g, ti, lam)
    dx = degree_vector(wx)
    zero = np.flatnonzero(dx <= 0)
    if zero.size:
        raise IsolatedNodeError(zero[0], what="mixed-order degree")
    return MixedOperatorGL(lam=lam, wx=wx, dx=dx, lx=normalized_laplacian(wx))


def transition_matrix(g: Graph) -> sp.csr_matrix:
    """Row-stochastic ``D^-1 W``; isolated nodes keep an all-zero row."""
    deg = g.degrees().astype(float)
    inv = np.divide(1.0, deg, out=np.zeros_like(deg), where=deg > 0)
    return (sp.diags(inv) @ g.adjacency()).tocsr()


def reduced_similarity(ti: TriangleIndex, n: int | None = None, fill: str = "zero"):
    """Average of the slices ``P(:, :, k)`` of the triangle transition tensor.

    ``A[i, j] = (1/n) * sum over k closing a triangle with i, j of 1/wt[i, k]``.

    With ``fill="zero"`` a fiber ``P(i, :, k)`` whose normalizer vanishes is
    left at zero and the result is sparse.  ``fill="uniform"`` sets such
    fibers to ``1/n`` instead; that adds a dense rank-one term, so a dense
    array is returned.
    """
    n = ti.n if n is None else int(n)
    if n != ti.n:
        raise DomainError(f"triangle index is over {ti.n} nodes, not {n}")
    tri = ti.triangles
    if len(tri):
        a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
        # every ordered (i, j, k) arrangement of each triangle
        i = np.concatenate([a, a, b, b, c, c])
        j = np.concatenate([b, c, a, c, a, b])
        k = np.concatenate([c, b, c, a, b, a])
        wik = np.asarray(ti.wt[i, k]).ravel()
        vals = 1.0 / (n * wik)
    else:
        i = j = np.zeros(0, dtype=np.int64)
        vals = np.zeros(0)
    amat = sp.csr_matrix((vals, (i, j)), shape=(n, n))
    amat.sum_duplicates()
    amat.sort_indices()
    if fill == "zero":
        return amat
    if fill == "uniform":
        nz = np.diff(ti.wt.indptr)  # k with wt[i, k] > 0
        empty = n - nz
        return amat.toarray() + np.outer(empty / n**2, np.ones(n))
    raise ValueError(f"unknown fill rule {fill!r}")


@dataclass(frozen=True, eq=False)
class MixedOperatorRW:
    lam: float
    p: sp.csr_matrix = field(repr=False)
    a: object = field(repr=False)
    h: object = field(repr=False)
    zero_rows: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0, dtype=np.int64))


def build_rw(g: Graph, ti: TriangleIndex, lam, fill: str = "zero") -> MixedOperatorRW:
    """``H = (1-lam) A + lam P``, not renormalized after mixing."""
    lam = check_lambda(lam)
    p = transition_matrix(g)
    a = reduced_similarity(ti, g.n, fill=fill)
    h = (1.0 - lam) * a + lam * p
    if sp.issparse(h):
        h = sp.csr_matrix(h)
        h.eliminate_zeros()
        rowsum = np.asarray(abs(h).sum(axis=1)).ravel()
    else:
        h = np.asarray(h)
        rowsum = np.abs(h).sum(axis=1)
    return MixedOperatorRW(lam=lam, p=p, a=a, h=h, zero_rows=np.flatnonzero(rowsum == 0))
