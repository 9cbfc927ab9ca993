"""Eigensolvers for the sweep orderings and multiway embeddings.

Large problems go to ARPACK (implicitly restarted Lanczos for symmetric
matrices, Arnoldi otherwise) with a seeded start vector.  Small problems, and
requests ARPACK cannot serve (``k >= n - 1``), use LAPACK directly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DomainError, EigenSolverError

TOL = 1e-8
DENSE_BELOW = 300
COMPLEX_TOL = 1e-8


class ComplexEigenvalueWarning(RuntimeWarning):
    pass


@dataclass
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    warnings: list = field(default_factory=list)
    solver: str = "dense"


def _fix_signs(vecs):
    vecs = np.array(vecs, dtype=float, copy=True)
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        nrm = np.linalg.norm(col)
        if nrm > 0:
            col /= nrm
        big = np.argmax(np.abs(col))
        if col[big] < 0:
            col *= -1
    return vecs


def _residuals(m, vals, vecs):
    mv = m @ vecs
    return np.linalg.norm(mv - vecs * vals[None, :], axis=0)


def _fro(m):
    if sp.issparse(m):
        return float(sp.linalg.norm(m))
    return float(np.linalg.norm(m))


def _check(m, k):
    n = m.shape[0]
    if m.shape != (n, n):
        raise DomainError(f"matrix must be square, got {m.shape}")
    if not 1 <= k <= n:
        raise DomainError(f"cannot compute {k} eigenpairs of a {n}x{n} matrix")
    return n


def smallest_eigenpairs_sym(m, k, seed=0, tol=TOL, maxiter=None, dense_below=DENSE_BELOW) -> EigenResult:
    """The ``k`` algebraically smallest eigenpairs of a symmetric matrix.

    Values are ascending; vectors are orthonormal columns with the sign fixed
    so each column's largest-magnitude entry is positive.
    """
    n = _check(m, k)
    bound = 1e-8 * max(_fro(m), 1.0)
    if n < dense_below or k >= n - 1:
        dense = m.toarray() if sp.issparse(m) else np.asarray(m, dtype=float)
        vals, vecs = la.eigh(dense, subset_by_index=[0, k - 1])
        solver = "dense"
    else:
        m = sp.csr_matrix(m, dtype=float)
        # shift so the wanted end of the spectrum is the largest one
        c = float(abs(m).sum(axis=1).max())
        shifted = (sp.identity(n, format="csr") * c - m).tocsr()
        v0 = np.random.default_rng(seed).standard_normal(n)
        try:
            theta, vecs = spla.eigsh(
                shifted, k=k, which="LA", v0=v0, tol=tol * 1e-2, maxiter=maxiter or 10 * n,
                ncv=min(n, max(2 * k + 1, 32)),
            )
        except spla.ArpackNoConvergence as exc:
            best = np.inf
            if exc.eigenvalues.size:
                best = _residuals(m, c - exc.eigenvalues, exc.eigenvectors).max()
            raise EigenSolverError("Lanczos did not converge", best) from exc
        vals = c - theta
        solver = "lanczos"
    order = np.argsort(vals, kind="stable")
    vals = np.asarray(vals[order], dtype=float)
    vecs = _fix_signs(vecs[:, order])
    res = _residuals(m, vals, vecs)
    if res.max(initial=0.0) > bound:
        raise EigenSolverError("eigenpair residual above tolerance", res.max())
    return EigenResult(values=vals, vectors=vecs, residuals=res, solver=solver)


def largest_eigenpairs(m, k, seed=0, tol=TOL, maxiter=None, dense_below=DENSE_BELOW) -> EigenResult:
    """The ``k`` eigenpairs of largest real part of a general square matrix.

    Complex pairs are reduced to their real parts; when a returned eigenvalue
    has an imaginary part above ``1e-8`` a :class:`ComplexEigenvalueWarning`
    is issued and recorded on the result.
    """
    n = _check(m, k)
    bound = 1e-8 * max(_fro(m), 1.0)
    if n < dense_below or k >= n - 1:
        dense = m.toarray() if sp.issparse(m) else np.asarray(m, dtype=float)
        vals, vecs = la.eig(dense)
        solver = "dense"
    else:
        m = sp.csr_matrix(m, dtype=float) if sp.issparse(m) else np.asarray(m, dtype=float)
        v0 = np.random.default_rng(seed).standard_normal(n)
        try:
            vals, vecs = spla.eigs(
                m, k=k, which="LR", v0=v0, tol=tol * 1e-2, maxiter=maxiter or 10 * n,
                ncv=min(n, max(2 * k + 1, 40)),
            )
        except spla.ArpackNoConvergence as exc:
            best = np.inf
            if exc.eigenvalues.size:
                best = _residuals(m, exc.eigenvalues, exc.eigenvectors).max()
            raise EigenSolverError("Arnoldi did not converge", best) from exc
        solver = "arnoldi"
    # descending real part; the stable sort keeps conjugate pairs adjacent
    order = np.argsort(-vals.real, kind="stable")[:k]
    vals, vecs = vals[order], vecs[:, order]
    res = _residuals(m, vals, vecs)
    if res.max(initial=0.0) > bound:
        raise EigenSolverError("eigenpair residual above tolerance", res.max())
    notes = []
    for j, v in enumerate(vals):
        if abs(v.imag) > COMPLEX_TOL:
            msg = f"eigenvalue {j} is complex ({v:.6g}); using its real part"
            warnings.warn(msg, ComplexEigenvalueWarning, stacklevel=2)
            notes.append(msg)
    vr = vecs.real.copy()
    for j in range(vr.shape[1]):
        if np.linalg.norm(vr[:, j]) < 1e-12:
            vr[:, j] = vecs[:, j].imag
    return EigenResult(
        values=vals.real.astype(float), vectors=_fix_signs(vr), residuals=res, warnings=notes, solver=solver
    )
