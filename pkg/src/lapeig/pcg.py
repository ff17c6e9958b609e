"""Preconditioned conjugate gradients on the complement of a deflation basis.

Graph Laplacians are singular, so linear solves run inside the
orthogonal complement of the kernel (and of any locked eigenvectors).
The right-hand side, residual and preconditioned residual are projected
every iteration, which keeps the operator effectively definite there.
"""

from dataclasses import dataclass

import numpy as np

from .ic0 import projected_precond_apply
from .sparse import spmv

_ORTHO_TOL = 1e-10


class DeflationBasis:
    """Orthonormal columns spanning the subspace to project out."""

    __slots__ = ("columns",)

    def __init__(self, columns):
        columns = np.asarray(columns, dtype=np.float64)
        if columns.ndim != 2:
            raise ValueError("columns must be a 2-D array")
        if columns.shape[1]:
            gram = columns.T @ columns
            if np.abs(gram - np.eye(columns.shape[1])).max() > _ORTHO_TOL:
                raise ValueError("deflation columns are not orthonormal")
        self.columns = columns
        self.columns.setflags(write=False)

    @classmethod
    def empty(cls, n):
        return cls(np.zeros((n, 0)))

    @classmethod
    def single(cls, v):
        v = np.asarray(v, dtype=np.float64)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("cannot build a basis from the zero vector")
        return cls((v / nrm).reshape(-1, 1))

    @property
    def n(self):
        return self.columns.shape[0]

    @property
    def k(self):
        return self.columns.shape[1]

    def project_out(self, v):
        """v minus its orthogonal projection onto the basis span."""
        if self.k == 0:
            return np.array(v, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        return v - self.columns @ (self.columns.T @ v)

    def appended(self, u):
        """New basis with unit vector u (assumed orthogonal to the span) added."""
        u = np.asarray(u, dtype=np.float64).reshape(-1, 1)
        return DeflationBasis(np.hstack([self.columns, u]))


def kernel_basis(n, labels=None):
    """Orthonormal basis of the Laplacian kernel.

    With labels (a component id per node) one normalized indicator per
    component; without, the single constant vector e / sqrt(n).
    """
    if labels is None:
        return DeflationBasis(np.full((n, 1), 1.0 / np.sqrt(n)))
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (n,):
        raise ValueError("labels must have one entry per node")
    ncomp = int(labels.max()) + 1
    cols = np.zeros((n, ncomp))
    for c in range(ncomp):
        mask = labels == c
        cols[mask, c] = 1.0 / np.sqrt(mask.sum())
    return DeflationBasis(cols)


@dataclass
class PcgOutcome:
    solution: np.ndarray
    iterations: int
    final_relres: float
    converged: bool
    indefinite: bool = False


def pcg_solve(op, precond, b, tol, maxit, deflation=None, counter=None, callback=None):
    """Conjugate gradients for op(x) = b on the complement of the deflation basis.

    op has signature op(x, counter) -> y and is charged one product per
    call.  precond is None (identity), a callable r -> z, or an object
    with an apply method.  Iterates, residuals and preconditioned
    residuals all stay projected.  A nonpositive curvature p' A p stops
    the iteration immediately and flags the outcome indefinite.
    """
    b = np.asarray(b, dtype=np.float64)
    if deflation is None or deflation.k == 0:
        project = lambda v: v
        bhat = b.astype(np.float64, copy=True)
    else:
        project = deflation.project_out
        bhat = project(b)
    if precond is None:
        psolve = lambda r: r
    elif callable(precond):
        psolve = precond
    else:
        psolve = precond.apply
    normb = np.linalg.norm(bhat)
    n = b.shape[0]
    if normb == 0.0:
        return PcgOutcome(np.zeros(n), 0, 0.0, True)
    x = np.zeros(n)
    r = bhat.copy()
    z = project(psolve(r))
    rz = float(r @ z)
    p = z.copy()
    relres = 1.0
    it = 0
    indefinite = False
    converged = False
    while it < maxit:
        ap = project(op(p, counter))
        it += 1
        pap = float(p @ ap)
        if pap <= 0.0:
            indefinite = True
            break
        gamma = rz / pap
        x += gamma * p
        r -= gamma * ap
        r = project(r)
        relres = float(np.linalg.norm(r)) / normb
        if callback is not None:
            callback(x)
        if relres <= tol:
            converged = True
            break
        z = project(psolve(r))
        rz_next = float(r @ z)
        if rz_next <= 0.0:
            # preconditioner lost definiteness on the complement
            indefinite = True
            break
        p = z + (rz_next / rz) * p
        rz = rz_next
    return PcgOutcome(x, it, relres, converged, indefinite)


def jd_correction_solve(a, theta, q, residual, f, tol, itmax, counter=None):
    """Approximate solve of the projected shifted system used by Jacobi-Davidson.

    Solves (I - QQ')(A - theta I)(I - QQ') s = -residual by PCG with
    the preconditioner projected onto the same complement.  The iterate
    reached at itmax is returned even when the tolerance was not met;
    an immediate indefinite direction falls back to the projected
    preconditioned residual so the outer iteration always receives a
    usable expansion vector.
    """
    residual = np.asarray(residual, dtype=np.float64)

    def op(x, c):
        return q.project_out(spmv(a, x, c) - theta * x)

    if f is None:
        psolve = None
    else:
        psolve = lambda r: projected_precond_apply(f, q, r)
    out = pcg_solve(op, psolve, -residual, tol, itmax, deflation=q, counter=counter)
    s = out.solution
    if np.linalg.norm(s) == 0.0 and np.linalg.norm(residual) > 0.0:
        fallback = q.project_out(f.apply(q.project_out(-residual))) if f is not None \
            else q.project_out(-residual)
        return fallback
    return s
