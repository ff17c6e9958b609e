"""Result containers shared by the three eigensolvers."""

from dataclasses import dataclass, field

import numpy as np

from .sparse import spmv


class SolverError(RuntimeError):
    """An eigensolver could not reach the requested accuracy."""


@dataclass
class EigenPairSet:
    """Converged eigenpairs, values ascending.

    vectors holds one orthonormal column per value.  residuals are the
    relative residuals ||A u - theta u|| / theta measured with a fresh
    product at acceptance time.  When includes_kernel is set the first
    column is the constant vector with value 0.
    """

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    includes_kernel: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        self.residuals = np.asarray(self.residuals, dtype=np.float64)
        if self.vectors.ndim != 2 or self.vectors.shape[1] != self.values.shape[0]:
            raise ValueError("vectors must have one column per value")
        if self.residuals.shape != self.values.shape:
            raise ValueError("residuals must align with values")

    def __len__(self):
        return int(self.values.shape[0])

    def positive(self):
        """(values, vectors, residuals) with any kernel column dropped."""
        if self.includes_kernel:
            return self.values[1:], self.vectors[:, 1:], self.residuals[1:]
        return self.values, self.vectors, self.residuals

    def with_kernel(self):
        """Copy with the normalized constant vector prepended."""
        if self.includes_kernel:
            return self
        n = self.vectors.shape[0]
        e = np.full((n, 1), 1.0 / np.sqrt(n))
        return EigenPairSet(
            values=np.concatenate(([0.0], self.values)),
            vectors=np.hstack([e, self.vectors]),
            residuals=np.concatenate(([0.0], self.residuals)),
            includes_kernel=True,
        )

    def gram_defect(self):
        v = self.vectors
        return float(np.abs(v.T @ v - np.eye(v.shape[1])).max()) if v.size else 0.0

    def kernel_overlap(self):
        """max_j |u_j' e| / sqrt(n) over the positive pairs."""
        _, vecs, _ = self.positive()
        if not vecs.size:
            return 0.0
        n = vecs.shape[0]
        return float(np.abs(vecs.sum(axis=0)).max() / np.sqrt(n))


@dataclass
class SolverReport:
    """Cost and convergence accounting for one solver run."""

    solver: str
    neig: int
    delta: float
    mvp: int
    outer_its: int
    inner_its_total: int
    wall_seconds: float
    converged: bool
    per_pair_residuals: list = field(default_factory=list)
    eigenvalues: list = field(default_factory=list)
    config: dict = field(default_factory=dict)


def rayleigh_residuals(a, vectors, counter=None):
    """Rayleigh quotients and relative residuals, one fresh product per column."""
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim == 1:
        vectors = vectors.reshape(-1, 1)
    thetas = np.zeros(vectors.shape[1])
    resids = np.zeros(vectors.shape[1])
    for k in range(vectors.shape[1]):
        u = vectors[:, k]
        w = spmv(a, u, counter)
        nrm2 = float(u @ u)
        theta = float(u @ w) / nrm2
        denom = abs(theta) if theta != 0 else 1.0
        resids[k] = float(np.linalg.norm(w - theta * u)) / (np.sqrt(nrm2) * denom)
        thetas[k] = theta
    return thetas, resids
