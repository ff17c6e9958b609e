"""Smallest eigenpairs by Lanczos on the inverse operator.

Each Lanczos step applies A^{-1} through a deflated PCG solve, so the
wanted eigenvalues (smallest positive of A) become the dominant ones of
the projected matrix.  When the basis reaches ncv a thick restart keeps
the best neig + 1 Ritz vectors and the trailing residual direction; the
projected matrix then carries an arrowhead head block plus a fresh
tridiagonal tail.
"""

import time

import numpy as np

from .ic0 import ic0_factorize
from .kernels import GramSchmidtBreakdown, dense_sym_eig, mgs_orthonormalize
from .pcg import DeflationBasis, kernel_basis, pcg_solve
from .results import EigenPairSet, SolverError, SolverReport
from .sparse import MvpCounter, spmv

_BREAKDOWN_ABS = 1e-12

# subspace sizes paired with eigenpair counts, interpolated in between
_NCV_ANCHORS = ((1, 15), (5, 30), (20, 60), (50, 120))


def ncv_for(neig):
    """Default ncv for a given number of wanted pairs."""
    if neig < 1:
        raise ValueError("neig must be at least 1")
    if neig <= _NCV_ANCHORS[0][0]:
        return _NCV_ANCHORS[0][1]
    for (x0, y0), (x1, y1) in zip(_NCV_ANCHORS, _NCV_ANCHORS[1:]):
        if neig <= x1:
            return int(round(y0 + (y1 - y0) * (neig - x0) / (x1 - x0)))
    x1, y1 = _NCV_ANCHORS[-1]
    return y1 + 2 * (neig - x1)


class LanczosState:
    """Basis and projected matrix of the inverse-operator Lanczos process.

    The basis always holds one more column than the projected matrix
    covers: the trailing column is the normalized residual waiting to
    be expanded (absent right after a breakdown).  After a thick
    restart the projected matrix is arrowhead-plus-tridiagonal: retained
    Ritz values on the head diagonal, a coupling vector between the
    head and the first tail column, then the usual alpha/beta tail.
    """

    def __init__(self, v1, ncv):
        v1 = np.asarray(v1, dtype=np.float64)
        self.ncv = int(ncv)
        self.columns = [v1]
        self.head_vals = np.zeros(0)
        self.head_coupling = np.zeros(0)
        self.alpha = []
        self.beta = []
        self.breakdown = False
        self.last_inner_its = 0

    @property
    def m(self):
        """Dimension of the completed projected matrix."""
        return self.head_vals.shape[0] + len(self.alpha)

    @property
    def has_pending(self):
        return len(self.columns) == self.m + 1

    def basis_matrix(self):
        return np.column_stack(self.columns) if self.columns else np.zeros((0, 0))

    def projected_matrix(self):
        k = self.head_vals.shape[0]
        t = len(self.alpha)
        h = np.zeros((k + t, k + t))
        h[np.arange(k), np.arange(k)] = self.head_vals
        if k and t:
            h[:k, k] = self.head_coupling
            h[k, :k] = self.head_coupling
        for idx in range(t):
            h[k + idx, k + idx] = self.alpha[idx]
            if idx + 1 < t:
                h[k + idx, k + idx + 1] = self.beta[idx]
                h[k + idx + 1, k + idx] = self.beta[idx]
        return h


def inverse_lanczos_step(state, a, f, delta_pcg, null_basis, counter=None,
                         maxit_inner=5000):
    """Expand the pending basis vector by one inverse-operator application.

    Solves A w = v by deflated PCG, records the new diagonal entry
    w'v, runs the three-term recurrence followed by full two-pass
    reorthogonalization, and either appends the normalized remainder or
    flags breakdown when its norm drops below 1e-12 of the solution
    scale.
    """
    if not state.has_pending:
        raise SolverError("no pending vector to expand (breakdown not handled)")
    v = state.columns[-1]

    def op(x, c):
        return spmv(a, x, c)

    out = pcg_solve(op, f, v, delta_pcg, maxit_inner,
                    deflation=null_basis, counter=counter)
    state.last_inner_its = out.iterations
    if not out.converged:
        raise SolverError(
            f"inner PCG stalled at relative residual {out.final_relres:.3e} "
            f"after {out.iterations} iterations (target {delta_pcg:.1e})"
        )
    w = out.solution
    scale = max(1.0, float(np.linalg.norm(w)))
    alpha_j = float(w @ v)
    w = w - alpha_j * v
    tail_len = len(state.alpha)
    if tail_len == 0:
        k = state.head_vals.shape[0]
        if k:
            head = np.column_stack(state.columns[:k])
            w -= head @ state.head_coupling
    else:
        w -= state.beta[-1] * state.columns[-2]
    # full reorthogonalization, two sweeps over kernel and basis
    for _ in range(2):
        w = null_basis.project_out(w)
        for col in state.columns:
            w -= (col @ w) * col
    b = float(np.linalg.norm(w))
    state.alpha.append(alpha_j)
    if b < _BREAKDOWN_ABS * scale:
        state.breakdown = True
    else:
        state.beta.append(b)
        state.columns.append(w / b)
    return state


def _sorted_ritz(state):
    """Ritz data ordered by decreasing inverse-operator value."""
    h = state.projected_matrix()
    mu, y = dense_sym_eig(h)
    order = np.argsort(mu, kind="stable")[::-1]
    return mu[order], y[:, order]


def _check_convergence(state, a, neig, delta, counter):
    """Verify the leading Ritz pairs with fresh products.

    Returns (pairs or None, verify_mvps).  Both the per-pair and the
    averaged relative residual must pass.
    """
    m = state.m
    if m < neig:
        return None, 0
    mu, y = _sorted_ritz(state)
    vmat = np.column_stack(state.columns[:m])
    thetas = np.zeros(neig)
    resids = np.zeros(neig)
    vecs = np.zeros((vmat.shape[0], neig))
    used = 0
    for i in range(neig):
        u = vmat @ y[:, i]
        u /= np.linalg.norm(u)
        w = spmv(a, u, counter)
        used += 1
        theta = float(u @ w)
        if theta <= 0:
            return None, used
        res = float(np.linalg.norm(w - theta * u)) / theta
        if res > delta:
            return None, used
        thetas[i] = theta
        resids[i] = res
        vecs[:, i] = u
    if resids.mean() > delta:
        return None, used
    order = np.argsort(thetas, kind="stable")
    pairs = EigenPairSet(thetas[order], vecs[:, order], resids[order])
    return pairs, used


def _thick_restart(state, neig, null_basis):
    """Contract the basis to the best neig + 1 Ritz vectors plus residual."""
    m = state.m
    keep = min(neig + 1, m - 1)
    mu, y = _sorted_ritz(state)
    vmat = np.column_stack(state.columns[:m])
    heads = vmat @ y[:, :keep]
    cols = []
    for idx in range(keep):
        block = np.column_stack([null_basis.columns] + cols) if (
            null_basis.k or cols) else np.zeros((heads.shape[0], 0))
        v, _ = mgs_orthonormalize(heads[:, idx], block)
        cols.append(v)
    residual = state.columns[-1]
    residual = null_basis.project_out(residual)
    for col in cols:
        residual -= (col @ residual) * col
    residual /= np.linalg.norm(residual)
    coupling = state.beta[-1] * y[m - 1, :keep]
    state.head_vals = mu[:keep].copy()
    state.head_coupling = np.asarray(coupling, dtype=np.float64)
    state.columns = cols + [residual]
    state.alpha = []
    state.beta = []
    return state


def _insert_random(state, null_basis, rng):
    """Replace a vanished residual direction with a random orthogonal one."""
    n = state.columns[0].shape[0]
    for _ in range(3):
        cand = rng.standard_normal(n)
        block = np.column_stack([null_basis.columns] + state.columns)
        try:
            v, _ = mgs_orthonormalize(cand, block)
        except GramSchmidtBreakdown:
            continue
        state.beta.append(0.0)
        state.columns.append(v)
        state.breakdown = False
        return True
    return False


def irlm_smallest(a, neig, ncv=None, delta=1e-6, delta_pcg=None, f=None,
                  null_basis=None, *, seed=0, maxit_inner=5000,
                  max_restarts=200, counter=None, v0=None):
    """neig smallest strictly positive eigenpairs of a, values ascending.

    Inner solves run at tolerance delta_pcg (default delta / 100).
    Acceptance requires every pair, and their average, to satisfy
    ||A u - theta u|| / theta <= delta with freshly computed products.
    """
    t0 = time.perf_counter()
    if counter is None:
        counter = MvpCounter()
    if null_basis is None:
        null_basis = kernel_basis(a.n)
    if f is None:
        f = ic0_factorize(a)
    if neig < 1:
        raise ValueError("neig must be at least 1")
    usable = a.n - null_basis.k
    if neig > usable:
        raise ValueError(f"asked for {neig} pairs but only {usable} exist "
                         "outside the kernel")
    if delta_pcg is None:
        delta_pcg = 1e-2 * delta
    ncv_eff = ncv_for(neig) if ncv is None else int(ncv)
    ncv_eff = min(max(ncv_eff, neig + 2), usable)
    rng = np.random.default_rng(seed)

    if v0 is not None:
        start = np.asarray(v0, dtype=np.float64)
    else:
        start = rng.standard_normal(a.n)
    v1, _ = mgs_orthonormalize(start, null_basis.columns)
    state = LanczosState(v1, ncv_eff)

    solves = 0
    inner_total = 0
    verify_total = 0
    restarts = 0
    pairs = None
    for _cycle in range(max_restarts + 1):
        while state.m < ncv_eff and not state.breakdown:
            inverse_lanczos_step(state, a, f, delta_pcg, null_basis,
                                 counter=counter, maxit_inner=maxit_inner)
            solves += 1
            inner_total += state.last_inner_its
        if state.breakdown:
            # a vanished residual can hide extra copies of an eigenvalue,
            # so resume with a random direction before judging convergence
            if _insert_random(state, null_basis, rng):
                continue
            pairs, used = _check_convergence(state, a, neig, delta, counter)
            verify_total += used
            if pairs is None:
                raise SolverError(
                    f"subspace exhausted at dimension {state.m} before "
                    f"{neig} pairs reached tolerance {delta:.1e}"
                )
            break
        pairs, used = _check_convergence(state, a, neig, delta, counter)
        verify_total += used
        if pairs is not None:
            break
        if _cycle == max_restarts:
            raise SolverError(
                f"no convergence after {max_restarts} restarts "
                f"(subspace {ncv_eff}, delta {delta:.1e})"
            )
        _thick_restart(state, neig, null_basis)
        restarts += 1

    report = SolverReport(
        solver="irlm",
        neig=neig,
        delta=delta,
        mvp=counter.count,
        outer_its=solves,
        inner_its_total=inner_total,
        wall_seconds=time.perf_counter() - t0,
        converged=True,
        per_pair_residuals=pairs.residuals.tolist(),
        eigenvalues=pairs.values.tolist(),
        config={
            "ncv": ncv_eff,
            "delta_pcg": delta_pcg,
            "seed": seed,
            "maxit_inner": maxit_inner,
            "restarts": restarts,
            "mvp_verify": verify_total,
        },
    )
    return pairs, report
