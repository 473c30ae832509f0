"""Pure-numpy implementations of the compiled kernels.

Same contracts as ``_speedups``: adjacency is CSR (indptr/indices over node
ids 0..n-1, symmetric, no self loops), node masks select induced subgraphs
without materializing them.
"""

import numpy as np
import scipy.linalg
import scipy.sparse


class KernelConvergenceError(RuntimeError):
    """Eigenvalue iteration failed to converge; carries the iteration count."""

    def __init__(self, message, iterations):
        super().__init__(message)
        self.iterations = iterations


def _csr(indptr, indices, n):
    data = np.ones(len(indices), dtype=np.float64)
    return scipy.sparse.csr_matrix((data, indices, indptr), shape=(n, n))


def power_lambda1(indptr, indices, n, removed, tol=1e-10, max_iter=100_000):
    """Dominant adjacency eigenvalue of the graph minus ``removed`` nodes.

    Power iteration on A+I from a uniform start; convergence is the
    infinity-norm change of the normalized iterate. Returns (lam, iters).
    """
    keep = np.ones(n, dtype=bool)
    keep[np.asarray(removed, dtype=np.int64)] = False
    kept = int(keep.sum())
    if kept == 0:
        return 0.0, 0
    a = _csr(indptr, indices, n)
    x = np.zeros(n)
    x[keep] = 1.0 / np.sqrt(kept)
    iters = 0
    converged = False
    while iters < max_iter:
        iters += 1
        y = a.dot(x)
        y[~keep] = 0.0
        y += x
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            converged = True
            break
        y /= nrm
        diff = np.max(np.abs(y - x))
        x = y
        if diff < tol:
            converged = True
            break
    if not converged:
        raise KernelConvergenceError(
            f"power iteration did not converge in {max_iter} iterations", iters
        )
    ax = a.dot(x)
    ax[~keep] = 0.0
    return float(x.dot(ax)), iters


def power_eigenvector(indptr, indices, n, tol=1e-10, max_iter=100_000):
    """Nonnegative dominant eigenvector of the full adjacency, 2-normalized.

    Returns (x, lam, iters).
    """
    lam, iters, x = _power_vector(indptr, indices, n, tol, max_iter)
    return x, lam, iters


def _power_vector(indptr, indices, n, tol, max_iter):
    a = _csr(indptr, indices, n)
    x = np.full(n, 1.0 / np.sqrt(n))
    iters = 0
    while iters < max_iter:
        iters += 1
        y = a.dot(x) + x
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            break
        y /= nrm
        diff = np.max(np.abs(y - x))
        x = y
        if diff < tol:
            lam = float(x.dot(a.dot(x)))
            return lam, iters, x
    raise KernelConvergenceError(
        f"power iteration did not converge in {max_iter} iterations", iters
    )


def lanczos_lambda1(indptr, indices, n, removed, tol=1e-12, max_dim=0):
    """Dominant adjacency eigenvalue of the masked graph via plain Lanczos.

    No reorthogonalization: only the largest Ritz value is needed and losing
    orthogonality merely duplicates converged Ritz values, which cannot move
    the (monotone) maximum. Stops once the top Ritz value stagnates below
    ``tol`` (relative) on three consecutive steps. Used by the batch
    evaluators where the power iteration's linear convergence is too slow.
    """
    keep = np.ones(n, dtype=bool)
    if len(removed):
        keep[np.asarray(removed, dtype=np.int64)] = False
    a = _csr(indptr, indices, n)
    return _lanczos_masked(a, keep, tol, max_dim)


def _lanczos_masked(a, keep, tol, max_dim):
    n = a.shape[0]
    kept = int(keep.sum())
    if kept == 0:
        return 0.0
    if max_dim <= 0:
        max_dim = 512
    check_every, start_check = 3, 10
    vk = np.zeros(n)
    vk[keep] = 1.0 / np.sqrt(kept)
    vprev = np.zeros(n)
    alpha = np.zeros(max_dim)
    beta = np.zeros(max_dim)
    lam_prev = -np.inf
    for k in range(max_dim):
        w = a.dot(vk)
        w[~keep] = 0.0
        alpha[k] = vk.dot(w)
        w -= alpha[k] * vk
        if k > 0:
            w -= beta[k - 1] * vprev
        beta[k] = np.linalg.norm(w)
        if beta[k] < 1e-13 or (k >= start_check and (k - start_check) % check_every == 0):
            if k == 0:
                lam = float(alpha[0])
                return lam
            evals, vecs = scipy.linalg.eigh_tridiagonal(
                alpha[: k + 1], beta[:k], select="i", select_range=(k, k))
            lam = float(evals[-1])
            resid = beta[k] * abs(vecs[-1, -1])
            if beta[k] < 1e-13 * (1.0 + abs(lam)) or \
                    resid <= 10.0 * tol * (1.0 + abs(lam)) or \
                    abs(lam - lam_prev) <= check_every * tol * (1.0 + abs(lam)):
                return lam
            lam_prev = lam
        vprev = vk
        vk = w / beta[k]
    raise KernelConvergenceError(
        f"lanczos did not converge within {max_dim} dimensions", max_dim
    )


def lambda1_batch(indptr, indices, n, removed_sets, tol=1e-12, max_dim=0):
    """Dominant eigenvalue for each row of removed node sets.

    removed_sets: (count, k) int array; returns float64 array of length count.
    """
    removed_sets = np.asarray(removed_sets, dtype=np.int32)
    if removed_sets.ndim != 2:
        raise ValueError("removed_sets must be 2-D")
    a = _csr(indptr, indices, n)
    out = np.empty(len(removed_sets))
    keep = np.ones(n, dtype=bool)
    for i, row in enumerate(removed_sets):
        keep[row] = False
        out[i] = _lanczos_masked(a, keep, tol, max_dim)
        keep[row] = True
    return out


def brandes_betweenness(indptr, indices, n):
    """Raw shortest-path betweenness, accumulated over ordered pairs.

    Predecessors are rediscovered from BFS levels in the reverse sweep, so no
    predecessor lists are stored. Callers normalize.
    """
    bc = np.zeros(n)
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n)
    delta = np.empty(n)
    order = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist.fill(-1)
        sigma.fill(0.0)
        delta.fill(0.0)
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head, tail = 0, 1
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v]
            for w in indices[indptr[v] : indptr[v + 1]]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        for idx in range(tail - 1, 0, -1):
            w = order[idx]
            dw = dist[w]
            coef = (1.0 + delta[w]) / sigma[w]
            for v in indices[indptr[w] : indptr[w + 1]]:
                if dist[v] == dw - 1:
                    delta[v] += sigma[v] * coef
            bc[w] += delta[w]
    return bc
