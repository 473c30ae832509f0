# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: masked dominant-eigenvalue iterations and Brandes sweep.

Adjacency is CSR over dense ids (symmetric, no self loops). Masked variants
evaluate induced subgraphs in place; nothing is copied per evaluation, which
is what makes enumeration over many node subsets affordable. The batch
eigenvalue kernel runs eight subsets in lockstep so the adjacency decoding
and the vector arithmetic amortize across SIMD lanes.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt
from libc.stdlib cimport free, malloc
from scipy.linalg.cython_lapack cimport dsterf

from netdis._kernels._fallback import KernelConvergenceError

cnp.import_array()

cdef extern from *:
    """
    #include <math.h>

    typedef double nd_v8 __attribute__((vector_size(64)));

    /* y[i].lane = sum over neighbors j of x[j].lane; rows are 64B aligned */
    static void nd_matvec8(const int* restrict indptr,
                           const int* restrict indices, int n,
                           const double* restrict xp, double* restrict wp) {
        const nd_v8* x = (const nd_v8*) xp;
        nd_v8* w = (nd_v8*) wp;
        for (int i = 0; i < n; i++) {
            nd_v8 acc = {0.0};
            for (int p = indptr[i]; p < indptr[i + 1]; p++)
                acc += x[indices[p]];
            w[i] = acc;
        }
    }

    static void nd_dot8(const double* restrict ap, const double* restrict bp,
                        int n, double* restrict out) {
        const nd_v8* a = (const nd_v8*) ap;
        const nd_v8* b = (const nd_v8*) bp;
        nd_v8 acc = {0.0};
        for (int i = 0; i < n; i++)
            acc += a[i] * b[i];
        for (int k = 0; k < 8; k++) out[k] = acc[k];
    }

    /* w -= ca*x + cb*v, lane-wise coefficients */
    static void nd_axpy8(double* restrict wp, const double* restrict xp,
                         const double* restrict vp, const double* restrict ca,
                         const double* restrict cb, int n) {
        nd_v8* w = (nd_v8*) wp;
        const nd_v8* x = (const nd_v8*) xp;
        const nd_v8* v = (const nd_v8*) vp;
        nd_v8 a, b;
        for (int k = 0; k < 8; k++) { a[k] = ca[k]; b[k] = cb[k]; }
        for (int i = 0; i < n; i++)
            w[i] -= a * x[i] + b * v[i];
    }

    static void nd_scale8(double* restrict wp, const double* restrict sp, int n) {
        nd_v8* w = (nd_v8*) wp;
        nd_v8 s;
        for (int k = 0; k < 8; k++) s[k] = sp[k];
        for (int i = 0; i < n; i++)
            w[i] *= s;
    }

    /* Largest Gershgorin bound of the tridiagonal (a diag, b offdiag). */
    static double nd_gersh(const double* restrict a, const double* restrict b,
                           int m) {
        double hi = a[0] + (m > 1 ? fabs(b[0]) : 0.0);
        for (int i = 1; i < m; i++) {
            double v = a[i] + fabs(b[i - 1]) + (i + 1 < m ? fabs(b[i]) : 0.0);
            if (v > hi) hi = v;
        }
        return hi;
    }

    /* One inverse-iteration sweep: z <- normalized solve((T - sigma I), z).
       Thomas without pivoting; growth toward the nearby eigenvector is the
       point. Returns 0 on numerical breakdown (z left unusable). */
    static int nd_tsolve(const double* restrict a, const double* restrict b,
                         int m, double sigma, double* restrict z,
                         double* restrict diag) {
        double piv = a[0] - sigma;
        if (fabs(piv) < 1e-290) piv = (piv < 0.0) ? -1e-290 : 1e-290;
        diag[0] = piv;
        for (int i = 1; i < m; i++) {
            double l = b[i - 1] / diag[i - 1];
            z[i] -= l * z[i - 1];
            piv = a[i] - sigma - l * b[i - 1];
            if (fabs(piv) < 1e-290) piv = (piv < 0.0) ? -1e-290 : 1e-290;
            diag[i] = piv;
        }
        z[m - 1] /= diag[m - 1];
        for (int i = m - 2; i >= 0; i--)
            z[i] = (z[i] - b[i] * z[i + 1]) / diag[i];
        double nrm = 0.0;
        for (int i = 0; i < m; i++) nrm += z[i] * z[i];
        nrm = sqrt(nrm);
        if (!(nrm > 0.0) || !isfinite(nrm)) return 0;
        for (int i = 0; i < m; i++) z[i] /= nrm;
        return 1;
    }

    /* Rayleigh quotient and residual norm of the unit vector z w.r.t. T,
       including the next-step coupling beta_m * |z_m| in the residual. */
    static void nd_ritz_eval(const double* restrict a, const double* restrict b,
                             int m, double beta_m, const double* restrict z,
                             double* restrict theta_out, double* restrict resid_out) {
        double theta = 0.0;
        for (int i = 0; i < m; i++) {
            double tz = a[i] * z[i];
            if (i > 0) tz += b[i - 1] * z[i - 1];
            if (i + 1 < m) tz += b[i] * z[i + 1];
            theta += z[i] * tz;
        }
        double rr = 0.0;
        for (int i = 0; i < m; i++) {
            double tz = a[i] * z[i];
            if (i > 0) tz += b[i - 1] * z[i - 1];
            if (i + 1 < m) tz += b[i] * z[i + 1];
            double d = tz - theta * z[i];
            rr += d * d;
        }
        rr += beta_m * beta_m * z[m - 1] * z[m - 1];
        *theta_out = theta;
        *resid_out = sqrt(rr);
    }
    """
    void nd_matvec8(const int* indptr, const int* indices, int n,
                    const double* xp, double* wp) nogil
    void nd_dot8(const double* ap, const double* bp, int n, double* out) nogil
    void nd_axpy8(double* wp, const double* xp, const double* vp,
                  const double* ca, const double* cb, int n) nogil
    void nd_scale8(double* wp, const double* sp, int n) nogil
    double nd_gersh(const double* a, const double* b, int m) nogil
    int nd_tsolve(const double* a, const double* b, int m, double sigma,
                  double* z, double* diag) nogil
    void nd_ritz_eval(const double* a, const double* b, int m, double beta_m,
                      const double* z, double* theta_out, double* resid_out) nogil


cdef enum:
    BLK = 8  # subsets iterated simultaneously


cdef inline void _matvec_masked(const int* indptr, const int* indices, int n,
                                const unsigned char* keep,
                                const double* x, double* y) noexcept nogil:
    # x is zero on masked entries, so only the row mask is checked
    cdef int i, p
    cdef double s
    for i in range(n):
        if keep[i]:
            s = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                s += x[indices[p]]
            y[i] = s
        else:
            y[i] = 0.0


cdef inline double _dot(const double* a, const double* b, int n) noexcept nogil:
    cdef int i
    cdef double s = 0.0
    for i in range(n):
        s += a[i] * b[i]
    return s


cdef int _lanczos_blocked_c(const int* indptr, const int* indices, int n,
                            const int* rows, int k_rem, int kept,
                            double tol, int max_dim,
                            double* X, double* alpha_h, double* beta_h,
                            double* wd, double* we, double* ta, double* tb,
                            double* Z, double* dv,
                            double* lam_out, int* status) noexcept nogil:
    # Plain Lanczos without reorthogonalization, BLK lanes in lockstep; lane
    # b removes nodes rows[b*k_rem : (b+1)*k_rem]. Only the largest Ritz
    # value is wanted: losing orthogonality merely duplicates converged Ritz
    # values, which cannot move the (monotone) maximum. Each lane tracks its
    # top Ritz pair with cheap warm inverse iteration on the tridiagonal;
    # the LAPACK eigenvalue solve runs only to confirm a stop (residual or
    # stagnation below tol). Converged lanes freeze (their columns are
    # zeroed, which every shared vector op preserves). Per-lane status:
    # 0 converged, 1 dimension cap, 2 lapack failure.
    cdef int i, j, b, k, m, p, info, n_active, rounds, r, ok, stop
    cdef int check_every = 3, start_check = 10
    cdef double c, lam, resid, theta, sigma, thr
    cdef double* x
    cdef double* w
    cdef double* vprev
    cdef double* tmp
    cdef double* zb
    cdef double ab[BLK]
    cdef double bb[BLK]
    cdef double inv[BLK]
    cdef double th_prev[BLK]
    cdef double th_tr[BLK]
    cdef double rs_tr[BLK]
    cdef int started[BLK]
    cdef int active[BLK]
    x = X
    w = X + n * BLK
    vprev = X + 2 * n * BLK
    c = 1.0 / sqrt(<double> kept) if kept > 0 else 0.0
    for i in range(n * BLK):
        x[i] = c
        vprev[i] = 0.0
    for i in range(max_dim * BLK):
        Z[i] = 0.0
    for b in range(BLK):
        for p in range(k_rem):
            x[rows[b * k_rem + p] * BLK + b] = 0.0
        active[b] = 1
        started[b] = 0
        status[b] = 0
        lam_out[b] = 0.0
        th_prev[b] = -1e300
        th_tr[b] = 0.0
        rs_tr[b] = 0.0
    if kept == 0:
        return 0
    n_active = BLK
    for k in range(max_dim):
        nd_matvec8(indptr, indices, n, x, w)
        # removed columns hold zeros, so only removed rows need clearing
        for b in range(BLK):
            for p in range(k_rem):
                w[rows[b * k_rem + p] * BLK + b] = 0.0
        nd_dot8(x, w, n, ab)
        for b in range(BLK):
            if not active[b]:
                ab[b] = 0.0
            alpha_h[k * BLK + b] = ab[b]
            bb[b] = beta_h[(k - 1) * BLK + b] if k > 0 else 0.0
        nd_axpy8(w, x, vprev, ab, bb, n)
        nd_dot8(w, w, n, bb)
        for b in range(BLK):
            bb[b] = sqrt(bb[b])
            beta_h[k * BLK + b] = bb[b]
        for b in range(BLK):
            if not active[b]:
                inv[b] = 0.0
                continue
            if not (bb[b] < 1e-13 or
                    (k >= start_check and (k - start_check) % check_every == 0)):
                inv[b] = 1.0 / bb[b]
                continue
            m = k + 1
            for i in range(m):
                ta[i] = alpha_h[i * BLK + b]
            for i in range(m - 1):
                tb[i] = beta_h[i * BLK + b]
            zb = Z + b * max_dim
            stop = 0
            if bb[b] < 1e-13:
                stop = 1  # invariant subspace; T is exact
            else:
                if not started[b]:
                    j = 0
                    for i in range(1, m):
                        if ta[i] > ta[j]:
                            j = i
                    for i in range(max_dim):
                        zb[i] = 0.0
                    zb[j] = 1.0
                    sigma = nd_gersh(ta, tb, m) + 0.1
                    rounds = 4
                    started[b] = 1
                else:
                    sigma = th_tr[b] + max(rs_tr[b], 1e-10 * (1.0 + fabs(th_tr[b])))
                    rounds = 2
                ok = 1
                theta = th_tr[b]
                resid = rs_tr[b]
                for r in range(rounds):
                    ok = nd_tsolve(ta, tb, m, sigma, zb, dv)
                    if not ok:
                        break
                    nd_ritz_eval(ta, tb, m, bb[b], zb, &theta, &resid)
                    sigma = theta + max(resid, 1e-12 * (1.0 + fabs(theta)))
                if ok:
                    th_tr[b] = theta
                    rs_tr[b] = resid
                    thr = 10.0 * tol * (1.0 + fabs(theta))
                    if resid <= thr or \
                            fabs(theta - th_prev[b]) <= check_every * tol * (1.0 + fabs(theta)):
                        stop = 1
                    th_prev[b] = theta
                else:
                    started[b] = 0  # tracking broke down; rebuild next check
            if stop:
                # confirm with the robust global solve before accepting
                m = k + 1
                for i in range(m):
                    wd[i] = ta[i]
                for i in range(m - 1):
                    we[i] = tb[i]
                dsterf(&m, wd, we, &info)
                if info != 0:
                    status[b] = 2
                    active[b] = 0
                    n_active -= 1
                    inv[b] = 0.0
                    continue
                lam = wd[m - 1]
                lam_out[b] = lam
                if bb[b] < 1e-13 * (1.0 + fabs(lam)) or \
                        lam - th_tr[b] <= 40.0 * tol * (1.0 + fabs(lam)):
                    active[b] = 0
                    n_active -= 1
                    inv[b] = 0.0
                    # freeze the lane: zero its columns so shared ops no-op
                    for i in range(n):
                        j = i * BLK + b
                        x[j] = 0.0
                        w[j] = 0.0
                        vprev[j] = 0.0
                    continue
                # tracker had locked onto an interior eigenvalue: realign
                th_tr[b] = lam
                rs_tr[b] = 1e-8 * (1.0 + fabs(lam))
                th_prev[b] = -1e300
                sigma = lam + 1e-10 * (1.0 + fabs(lam))
                if not nd_tsolve(ta, tb, m, sigma, zb, dv):
                    started[b] = 0
            inv[b] = 1.0 / bb[b] if bb[b] > 0.0 else 0.0
        if n_active == 0:
            return 0
        nd_scale8(w, inv, n)
        tmp = vprev; vprev = x; x = w; w = tmp
    for b in range(BLK):
        if active[b]:
            status[b] = 1
    return 1


def lanczos_lambda1(indptr, indices, n, removed, tol=1e-12, max_dim=0):
    """Dominant adjacency eigenvalue of the graph minus ``removed`` nodes."""
    removed = np.ascontiguousarray(removed, dtype=np.int32).reshape(1, -1)
    return float(lambda1_batch(indptr, indices, n, removed, tol, max_dim)[0])


def lambda1_batch(indptr, indices, n, removed_sets, tol=1e-12, max_dim=0):
    """Dominant eigenvalue for each row of removed node sets.

    removed_sets: (count, k) int32 array. Rows are padded to full blocks of
    eight and all take the identical blocked code path, so a row's value
    never depends on how a caller chunks the batch.
    """
    rows_arr = np.ascontiguousarray(removed_sets, dtype=np.int32)
    if rows_arr.ndim != 2:
        raise ValueError("removed_sets must be 2-D")
    count = rows_arr.shape[0]
    if count == 0:
        return np.empty(0)
    pad = (-count) % BLK
    if pad:
        rows_arr = np.concatenate([rows_arr, np.repeat(rows_arr[-1:], pad, axis=0)])
    cdef const int[::1] ip = np.ascontiguousarray(indptr, dtype=np.int32)
    cdef const int[::1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef const int[:, ::1] rows = rows_arr
    cdef int nn = n
    cdef int padded = rows_arr.shape[0]
    cdef int k_rem = rows_arr.shape[1]
    cdef int kept = nn - k_rem
    cdef int dim = max_dim
    if dim <= 0:
        dim = 512
    out_arr = np.zeros(padded, dtype=np.float64)
    status_arr = np.zeros(padded, dtype=np.int32)
    cdef double[::1] out = out_arr
    cdef int[::1] status = status_arr
    cdef double ctol = tol
    cdef int blocks = padded // BLK
    cdef double* Vraw = <double*> malloc((<size_t> 3 * nn * BLK + 8) * sizeof(double))
    cdef double* alpha = <double*> malloc(<size_t> dim * BLK * sizeof(double))
    cdef double* beta = <double*> malloc(<size_t> dim * BLK * sizeof(double))
    cdef double* wd = <double*> malloc(dim * sizeof(double))
    cdef double* we = <double*> malloc(dim * sizeof(double))
    cdef double* ta = <double*> malloc(dim * sizeof(double))
    cdef double* tb = <double*> malloc(dim * sizeof(double))
    cdef double* Z = <double*> malloc(<size_t> dim * BLK * sizeof(double))
    cdef double* dv = <double*> malloc(dim * sizeof(double))
    if Vraw == NULL or alpha == NULL or beta == NULL or wd == NULL or we == NULL \
            or ta == NULL or tb == NULL or Z == NULL or dv == NULL:
        free(Vraw); free(alpha); free(beta); free(wd); free(we)
        free(ta); free(tb); free(Z); free(dv)
        raise MemoryError
    # 64-byte align so each lane row is one cache line / one AVX-512 vector
    cdef double* V = <double*> ((<size_t> Vraw + 63) & ~<size_t> 63)
    cdef int blk
    try:
        with nogil:
            for blk in range(blocks):
                _lanczos_blocked_c(&ip[0], &ix[0], nn,
                                   &rows[blk * BLK, 0] if k_rem else NULL,
                                   k_rem, kept, ctol, dim,
                                   V, alpha, beta, wd, we, ta, tb, Z, dv,
                                   &out[blk * BLK], &status[blk * BLK])
    finally:
        free(Vraw); free(alpha); free(beta); free(wd); free(we)
        free(ta); free(tb); free(Z); free(dv)
    out_arr = out_arr[:count]
    status_arr = status_arr[:count]
    bad = np.nonzero(status_arr)[0]
    if len(bad):
        if np.any(status_arr == 2):
            raise KernelConvergenceError("tridiagonal eigenvalue solve failed", 0)
        # rare: retry the stubborn rows with a deeper recurrence
        if max_dim <= 0:
            redo = lambda1_batch(indptr, indices, n,
                                 np.asarray(removed_sets)[bad], tol, 8192)
            out_arr[bad] = redo
        else:
            raise KernelConvergenceError(
                f"lanczos did not converge within {dim} dimensions", dim)
    return out_arr


def power_lambda1(indptr, indices, n, removed, tol=1e-10, max_iter=100_000):
    """Power iteration (on A+I) for the masked dominant eigenvalue.

    Returns (lam, iters); raises KernelConvergenceError past max_iter.
    """
    cdef const int[::1] ip = np.ascontiguousarray(indptr, dtype=np.int32)
    cdef const int[::1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef const int[::1] rem = np.ascontiguousarray(removed, dtype=np.int32)
    cdef int nn = n
    cdef int i, t, kept
    cdef double ctol = tol
    cdef int miter = max_iter
    cdef double nrm, diff, d, inv
    cdef double lam = 0.0
    cdef unsigned char* keep = <unsigned char*> malloc(nn)
    cdef double* x = <double*> malloc(nn * sizeof(double))
    cdef double* y = <double*> malloc(nn * sizeof(double))
    cdef double* tmp
    if keep == NULL or x == NULL or y == NULL:
        free(keep); free(x); free(y)
        raise MemoryError
    cdef int iters = 0
    cdef int converged = 0
    try:
        with nogil:
            for i in range(nn):
                keep[i] = 1
            for i in range(rem.shape[0]):
                keep[rem[i]] = 0
            kept = nn - rem.shape[0]
            if kept == 0:
                converged = 1
                lam = 0.0
            else:
                inv = 1.0 / sqrt(<double> kept)
                for i in range(nn):
                    x[i] = inv if keep[i] else 0.0
                while iters < miter:
                    iters += 1
                    _matvec_masked(&ip[0], &ix[0], nn, keep, x, y)
                    nrm = 0.0
                    for i in range(nn):
                        y[i] += x[i]
                        nrm += y[i] * y[i]
                    nrm = sqrt(nrm)
                    if nrm == 0.0:
                        converged = 1
                        break
                    diff = 0.0
                    for i in range(nn):
                        y[i] /= nrm
                        d = fabs(y[i] - x[i])
                        if d > diff:
                            diff = d
                    tmp = x; x = y; y = tmp
                    if diff < ctol:
                        converged = 1
                        break
                if converged and kept > 0:
                    _matvec_masked(&ip[0], &ix[0], nn, keep, x, y)
                    lam = _dot(x, y, nn)
        if not converged:
            raise KernelConvergenceError(
                f"power iteration did not converge in {max_iter} iterations", iters)
        return float(lam), iters
    finally:
        free(keep); free(x); free(y)


def power_eigenvector(indptr, indices, n, tol=1e-10, max_iter=100_000):
    """Full-graph dominant eigenvector via power iteration on A+I.

    Returns (x, lam, iters) with x 2-normalized and nonnegative.
    """
    cdef const int[::1] ip = np.ascontiguousarray(indptr, dtype=np.int32)
    cdef const int[::1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef int nn = n
    x_arr = np.full(nn, 1.0 / np.sqrt(nn))
    y_arr = np.empty(nn)
    cdef double[::1] x = x_arr
    cdef double[::1] y = y_arr
    cdef double ctol = tol
    cdef int miter = max_iter
    cdef int i, flip = 0, iters = 0, converged = 0
    cdef double nrm, diff, d, lam = 0.0
    cdef double* xp = &x[0]
    cdef double* yp = &y[0]
    cdef double* tmp
    with nogil:
        while iters < miter:
            iters += 1
            _matvec_all(&ip[0], &ix[0], nn, xp, yp)
            nrm = 0.0
            for i in range(nn):
                yp[i] += xp[i]
                nrm += yp[i] * yp[i]
            nrm = sqrt(nrm)
            if nrm == 0.0:
                converged = 1
                break
            diff = 0.0
            for i in range(nn):
                yp[i] /= nrm
                d = fabs(yp[i] - xp[i])
                if d > diff:
                    diff = d
            tmp = xp; xp = yp; yp = tmp
            flip = 1 - flip
            if diff < ctol:
                converged = 1
                break
        if converged:
            _matvec_all(&ip[0], &ix[0], nn, xp, yp)
            lam = _dot(xp, yp, nn)
    if not converged:
        raise KernelConvergenceError(
            f"power iteration did not converge in {max_iter} iterations", iters)
    vec = x_arr if flip == 0 else y_arr
    return vec, float(lam), iters


cdef inline void _matvec_all(const int* indptr, const int* indices, int n,
                             const double* x, double* y) noexcept nogil:
    cdef int i, p
    cdef double s
    for i in range(n):
        s = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            s += x[indices[p]]
        y[i] = s


def brandes_betweenness(indptr, indices, n):
    """Raw shortest-path betweenness over ordered pairs (caller normalizes)."""
    cdef const int[::1] ip = np.ascontiguousarray(indptr, dtype=np.int32)
    cdef const int[::1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef int nn = n
    bc_arr = np.zeros(nn, dtype=np.float64)
    cdef double[::1] bc = bc_arr
    cdef int* dist = <int*> malloc(nn * sizeof(int))
    cdef int* order = <int*> malloc(nn * sizeof(int))
    cdef double* sigma = <double*> malloc(nn * sizeof(double))
    cdef double* delta = <double*> malloc(nn * sizeof(double))
    if dist == NULL or order == NULL or sigma == NULL or delta == NULL:
        free(dist); free(order); free(sigma); free(delta)
        raise MemoryError
    cdef int s, v, w, p, head, tail, idx, dv, dw
    cdef double coef
    try:
        with nogil:
            for s in range(nn):
                for v in range(nn):
                    dist[v] = -1
                    sigma[v] = 0.0
                    delta[v] = 0.0
                dist[s] = 0
                sigma[s] = 1.0
                order[0] = s
                head = 0
                tail = 1
                while head < tail:
                    v = order[head]
                    head += 1
                    dv = dist[v]
                    for p in range(ip[v], ip[v + 1]):
                        w = ix[p]
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
                    for p in range(ip[w], ip[w + 1]):
                        v = ix[p]
                        if dist[v] == dw - 1:
                            delta[v] += sigma[v] * coef
                    bc[w] += delta[w]
    finally:
        free(dist); free(order); free(sigma); free(delta)
    return bc_arr
