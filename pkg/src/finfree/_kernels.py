"""Hot numeric kernels.

Each kernel exists twice: a numba-compiled scalar-loop version (``*_numba``)
and a numpy/Python version (``*_numpy``). The public name is bound to one of
them according to :data:`finfree._accel.USE_NUMBA`. Both versions are kept
importable so tests and the benchmark can compare them directly.
"""
import math

import numpy as np

from finfree._accel import USE_NUMBA, njit

__all__ = [
    "newton_maxroot",
    "jacobi_eigvals_batch",
    "elementary_symmetric_batch",
    "charpoly_int_batch",
    "INT64_SAFE",
]

# ---------------------------------------------------------------------------
# Newton iteration from above for the largest root


def _newton_maxroot_py(c, x0, maxiter):
    # c: ascending float coefficients, c[-1] > 0. Returns (x, iterations, ok).
    n = c.shape[0] - 1
    x = x0
    for it in range(maxiter):
        p = c[n]
        dp = 0.0
        for k in range(n - 1, -1, -1):
            dp = dp * x + p
            p = p * x + c[k]
        if p <= 0.0 or dp <= 0.0:
            return x, it, True
        step = p / dp
        x_new = x - step
        if not x_new < x:
            return x, it, True
        if step <= 4e-16 * max(abs(x), 1.0):
            return x_new, it + 1, True
        x = x_new
    return x, maxiter, False


_newton_maxroot_numba = njit(_newton_maxroot_py)


def _newton_maxroot_numpy(c, x0, maxiter):
    return _newton_maxroot_py(np.asarray(c, dtype=np.float64), float(x0), int(maxiter))


# ---------------------------------------------------------------------------
# cyclic Jacobi eigenvalues of a stack of symmetric matrices


def _jacobi_eigvals_numba_impl(mats, tol, max_sweeps):
    n = mats.shape[0]
    d = mats.shape[1]
    out = np.empty((n, d))
    a = np.empty((d, d))
    for s in range(n):
        for i in range(d):
            for j in range(d):
                a[i, j] = mats[s, i, j]
        fro = 0.0
        for i in range(d):
            for j in range(d):
                fro += a[i, j] * a[i, j]
        thresh = tol * max(1.0, math.sqrt(fro))
        for _ in range(max_sweeps):
            off = 0.0
            for i in range(d):
                for j in range(i + 1, d):
                    off += 2.0 * a[i, j] * a[i, j]
            if math.sqrt(off) < thresh:
                break
            for p in range(d - 1):
                for q in range(p + 1, d):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    if abs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / math.sqrt(t * t + 1.0)
                    sn = t * c
                    for k in range(d):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - sn * akq
                        a[k, q] = sn * akp + c * akq
                    for k in range(d):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = c * apk - sn * aqk
                        a[q, k] = sn * apk + c * aqk
                    a[p, q] = 0.0
                    a[q, p] = 0.0
        for i in range(d):
            out[s, i] = a[i, i]
        out[s] = np.sort(out[s])[::-1]
    return out


_jacobi_numba = njit(_jacobi_eigvals_numba_impl)


def _jacobi_eigvals_numba(mats, tol=1e-13, max_sweeps=100):
    mats = np.ascontiguousarray(mats, dtype=np.float64)
    return _jacobi_numba(mats, tol, max_sweeps)


def _jacobi_eigvals_numpy(mats, tol=1e-13, max_sweeps=100):
    a = np.array(mats, dtype=np.float64, copy=True)
    n, d, _ = a.shape
    idx = np.arange(n)
    thresh = tol * np.maximum(1.0, np.sqrt(np.einsum("nij,nij->n", a, a)))
    iu = np.triu_indices(d, 1)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(a[:, iu[0], iu[1]] ** 2, axis=1))
        if np.all(off < thresh):
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[:, p, q]
                active = apq != 0.0
                if not np.any(active):
                    continue
                safe = np.where(active, apq, 1.0)
                theta = (a[:, q, q] - a[:, p, p]) / (2.0 * safe)
                big = np.abs(theta) > 1e150
                theta_c = np.where(big, 1.0, theta)
                t = 1.0 / (np.abs(theta_c) + np.sqrt(theta_c * theta_c + 1.0))
                t = np.where(theta_c < 0.0, -t, t)
                t = np.where(big, 0.5 / np.where(big, theta, 1.0), t)
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                sn = t * c
                colp = a[:, :, p].copy()
                colq = a[:, :, q]
                a[:, :, p] = c[:, None] * colp - sn[:, None] * colq
                a[:, :, q] = sn[:, None] * colp + c[:, None] * colq
                rowp = a[:, p, :].copy()
                rowq = a[:, q, :]
                a[:, p, :] = c[:, None] * rowp - sn[:, None] * rowq
                a[:, q, :] = sn[:, None] * rowp + c[:, None] * rowq
                a[idx, p, q] = np.where(active, 0.0, a[idx, p, q])
                a[idx, q, p] = np.where(active, 0.0, a[idx, q, p])
    eig = np.diagonal(a, axis1=1, axis2=2)
    return -np.sort(-eig, axis=1)


# ---------------------------------------------------------------------------
# elementary symmetric functions e_0..e_d of each row


def _elem_sym_numba_impl(x):
    n, d = x.shape
    e = np.zeros((n, d + 1))
    for s in range(n):
        e[s, 0] = 1.0
        for j in range(d):
            lam = x[s, j]
            for k in range(j + 1, 0, -1):
                e[s, k] += lam * e[s, k - 1]
    return e


_elem_sym_numba = njit(_elem_sym_numba_impl)


def _elementary_symmetric_numba(x):
    return _elem_sym_numba(np.ascontiguousarray(x, dtype=np.float64))


def _elementary_symmetric_numpy(x):
    x = np.asarray(x, dtype=np.float64)
    n, d = x.shape
    e = np.zeros((n, d + 1))
    e[:, 0] = 1.0
    for j in range(d):
        lam = x[:, j]
        for k in range(j + 1, 0, -1):
            e[:, k] += lam * e[:, k - 1]
    return e


# ---------------------------------------------------------------------------
# exact Faddeev-LeVerrier on a stack of integer matrices

# bound on intermediate magnitudes below which int64 cannot overflow
INT64_SAFE = 2**62


def _charpoly_int_numba_impl(mats):
    n, d, _ = mats.shape
    out = np.zeros((n, d + 1), dtype=np.int64)
    m = np.zeros((d, d), dtype=np.int64)
    am = np.zeros((d, d), dtype=np.int64)
    for s in range(n):
        a = mats[s]
        out[s, d] = 1
        for i in range(d):
            for j in range(d):
                m[i, j] = 0
        for k in range(1, d + 1):
            # M_k = A M_{k-1} + c_{d-k+1} I
            for i in range(d):
                for j in range(d):
                    acc = 0
                    for l in range(d):
                        acc += a[i, l] * m[l, j]
                    am[i, j] = acc
            for i in range(d):
                for j in range(d):
                    m[i, j] = am[i, j]
                m[i, i] += out[s, d - k + 1]
            tr = 0
            for i in range(d):
                for l in range(d):
                    tr += a[i, l] * m[l, i]
            out[s, d - k] = -(tr // k)
    return out


_charpoly_int_numba = njit(_charpoly_int_numba_impl)


def _charpoly_int_batch_numba(mats):
    return _charpoly_int_numba(np.ascontiguousarray(mats, dtype=np.int64))


def _charpoly_int_batch_numpy(mats):
    """Works for int64 and for object arrays of Python ints."""
    a = np.asarray(mats)
    n, d, _ = a.shape
    dtype = a.dtype
    out = np.zeros((n, d + 1), dtype=dtype)
    out[:, d] = 1
    m = np.zeros_like(a)
    eye = np.eye(d, dtype=np.int64).astype(dtype)
    for k in range(1, d + 1):
        m = a @ m + out[:, d - k + 1][:, None, None] * eye
        tr = np.einsum("nii->n", a @ m) if dtype != object else np.array(
            [sum((a[s] @ m[s]).diagonal()) for s in range(n)], dtype=object
        )
        out[:, d - k] = -(tr // k)
    return out


if USE_NUMBA:
    newton_maxroot = _newton_maxroot_numba
    jacobi_eigvals_batch = _jacobi_eigvals_numba
    elementary_symmetric_batch = _elementary_symmetric_numba
    charpoly_int_batch = _charpoly_int_batch_numba
else:
    newton_maxroot = _newton_maxroot_numpy
    jacobi_eigvals_batch = _jacobi_eigvals_numpy
    elementary_symmetric_batch = _elementary_symmetric_numpy
    charpoly_int_batch = _charpoly_int_batch_numpy
