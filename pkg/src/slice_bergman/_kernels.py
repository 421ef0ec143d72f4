"""Hot numeric loops, compiled with numba when available.

Every kernel has a pure-numpy twin.  The numba path is used unless numba
cannot be imported or ``SLICE_BERGMAN_NO_NUMBA`` is set to a truthy value.
``SLICE_BERGMAN_THREADS`` caps the numba worker pool.

Quaternions are float64 arrays whose last axis is (w, x, y, z).
"""

import os

import numpy as np

_FLAG = os.environ.get("SLICE_BERGMAN_NO_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by SLICE_BERGMAN_NO_NUMBA")
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # no cross-thread reductions anywhere, so any layer gives identical results
        numba.config.THREADING_LAYER = "workqueue"
except ImportError:
    numba = None
    HAVE_NUMBA = False

JIT_OPTIONS = {"nogil": True, "cache": True}

# below this many rows the numpy path beats the parallel launch overhead
SMALL_BATCH = 256


def _configure_threads():
    cap = os.environ.get("SLICE_BERGMAN_THREADS")
    if not HAVE_NUMBA or not cap:
        return
    try:
        n = int(cap)
    except ValueError:
        return
    if n >= 1:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------


def qmul_numpy(a, b):
    """Hamilton product, broadcasting over leading axes."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        (
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by + ay * bw + az * bx - ax * bz,
            aw * bz + az * bw + ax * by - ay * bx,
        ),
        axis=-1,
    )


def series_eval_numpy(coeffs, pts):
    """Evaluate sum_n q^n a_n at every row of ``pts`` (Horner, q on the left)."""
    pts = np.asarray(pts, dtype=np.float64)
    out = np.broadcast_to(coeffs[-1], pts.shape).copy()
    for n in range(coeffs.shape[0] - 2, -1, -1):
        out = qmul_numpy(pts, out)
        out += coeffs[n]
    return out


def series_eval_batched_numpy(coeffs, pts):
    """Row s of the result is series ``coeffs[s]`` evaluated at ``pts[s]``."""
    out = coeffs[:, -1, :].copy()
    for n in range(coeffs.shape[1] - 2, -1, -1):
        out = qmul_numpy(pts, out)
        out += coeffs[:, n, :]
    return out


def quat_convolve_numpy(a, b, cap):
    """c_n = sum_k a_k b_{n-k} for n <= cap."""
    n_out = min(a.shape[0] + b.shape[0] - 1, cap + 1)
    out = np.zeros((n_out, 4))
    for k in range(min(a.shape[0], n_out)):
        m = min(b.shape[0], n_out - k)
        out[k : k + m] += qmul_numpy(a[k], b[:m])
    return out


def weighted_sum_numpy(values, weights):
    """sum_k w_k v_k over the first axis, with v_k quaternions."""
    return np.sum(values * weights[:, None], axis=0)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(**JIT_OPTIONS)
    def _qmul_into(aw, ax, ay, az, bw, bx, by, bz):
        return (
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by + ay * bw + az * bx - ax * bz,
            aw * bz + az * bw + ax * by - ay * bx,
        )

    @njit(parallel=True, **JIT_OPTIONS)
    def _qmul_rows(a, b):
        m = a.shape[0]
        out = np.empty((m, 4))
        for k in prange(m):
            w, x, y, z = _qmul_into(
                a[k, 0], a[k, 1], a[k, 2], a[k, 3],
                b[k, 0], b[k, 1], b[k, 2], b[k, 3],
            )
            out[k, 0] = w
            out[k, 1] = x
            out[k, 2] = y
            out[k, 3] = z
        return out

    @njit(parallel=True, **JIT_OPTIONS)
    def _series_eval_rows(coeffs, pts):
        m = pts.shape[0]
        top = coeffs.shape[0] - 1
        out = np.empty((m, 4))
        for k in prange(m):
            pw, px, py, pz = pts[k, 0], pts[k, 1], pts[k, 2], pts[k, 3]
            w, x, y, z = coeffs[top, 0], coeffs[top, 1], coeffs[top, 2], coeffs[top, 3]
            for n in range(top - 1, -1, -1):
                w, x, y, z = _qmul_into(pw, px, py, pz, w, x, y, z)
                w += coeffs[n, 0]
                x += coeffs[n, 1]
                y += coeffs[n, 2]
                z += coeffs[n, 3]
            out[k, 0] = w
            out[k, 1] = x
            out[k, 2] = y
            out[k, 3] = z
        return out

    @njit(parallel=True, **JIT_OPTIONS)
    def _series_eval_batched(coeffs, pts):
        s_count = coeffs.shape[0]
        top = coeffs.shape[1] - 1
        out = np.empty((s_count, 4))
        for s in prange(s_count):
            pw, px, py, pz = pts[s, 0], pts[s, 1], pts[s, 2], pts[s, 3]
            w, x, y, z = coeffs[s, top, 0], coeffs[s, top, 1], coeffs[s, top, 2], coeffs[s, top, 3]
            for n in range(top - 1, -1, -1):
                w, x, y, z = _qmul_into(pw, px, py, pz, w, x, y, z)
                w += coeffs[s, n, 0]
                x += coeffs[s, n, 1]
                y += coeffs[s, n, 2]
                z += coeffs[s, n, 3]
            out[s, 0] = w
            out[s, 1] = x
            out[s, 2] = y
            out[s, 3] = z
        return out

    @njit(**JIT_OPTIONS)
    def _quat_convolve(a, b, cap):
        n_out = min(a.shape[0] + b.shape[0] - 1, cap + 1)
        out = np.zeros((n_out, 4))
        for n in range(n_out):
            for k in range(max(0, n - b.shape[0] + 1), min(n, a.shape[0] - 1) + 1):
                w, x, y, z = _qmul_into(
                    a[k, 0], a[k, 1], a[k, 2], a[k, 3],
                    b[n - k, 0], b[n - k, 1], b[n - k, 2], b[n - k, 3],
                )
                out[n, 0] += w
                out[n, 1] += x
                out[n, 2] += y
                out[n, 3] += z
        return out

    @njit(**JIT_OPTIONS)
    def _weighted_sum(values, weights):
        # sequential order keeps the result reproducible across thread counts
        out = np.zeros(4)
        for k in range(values.shape[0]):
            for c in range(4):
                out[c] += weights[k] * values[k, c]
        return out

    _configure_threads()


def _rows(x):
    return np.ascontiguousarray(np.asarray(x, dtype=np.float64).reshape(-1, 4))


def qmul(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    shape = np.broadcast_shapes(a.shape, b.shape)
    if not HAVE_NUMBA or np.prod(shape[:-1], dtype=int) < SMALL_BATCH:
        return qmul_numpy(a, b)
    a = _rows(np.broadcast_to(a, shape))
    b = _rows(np.broadcast_to(b, shape))
    return _qmul_rows(a, b).reshape(shape)


def series_eval(coeffs, pts):
    pts = np.asarray(pts, dtype=np.float64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    if not HAVE_NUMBA:
        return series_eval_numpy(coeffs, pts)
    return _series_eval_rows(coeffs, _rows(pts)).reshape(pts.shape)


def series_eval_batched(coeffs, pts):
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    pts = _rows(pts)
    if not HAVE_NUMBA:
        return series_eval_batched_numpy(coeffs, pts)
    return _series_eval_batched(coeffs, pts)


def quat_convolve(a, b, cap):
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if not HAVE_NUMBA:
        return quat_convolve_numpy(a, b, cap)
    return _quat_convolve(a, b, cap)


def weighted_sum(values, weights):
    values = _rows(values)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if not HAVE_NUMBA:
        return weighted_sum_numpy(values, weights)
    return _weighted_sum(values, weights)


def backend():
    """Name of the active kernel backend."""
    return "numba" if HAVE_NUMBA else "numpy"
