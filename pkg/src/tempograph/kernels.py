"""Pairwise cosine-distance kernels, the hot loop behind set matching.

Two interchangeable implementations: a numba ``@njit`` kernel (default
when numba imports) and a vectorized numpy fallback.  Set
``TOOLKIT_NO_NUMBA=1`` to force the fallback.  ``benchmarks/`` compares
the two.

Both paths pin the distance of bitwise-identical vector pairs to an
exact 0.0 and clamp results into [0, 2], so set distances built on top
of them are exactly zero for coinciding point sets.
"""

from __future__ import annotations

import os

import numpy as np


def _env_disables_numba() -> bool:
    return os.environ.get("TOOLKIT_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}


def _build_numba_kernel():
    from numba import njit

    @njit(cache=True)
    def _pairwise(a, b, norm_a, norm_b):  # pragma: no cover - jitted
        n = a.shape[0]
        m = b.shape[0]
        d = a.shape[1]
        out = np.empty((n, m), dtype=np.float64)
        for i in range(n):
            for j in range(m):
                acc = 0.0
                same = True
                for k in range(d):
                    acc += a[i, k] * b[j, k]
                    if a[i, k] != b[j, k]:
                        same = False
                if same:
                    out[i, j] = 0.0
                else:
                    dist = 1.0 - acc / (norm_a[i] * norm_b[j])
                    if dist < 0.0:
                        dist = 0.0
                    elif dist > 2.0:
                        dist = 2.0
                    out[i, j] = dist
        return out

    return _pairwise


def pairwise_cosine_numpy(
    a: np.ndarray, b: np.ndarray, norm_a: np.ndarray, norm_b: np.ndarray
) -> np.ndarray:
    """Pure-numpy pairwise cosine distance (rows of ``a`` x rows of ``b``)."""
    sim = (a / norm_a[:, None]) @ (b / norm_b[:, None]).T
    out = np.clip(1.0 - sim, 0.0, 2.0)
    # bitwise-identical rows get an exact zero, matching the jitted path
    rows_a: dict[bytes, list[int]] = {}
    for i in range(a.shape[0]):
        rows_a.setdefault(a[i].tobytes(), []).append(i)
    for j in range(b.shape[0]):
        for i in rows_a.get(b[j].tobytes(), ()):
            out[i, j] = 0.0
    return out


if _env_disables_numba():
    _numba_kernel = None
else:
    try:
        _numba_kernel = _build_numba_kernel()
    except ImportError:
        _numba_kernel = None

NUMBA_ENABLED = _numba_kernel is not None


def pairwise_cosine_numba(
    a: np.ndarray, b: np.ndarray, norm_a: np.ndarray, norm_b: np.ndarray
) -> np.ndarray:
    """Jitted pairwise cosine distance; raises if numba is unavailable or disabled."""
    if _numba_kernel is None:
        raise RuntimeError("numba kernel unavailable (TOOLKIT_NO_NUMBA set or numba missing)")
    return _numba_kernel(
        np.ascontiguousarray(a), np.ascontiguousarray(b), norm_a, norm_b
    )


def pairwise_cosine(
    a: np.ndarray, b: np.ndarray, norm_a: np.ndarray, norm_b: np.ndarray
) -> np.ndarray:
    """Dispatch to the jitted kernel when enabled, else the numpy fallback."""
    if NUMBA_ENABLED:
        return pairwise_cosine_numba(a, b, norm_a, norm_b)
    return pairwise_cosine_numpy(a, b, norm_a, norm_b)
