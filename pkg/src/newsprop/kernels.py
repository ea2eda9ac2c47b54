"""Compiled sparse-times-dense kernel behind the propagation loops."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

try:
    from numba import njit, prange

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency, belt and braces
    _HAVE_NUMBA = False


if _HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _spmm_csr(indptr, indices, data, dense, out):
        # Fixed accumulation order per output element keeps results
        # bit-reproducible across runs and thread counts.
        n_rows = indptr.size - 1
        width = dense.shape[1]
        for i in prange(n_rows):
            acc = np.zeros(width, dtype=np.float64)
            for k in range(indptr[i], indptr[i + 1]):
                v = data[k]
                j = indices[k]
                for c in range(width):
                    acc[c] += v * dense[j, c]
            out[i, :] = acc


def spmm(matrix: sp.csr_matrix, dense: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
    """Multiply a CSR matrix by a dense block, row-deterministically.

    `out` must not alias `dense`.
    """
    if matrix.shape[1] != dense.shape[0]:
        raise ValueError(
            f"dimension mismatch: matrix is {matrix.shape[0]}x{matrix.shape[1]}, "
            f"block has {dense.shape[0]} rows"
        )
    if out is None:
        out = np.empty((matrix.shape[0], dense.shape[1]), dtype=np.float64)
    if _HAVE_NUMBA:
        _spmm_csr(matrix.indptr, matrix.indices, matrix.data, dense, out)
    else:  # pragma: no cover
        out[:] = matrix @ dense
    return out
