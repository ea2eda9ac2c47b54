"""Walk-mass weights over banded word graphs.

Mirrors the aggregation the consumer applies to per-word files, so the
document vectors written here agree with what it would compute: words
within window q are linked, the walk restarts uniformly, and the
stationary mass weights the word vectors into one vector per sequence.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

MAX_TERMS = 100_000


def band_adjacency(n: int, q: int) -> sp.csc_matrix:
    """Symmetric 0/1 band: positions within distance q are linked."""
    if q < 1:
        raise ValueError(f"window must be at least 1, got {q}")
    if n < 0:
        raise ValueError(f"negative word count {n}")
    diags = []
    offsets = []
    for k in range(1, min(q, max(n - 1, 0)) + 1):
        diags += [np.ones(n - k), np.ones(n - k)]
        offsets += [k, -k]
    if not offsets:
        return sp.csc_matrix((n, n))
    return sp.diags(diags, offsets, shape=(n, n), format="csc")


def walk_weights(n: int, q: int, alpha: float, tol: float) -> np.ndarray:
    """Uniform-restart cumulative walk series on the normalized band.

    Terms accumulate until the pending tail alpha^(k+1) drops below
    tol, so the result sums to 1 within tol.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if n == 0:
        return np.zeros(0)
    if n == 1:
        # a single word has no neighbours, all mass stays on it
        return np.ones(1)
    adj = band_adjacency(n, q)
    col = np.asarray(adj.sum(axis=0)).ravel()
    m = adj.multiply(1.0 / col).tocsc()
    term = np.full(n, (1.0 - alpha) / n)
    total = term.copy()
    tail = alpha
    k = 0
    while tail >= tol:
        k += 1
        if k > MAX_TERMS:
            raise RuntimeError(
                f"walk series still above tol={tol} after {MAX_TERMS} terms"
            )
        term = alpha * (m @ term)
        total += term
        tail *= alpha
    return total


def sequence_vector(matrix: np.ndarray, q: int, alpha: float, tol: float) -> np.ndarray:
    """Weight an (n_words, d) matrix into a single d-vector."""
    feats = np.asarray(matrix, dtype=np.float64)
    if feats.ndim != 2:
        raise ValueError(f"word matrix must be 2-d, got shape {feats.shape}")
    if feats.shape[0] == 0:
        return np.zeros(feats.shape[1])
    return walk_weights(feats.shape[0], q, alpha, tol) @ feats


def combine_sequences(vectors, token_counts) -> np.ndarray:
    """Token-count-weighted mean of per-sequence vectors."""
    if len(vectors) != len(token_counts):
        raise ValueError(f"{len(vectors)} vectors for {len(token_counts)} counts")
    if not vectors:
        raise ValueError("no sequences to combine")
    counts = np.asarray(token_counts, dtype=np.float64)
    if counts.min() < 0 or counts.sum() <= 0:
        raise ValueError(
            f"token counts must be non-negative with a positive sum, got {token_counts}"
        )
    stacked = np.stack([np.asarray(v, dtype=np.float64) for v in vectors])
    return (counts / counts.sum()) @ stacked
