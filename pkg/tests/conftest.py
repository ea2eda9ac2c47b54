"""Shared oracles and random-structure generators for the test suite."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from newsprop.sparse import SparseMatrix, wrap

# Verdict lines registered by the acceptance tests; echoed after the run
# so they survive output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def dense_rwr_rows(m_dense: np.ndarray, alpha: float) -> np.ndarray:
    """Independent oracle: row i solves (I - alpha M) x = (1 - alpha) e_i."""
    n = m_dense.shape[0]
    cols = np.linalg.solve(np.eye(n) - alpha * m_dense, (1.0 - alpha) * np.eye(n))
    return cols.T


def random_symmetric(rng: np.random.Generator, n: int, p: float) -> SparseMatrix:
    """Erdos-Renyi style symmetric 0/1 adjacency, zero diagonal."""
    dense = (rng.random((n, n)) < p).astype(float)
    dense = np.triu(dense, k=1)
    dense = dense + dense.T
    return wrap(sp.csc_matrix(dense))


def random_bipartite(rng: np.random.Generator, n_left: int, n_right: int,
                     p: float) -> tuple[SparseMatrix, int]:
    """Random bipartite adjacency over [left | right]; returns (adj, split)."""
    n = n_left + n_right
    block = (rng.random((n_left, n_right)) < p).astype(float)
    dense = np.zeros((n, n))
    dense[:n_left, n_left:] = block
    dense[n_left:, :n_left] = block.T
    return wrap(sp.csc_matrix(dense)), n_left


def flip_random_edge(rng: np.random.Generator, adj: SparseMatrix,
                     split: int | None = None) -> SparseMatrix:
    """Insert or delete one symmetric edge; split restricts to cross-side pairs."""
    n = adj.n_rows
    dense = adj.to_dense()
    while True:
        if split is None:
            i, j = sorted(rng.choice(n, size=2, replace=False))
        else:
            i = int(rng.integers(0, split))
            j = int(rng.integers(split, n))
        if i == j:
            continue
        new = 0.0 if dense[i, j] else 1.0
        dense[i, j] = dense[j, i] = new
        return wrap(sp.csc_matrix(dense))


def brute_force_auc(scores: np.ndarray, labels: np.ndarray) -> float:
    """Pairwise AUC enumeration: wins + half-ties over all (pos, neg) pairs."""
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    if pos.size == 0 or neg.size == 0:
        return 0.5
    total = 0.0
    for s in pos:
        for t in neg:
            if s > t:
                total += 1.0
            elif s == t:
                total += 0.5
    return total / (pos.size * neg.size)


def brute_force_confusion(scores: np.ndarray, labels: np.ndarray,
                          threshold: float = 0.5) -> dict[str, float]:
    tp = fp = tn = fn = 0
    for s, y in zip(scores, labels):
        pred = 1 if s >= threshold else 0
        if pred == 1 and y == 1:
            tp += 1
        elif pred == 1 and y == 0:
            fp += 1
        elif pred == 0 and y == 0:
            tn += 1
        else:
            fn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {
        "accuracy": (tp + tn) / len(labels),
        "precision": precision,
        "recall": recall,
        "f1": f1,
    }
