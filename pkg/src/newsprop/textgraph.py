"""Word-level graphs and feature aggregation.

A document's words form a banded co-occurrence graph (each word linked
to its q nearest neighbours on each side). Stationary random-walk mass
on that graph weights the per-word vectors into one document vector.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import DataError, NonConvergenceError
from .sparse import SparseMatrix, column_normalize, wrap

NODE_TYPES = ("news", "author")
MAX_TERMS = 100_000  # series-length cap before giving up


def build_word_graph(n_words: int, q: int) -> SparseMatrix:
    """Symmetric 0/1 graph linking positions within distance q.

    q must be at least 1; q >= n_words - 1 gives the complete graph.
    """
    if q < 1:
        raise ValueError(f"neighbourhood radius must be at least 1, got {q}")
    if n_words < 0:
        raise ValueError(f"negative word count {n_words}")
    rows = []
    cols = []
    for offset in range(1, min(q, n_words - 1) + 1):
        idx = np.arange(n_words - offset)
        rows.append(idx)
        cols.append(idx + offset)
        rows.append(idx + offset)
        cols.append(idx)
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
    else:
        r = np.empty(0, dtype=np.int64)
        c = np.empty(0, dtype=np.int64)
    coo = sp.coo_matrix((np.ones(r.size), (r, c)), shape=(n_words, n_words))
    return wrap(coo)


def pagerank_weights(
    adj: SparseMatrix, alpha: float, tol: float, max_terms: int = MAX_TERMS
) -> np.ndarray:
    """Random-walk-with-restart mass per node, uniform restart.

    Computes (1 - alpha) * sum_k (alpha M)^k u by cumulative power
    iteration, where M column-normalizes adj. Terms are added until the
    pending tail alpha^(k+1) drops below tol, so the result sums to 1
    within tol.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    n = adj.n_rows
    if n == 0:
        return np.zeros(0)
    m = column_normalize(adj)
    term = np.full(n, (1.0 - alpha) / n)
    total = term.copy()
    tail = alpha
    k = 0
    while tail >= tol:
        k += 1
        if k > max_terms:
            raise NonConvergenceError(
                f"walk series still above tol={tol} after {max_terms} terms"
            )
        term = alpha * (m.inner.csc @ term)
        total += term
        tail *= alpha
    return total


def aggregate_embedding(features: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Weight rows of an (n, d) feature matrix into a single vector."""
    feats = np.asarray(features, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if feats.ndim != 2:
        raise ValueError(f"features must be 2-d, got shape {feats.shape}")
    if w.ndim != 1 or w.size != feats.shape[0]:
        raise ValueError(
            f"got {w.size if w.ndim == 1 else w.shape} weights for {feats.shape[0]} rows"
        )
    if feats.shape[0] == 0:
        return np.zeros(feats.shape[1])
    return w @ feats


def document_vector(
    word_features: np.ndarray, q: int, alpha: float, tol: float
) -> np.ndarray:
    """One vector for a document given its (n_words, d) word features."""
    feats = np.asarray(word_features, dtype=np.float64)
    if feats.ndim != 2:
        raise ValueError(f"word features must be 2-d, got shape {feats.shape}")
    if feats.shape[0] == 0:
        return np.zeros(feats.shape[1])
    weights = pagerank_weights(build_word_graph(feats.shape[0], q), alpha, tol)
    return aggregate_embedding(feats, weights)


def combine_sequences(vectors: list[np.ndarray], token_counts: list[int]) -> np.ndarray:
    """Average per-sequence vectors weighted by their token counts."""
    if len(vectors) != len(token_counts):
        raise ValueError(
            f"{len(vectors)} vectors but {len(token_counts)} token counts"
        )
    if not vectors:
        raise ValueError("no sequences to combine")
    counts = np.asarray(token_counts, dtype=np.float64)
    if counts.min() < 0 or counts.sum() == 0:
        raise ValueError(f"token counts must be non-negative with positive sum: {token_counts}")
    stacked = np.stack([np.asarray(v, dtype=np.float64) for v in vectors])
    return (counts / counts.sum()) @ stacked


@dataclass(frozen=True)
class FeatureTable:
    """Per-node dense feature vectors keyed by (node_type, node_id)."""

    dim: int
    entries: dict[tuple[str, str], np.ndarray] = field(default_factory=dict)

    def vector(self, node_type: str, node_id: str) -> np.ndarray:
        key = (node_type, node_id)
        if key not in self.entries:
            raise DataError(f"no feature row for {node_type} node {node_id!r}")
        return self.entries[key]


def read_features_tsv(path: str | Path) -> FeatureTable:
    """Parse node_type<TAB>node_id<TAB>comma-joined floats."""
    entries: dict[tuple[str, str], np.ndarray] = {}
    dim = -1
    for line_no, fields in _rows(path, 3):
        node_type, node_id, blob = fields
        _check_type(path, line_no, node_type)
        key = (node_type, node_id)
        if key in entries:
            raise DataError(f"{path}:{line_no}: duplicate feature row for {key}")
        vec = _parse_floats(path, line_no, blob)
        if dim == -1:
            dim = vec.size
        elif vec.size != dim:
            raise DataError(
                f"{path}:{line_no}: feature width {vec.size} differs from {dim}"
            )
        entries[key] = vec
    return FeatureTable(dim=max(dim, 0), entries=entries)


def write_features_tsv(table: FeatureTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for (node_type, node_id), vec in table.entries.items():
            blob = ",".join(repr(float(x)) for x in vec)
            fh.write(f"{node_type}\t{node_id}\t{blob}\n")


def read_word_features(path: str | Path) -> dict[tuple[str, str], np.ndarray]:
    """Parse per-word vectors: node_type, node_id, word_position, floats.

    Positions for each node must be exactly 0 .. n-1; the result maps
    each node to its (n, d) matrix in position order.
    """
    rows: dict[tuple[str, str], list[tuple[int, np.ndarray]]] = {}
    dim = -1
    for line_no, fields in _rows(path, 4):
        node_type, node_id, pos_text, blob = fields
        _check_type(path, line_no, node_type)
        try:
            pos = int(pos_text)
        except ValueError:
            raise DataError(f"{path}:{line_no}: bad word position {pos_text!r}") from None
        if pos < 0:
            raise DataError(f"{path}:{line_no}: negative word position {pos}")
        vec = _parse_floats(path, line_no, blob)
        if dim == -1:
            dim = vec.size
        elif vec.size != dim:
            raise DataError(
                f"{path}:{line_no}: feature width {vec.size} differs from {dim}"
            )
        rows.setdefault((node_type, node_id), []).append((pos, vec))
    out = {}
    for key, items in rows.items():
        positions = sorted(p for p, _ in items)
        if positions != list(range(len(items))):
            raise DataError(
                f"{path}: word positions for {key} must cover 0..{len(items) - 1} "
                f"exactly, got {positions}"
            )
        items.sort(key=lambda t: t[0])
        out[key] = np.stack([v for _, v in items])
    return out


def aggregate_words(
    word_features: dict[tuple[str, str], np.ndarray],
    q: int,
    alpha: float,
    tol: float,
) -> FeatureTable:
    """Collapse per-word matrices into one FeatureTable of document vectors."""
    entries = {}
    dim = 0
    for key in sorted(word_features):
        mat = word_features[key]
        dim = mat.shape[1]
        entries[key] = document_vector(mat, q, alpha, tol)
    return FeatureTable(dim=dim, entries=entries)


def _rows(path: str | Path, n_fields: int) -> list[tuple[int, list[str]]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    out = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != n_fields:
            raise DataError(
                f"{path}:{line_no}: expected {n_fields} tab-separated fields, "
                f"got {len(fields)}"
            )
        out.append((line_no, fields))
    return out


def _check_type(path, line_no: int, node_type: str) -> None:
    if node_type not in NODE_TYPES:
        raise DataError(
            f"{path}:{line_no}: node type must be one of {NODE_TYPES}, got {node_type!r}"
        )


def _parse_floats(path, line_no: int, blob: str) -> np.ndarray:
    try:
        vec = np.array([float(x) for x in blob.split(",")], dtype=np.float64)
    except ValueError:
        raise DataError(f"{path}:{line_no}: unparseable float in feature list") from None
    if not np.all(np.isfinite(vec)):
        raise DataError(f"{path}:{line_no}: non-finite feature value")
    return vec
