"""Random-walk-with-restart propagation and its dynamic updates.

Every row i of a PropagationMatrix is the restart distribution
p_i = (1 - alpha) * sum_k (alpha M)^k e_i, accumulated until the pending
tail alpha^(k+1) falls below tol, so each row sums to 1 within tol.

When the transition operator changes from M to M', rows are repaired in
place of a recompute: p_i' = p_i + sum_k (alpha M')^k * alpha (M' - M) p_i.
The correction is linear in the changed columns of M' - M, so one series
per changed column serves every row at once; per-row truncation error
stays below tol.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import NonConvergenceError
from .kernels import spmm
from .sparse import SparseMatrix, StochasticMatrix, column_normalize, two_hop

MAX_TERMS = 100_000  # series-length cap before giving up
BLOCK_COLS = 128  # seed columns propagated together (cache sweet spot)
ROW_CHUNK = 512  # dense row chunk for the low-rank repair product
SCHEMES = ("one_hop", "two_hop", "mixed")


@dataclass(frozen=True)
class PropagationMatrix:
    """Dense restart distributions for a set of nodes.

    matrix has one row per entry of row_ids; columns span all n nodes of
    the operator. Immutable: updates return new objects.
    """

    matrix: np.ndarray
    row_ids: np.ndarray
    alpha: float
    tol: float
    scheme: str

    def __post_init__(self) -> None:
        if self.matrix.ndim != 2 or self.row_ids.ndim != 1:
            raise ValueError("matrix must be 2-d and row_ids 1-d")
        if self.matrix.shape[0] != self.row_ids.size:
            raise ValueError(
                f"{self.matrix.shape[0]} rows stored for {self.row_ids.size} row ids"
            )
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}, expected one of {SCHEMES}")

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @cached_property
    def _row_pos(self) -> dict[int, int]:
        return {int(node): pos for pos, node in enumerate(self.row_ids)}

    def row(self, node_id: int) -> np.ndarray:
        if int(node_id) not in self._row_pos:
            raise KeyError(f"no stored row for node {node_id}")
        return self.matrix[self._row_pos[int(node_id)]]

    def has_row(self, node_id: int) -> bool:
        return int(node_id) in self._row_pos

    def positions(self, node_ids) -> np.ndarray:
        """Row positions of the given node ids, in order."""
        try:
            return np.array([self._row_pos[int(i)] for i in node_ids], dtype=np.int64)
        except KeyError as exc:
            raise KeyError(f"no stored row for node {exc.args[0]}") from None


def _check_alpha_tol(alpha: float, tol: float) -> None:
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")


def rwr_row(m: StochasticMatrix, seed: int, alpha: float, tol: float,
            max_terms: int = MAX_TERMS) -> np.ndarray:
    """Restart distribution of a single node by cumulative power iteration."""
    _check_alpha_tol(alpha, tol)
    if not 0 <= seed < m.n:
        raise ValueError(f"seed {seed} out of range for {m.n} nodes")
    term = np.zeros(m.n)
    term[seed] = 1.0 - alpha
    total = term.copy()
    tail = alpha
    k = 0
    csc = m.inner.csc
    while tail >= tol:
        k += 1
        if k > max_terms:
            raise NonConvergenceError(
                f"walk series still above tol={tol} after {max_terms} terms"
            )
        term = alpha * (csc @ term)
        total += term
        tail *= alpha
    return total


def _cpi_block(csr: sp.csr_matrix, seeds: np.ndarray, alpha: float, tol: float,
               max_terms: int) -> np.ndarray:
    """Restart distributions for a block of seeds, as (n, len(seeds)) columns."""
    n = csr.shape[0]
    cur = np.zeros((n, seeds.size))
    cur[seeds, np.arange(seeds.size)] = 1.0 - alpha
    total = cur.copy()
    if alpha == 0.0:
        return total
    nxt = np.empty_like(cur)
    tail = alpha
    k = 0
    while tail >= tol:
        k += 1
        if k > max_terms:
            raise NonConvergenceError(
                f"walk series still above tol={tol} after {max_terms} terms"
            )
        spmm(csr, cur, out=nxt)
        nxt *= alpha
        total += nxt
        cur, nxt = nxt, cur
        tail *= alpha
    return total


def _resolve_rows(n: int, rows) -> np.ndarray:
    if rows is None:
        return np.arange(n, dtype=np.int64)
    ids = np.asarray(rows, dtype=np.int64)
    if ids.ndim != 1:
        raise ValueError("rows must be a 1-d index sequence")
    if ids.size and (ids.min() < 0 or ids.max() >= n):
        raise ValueError(f"row ids out of range for {n} nodes")
    if np.unique(ids).size != ids.size:
        raise ValueError("duplicate row ids")
    return ids


def full_propagation(m: StochasticMatrix, alpha: float, tol: float,
                     rows=None, scheme: str = "one_hop",
                     max_terms: int = MAX_TERMS) -> PropagationMatrix:
    """Restart distributions for the given rows (default: every node)."""
    _check_alpha_tol(alpha, tol)
    ids = _resolve_rows(m.n, rows)
    out = np.empty((ids.size, m.n))
    csr = m.csr
    for start in range(0, ids.size, BLOCK_COLS):
        block = ids[start : start + BLOCK_COLS]
        cols = _cpi_block(csr, block, alpha, tol, max_terms)
        out[start : start + block.size] = cols.T
    return PropagationMatrix(out, ids, alpha, tol, scheme)


def _difference_series(csr_new: sp.csr_matrix, d_cols: np.ndarray, alpha: float,
                       tol: float, max_terms: int) -> tuple[np.ndarray, np.ndarray]:
    """sum_k (alpha M')^k applied to each column of d_cols, truncated.

    Column c stops once its pending tail cannot move any repaired row by
    more than tol: the term norm bound ||t_{k+1}||_1 <= alpha ||t_k||_1
    gives tail <= ||t_k||_1 * alpha / (1 - alpha), and rows scale the
    tail by at most alpha, so stop at ||t_k||_1 <= tol (1 - alpha) / alpha^2.
    Returns the series sums and the last term index added per column.
    """
    n, width = d_cols.shape
    total = d_cols.copy()
    terms = np.zeros(width, dtype=np.int64)
    if alpha == 0.0 or width == 0:
        return total, terms
    thresh = tol * (1.0 - alpha) / (alpha * alpha)
    norms = np.abs(d_cols).sum(axis=0)
    active = np.flatnonzero(norms > thresh)
    cur = np.ascontiguousarray(d_cols[:, active])
    k = 0
    while active.size:
        k += 1
        if k > max_terms:
            raise NonConvergenceError(
                f"difference series still above tol={tol} after {max_terms} terms"
            )
        cur = spmm(csr_new, cur)
        cur *= alpha
        total[:, active] += cur
        terms[active] = k
        norms = np.abs(cur).sum(axis=0)
        keep = norms > thresh
        if not keep.all():
            active = active[keep]
            cur = np.ascontiguousarray(cur[:, keep])
    return total, terms


def pushout_update(p: PropagationMatrix, m_old: StochasticMatrix,
                   m_new: StochasticMatrix, tol: float | None = None,
                   max_terms: int = MAX_TERMS,
                   col_chunk: int = 1024) -> PropagationMatrix:
    """Repair stored rows after the operator changed from m_old to m_new.

    Exact up to series truncation: each output row matches a fresh
    full_propagation row under m_new to within tol in L1. If nothing
    changed (or alpha is 0, where rows are restart-only), returns p
    itself.
    """
    if m_old.n != p.n or m_new.n != p.n:
        raise ValueError(
            f"operator size mismatch: rows span {p.n} nodes, "
            f"old is {m_old.n}, new is {m_new.n}"
        )
    alpha = p.alpha
    if tol is None:
        tol = p.tol
    _check_alpha_tol(alpha, tol)
    diff = m_new.inner.csc - m_old.inner.csc
    diff.eliminate_zeros()
    changed = np.flatnonzero(np.diff(diff.indptr) > 0)
    if changed.size == 0 or alpha == 0.0:
        return p

    csr_new = m_new.csr
    new = p.matrix.copy()
    n_rows = new.shape[0]
    for start in range(0, changed.size, col_chunk):
        cols = changed[start : start + col_chunk]
        series, _ = _difference_series(
            csr_new, diff[:, cols].toarray(), alpha, tol, max_terms
        )
        # Coefficients come from the pre-update rows; p.matrix is never
        # written, so later chunks still see the original values.
        coeff = alpha * p.matrix[:, cols]
        for r0 in range(0, n_rows, ROW_CHUNK):
            r1 = min(r0 + ROW_CHUNK, n_rows)
            new[r0:r1] += coeff[r0:r1] @ series.T

    # Truncation residue can leave tiny negatives or off-by-tol row sums;
    # clamp and rescale so stochasticity survives arbitrarily long update
    # sequences. The adjustment is O(tol) per row, far inside the
    # exactness budget.
    np.maximum(new, 0.0, out=new)
    sums = new.sum(axis=1)
    new /= sums[:, None]
    return PropagationMatrix(new, p.row_ids, alpha, tol, p.scheme)


def check_bipartite(an_adj: SparseMatrix, split: int) -> None:
    """Reject adjacencies that are not symmetric across the side split.

    Nodes [0, split) form one side, [split, n) the other; both diagonal
    blocks must be empty and the matrix symmetric.
    """
    n = an_adj.n_rows
    if an_adj.n_cols != n:
        raise ValueError(f"adjacency must be square, got {an_adj.n_rows}x{an_adj.n_cols}")
    if not 0 <= split <= n:
        raise ValueError(f"split {split} out of range for {n} nodes")
    csc = an_adj.csc
    if (csc != csc.T).nnz:
        raise ValueError("bipartite adjacency must be symmetric")
    entry_cols = np.repeat(np.arange(n), np.diff(csc.indptr))
    same_side = (csc.indices < split) == (entry_cols < split)
    if same_side.any():
        k = int(np.flatnonzero(same_side)[0])
        raise ValueError(
            f"edge ({csc.indices[k]}, {entry_cols[k]}) links two nodes on "
            f"the same side of the split"
        )


def two_hop_operator(an_adj: SparseMatrix, split: int) -> StochasticMatrix:
    """Validated two-step transition operator over a bipartite adjacency."""
    check_bipartite(an_adj, split)
    return two_hop(column_normalize(an_adj))


def bipartite_two_hop_propagation(an_adj: SparseMatrix, split: int, alpha: float,
                                  tol: float, rows=None,
                                  max_terms: int = MAX_TERMS) -> PropagationMatrix:
    """Two-hop propagation over a bipartite adjacency.

    Rows of the result put zero mass on the opposite side: with a
    symmetric adjacency every neighbour of a linked node is itself
    linked, so two hops always return to the starting side (isolated
    nodes hold their own mass).
    """
    m2 = two_hop_operator(an_adj, split)
    return full_propagation(m2, alpha, tol, rows=rows, scheme="two_hop",
                            max_terms=max_terms)


@dataclass(frozen=True)
class MixedWeights:
    """Convex weights over the an, nn, and aa propagation channels."""

    w_an: float
    w_nn: float
    w_aa: float

    def __post_init__(self) -> None:
        w = (self.w_an, self.w_nn, self.w_aa)
        if min(w) < 0.0:
            raise ValueError(f"weights must be non-negative, got {w}")
        if abs(sum(w) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {w} (sum {sum(w)!r})")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.w_an, self.w_nn, self.w_aa)


def mixed_propagation(p_an: PropagationMatrix, p_nn: PropagationMatrix,
                      p_aa: PropagationMatrix,
                      weights: MixedWeights) -> PropagationMatrix:
    """Blend the three channels in the combined node space.

    p_an spans all nodes; p_nn and p_aa span their own types and are
    lifted with identity rows for nodes of the other type, which keeps
    every output row a distribution. All inputs must share alpha, and
    p_nn / p_aa must store a row for every node p_an stores.
    """
    if not isinstance(weights, MixedWeights):
        weights = MixedWeights(*weights)
    n_news, n_auth = p_nn.n, p_aa.n
    if p_an.n != n_news + n_auth:
        raise ValueError(
            f"combined span {p_an.n} does not match {n_news} news + {n_auth} authors"
        )
    if not (p_an.alpha == p_nn.alpha == p_aa.alpha):
        raise ValueError(
            f"alpha mismatch: {p_an.alpha}, {p_nn.alpha}, {p_aa.alpha}"
        )
    b_an, b_nn, b_aa = weights.as_tuple()
    out = b_an * p_an.matrix
    ids = p_an.row_ids
    for pos, node in enumerate(ids):
        node = int(node)
        if node < n_news:
            out[pos, :n_news] += b_nn * p_nn.row(node)
            out[pos, node] += b_aa  # identity lift of the author channel
        else:
            out[pos, n_news:] += b_aa * p_aa.row(node - n_news)
            out[pos, node] += b_nn  # identity lift of the news channel
    return PropagationMatrix(out, ids.copy(), p_an.alpha, p_an.tol, "mixed")
