"""Sparse matrices and column-stochastic transition operators.

Thin, immutable wrappers around scipy compressed storage. Construction
canonicalizes (duplicates merged by summation, indices sorted, explicit
zeros dropped) so downstream equality and product code never has to care
about representation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

COLUMN_SUM_TOL = 1e-12  # stochastic columns must sum to 1 within this


def _canonical_csc(m: sp.spmatrix) -> sp.csc_matrix:
    out = sp.csc_matrix(m)
    out.sum_duplicates()
    out.sort_indices()
    out.eliminate_zeros()
    return out


@dataclass(frozen=True)
class SparseMatrix:
    """Real sparse matrix in canonical column-major form.

    Treated as immutable after construction; all operations return new
    objects. Values may be negative (difference matrices use this).
    """

    csc: sp.csc_matrix

    @property
    def n_rows(self) -> int:
        return self.csc.shape[0]

    @property
    def n_cols(self) -> int:
        return self.csc.shape[1]

    @property
    def nnz(self) -> int:
        return self.csc.nnz

    @cached_property
    def csr(self) -> sp.csr_matrix:
        out = self.csc.tocsr()
        out.sort_indices()
        return out

    def to_dense(self) -> np.ndarray:
        return self.csc.toarray()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.csc.shape != other.csc.shape:
            return False
        return (
            np.array_equal(self.csc.indptr, other.csc.indptr)
            and np.array_equal(self.csc.indices, other.csc.indices)
            and np.array_equal(self.csc.data, other.csc.data)
        )

    __hash__ = None  # type: ignore[assignment]


def wrap(m: sp.spmatrix, shape: tuple[int, int] | None = None) -> SparseMatrix:
    """Canonicalize an existing scipy matrix into a SparseMatrix."""
    out = _canonical_csc(m)
    if shape is not None and out.shape != shape:
        raise ValueError(f"expected shape {shape}, got {out.shape}")
    return SparseMatrix(out)


def zeros(n_rows: int, n_cols: int) -> SparseMatrix:
    return SparseMatrix(sp.csc_matrix((n_rows, n_cols), dtype=np.float64))


def identity(n: int) -> SparseMatrix:
    return SparseMatrix(sp.identity(n, dtype=np.float64, format="csc"))


def from_coordinates(
    n_rows: int,
    n_cols: int,
    entries: Iterable[tuple[int, int, float]],
) -> SparseMatrix:
    """Build a matrix from (row, col, value) triples.

    Duplicate coordinates are merged by summation. Out-of-range
    coordinates and non-finite values are rejected.
    """
    if n_rows < 0 or n_cols < 0:
        raise ValueError(f"negative shape ({n_rows}, {n_cols})")
    entry_list = list(entries)
    rows = np.fromiter((e[0] for e in entry_list), dtype=np.int64, count=len(entry_list))
    cols = np.fromiter((e[1] for e in entry_list), dtype=np.int64, count=len(entry_list))
    vals = np.fromiter((e[2] for e in entry_list), dtype=np.float64, count=len(entry_list))
    bad = np.flatnonzero((rows < 0) | (rows >= n_rows) | (cols < 0) | (cols >= n_cols))
    if bad.size:
        k = int(bad[0])
        raise ValueError(
            f"coordinate ({rows[k]}, {cols[k]}) out of range for a "
            f"{n_rows}x{n_cols} matrix"
        )
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        k = int(bad[0])
        raise ValueError(f"non-finite value {vals[k]!r} at coordinate ({rows[k]}, {cols[k]})")
    coo = sp.coo_matrix((vals, (rows, cols)), shape=(n_rows, n_cols))
    return SparseMatrix(_canonical_csc(coo))


@dataclass(frozen=True)
class StochasticMatrix:
    """Square column-stochastic matrix: entries in [0, 1], columns sum to 1."""

    inner: SparseMatrix

    def __post_init__(self) -> None:
        csc = self.inner.csc
        if csc.shape[0] != csc.shape[1]:
            raise ValueError(f"stochastic matrix must be square, got {csc.shape}")
        if csc.nnz:
            lo = csc.data.min()
            hi = csc.data.max()
            if lo < 0.0 or hi > 1.0 + COLUMN_SUM_TOL:
                raise ValueError(f"entries outside [0, 1]: min {lo}, max {hi}")
        sums = np.asarray(csc.sum(axis=0)).ravel()
        off = np.abs(sums - 1.0)
        if self.n and off.max() > COLUMN_SUM_TOL:
            j = int(off.argmax())
            raise ValueError(f"column {j} sums to {sums[j]!r}, not 1")

    @property
    def n(self) -> int:
        return self.inner.n_rows

    @cached_property
    def csr(self) -> sp.csr_matrix:
        return self.inner.csr

    def to_dense(self) -> np.ndarray:
        return self.inner.to_dense()


def column_normalize(a: SparseMatrix) -> StochasticMatrix:
    """Scale each column to sum 1; an all-zero column j becomes e_j.

    The self-loop stand-in for empty columns keeps the operator
    stochastic without leaking probability mass across nodes.
    """
    csc = a.csc
    if csc.shape[0] != csc.shape[1]:
        raise ValueError(f"only square matrices can be normalized, got {csc.shape}")
    if csc.nnz and csc.data.min() < 0.0:
        k = int(np.argmin(csc.data))
        row = int(csc.indices[k])
        col = int(np.searchsorted(csc.indptr, k, side="right") - 1)
        raise ValueError(f"negative entry {csc.data[k]} at ({row}, {col})")
    n = csc.shape[0]
    sums = np.asarray(csc.sum(axis=0)).ravel()
    dangling = np.flatnonzero(sums == 0.0)
    scale = np.ones(n)
    nonzero = sums != 0.0
    scale[nonzero] = 1.0 / sums[nonzero]
    per_entry_col = np.repeat(np.arange(n), np.diff(csc.indptr))
    scaled = sp.csc_matrix(
        (csc.data * scale[per_entry_col], csc.indices.copy(), csc.indptr.copy()),
        shape=csc.shape,
    )
    if dangling.size:
        loops = sp.coo_matrix(
            (np.ones(dangling.size), (dangling, dangling)), shape=csc.shape
        )
        scaled = scaled + loops.tocsc()
    return StochasticMatrix(SparseMatrix(_canonical_csc(scaled)))


def two_hop(m: StochasticMatrix) -> StochasticMatrix:
    """Two-step transition operator M @ M."""
    prod = m.inner.csc @ m.inner.csc
    return StochasticMatrix(SparseMatrix(_canonical_csc(prod)))


def matvec(m: SparseMatrix, v: Sequence[float] | np.ndarray) -> np.ndarray:
    vec = np.asarray(v, dtype=np.float64)
    if vec.ndim != 1 or vec.size != m.n_cols:
        raise ValueError(
            f"vector of length {vec.size if vec.ndim == 1 else vec.shape} "
            f"does not match {m.n_rows}x{m.n_cols} matrix"
        )
    return m.csc @ vec
