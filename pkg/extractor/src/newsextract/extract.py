"""End-to-end corpus extraction: clean, embed, write feature files."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .encoder import HIDDEN, Encoder, embed_words
from .errors import DataError
from .records import CleanResult, clean, write_tables
from .weights import combine_sequences, sequence_vector


def document_vector(matrix, spans, q: int, alpha: float, tol: float) -> np.ndarray:
    """One vector per document: per-sequence aggregation, then a
    token-count-weighted combine across sequences."""
    if not spans:
        return np.zeros(HIDDEN)
    vecs = [sequence_vector(matrix[lo : hi + 1], q, alpha, tol) for lo, hi, _ in spans]
    return combine_sequences(vecs, [t for _, _, t in spans])


def read_texts_tsv(path) -> list[tuple[str, str, str]]:
    """Parse texts.tsv rows: node_type, node_id, cleaned text."""
    rows = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped.strip() or stripped.lstrip().startswith("#"):
                continue
            parts = stripped.split("\t")
            if len(parts) != 3:
                raise DataError(
                    f"{path}:{line_no}: expected 3 tab-separated fields, got {len(parts)}"
                )
            node_type, node_id, text = parts
            if node_type not in ("news", "author"):
                raise DataError(f"{path}:{line_no}: unknown node type {node_type!r}")
            if (node_type, node_id) in seen:
                raise DataError(f"{path}:{line_no}: duplicate row for {node_type} {node_id!r}")
            seen.add((node_type, node_id))
            rows.append((node_type, node_id, text))
    return rows


def embed_texts(
    rows,
    encoder: Encoder,
    out_dir,
    *,
    q: int = 3,
    alpha: float = 0.85,
    tol: float = 1e-9,
) -> dict[str, int]:
    """Embed (node_type, node_id, text) rows into features.tsv and words.tsv.

    features.tsv rows: node_type, node_id, 768 comma-joined floats.
    words.tsv rows add a word position; positions per node run 0..n-1.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n_features = 0
    n_words = 0
    with open(out / "features.tsv", "w", encoding="utf-8") as feat, open(
        out / "words.tsv", "w", encoding="utf-8"
    ) as wordf:
        for node_type, node_id, text in rows:
            matrix, spans = embed_words(encoder, text)[1:]
            vec = document_vector(matrix, spans, q, alpha, tol)
            feat.write(f"{node_type}\t{node_id}\t{_floats(vec)}\n")
            n_features += 1
            for pos in range(matrix.shape[0]):
                wordf.write(f"{node_type}\t{node_id}\t{pos}\t{_floats(matrix[pos])}\n")
                n_words += 1
    return {"feature_rows": n_features, "word_rows": n_words}


def extract_corpus(
    records,
    encoder: Encoder,
    out_dir,
    *,
    q: int = 3,
    alpha: float = 0.85,
    tol: float = 1e-9,
) -> dict[str, int]:
    """Full pass over raw records; returns row counts per output."""
    result = clean(records)
    counts = write_tables(result, out_dir)
    counts.update(
        embed_texts(_text_rows(result), encoder, out_dir, q=q, alpha=alpha, tol=tol)
    )
    return counts


def _text_rows(result: CleanResult) -> list[tuple[str, str, str]]:
    rows = [("news", n.id, n.content) for n in result.news]
    rows += [("author", a.id, a.profile) for a in result.authors]
    return rows


def _floats(vec) -> str:
    return ",".join(repr(float(v)) for v in vec)
