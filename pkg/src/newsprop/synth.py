"""Synthetic separable corpus generator, for demos and end-to-end tests.

Two latent classes with disjoint authors, subjects, and sources, and
Gaussian feature clusters; any reasonable classifier plus propagation
should reach near-perfect accuracy on it.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .graph import HeteroGraph
from .util import substream


def make_corpus(
    out_dir: str | Path,
    n_news: int = 200,
    n_authors: int = 40,
    n_subjects: int = 2,
    n_sources: int = 2,
    dim: int = 16,
    noise: float = 0.5,
    seed: int = 0,
) -> dict[str, Path]:
    """Write news/authors/subjects/sources/features tables; returns paths.

    Class c news cite class c authors, carry class c subjects, and sit in
    a Gaussian cluster around a class center; authors inherit their
    class cluster. Everything is split as evenly as the counts allow.
    """
    if min(n_news, n_authors, n_subjects, n_sources, dim) < 1:
        raise ValueError("all corpus sizes must be at least 1")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = substream(seed, "synthetic-corpus")
    centers = rng.normal(size=(2, dim)) * 2.0

    def class_of(i: int, total: int) -> int:
        return 0 if i < (total + 1) // 2 else 1

    sources = [(f"src{k}", f"outlet {k}") for k in range(n_sources)]
    subjects = [(f"s{k}", f"topic {k}") for k in range(n_subjects)]
    # Class 0 takes the first half of each catalog, class 1 the rest; with
    # a single entry the classes share it.
    def pool(items: list, cls: int) -> list:
        if len(items) == 1:
            return items
        half = (len(items) + 1) // 2
        return items[:half] if cls == 0 else items[half:]

    author_rows = []
    for j in range(n_authors):
        cls = class_of(j, n_authors)
        src = pool(sources, cls)[j % len(pool(sources, cls))][0]
        author_rows.append((f"a{j:03d}", src, cls))

    news_rows = []
    for i in range(n_news):
        cls = class_of(i, n_news)
        authors_of_class = [a for a in author_rows if a[2] == cls] or author_rows
        author = authors_of_class[i % len(authors_of_class)][0]
        subject = pool(subjects, cls)[i % len(pool(subjects, cls))][0]
        label = 1 - cls  # class 0 cluster carries label 1 (real)
        news_rows.append((f"n{i:04d}", label, subject, author, cls))

    (out / "subjects.tsv").write_text(
        "".join(f"{sid}\t{name}\n" for sid, name in subjects), encoding="utf-8"
    )
    (out / "sources.tsv").write_text(
        "".join(f"{sid}\t{name}\n" for sid, name in sources), encoding="utf-8"
    )
    (out / "authors.tsv").write_text(
        "".join(f"{aid}\t{src}\n" for aid, src, _ in author_rows), encoding="utf-8"
    )
    (out / "news.tsv").write_text(
        "".join(
            f"{nid}\t{label}\t{subject}\t{author}\n"
            for nid, label, subject, author, _ in news_rows
        ),
        encoding="utf-8",
    )

    lines = []
    for nid, _, _, _, cls in news_rows:
        vec = centers[cls] + noise * rng.normal(size=dim)
        lines.append("news\t" + nid + "\t" + ",".join(repr(float(x)) for x in vec))
    for aid, _, cls in author_rows:
        vec = centers[cls] + noise * rng.normal(size=dim)
        lines.append("author\t" + aid + "\t" + ",".join(repr(float(x)) for x in vec))
    (out / "features.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    return {
        "news": out / "news.tsv",
        "authors": out / "authors.tsv",
        "subjects": out / "subjects.tsv",
        "sources": out / "sources.tsv",
        "features": out / "features.tsv",
    }


def write_random_updates(g: HeteroGraph, out_path: str | Path, n_updates: int,
                         seed: int = 0) -> Path:
    """Random author-news edge inserts and deletes against a graph."""
    rng = substream(seed, "random-updates")
    current = set(g.edges_an)
    lines = []
    for _ in range(n_updates):
        if current and rng.random() < 0.4:
            ni, aj = sorted(current)[rng.integers(len(current))]
            lines.append(f"-\tan\t{g.authors[aj].id}\t{g.news[ni].id}")
            current.discard((ni, aj))
        else:
            ni = int(rng.integers(g.n_news))
            aj = int(rng.integers(g.n_authors))
            lines.append(f"+\tan\t{g.authors[aj].id}\t{g.news[ni].id}")
            current.add((ni, aj))
    path = Path(out_path)
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path
