"""Heterogeneous news-author graph: records, loaders, edges, updates.

Node index spaces: news occupy [0, n_news) and authors
[n_news, n_news + n_authors) in the combined space used by the
author-news relation; the nn and aa relations use per-type indices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path

from .errors import DataError
from .sparse import SparseMatrix, from_coordinates

RELATIONS = ("an", "nn", "aa")


@dataclass(frozen=True)
class NewsRecord:
    id: str
    label: int  # 0 fake, 1 real; unlabeled rows are dropped at load time
    subject_ids: tuple[str, ...]
    author_id: str


@dataclass(frozen=True)
class AuthorRecord:
    id: str
    source_id: str | None
    derived_label: float | None = None


@dataclass(frozen=True)
class HeteroGraph:
    """Immutable snapshot of the corpus graph.

    edges_an pairs are (news index, author index); edges_nn and edges_aa
    hold each undirected pair once with i < j, and adjacency construction
    materializes the symmetric entries.
    """

    news: tuple[NewsRecord, ...]
    authors: tuple[AuthorRecord, ...]
    subjects: tuple[tuple[str, str], ...]  # (id, name)
    sources: tuple[tuple[str, str], ...]
    edges_an: tuple[tuple[int, int], ...] = ()
    edges_nn: tuple[tuple[int, int], ...] = ()
    edges_aa: tuple[tuple[int, int], ...] = ()

    @property
    def n_news(self) -> int:
        return len(self.news)

    @property
    def n_authors(self) -> int:
        return len(self.authors)

    @property
    def n_combined(self) -> int:
        return self.n_news + self.n_authors

    @cached_property
    def news_index(self) -> dict[str, int]:
        return {r.id: i for i, r in enumerate(self.news)}

    @cached_property
    def author_index(self) -> dict[str, int]:
        return {r.id: i for i, r in enumerate(self.authors)}

    def counts(self) -> dict[str, int]:
        return {
            "news": self.n_news,
            "authors": self.n_authors,
            "subjects": len(self.subjects),
            "sources": len(self.sources),
            "links_an": len(self.edges_an),
            "links_nn": len(self.edges_nn),
            "links_aa": len(self.edges_aa),
        }


def _read_rows(path: str | Path, n_fields: int) -> list[tuple[int, list[str]]]:
    """Tab-separated rows with line numbers; '#' lines and blanks skipped."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != n_fields:
            raise DataError(
                f"{path}:{line_no}: expected {n_fields} tab-separated fields, "
                f"got {len(fields)}"
            )
        rows.append((line_no, fields))
    return rows


def _read_catalog(path: str | Path, kind: str) -> tuple[tuple[str, str], ...]:
    seen: dict[str, int] = {}
    out = []
    for line_no, (ident, name) in _read_rows(path, 2):
        if not ident:
            raise DataError(f"{path}:{line_no}: empty {kind} id")
        if ident in seen:
            raise DataError(
                f"{path}:{line_no}: duplicate {kind} id {ident!r} "
                f"(first seen on line {seen[ident]})"
            )
        seen[ident] = line_no
        out.append((ident, name))
    return tuple(out)


def load_graph(
    news_path: str | Path,
    authors_path: str | Path,
    subjects_path: str | Path,
    sources_path: str | Path,
) -> HeteroGraph:
    """Parse the four node tables and check referential integrity.

    News rows with an empty label field are dropped. Unknown author,
    subject, or source references raise DataError naming the id.
    """
    subjects = _read_catalog(subjects_path, "subject")
    sources = _read_catalog(sources_path, "source")
    subject_ids = {s[0] for s in subjects}
    source_ids = {s[0] for s in sources}

    authors = []
    seen: dict[str, int] = {}
    for line_no, (ident, source_id) in _read_rows(authors_path, 2):
        if not ident:
            raise DataError(f"{authors_path}:{line_no}: empty author id")
        if ident in seen:
            raise DataError(
                f"{authors_path}:{line_no}: duplicate author id {ident!r} "
                f"(first seen on line {seen[ident]})"
            )
        seen[ident] = line_no
        if source_id and source_id not in source_ids:
            raise DataError(
                f"{authors_path}:{line_no}: author {ident!r} references "
                f"unknown source {source_id!r}"
            )
        authors.append(AuthorRecord(id=ident, source_id=source_id or None))

    author_ids = {a.id for a in authors}
    news = []
    seen = {}
    for line_no, (ident, label_text, subj_text, author_id) in _read_rows(news_path, 4):
        if not ident:
            raise DataError(f"{news_path}:{line_no}: empty news id")
        if ident in seen:
            raise DataError(
                f"{news_path}:{line_no}: duplicate news id {ident!r} "
                f"(first seen on line {seen[ident]})"
            )
        seen[ident] = line_no
        if not label_text:
            continue  # no usable label, row is filtered out
        if label_text not in ("0", "1"):
            raise DataError(
                f"{news_path}:{line_no}: label must be 0, 1, or empty, got {label_text!r}"
            )
        if not author_id:
            raise DataError(f"{news_path}:{line_no}: empty author id for news {ident!r}")
        if author_id not in author_ids:
            raise DataError(
                f"{news_path}:{line_no}: news {ident!r} references "
                f"unknown author {author_id!r}"
            )
        subj: tuple[str, ...] = ()
        if subj_text:
            parts = subj_text.split(",")
            if any(not p for p in parts):
                raise DataError(f"{news_path}:{line_no}: empty subject id in {subj_text!r}")
            for p in parts:
                if p not in subject_ids:
                    raise DataError(
                        f"{news_path}:{line_no}: news {ident!r} references "
                        f"unknown subject {p!r}"
                    )
            subj = tuple(parts)
        news.append(
            NewsRecord(id=ident, label=int(label_text), subject_ids=subj, author_id=author_id)
        )
    return HeteroGraph(news=tuple(news), authors=tuple(authors), subjects=subjects, sources=sources)


def _group_pairs(groups: dict[str, list[int]]) -> tuple[tuple[int, int], ...]:
    pairs = set()
    for members in groups.values():
        pairs.update(itertools.combinations(sorted(set(members)), 2))
    return tuple(sorted(pairs))


def build_mappings(g: HeteroGraph) -> HeteroGraph:
    """Fill the three edge lists from record attributes.

    an: each news links to its author. nn: news pairs sharing at least
    one subject (counted once however many they share). aa: author pairs
    sharing a source. Idempotent.
    """
    edges_an = tuple((i, g.author_index[r.author_id]) for i, r in enumerate(g.news))

    by_subject: dict[str, list[int]] = {}
    for i, r in enumerate(g.news):
        for s in r.subject_ids:
            by_subject.setdefault(s, []).append(i)
    by_source: dict[str, list[int]] = {}
    for j, a in enumerate(g.authors):
        if a.source_id is not None:
            by_source.setdefault(a.source_id, []).append(j)

    return replace(
        g,
        edges_an=edges_an,
        edges_nn=_group_pairs(by_subject),
        edges_aa=_group_pairs(by_source),
    )


def derive_author_labels(g: HeteroGraph) -> HeteroGraph:
    """Give each author the mean label of their news; none means no label.

    The mean lands in [0, 1] and is used downstream as a soft target,
    not rounded to a class.
    """
    totals: dict[str, list[float]] = {}
    for r in g.news:
        totals.setdefault(r.author_id, []).append(float(r.label))
    authors = tuple(
        replace(
            a,
            derived_label=(sum(totals[a.id]) / len(totals[a.id])) if a.id in totals else None,
        )
        for a in g.authors
    )
    return replace(g, authors=authors)


def relation_adjacency(g: HeteroGraph, relation: str) -> SparseMatrix:
    """Symmetric 0/1 adjacency for one relation.

    "an" yields the (n_news + n_authors)-square combined matrix with the
    author block offset by n_news; "nn" and "aa" are per-type squares.
    """
    if relation == "an":
        n = g.n_combined
        off = g.n_news
        entries = []
        for i, j in g.edges_an:
            entries.append((i, off + j, 1.0))
            entries.append((off + j, i, 1.0))
        return from_coordinates(n, n, entries)
    if relation == "nn":
        edges, n = g.edges_nn, g.n_news
    elif relation == "aa":
        edges, n = g.edges_aa, g.n_authors
    else:
        raise ValueError(f"unknown relation {relation!r}, expected one of {RELATIONS}")
    entries = []
    for i, j in edges:
        entries.append((i, j, 1.0))
        entries.append((j, i, 1.0))
    return from_coordinates(n, n, entries)


def apply_update(g: HeteroGraph, op: str, relation: str, src_id: str, dst_id: str) -> HeteroGraph:
    """Insert (+) or delete (-) one edge, addressed by node ids.

    For "an" src is the author id and dst the news id; nn and aa take two
    ids of the owning type in either order. Inserting a present edge or
    deleting an absent one returns the graph unchanged.
    """
    if op not in ("+", "-"):
        raise DataError(f"unknown update op {op!r}, expected + or -")
    if relation == "an":
        if src_id not in g.author_index:
            raise DataError(f"unknown author id {src_id!r}")
        if dst_id not in g.news_index:
            raise DataError(f"unknown news id {dst_id!r}")
        pair = (g.news_index[dst_id], g.author_index[src_id])
        edges = g.edges_an
        field = "edges_an"
    else:
        if relation == "nn":
            index, field = g.news_index, "edges_nn"
        elif relation == "aa":
            index, field = g.author_index, "edges_aa"
        else:
            raise DataError(f"unknown relation {relation!r}, expected one of {RELATIONS}")
        for ident in (src_id, dst_id):
            if ident not in index:
                raise DataError(f"unknown {relation[0]}-type node id {ident!r}")
        i, j = index[src_id], index[dst_id]
        if i == j:
            raise DataError(f"self-edge on {src_id!r} is not allowed")
        pair = (min(i, j), max(i, j))
        edges = getattr(g, field)

    present = pair in edges
    if op == "+" and not present:
        edges = tuple(sorted(edges + (pair,)))
    elif op == "-" and present:
        edges = tuple(e for e in edges if e != pair)
    else:
        return g
    return replace(g, **{field: edges})
