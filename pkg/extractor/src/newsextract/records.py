"""Raw-record cleaning and normalized table emission.

Source corpora arrive with uneven fields. The cleaning pass applies a
fixed rule list, in order, to every record:

1.  content and author profile must read as English, otherwise the
    record is dropped
2.  records without an id get a fresh positive-integer id
3.  records without content or without a label are dropped
4.  missing subjects become the empty list
5.  a missing author profile falls back to the author name
6.  with neither author nor source, author name and profile become the
    sentinel "unknown"
7.  with no author but a source, the source stands in as the author
8.  each author's label is the mean of their news labels
9.  labels collapse to binary, 0 fake and 1 real
10. punctuation is stripped from content and profile

Emitted tables follow the grammars the newsprop package loads:
news.tsv, authors.tsv, subjects.tsv, sources.tsv. texts.tsv carries
the cleaned strings for the embedding stage, and author_labels.tsv
records the rule-8 means (informational; the consumer re-derives them
from news.tsv at load time).
"""
from __future__ import annotations

import csv
import json
import re
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlparse

from .errors import DataError

UNKNOWN = "unknown"

# Function words for the language screen: a text counts as English when
# at least ENGLISH_MIN_RATE of its tokens hit this set. Texts shorter
# than SHORT_TEXT_TOKENS carry too little signal for the rate test and
# instead must be pure ASCII.
STOPWORDS = frozenset(
    "a an and are as at be but by for from had has have he her his i if in "
    "is it its my no not of on or our she so that the their they this to "
    "was we were will with you".split()
)
ENGLISH_MIN_RATE = 0.12
SHORT_TEXT_TOKENS = 8

_WORD = re.compile(r"[a-z']+")

FAKE_LABELS = frozenset({"pants-fire", "pants-on-fire", "false", "fake", "0"})
REAL_LABELS = frozenset(
    {"barely-true", "half-true", "mostly-true", "true", "real", "1"}
)


def is_english(text: str) -> bool:
    """Heuristic language screen; thresholds documented above."""
    tokens = _WORD.findall(text.lower())
    if len(tokens) < SHORT_TEXT_TOKENS:
        return text.isascii()
    hits = sum(1 for t in tokens if t in STOPWORDS)
    return hits / len(tokens) >= ENGLISH_MIN_RATE


def strip_punctuation(text: str) -> str:
    """Replace punctuation with spaces, then collapse whitespace runs.

    Replacement rather than deletion keeps word boundaries intact for
    hyphenated or quoted spans.
    """
    kept = "".join(
        " " if unicodedata.category(ch).startswith("P") else ch for ch in text
    )
    return " ".join(kept.split())


def binarize_label(label: str, where: str = "") -> int:
    norm = "-".join(
        str(label).strip().lower().replace("_", " ").replace("-", " ").split()
    )
    if norm in FAKE_LABELS:
        return 0
    if norm in REAL_LABELS:
        return 1
    raise DataError(f"{where}unrecognized label {label!r}")


def _blank(value) -> bool:
    return value is None or not str(value).strip()


@dataclass(frozen=True)
class RawRecord:
    """One source row before cleaning; absent fields are None or blank."""

    id: str | None = None
    content: str | None = None
    label: str | None = None
    subjects: tuple[str, ...] = ()
    author: str | None = None
    profile: str | None = None
    source: str | None = None


@dataclass(frozen=True)
class CleanedNews:
    id: str
    label: int
    subjects: tuple[str, ...]
    author_id: str
    content: str


@dataclass(frozen=True)
class CleanedAuthor:
    id: str
    source_id: str  # empty string when the source is unknown
    profile: str


@dataclass(frozen=True)
class CleanResult:
    news: tuple[CleanedNews, ...]
    authors: tuple[CleanedAuthor, ...]
    subjects: tuple[str, ...]
    sources: tuple[str, ...]
    author_label_means: dict[str, float]
    dropped: int

    def to_raw_records(self) -> list[RawRecord]:
        """Re-express the cleaned corpus as raw records.

        Feeding the result back through clean() must reproduce it,
        which is what the idempotence tests check.
        """
        profiles = {a.id: a.profile for a in self.authors}
        sources = {a.id: a.source_id for a in self.authors}
        return [
            RawRecord(
                id=n.id,
                content=n.content,
                label=str(n.label),
                subjects=n.subjects,
                author=n.author_id,
                profile=profiles[n.author_id],
                source=sources[n.author_id] or None,
            )
            for n in self.news
        ]


def clean(records) -> CleanResult:
    """Apply the rule list to raw records, in the order given above."""
    rows = list(records)
    used = {str(r.id).strip() for r in rows if not _blank(r.id)}
    counter = 1
    kept: list[tuple[RawRecord, str]] = []
    dropped = 0
    for rec in rows:
        # rule 1: both text fields, where present, must read as English
        if (not _blank(rec.content) and not is_english(str(rec.content))) or (
            not _blank(rec.profile) and not is_english(str(rec.profile))
        ):
            dropped += 1
            continue
        # rule 2
        if _blank(rec.id):
            while str(counter) in used:
                counter += 1
            rid = str(counter)
            used.add(rid)
        else:
            rid = str(rec.id).strip()
        # rule 3
        if _blank(rec.content) or _blank(rec.label):
            dropped += 1
            continue
        kept.append((rec, rid))

    seen: set[str] = set()
    news: list[CleanedNews] = []
    authors: dict[str, tuple[str, str]] = {}
    subject_ids: dict[str, None] = {}
    source_ids: dict[str, None] = {}
    for rec, rid in kept:
        if rid in seen:
            raise DataError(f"duplicate news id {rid!r}")
        seen.add(rid)
        # rule 4
        subs = tuple(str(s).strip() for s in rec.subjects if not _blank(s))
        # rules 5 to 7: resolve the author name and profile
        author = None if _blank(rec.author) else str(rec.author).strip()
        profile = None if _blank(rec.profile) else str(rec.profile).strip()
        source = None if _blank(rec.source) else str(rec.source).strip()
        if profile is None and author is not None:
            profile = author
        if author is None and source is None:
            author = UNKNOWN
            profile = UNKNOWN
        elif author is None:
            author = source
        if profile is None:
            # rule 5 again, now that rule 7 has named the author
            profile = author
        # rule 9
        label = binarize_label(rec.label, where=f"news {rid!r}: ")
        # rule 10
        content = strip_punctuation(str(rec.content))
        profile = strip_punctuation(profile)
        if author not in authors:
            authors[author] = (source or "", profile)
        elif not authors[author][0] and source:
            # first non-blank source wins; the profile stays first-seen
            authors[author] = (source, authors[author][1])
        for s in subs:
            subject_ids.setdefault(s, None)
        if source:
            source_ids.setdefault(source, None)
        news.append(CleanedNews(rid, label, subs, author, content))

    # rule 8: per-author mean over the binarized news labels
    by_author: dict[str, list[int]] = {}
    for n in news:
        by_author.setdefault(n.author_id, []).append(n.label)
    means = {a: sum(v) / len(v) for a, v in by_author.items()}

    return CleanResult(
        news=tuple(news),
        authors=tuple(
            CleanedAuthor(a, src, prof) for a, (src, prof) in authors.items()
        ),
        subjects=tuple(subject_ids),
        sources=tuple(source_ids),
        author_label_means=means,
        dropped=dropped,
    )


def _field(value: str, what: str) -> str:
    """Values embedded in TSV rows must not break the row grammar."""
    if "\t" in value or "\n" in value:
        raise DataError(f"{what} {value!r} contains a tab or newline")
    return value


def write_tables(result: CleanResult, out_dir) -> dict[str, int]:
    """Write the normalized tables; returns per-table row counts."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "news.tsv", "w", encoding="utf-8") as fh:
        for n in result.news:
            for s in n.subjects:
                if "," in s:
                    raise DataError(f"subject id {s!r} contains a comma")
                _field(s, "subject id")
            fh.write(
                f"{_field(n.id, 'news id')}\t{n.label}\t"
                f"{','.join(n.subjects)}\t{_field(n.author_id, 'author id')}\n"
            )
    with open(out / "authors.tsv", "w", encoding="utf-8") as fh:
        for a in result.authors:
            fh.write(f"{_field(a.id, 'author id')}\t{_field(a.source_id, 'source id')}\n")
    with open(out / "subjects.tsv", "w", encoding="utf-8") as fh:
        for s in result.subjects:
            fh.write(f"{s}\t{s}\n")
    with open(out / "sources.tsv", "w", encoding="utf-8") as fh:
        for s in result.sources:
            fh.write(f"{_field(s, 'source id')}\t{s}\n")
    with open(out / "texts.tsv", "w", encoding="utf-8") as fh:
        for n in result.news:
            fh.write(f"news\t{n.id}\t{_field(n.content, 'news content')}\n")
        for a in result.authors:
            fh.write(f"author\t{a.id}\t{_field(a.profile, 'author profile')}\n")
    with open(out / "author_labels.tsv", "w", encoding="utf-8") as fh:
        for a in result.authors:
            fh.write(f"{a.id}\t{result.author_label_means[a.id]!r}\n")
    return {
        "news": len(result.news),
        "authors": len(result.authors),
        "subjects": len(result.subjects),
        "sources": len(result.sources),
        "dropped": result.dropped,
    }


LIAR_COLUMNS = 14


def read_liar(path) -> list[RawRecord]:
    """Parse one LIAR split file: up to 14 tab-separated columns.

    Column order: id, label, statement, subjects, speaker, job, state,
    party, five credit-history counts, context. The speaker profile is
    assembled from job, state and party; the context column stands in
    as the source.
    """
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        for line_no, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) > LIAR_COLUMNS:
                raise DataError(
                    f"{path}:{line_no}: {len(row)} columns, expected at most {LIAR_COLUMNS}"
                )
            row = row + [""] * (LIAR_COLUMNS - len(row))
            rid, label, statement, subjects, speaker, job, state, party = row[:8]
            context = row[13]
            profile = ", ".join(p.strip() for p in (job, state, party) if p.strip())
            records.append(
                RawRecord(
                    id=rid.strip() or None,
                    content=statement.strip() or None,
                    label=label.strip() or None,
                    subjects=tuple(
                        s.strip() for s in subjects.split(",") if s.strip()
                    ),
                    author=speaker.strip() or None,
                    profile=profile or None,
                    source=context.strip() or None,
                )
            )
    return records


def read_fakenewsnet(root) -> list[RawRecord]:
    """Walk a FakeNewsNet checkout: site/verdict/story/news content.json."""
    rootp = Path(root)
    paths = sorted(rootp.glob("*/*/*/news content.json"))
    if not paths:
        raise DataError(f"no 'news content.json' files under {root}")
    records = []
    for path in paths:
        story = path.parent.name
        verdict = path.parent.parent.name
        site = path.parent.parent.parent.name
        if verdict not in ("fake", "real"):
            raise DataError(
                f"{path}: directory {verdict!r} is neither 'fake' nor 'real'"
            )
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: bad JSON ({exc})") from None
        title = str(data.get("title") or "").strip()
        text = str(data.get("text") or "").strip()
        content = " ".join(part for part in (title, text) if part)
        authors = [str(a) for a in data.get("authors") or [] if str(a).strip()]
        source = str(data.get("source") or "").strip()
        if not source:
            source = urlparse(str(data.get("url") or "")).netloc
        keywords = tuple(
            str(k).strip() for k in data.get("keywords") or [] if str(k).strip()
        )
        records.append(
            RawRecord(
                id=f"{site}-{story}",
                content=content or None,
                label=verdict,
                subjects=keywords,
                author=authors[0] if authors else None,
                profile=None,
                source=source or None,
            )
        )
    return records


def read_jsonl(path) -> list[RawRecord]:
    """One record per line: a JSON object with RawRecord field names."""
    fields = {"id", "content", "label", "subjects", "author", "profile", "source"}
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{line_no}: bad JSON ({exc})") from None
            if not isinstance(data, dict):
                raise DataError(f"{path}:{line_no}: expected an object")
            unknown = set(data) - fields
            if unknown:
                raise DataError(
                    f"{path}:{line_no}: unknown fields {sorted(unknown)}"
                )
            subjects = data.get("subjects") or ()
            if isinstance(subjects, str):
                subjects = (subjects,)
            label = data.get("label")
            records.append(
                RawRecord(
                    id=_opt(data.get("id")),
                    content=_opt(data.get("content")),
                    label=str(label) if label is not None else None,
                    subjects=tuple(str(s) for s in subjects),
                    author=_opt(data.get("author")),
                    profile=_opt(data.get("profile")),
                    source=_opt(data.get("source")),
                )
            )
    return records


def _opt(value) -> str | None:
    return None if value is None else str(value)
