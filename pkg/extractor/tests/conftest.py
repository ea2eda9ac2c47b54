"""Shared fixtures: a small local encoder and cleaning fixtures.

The encoder is a randomly initialized 4-layer, 768-wide uncased model
over a crafted vocabulary, saved once per session. Tests never touch
the network; the vocabulary pins the classifier and separator tokens
to ids 101 and 102 and covers the fixture words, with single-letter
pieces as a fallback so any lowercase word tokenizes.
"""
from __future__ import annotations

import numpy as np
import pytest

from newsextract.records import RawRecord

LETTERS = "abcdefghijklmnopqrstuvwxyz"
WHOLE_WORDS = [
    "the", "a", "an", "and", "of", "to", "in", "is", "was", "cat", "sat",
    "on", "mat", "news", "fake", "real", "story", "report", "wire",
    "agency", "writer", "desk", "daily", "grue", "close", "word", "graph",
    "with", "no", "at", "all", "here",
]
SUFFIX_PIECES = ["##some", "##by", "##s", "##ing", "##ed"]


def vocab_list() -> list[str]:
    vocab = ["[PAD]"]
    vocab += [f"[unused{i}]" for i in range(1, 100)]
    vocab += ["[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    vocab += WHOLE_WORDS + SUFFIX_PIECES
    vocab += list(LETTERS) + ["##" + c for c in LETTERS]
    return vocab


@pytest.fixture(scope="session")
def encoder_dir(tmp_path_factory):
    import torch
    from transformers import BertConfig, BertModel

    out = tmp_path_factory.mktemp("encoder")
    vocab = vocab_list()
    assert vocab[101] == "[CLS]" and vocab[102] == "[SEP]" and vocab[0] == "[PAD]"
    (out / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=768,
        num_hidden_layers=4,
        num_attention_heads=12,
        intermediate_size=1024,
        max_position_embeddings=512,
        type_vocab_size=2,
    )
    torch.manual_seed(7)
    model = BertModel(config)
    model.save_pretrained(out)
    return out


@pytest.fixture(scope="session")
def encoder(encoder_dir):
    from newsextract.encoder import load_encoder

    return load_encoder(encoder_dir)


def dense_walk_oracle(n: int, q: int, alpha: float) -> np.ndarray:
    """Uniform-restart walk mass on the band graph, by dense solve."""
    adj = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j and abs(i - j) <= q:
                adj[i, j] = 1.0
    col = adj.sum(axis=0)
    col[col == 0.0] = 1.0
    m = adj / col
    if n == 1:
        m = np.ones((1, 1))
    u = np.full(n, 1.0 / n)
    return np.linalg.solve(np.eye(n) - alpha * m, (1.0 - alpha) * u)


# Cleaning fixture: each row demonstrates one rule. Kept rows carry
# enough function words to pass the language screen.
RULES_FIXTURE = [
    RawRecord(id="n1", content="The cat sat on the mat with the news.",
              label="true", subjects=("politics",), author="Alice Reporter",
              profile="senior writer at the daily news desk",
              source="daily-news"),
    # non-English content, dropped
    RawRecord(id="n2",
              content="der hund lief gestern abend durch die kleine stadt und bellte laut",
              label="false", author="Alice Reporter"),
    # non-English profile, dropped
    RawRecord(id="n3", content="The news is real and everyone should read it today.",
              label="true", author="B. Petrov", profile="журналист из Москвы"),
    # no id: gets the first free positive integer
    RawRecord(content="Fake story about the cat and the hat on the wall.",
              label="fake", author="Bob"),
    # no content, dropped
    RawRecord(id="n4", label="true", author="Carol"),
    # no label, dropped
    RawRecord(id="n5", content="Nothing to see here the label is missing today.",
              author="Carol"),
    # no subjects and no profile
    RawRecord(id="n6", content="Plain report with no subject tags at all here.",
              label="half-true", author="Carol"),
    # neither author nor source
    RawRecord(id="n7", content="An orphan story with no author and no source given.",
              label="pants-fire"),
    # source stands in for the missing author
    RawRecord(id="n8", content="A wire story credited only to the agency that sent it.",
              label="mostly-true", source="wire-agency"),
    # punctuation-heavy content, already-binary label
    RawRecord(id="n9", content="Stop!!! The - cat, sat; (on) the mat?",
              label="1", author="Alice Reporter"),
]

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
