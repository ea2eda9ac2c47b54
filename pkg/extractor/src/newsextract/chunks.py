"""Fixed-frame wordpiece sequences.

Every emitted sequence is exactly MAX_LEN ids: a leading classifier
token, up to MAX_LEN - 2 content pieces, a separator, then zero
padding. Words stay whole within a sequence unless a single word
exceeds the content budget, in which case its pieces spill across
sequence boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass

MAX_LEN = 512
CLS_ID = 101
SEP_ID = 102
PAD_ID = 0
CONTENT_BUDGET = MAX_LEN - 2


@dataclass(frozen=True)
class TokenizedSequence:
    """One framed sequence plus the word index of every content piece."""

    ids: tuple[int, ...]
    word_index: tuple[int, ...]

    def __post_init__(self):
        n = len(self.word_index)
        if len(self.ids) != MAX_LEN:
            raise ValueError(f"sequence holds {len(self.ids)} ids, not {MAX_LEN}")
        if n > CONTENT_BUDGET:
            raise ValueError(f"{n} content pieces exceed the budget {CONTENT_BUDGET}")
        if self.ids[0] != CLS_ID or self.ids[n + 1] != SEP_ID:
            raise ValueError("sequence must open with CLS and close with SEP")
        if any(v != PAD_ID for v in self.ids[n + 2 :]):
            raise ValueError("padding region must be zero")

    @property
    def n_tokens(self) -> int:
        return len(self.word_index)


def frame(piece_ids: list[int], word_index: list[int]) -> TokenizedSequence:
    ids = [CLS_ID, *piece_ids, SEP_ID]
    ids.extend([PAD_ID] * (MAX_LEN - len(ids)))
    return TokenizedSequence(tuple(ids), tuple(word_index))


def build_sequences(pieces_per_word: list[list[int]]) -> list[TokenizedSequence]:
    """Pack words into framed sequences, in order."""
    seqs: list[TokenizedSequence] = []
    cur_ids: list[int] = []
    cur_words: list[int] = []
    for w, pieces in enumerate(pieces_per_word):
        if not pieces:
            raise ValueError(f"word {w} produced no pieces")
        if len(cur_ids) + len(pieces) <= CONTENT_BUDGET:
            cur_ids.extend(pieces)
            cur_words.extend([w] * len(pieces))
            continue
        if len(pieces) <= CONTENT_BUDGET:
            seqs.append(frame(cur_ids, cur_words))
            cur_ids = list(pieces)
            cur_words = [w] * len(pieces)
            continue
        # oversized word: fill the open sequence, then spill
        rest = list(pieces)
        while rest:
            room = CONTENT_BUDGET - len(cur_ids)
            take, rest = rest[:room], rest[room:]
            cur_ids.extend(take)
            cur_words.extend([w] * len(take))
            if rest:
                seqs.append(frame(cur_ids, cur_words))
                cur_ids, cur_words = [], []
    if cur_ids:
        seqs.append(frame(cur_ids, cur_words))
    return seqs
