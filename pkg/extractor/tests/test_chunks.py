import pytest

from newsextract.chunks import (
    CLS_ID,
    CONTENT_BUDGET,
    MAX_LEN,
    PAD_ID,
    SEP_ID,
    TokenizedSequence,
    build_sequences,
    frame,
)


def assert_framed(seq):
    assert len(seq.ids) == MAX_LEN
    assert seq.ids[0] == CLS_ID
    assert seq.ids[seq.n_tokens + 1] == SEP_ID
    assert all(v == PAD_ID for v in seq.ids[seq.n_tokens + 2:])


def test_single_sequence_framing():
    seqs = build_sequences([[5], [6, 7]])
    assert len(seqs) == 1
    seq = seqs[0]
    assert_framed(seq)
    assert seq.ids[:5] == (CLS_ID, 5, 6, 7, SEP_ID)
    assert seq.word_index == (0, 1, 1)
    assert seq.n_tokens == 3


def test_empty_document():
    assert build_sequences([]) == []


def test_long_document_splits_with_framing():
    seqs = build_sequences([[9]] * 600)
    assert [s.n_tokens for s in seqs] == [CONTENT_BUDGET, 600 - CONTENT_BUDGET]
    for seq in seqs:
        assert_framed(seq)
    assert seqs[0].word_index == tuple(range(510))
    assert seqs[1].word_index == tuple(range(510, 600))


def test_word_kept_whole_at_boundary():
    # 509 single-piece words, then one word of 3 pieces that cannot fit
    seqs = build_sequences([[9]] * 509 + [[1, 2, 3]])
    assert [s.n_tokens for s in seqs] == [509, 3]
    assert seqs[1].word_index == (509, 509, 509)
    assert seqs[1].ids[1:5] == (1, 2, 3, SEP_ID)


def test_oversized_word_spills():
    seqs = build_sequences([[4]] * 5 + [[8] * 700])
    assert [s.n_tokens for s in seqs] == [CONTENT_BUDGET, 700 - 505]
    assert seqs[0].word_index[:5] == (0, 1, 2, 3, 4)
    assert set(seqs[0].word_index[5:]) == {5}
    assert set(seqs[1].word_index) == {5}


def test_empty_word_rejected():
    with pytest.raises(ValueError, match="word 1 produced no pieces"):
        build_sequences([[3], []])


def test_sequence_invariants_enforced():
    with pytest.raises(ValueError, match="must open with CLS"):
        TokenizedSequence(tuple([7] * MAX_LEN), (0,))
    good = frame([5], [0])
    assert good.n_tokens == 1
    bad_pad = [CLS_ID, 5, SEP_ID] + [0] * (MAX_LEN - 4) + [9]
    with pytest.raises(ValueError, match="padding region"):
        TokenizedSequence(tuple(bad_pad), (0,))
    with pytest.raises(ValueError, match="not 512"):
        TokenizedSequence((CLS_ID, 5, SEP_ID), (0,))
