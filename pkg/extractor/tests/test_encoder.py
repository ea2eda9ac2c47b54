import numpy as np
import pytest

from newsextract.chunks import PAD_ID, build_sequences
from newsextract.encoder import (
    SUMMED_LAYERS,
    embed_words,
    finetune,
    load_encoder,
    tokenize_words,
)
from newsextract.errors import EncoderUnavailableError


def reference_token_vectors(enc, text):
    """Re-run the encoder directly and sum the last four hidden layers."""
    import torch

    _, pieces = tokenize_words(enc.tokenizer, text)
    seqs = build_sequences(pieces)
    ids = torch.tensor([s.ids for s in seqs], dtype=torch.long)
    mask = (ids != PAD_ID).long()
    with torch.no_grad():
        out = enc.model(input_ids=ids, attention_mask=mask, output_hidden_states=True)
    return sum(out.hidden_states[-SUMMED_LAYERS:]).numpy().astype(np.float64), seqs


def test_load_encoder_missing_dir(tmp_path):
    with pytest.raises(EncoderUnavailableError, match="bert-base-uncased"):
        load_encoder(tmp_path / "nowhere")
    with pytest.raises(ValueError, match="unknown mode"):
        load_encoder(tmp_path, mode="frozen")


def test_load_encoder_broken_dir(tmp_path):
    (tmp_path / "vocab.txt").write_text("[PAD]\n", encoding="utf-8")
    with pytest.raises(EncoderUnavailableError, match="failed to load"):
        load_encoder(tmp_path)


def test_tokenize_words_multi_piece(encoder):
    words, pieces = tokenize_words(encoder.tokenizer, "The gruesome cat")
    assert words == ["The", "gruesome", "cat"]
    assert [len(p) for p in pieces] == [1, 2, 1]
    toks = encoder.tokenizer.convert_ids_to_tokens(pieces[1])
    assert toks == ["grue", "##some"]


def test_embed_words_deterministic(encoder):
    text = "the cat sat on the gruesome mat"
    _, m1, s1 = embed_words(encoder, text)
    _, m2, s2 = embed_words(encoder, text)
    assert np.array_equal(m1, m2)
    assert s1 == s2


def test_single_piece_word_equals_token_vector(encoder):
    text = "the cat sat"
    words, matrix, spans = embed_words(encoder, text)
    summed, seqs = reference_token_vectors(encoder, text)
    assert spans == [(0, 2, 3)]
    # content tokens start after the classifier token
    for w in range(3):
        assert np.array_equal(matrix[w], summed[0, 1 + w])


def test_multi_piece_word_is_mean_of_token_vectors(encoder):
    text = "the gruesome cat closeby"
    words, matrix, spans = embed_words(encoder, text)
    summed, seqs = reference_token_vectors(encoder, text)
    assert seqs[0].word_index == (0, 1, 1, 2, 3, 3)
    grue = (summed[0, 2] + summed[0, 3]) / 2.0
    close = (summed[0, 5] + summed[0, 6]) / 2.0
    assert np.array_equal(matrix[1], grue)
    assert np.array_equal(matrix[3], close)
    assert matrix.shape == (4, 768)


def test_embed_words_empty_text(encoder):
    words, matrix, spans = embed_words(encoder, "")
    assert words == [] and matrix.shape == (0, 768) and spans == []


def test_embed_words_long_document_spans(encoder):
    text = " ".join(["cat"] * 600)
    words, matrix, spans = embed_words(encoder, text)
    assert matrix.shape == (600, 768)
    assert spans == [(0, 509, 510), (510, 599, 90)]
    # every word inside one sequence: its vector is that token's vector
    summed, seqs = reference_token_vectors(encoder, text)
    assert np.array_equal(matrix[0], summed[0, 1])
    assert np.array_equal(matrix[510], summed[1, 1])


def test_finetune_smoke(encoder_dir):
    enc = load_encoder(encoder_dir)
    texts = ["the cat sat on the mat", "fake news story on the wire"]
    tuned = finetune(enc, texts, [1, 0], epochs=1, batch_size=2)
    assert tuned.mode == "finetuned"
    _, matrix, _ = embed_words(tuned, "the cat sat")
    assert matrix.shape == (3, 768)
    with pytest.raises(ValueError, match="2 texts for 1 labels"):
        finetune(enc, texts, [1])
