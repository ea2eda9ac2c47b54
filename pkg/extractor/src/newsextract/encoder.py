"""Encoder loading and per-word embedding.

Token vectors come from summing the last four hidden layers of an
uncased base transformer encoder run in evaluation mode. A word's
vector is the mean of its piece vectors, wherever those pieces landed.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .chunks import PAD_ID, build_sequences, frame
from .errors import EncoderUnavailableError

HIDDEN = 768
SUMMED_LAYERS = 4

_SETUP_HINT = (
    "expected a saved uncased base checkpoint (config.json, weights, vocab.txt). "
    "On a machine with network access run:\n"
    '  python -c "from transformers import BertModel, BertTokenizer; '
    "BertModel.from_pretrained('bert-base-uncased').save_pretrained('{d}'); "
    "BertTokenizer.from_pretrained('bert-base-uncased').save_vocabulary('{d}')\"\n"
    "then copy the directory here."
)


@dataclass
class Encoder:
    tokenizer: object
    model: object
    mode: str


def load_encoder(model_dir, mode: str = "pretrained") -> Encoder:
    """Load a saved encoder directory (config, weights, vocab.txt)."""
    if mode not in ("pretrained", "finetuned"):
        raise ValueError(f"unknown mode {mode!r}")
    dirp = Path(model_dir)
    vocab = dirp / "vocab.txt"
    if not dirp.is_dir() or not vocab.is_file():
        raise EncoderUnavailableError(
            f"no encoder at {dirp}: " + _SETUP_HINT.format(d=dirp)
        )
    try:
        from transformers import BertModel, BertTokenizer
    except ImportError as exc:
        raise EncoderUnavailableError(
            f"transformers is not importable ({exc}); install torch and transformers"
        ) from None
    try:
        tokenizer = BertTokenizer(str(vocab), do_lower_case=True)
        model = BertModel.from_pretrained(str(dirp))
    except Exception as exc:
        raise EncoderUnavailableError(
            f"failed to load encoder from {dirp}: {exc}"
        ) from None
    model.eval()
    return Encoder(tokenizer, model, mode)


def tokenize_words(tokenizer, text: str) -> tuple[list[str], list[list[int]]]:
    """Whitespace words of a cleaned text and the piece ids of each."""
    words = text.split()
    pieces = []
    for word in words:
        toks = tokenizer.tokenize(word)
        if not toks:
            toks = [tokenizer.unk_token]
        pieces.append(tokenizer.convert_tokens_to_ids(toks))
    return words, pieces


def embed_words(enc: Encoder, text: str):
    """Per-word vectors for one document.

    Returns (words, matrix, spans). Row w of the (n_words, 768) matrix
    is the mean of word w's piece vectors. spans holds one
    (first_word, last_word, n_tokens) triple per framed sequence so the
    caller can aggregate per sequence.
    """
    import torch

    words, piece_ids = tokenize_words(enc.tokenizer, text)
    seqs = build_sequences(piece_ids)
    if not seqs:
        return words, np.zeros((0, HIDDEN)), []
    ids = torch.tensor([s.ids for s in seqs], dtype=torch.long)
    mask = (ids != PAD_ID).long()
    with torch.no_grad():
        out = enc.model(input_ids=ids, attention_mask=mask, output_hidden_states=True)
    summed = sum(out.hidden_states[-SUMMED_LAYERS:]).numpy().astype(np.float64)
    sums = np.zeros((len(words), HIDDEN))
    counts = np.zeros(len(words))
    spans = []
    for row, seq in enumerate(seqs):
        for pos, w in enumerate(seq.word_index):
            sums[w] += summed[row, 1 + pos]
            counts[w] += 1.0
        spans.append((seq.word_index[0], seq.word_index[-1], seq.n_tokens))
    return words, sums / counts[:, None], spans


def finetune(
    enc: Encoder,
    texts: list[str],
    labels: list[int],
    *,
    epochs: int = 2,
    learning_rate: float = 2e-5,
    batch_size: int = 8,
    seed: int = 0,
) -> Encoder:
    """Optional classification pass: a linear head over the CLS vector.

    The defaults above are the documented hyperparameters; prediction
    quality is not asserted anywhere. Documents longer than one
    sequence contribute their first sequence only.
    """
    import torch

    if len(texts) != len(labels):
        raise ValueError(f"{len(texts)} texts for {len(labels)} labels")
    if not texts:
        raise ValueError("nothing to finetune on")
    torch.manual_seed(seed)
    model = enc.model
    head = torch.nn.Linear(HIDDEN, 2)
    opt = torch.optim.AdamW(
        list(model.parameters()) + list(head.parameters()), lr=learning_rate
    )
    loss_fn = torch.nn.CrossEntropyLoss()
    model.train()
    for _ in range(epochs):
        for start in range(0, len(texts), batch_size):
            rows = []
            for text in texts[start : start + batch_size]:
                _, pieces = tokenize_words(enc.tokenizer, text)
                seqs = build_sequences(pieces)
                rows.append(seqs[0].ids if seqs else frame([], []).ids)
            ids = torch.tensor(rows, dtype=torch.long)
            mask = (ids != PAD_ID).long()
            target = torch.tensor(
                labels[start : start + batch_size], dtype=torch.long
            )
            opt.zero_grad()
            out = model(input_ids=ids, attention_mask=mask)
            loss = loss_fn(head(out.last_hidden_state[:, 0]), target)
            loss.backward()
            opt.step()
    model.eval()
    return Encoder(enc.tokenizer, model, "finetuned")
