"""Corpus cleaning and contextual word-embedding extraction.

Normalizes raw news corpora into the node tables the newsprop package
loads, then writes per-word and per-document feature files from a
transformer encoder.
"""

__version__ = "0.1.0"

from .chunks import MAX_LEN, TokenizedSequence, build_sequences
from .encoder import Encoder, embed_words, finetune, load_encoder, tokenize_words
from .errors import DataError, EncoderUnavailableError
from .extract import document_vector, embed_texts, extract_corpus, read_texts_tsv
from .records import (
    CleanResult,
    RawRecord,
    binarize_label,
    clean,
    is_english,
    read_fakenewsnet,
    read_jsonl,
    read_liar,
    strip_punctuation,
    write_tables,
)
from .weights import band_adjacency, combine_sequences, sequence_vector, walk_weights

__all__ = [
    "CleanResult",
    "DataError",
    "Encoder",
    "EncoderUnavailableError",
    "MAX_LEN",
    "RawRecord",
    "TokenizedSequence",
    "band_adjacency",
    "binarize_label",
    "build_sequences",
    "clean",
    "combine_sequences",
    "document_vector",
    "embed_texts",
    "embed_words",
    "extract_corpus",
    "finetune",
    "is_english",
    "load_encoder",
    "read_fakenewsnet",
    "read_jsonl",
    "read_liar",
    "read_texts_tsv",
    "sequence_vector",
    "strip_punctuation",
    "tokenize_words",
    "walk_weights",
    "write_tables",
]
