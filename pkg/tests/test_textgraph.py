import numpy as np
import pytest

from newsprop.errors import DataError, NonConvergenceError
from newsprop.textgraph import (
    FeatureTable,
    aggregate_embedding,
    aggregate_words,
    build_word_graph,
    combine_sequences,
    document_vector,
    pagerank_weights,
    read_features_tsv,
    read_word_features,
    write_features_tsv,
)

from conftest import dense_rwr_rows


def test_word_graph_band_structure():
    adj = build_word_graph(5, 2).to_dense()
    expected = np.zeros((5, 5))
    for i in range(5):
        for j in range(5):
            if i != j and abs(i - j) <= 2:
                expected[i, j] = 1.0
    assert np.array_equal(adj, expected)


def test_word_graph_large_q_is_complete():
    adj = build_word_graph(4, 10).to_dense()
    assert np.array_equal(adj, np.ones((4, 4)) - np.eye(4))


def test_word_graph_degenerate_sizes():
    assert build_word_graph(0, 3).n_rows == 0
    assert build_word_graph(1, 3).nnz == 0


def test_word_graph_rejects_bad_args():
    with pytest.raises(ValueError, match="at least 1"):
        build_word_graph(5, 0)
    with pytest.raises(ValueError, match="negative word count"):
        build_word_graph(-1, 2)


def test_pagerank_weights_three_word_path():
    # walk mass concentrates on the middle word of a 3-word window graph
    adj = build_word_graph(3, 1)
    w = pagerank_weights(adj, alpha=0.5, tol=1e-12)
    assert np.allclose(w, [5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0], atol=1e-11)
    assert abs(w.sum() - 1.0) <= 1e-12 * 2


def test_pagerank_weights_match_dense_solve():
    for seed, n, q in [(0, 7, 2), (1, 12, 3), (2, 30, 5)]:
        adj = build_word_graph(n, q)
        m = adj.to_dense() / adj.to_dense().sum(axis=0, keepdims=True)
        for alpha in (0.1, 0.5, 0.85):
            expected = dense_rwr_rows(m, alpha).mean(axis=0)
            got = pagerank_weights(adj, alpha, tol=1e-12)
            assert np.abs(got - expected).max() <= 1e-9


def test_pagerank_weights_alpha_zero_is_uniform():
    w = pagerank_weights(build_word_graph(4, 1), alpha=0.0, tol=1e-9)
    assert np.array_equal(w, np.full(4, 0.25))


def test_pagerank_weights_symmetry():
    w = pagerank_weights(build_word_graph(9, 3), alpha=0.85, tol=1e-10)
    assert np.allclose(w, w[::-1], atol=1e-12)


def test_pagerank_weights_empty_graph():
    assert pagerank_weights(build_word_graph(0, 1), 0.5, 1e-9).size == 0


def test_pagerank_weights_validation():
    adj = build_word_graph(3, 1)
    with pytest.raises(ValueError, match="alpha"):
        pagerank_weights(adj, 1.0, 1e-9)
    with pytest.raises(ValueError, match="tol"):
        pagerank_weights(adj, 0.5, 0.0)
    with pytest.raises(NonConvergenceError):
        pagerank_weights(adj, 0.999, 1e-12, max_terms=3)


def test_aggregate_embedding_weighted_sum():
    feats = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    out = aggregate_embedding(feats, np.array([0.25, 0.5, 0.25]))
    assert np.array_equal(out, np.array([0.5, 0.75]))


def test_aggregate_embedding_validation():
    with pytest.raises(ValueError, match="2-d"):
        aggregate_embedding(np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError, match="weights for"):
        aggregate_embedding(np.zeros((3, 2)), np.zeros(2))


def test_document_vector_single_word_is_identity():
    feats = np.array([[3.0, -1.0, 2.0]])
    assert np.allclose(document_vector(feats, q=3, alpha=0.85, tol=1e-9), feats[0], atol=1e-9)


def test_document_vector_empty_is_zero():
    out = document_vector(np.zeros((0, 4)), q=3, alpha=0.85, tol=1e-9)
    assert np.array_equal(out, np.zeros(4))


def test_combine_sequences_token_weighted():
    out = combine_sequences([np.array([1.0, 0.0]), np.array([0.0, 1.0])], [3, 1])
    assert np.array_equal(out, np.array([0.75, 0.25]))


def test_combine_sequences_validation():
    with pytest.raises(ValueError, match="token counts"):
        combine_sequences([np.zeros(2)], [1, 2])
    with pytest.raises(ValueError, match="no sequences"):
        combine_sequences([], [])
    with pytest.raises(ValueError, match="non-negative"):
        combine_sequences([np.zeros(2), np.zeros(2)], [0, 0])


def test_feature_table_roundtrip(tmp_path):
    table = FeatureTable(
        dim=3,
        entries={
            ("news", "n1"): np.array([0.1, -2.0, 1e-17]),
            ("author", "a1"): np.array([1.0, 2.0, 3.0]),
        },
    )
    path = tmp_path / "features.tsv"
    write_features_tsv(table, path)
    back = read_features_tsv(path)
    assert back.dim == 3
    assert set(back.entries) == set(table.entries)
    for key, vec in table.entries.items():
        assert np.array_equal(back.entries[key], vec)  # repr() rounds the trip


def test_feature_table_vector_lookup():
    table = FeatureTable(dim=1, entries={("news", "n1"): np.array([1.0])})
    assert table.vector("news", "n1")[0] == 1.0
    with pytest.raises(DataError, match="no feature row for author node 'a9'"):
        table.vector("author", "a9")


def test_read_features_rejects_bad_rows(tmp_path):
    path = tmp_path / "f.tsv"
    path.write_text("news\tn1\t1.0,2.0\nnews\tn1\t3.0,4.0\n", encoding="utf-8")
    with pytest.raises(DataError, match="duplicate feature row"):
        read_features_tsv(path)

    path.write_text("news\tn1\t1.0,2.0\nnews\tn2\t3.0\n", encoding="utf-8")
    with pytest.raises(DataError, match="feature width 1 differs from 2"):
        read_features_tsv(path)

    path.write_text("page\tn1\t1.0\n", encoding="utf-8")
    with pytest.raises(DataError, match="node type"):
        read_features_tsv(path)

    path.write_text("news\tn1\tone,two\n", encoding="utf-8")
    with pytest.raises(DataError, match="unparseable float"):
        read_features_tsv(path)

    path.write_text("news\tn1\tnan\n", encoding="utf-8")
    with pytest.raises(DataError, match="non-finite"):
        read_features_tsv(path)


def test_read_features_skips_comments_and_blanks(tmp_path):
    path = tmp_path / "f.tsv"
    path.write_text("# header\n\nnews\tn1\t1.0\n", encoding="utf-8")
    assert len(read_features_tsv(path).entries) == 1


def test_read_word_features_and_aggregate(tmp_path):
    path = tmp_path / "words.tsv"
    path.write_text(
        "news\tn1\t1\t0.0,1.0\n"
        "news\tn1\t0\t1.0,0.0\n"
        "author\ta1\t0\t2.0,2.0\n",
        encoding="utf-8",
    )
    words = read_word_features(path)
    assert np.array_equal(words[("news", "n1")], np.array([[1.0, 0.0], [0.0, 1.0]]))

    table = aggregate_words(words, q=2, alpha=0.5, tol=1e-12)
    assert table.dim == 2
    # two linked words split the walk mass evenly
    assert np.allclose(table.entries[("news", "n1")], [0.5, 0.5], atol=1e-11)
    assert np.allclose(table.entries[("author", "a1")], [2.0, 2.0], atol=1e-11)


def test_read_word_features_position_gaps(tmp_path):
    path = tmp_path / "words.tsv"
    path.write_text("news\tn1\t0\t1.0\nnews\tn1\t2\t2.0\n", encoding="utf-8")
    with pytest.raises(DataError, match="must cover 0..1 exactly"):
        read_word_features(path)

    path.write_text("news\tn1\t-1\t1.0\n", encoding="utf-8")
    with pytest.raises(DataError, match="negative word position"):
        read_word_features(path)

    path.write_text("news\tn1\tzero\t1.0\n", encoding="utf-8")
    with pytest.raises(DataError, match="bad word position"):
        read_word_features(path)
