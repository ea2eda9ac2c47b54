import numpy as np
import pytest

from newsextract.weights import (
    band_adjacency,
    combine_sequences,
    sequence_vector,
    walk_weights,
)

from conftest import dense_walk_oracle


def test_band_adjacency_frozen():
    dense = band_adjacency(4, 1).toarray()
    assert np.array_equal(dense, np.array([
        [0, 1, 0, 0],
        [1, 0, 1, 0],
        [0, 1, 0, 1],
        [0, 0, 1, 0],
    ], dtype=float))
    # a window spanning the whole sequence gives the complete graph
    full = band_adjacency(3, 5).toarray()
    assert np.array_equal(full, np.ones((3, 3)) - np.eye(3))
    assert band_adjacency(0, 2).shape == (0, 0)


def test_walk_weights_three_word_path():
    # independently derived with a dense solve
    expected = np.array([5 / 18, 4 / 9, 5 / 18])
    got = walk_weights(3, 1, 0.5, 1e-12)
    np.testing.assert_allclose(got, expected, atol=1e-11)


def test_walk_weights_against_dense_oracle():
    for n in (2, 5, 17, 40):
        for q in (1, 2, 4):
            for alpha in (0.1, 0.5, 0.85):
                got = walk_weights(n, q, alpha, 1e-12)
                want = dense_walk_oracle(n, q, alpha)
                np.testing.assert_allclose(got, want, atol=1e-10)
                assert abs(got.sum() - 1.0) < 1e-11


def test_walk_weights_edges():
    assert walk_weights(0, 3, 0.5, 1e-9).size == 0
    np.testing.assert_allclose(walk_weights(1, 3, 0.5, 1e-9), [1.0])
    # alpha 0 never leaves the restart distribution
    np.testing.assert_allclose(walk_weights(6, 2, 0.0, 1e-9), np.full(6, 1 / 6))
    with pytest.raises(ValueError, match="alpha"):
        walk_weights(3, 1, 1.0, 1e-9)
    with pytest.raises(ValueError, match="tol"):
        walk_weights(3, 1, 0.5, 0.0)
    with pytest.raises(ValueError, match="window"):
        walk_weights(3, 0, 0.5, 1e-9)


def test_sequence_vector_frozen():
    matrix = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    got = sequence_vector(matrix, 1, 0.5, 1e-12)
    np.testing.assert_allclose(got, [5 / 18 + 5 / 18, 4 / 9 + 5 / 18], atol=1e-11)
    assert sequence_vector(np.zeros((0, 4)), 3, 0.85, 1e-9).tolist() == [0.0] * 4


def test_combine_sequences():
    got = combine_sequences([np.array([1.0, 1.0]), np.array([3.0, 5.0])], [1, 3])
    np.testing.assert_allclose(got, [2.5, 4.0])
    single = combine_sequences([np.array([2.0, 7.0])], [42])
    assert np.array_equal(single, [2.0, 7.0])
    with pytest.raises(ValueError, match="2 vectors for 1 counts"):
        combine_sequences([np.zeros(2), np.zeros(2)], [1])
    with pytest.raises(ValueError, match="no sequences"):
        combine_sequences([], [])
    with pytest.raises(ValueError, match="positive sum"):
        combine_sequences([np.zeros(2)], [0])
