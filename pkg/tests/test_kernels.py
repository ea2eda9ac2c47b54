import numpy as np
import pytest
import scipy.sparse as sp

from newsprop.kernels import spmm


def random_csr(rng, n_rows, n_cols, density=0.2):
    dense = rng.random((n_rows, n_cols)) * (rng.random((n_rows, n_cols)) < density)
    return sp.csr_matrix(dense)


def test_matches_scipy_product():
    rng = np.random.default_rng(0)
    for n, m, w in [(5, 5, 1), (17, 9, 4), (40, 40, 33), (3, 60, 128)]:
        a = random_csr(rng, n, m)
        b = rng.standard_normal((m, w))
        assert np.allclose(spmm(a, b), a.toarray() @ b, atol=1e-12)


def test_out_buffer_is_filled():
    rng = np.random.default_rng(1)
    a = random_csr(rng, 8, 8)
    b = rng.standard_normal((8, 3))
    out = np.full((8, 3), np.nan)
    res = spmm(a, b, out=out)
    assert res is out
    assert np.allclose(out, a.toarray() @ b, atol=1e-12)


def test_repeat_runs_are_bit_identical():
    rng = np.random.default_rng(2)
    a = random_csr(rng, 64, 64, density=0.3)
    b = rng.standard_normal((64, 16))
    assert np.array_equal(spmm(a, b), spmm(a, b))


def test_dimension_mismatch():
    rng = np.random.default_rng(3)
    a = random_csr(rng, 4, 6)
    with pytest.raises(ValueError):
        spmm(a, rng.standard_normal((5, 2)))
