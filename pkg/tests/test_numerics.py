import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bicmb_ofdm.numerics import SeededRng, complex_gaussian, dft, svd, svd_batch


def test_dft_impulse_and_constant():
    assert np.allclose(dft([1, 0, 0, 0], "forward"), [1, 1, 1, 1])
    assert np.allclose(dft([1, 1, 1, 1], "inverse"), [1, 0, 0, 0])


def test_dft_roundtrip_and_parseval():
    g = SeededRng(3).generator
    v = g.standard_normal(64) + 1j * g.standard_normal(64)
    assert np.max(np.abs(dft(dft(v), "inverse") - v)) < 1e-12
    V = dft(v)
    assert np.isclose(np.sum(np.abs(v) ** 2), np.sum(np.abs(V) ** 2) / 64, rtol=1e-12)


def test_dft_kernel_sign():
    # forward kernel is exp(-2j pi m k / M)
    M = 8
    v = np.zeros(M, dtype=complex)
    v[1] = 1
    assert np.allclose(dft(v), np.exp(-2j * np.pi * np.arange(M) / M))


def test_dft_errors():
    with pytest.raises(ValueError, match="empty input"):
        dft([])
    with pytest.raises(ValueError):
        dft([1, 2], "sideways")


def test_svd_identity_and_diag():
    r = svd(np.eye(2))
    assert np.allclose(r.singular_values, [1, 1])
    r = svd(np.diag([3.0, 1.0]))
    assert np.allclose(r.singular_values, [3, 1])
    assert np.allclose(np.abs(r.U), np.eye(2))
    assert np.allclose(np.abs(r.V), np.eye(2))


def _random_matrix(g, rows, cols):
    return g.standard_normal((rows, cols)) + 1j * g.standard_normal((rows, cols))


@settings(max_examples=60, deadline=None)
@given(rows=st.integers(1, 8), cols=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_svd_invariants(rows, cols, seed):
    H = _random_matrix(SeededRng(seed).generator, rows, cols)
    r = svd(H)
    assert np.allclose(r.U.conj().T @ r.U, np.eye(rows), atol=1e-10)
    assert np.allclose(r.V.conj().T @ r.V, np.eye(cols), atol=1e-10)
    assert np.all(np.diff(r.singular_values) <= 1e-12)
    assert np.linalg.norm(r.reconstruct() - H) / np.linalg.norm(H) < 1e-9
    # first nonzero entry of every V column is real non-negative
    for c in range(cols):
        col = r.V[:, c]
        pivot = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert abs(pivot.imag) < 1e-12 and pivot.real > 0


def test_svd_2x2_against_characteristic_polynomial():
    g = SeededRng(11).generator
    for _ in range(20):
        H = _random_matrix(g, 2, 2)
        G = H @ H.conj().T
        tr = np.trace(G).real
        det = np.linalg.det(G).real
        disc = np.sqrt(tr * tr - 4 * det)
        ev = np.array([(tr + disc) / 2, (tr - disc) / 2])
        assert np.allclose(svd(H).singular_values, np.sqrt(ev), atol=1e-9)


def test_svd_rejects_bad_input():
    with pytest.raises(ValueError, match="invalid matrix"):
        svd([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ValueError):
        svd(np.eye(9))


def test_svd_batch_matches_single():
    g = SeededRng(5).generator
    H = g.standard_normal((6, 3, 2)) + 1j * g.standard_normal((6, 3, 2))
    U, s, V = svd_batch(H)
    for i in range(6):
        r = svd(H[i])
        assert np.allclose(s[i], r.singular_values)
        assert np.allclose(U[i][:, :2], r.U[:, :2])
        assert np.allclose(V[i], r.V)


def test_complex_gaussian_moments():
    x = complex_gaussian(SeededRng(1), 1.0, 10**6)
    assert abs(x.mean()) < 0.005
    y = complex_gaussian(SeededRng(2), 0.5, 10**6)
    assert 0.495 <= np.mean(np.abs(y) ** 2) <= 0.505
    # real and imaginary parts each carry half the variance
    assert abs(np.var(y.real) - 0.25) < 0.0025
    assert abs(np.var(y.imag) - 0.25) < 0.0025
    assert abs(np.mean(y.real * y.imag)) < 0.0025


def test_complex_gaussian_rejects_bad_variance():
    with pytest.raises(ValueError):
        complex_gaussian(SeededRng(1), 0.0)
    with pytest.raises(TypeError):
        complex_gaussian(42, 1.0)


def test_seeded_streams():
    a = complex_gaussian(SeededRng(7, 3), 1.0, 100)
    b = complex_gaussian(SeededRng(7, 3), 1.0, 100)
    c = complex_gaussian(SeededRng(7, 4), 1.0, 100)
    assert np.array_equal(a, b)
    assert not np.allclose(a, c)
    d = SeededRng(7).derive(2, 5)
    assert d.stream_id == (0, 2, 5)
    assert np.array_equal(complex_gaussian(d, 1.0, 5), complex_gaussian(SeededRng(7, (0, 2, 5)), 1.0, 5))


def test_seeded_stream_frozen_values():
    # guards against silent changes to the stream construction
    got = SeededRng(2024, 1).generator.integers(0, 1000, 5)
    again = np.random.Generator(
        np.random.Philox(np.random.SeedSequence(2024, spawn_key=(1,)))
    ).integers(0, 1000, 5)
    assert np.array_equal(got, again)
