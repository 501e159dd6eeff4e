import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heinzlab.errors import NotPositiveDefinite, ParamOutOfRange
from heinzlab.linalg import fractional_power, is_psd, loewner_leq
from heinzlab.products import (
    PowerCache,
    diag_isometry,
    h_surface,
    hadamard,
    hadamard_via_tensor,
    k_surface,
    kronecker,
)

from conftest import rand_complex, rand_pd

GRID9 = np.linspace(-1, 1, 9)
GRID9_UNIT = np.linspace(0, 1, 9)


def test_kronecker_examples():
    np.testing.assert_array_equal(kronecker(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]))
    np.testing.assert_array_equal(kronecker(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(kronecker([[0, 1], [0, 0]], [[2]]), [[0, 2], [0, 0]])


def test_kronecker_mixed_product(rng):
    a, b, c, d = (rand_complex(rng, 3) for _ in range(4))
    np.testing.assert_allclose(kronecker(a, b) @ kronecker(c, d), kronecker(a @ c, b @ d), atol=1e-12)


def test_hadamard_examples(rng):
    np.testing.assert_array_equal(hadamard([[1, 2], [3, 4]], [[5, 6], [7, 8]]), [[5, 12], [21, 32]])
    a = rand_complex(rng, 3)
    np.testing.assert_array_equal(hadamard(a, np.zeros((3, 3))), np.zeros((3, 3)))
    np.testing.assert_array_equal(hadamard(a, np.ones((3, 3))), a)


def test_diag_isometry_examples():
    np.testing.assert_array_equal(diag_isometry(1), [[1]])
    v = diag_isometry(2)
    expected = np.zeros((4, 2))
    expected[0, 0] = expected[3, 1] = 1
    np.testing.assert_array_equal(v, expected)
    v5 = diag_isometry(5)
    np.testing.assert_array_equal(v5.T @ v5, np.eye(5))


def test_hadamard_via_tensor_examples():
    np.testing.assert_allclose(hadamard_via_tensor([[3.0]], [[-2.0]]), [[-6.0]])
    np.testing.assert_array_equal(hadamard_via_tensor(np.eye(3), np.eye(3)), np.eye(3))


def test_hadamard_via_tensor_matches(rng):
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 7))
        a, b = rand_complex(rng, n), rand_complex(rng, n)
        direct = hadamard(a, b)
        scale = max(1.0, np.abs(direct).max())
        worst = max(worst, np.abs(hadamard_via_tensor(a, b) - direct).max() / scale)
    assert worst <= 1e-13


def test_schur_product_theorem(rng):
    for _ in range(100):
        n = int(rng.integers(1, 7))
        g, h = rand_complex(rng, n), rand_complex(rng, n)
        assert is_psd(hadamard(g @ g.conj().T, h @ h.conj().T), tol=1e-8)


def test_h_surface_examples(rng):
    for s, t in ((0.3, -0.7), (1, 1), (-1, 0)):
        np.testing.assert_allclose(h_surface(np.eye(2), np.eye(2), s, t), 2 * np.eye(4), atol=1e-14)
    a, b = rand_pd(rng, 2), rand_pd(rng, 2)
    np.testing.assert_allclose(h_surface(a, b, 0, 0), 2 * np.kron(a, b), atol=1e-12)
    np.testing.assert_allclose(h_surface([[4.0]], [[1.0]], 1, 0), [[17.0]], rtol=1e-14)


def test_k_surface_examples(rng):
    a, b = rand_pd(rng, 3), rand_pd(rng, 3)
    expected = 2 * fractional_power(a, 0.5) * fractional_power(b, 0.5)
    np.testing.assert_allclose(k_surface(a, b, 0.5, 0.5), expected, atol=1e-12)
    np.testing.assert_allclose(k_surface(np.eye(3), np.eye(3), 0.2, 0.9), 2 * np.eye(3), atol=1e-14)
    np.testing.assert_allclose(k_surface(np.diag([4.0, 1.0]), np.eye(2), 1, 0), np.diag([5.0, 2.0]), atol=1e-14)


def test_surface_domain_errors():
    with pytest.raises(ParamOutOfRange):
        h_surface(np.eye(2), np.eye(2), 1.5, 0)
    with pytest.raises(ParamOutOfRange):
        k_surface(np.eye(2), np.eye(2), 0.5, -0.1)
    with pytest.raises(NotPositiveDefinite):
        PowerCache(np.diag([1.0, 0.0]))


def test_power_cache_reuses(rng):
    pc = PowerCache(rand_pd(rng, 3))
    assert pc(0.25) is pc(0.25)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(0, 2**32 - 1),
    st.floats(-1, 1),
    st.floats(-1, 1),
    st.floats(0, 1),
    st.floats(0, 1),
)
def test_h_surface_midpoint_convex(n, seed, s1, t1, fs, ft):
    gen = np.random.default_rng(seed)
    a, b = PowerCache(rand_pd(gen, n)), PowerCache(rand_pd(gen, n))
    s2 = fs * (1 - abs(s1))
    t2 = ft * (1 - abs(t1))
    d = h_surface(a, b, s1 + s2, t1 + t2) + h_surface(a, b, s1 - s2, t1 - t2) - 2 * h_surface(a, b, s1, t1)
    assert is_psd(d, tol=1e-8)


def test_h_surface_min_at_center(rng):
    for n in (1, 2, 3):
        a, b = PowerCache(rand_pd(rng, n)), PowerCache(rand_pd(rng, n))
        h0 = h_surface(a, b, 0, 0)
        for s, t in itertools.product(GRID9, GRID9):
            assert loewner_leq(h0, h_surface(a, b, s, t))


def test_k_surface_min_at_center(rng):
    for n in (1, 2, 3, 4):
        a, b = PowerCache(rand_pd(rng, n)), PowerCache(rand_pd(rng, n))
        k0 = k_surface(a, b, 0.5, 0.5)
        for s, t in itertools.product(GRID9_UNIT, GRID9_UNIT):
            assert loewner_leq(k0, k_surface(a, b, s, t))


def test_surface_symmetries(rng):
    a, b = PowerCache(rand_pd(rng, 3)), PowerCache(rand_pd(rng, 3))
    for s, t in rng.uniform(-1, 1, size=(20, 2)):
        h = h_surface(a, b, s, t)
        assert np.linalg.norm(h - h_surface(a, b, -s, -t)) <= 1e-10 * np.linalg.norm(h)
        u, v = (s + 1) / 2, (t + 1) / 2
        k = k_surface(a, b, u, v)
        assert np.linalg.norm(k - k_surface(a, b, 1 - u, 1 - v)) <= 1e-10 * np.linalg.norm(k)


def test_k_is_compressed_h(rng):
    # K for (A, B) is V* H(2s-1, 2t-1) V for (A^1/2, B^1/2)
    a, b = rand_pd(rng, 3), rand_pd(rng, 3)
    ha, hb = fractional_power(a, 0.5), fractional_power(b, 0.5)
    v = diag_isometry(3)
    for s, t in ((0.1, 0.9), (0.5, 0.3), (1, 0)):
        compressed = v.T @ h_surface(ha, hb, 2 * s - 1, 2 * t - 1) @ v
        np.testing.assert_allclose(k_surface(a, b, s, t), compressed, atol=1e-10)
