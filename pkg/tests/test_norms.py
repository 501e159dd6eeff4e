import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heinzlab.errors import KOutOfRange
from heinzlab.norms import (
    HS,
    OP,
    NormKind,
    fan_dominance_leq,
    hs_norm_sq,
    ky_fan_profile,
    norm,
    norm_family,
)

from conftest import rand_complex, rand_unitary


def test_norm_examples():
    assert norm(np.diag([3.0, 4.0]), HS) == pytest.approx(5.0, rel=1e-15)
    assert norm(np.diag([3.0, 1.0]), NormKind("kyfan", 1)) == pytest.approx(3.0)
    assert norm(np.diag([3.0, 1.0]), NormKind("kyfan", 2)) == pytest.approx(4.0)
    assert norm([[0, 2], [0, 0]], OP) == pytest.approx(2.0)


def test_schatten_values():
    a = np.diag([3.0, 4.0])
    assert norm(a, NormKind("schatten", 1)) == pytest.approx(7.0)
    assert norm(a, NormKind("schatten", 3)) == pytest.approx((27 + 64) ** (1 / 3))
    assert norm(np.zeros((2, 2)), NormKind("schatten", 1.5)) == 0.0
    # large p must not overflow
    assert norm(1e200 * np.eye(2), NormKind("schatten", 3)) == pytest.approx(1e200 * 2 ** (1 / 3))


def test_hs_norm_sq_examples():
    assert hs_norm_sq(np.eye(3)) == 3.0
    assert hs_norm_sq([[1 + 1j, 0], [0, 0]]) == 2.0
    assert hs_norm_sq(np.zeros((4, 4))) == 0.0


def test_kind_strings():
    for text in ("hs", "op", "kyfan:2", "schatten:1.5", "schatten:3"):
        assert str(NormKind.parse(text)) == text
    for bad in ("kyfan:0", "schatten:0.5", "frobenius", "op:2", "kyfan:x"):
        with pytest.raises(ValueError):
            NormKind.parse(bad)


def test_family():
    names = [str(k) for k in norm_family(3)]
    assert names == ["kyfan:1", "kyfan:2", "kyfan:3", "schatten:1", "schatten:1.5", "schatten:2", "schatten:3", "op"]


def test_kyfan_k_too_large():
    with pytest.raises(KOutOfRange):
        norm(np.eye(2), NormKind("kyfan", 3))


def test_fan_dominance_examples():
    a = np.diag([1.0, 2.0])
    assert fan_dominance_leq(a, a)
    assert fan_dominance_leq(np.eye(2), 2 * np.eye(2))
    a, b = np.diag([3.0, 0.0]), np.diag([2.0, 2.0])
    assert not fan_dominance_leq(a, b)
    assert norm(a, NormKind("schatten", 1)) <= norm(b, NormKind("schatten", 1))
    np.testing.assert_allclose(ky_fan_profile(a), [3, 3])
    np.testing.assert_allclose(ky_fan_profile(b), [2, 4])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_unitary_invariance(n, seed):
    gen = np.random.default_rng(seed)
    a = rand_complex(gen, n)
    u, v = rand_unitary(gen, n), rand_unitary(gen, n)
    b = u @ a @ v.conj().T
    for kind in norm_family(n) + [HS]:
        assert norm(b, kind) == pytest.approx(norm(a, kind), rel=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.complex_numbers(max_magnitude=10, allow_nan=False))
def test_triangle_and_homogeneity(n, seed, c):
    gen = np.random.default_rng(seed)
    a, b = rand_complex(gen, n), rand_complex(gen, n)
    for kind in norm_family(n) + [HS]:
        na, nb = norm(a, kind), norm(b, kind)
        assert norm(a + b, kind) <= na + nb + 1e-12 * (na + nb)
        assert norm(c * a, kind) == pytest.approx(abs(c) * na, rel=1e-10, abs=1e-12)


def test_schatten2_matches_entrywise(rng):
    for _ in range(100):
        a = rand_complex(rng, int(rng.integers(1, 9)))
        assert norm(a, NormKind("schatten", 2)) == pytest.approx(np.sqrt(hs_norm_sq(a)), rel=1e-11)
        assert norm(a, HS) == pytest.approx(np.linalg.norm(a), rel=1e-11)


def test_fan_dominance_implies_family(rng):
    hits = 0
    for _ in range(300):
        n = int(rng.integers(1, 5))
        a, b = rand_complex(rng, n), rand_complex(rng, n)
        b = b * float(rng.uniform(0.5, 3))
        if fan_dominance_leq(a, b):
            hits += 1
            for kind in norm_family(n):
                assert norm(a, kind) <= norm(b, kind) + 1e-8 * max(1.0, norm(b, kind))
    assert hits > 20
