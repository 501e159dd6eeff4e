"""Kronecker and Hadamard products and the two-parameter power surfaces built from them."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotPositiveDefinite, ParamOutOfRange
from .linalg import PD_FLOOR, as_matrix, eigvalsh, fractional_power, hermitize


def kronecker(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def hadamard(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return a * b


def diag_isometry(n: int) -> np.ndarray:
    """The ``n^2 x n`` 0/1 matrix ``V`` with ``V e_j = e_j (x) e_j``."""
    if n < 1:
        raise ValueError("n must be positive")
    v = np.zeros((n * n, n), dtype=np.complex128)
    v[np.arange(n) * (n + 1), np.arange(n)] = 1.0
    return v


def hadamard_via_tensor(a, b) -> np.ndarray:
    """Hadamard product computed as ``V* (A (x) B) V``."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"need two square matrices of one size, got {a.shape}, {b.shape}")
    v = diag_isometry(a.shape[0])
    return v.conj().T @ np.kron(a, b) @ v


def _check_range(name: str, value: float, lo: float, hi: float) -> None:
    if not lo <= value <= hi:
        raise ParamOutOfRange(f"{name}={value} outside [{lo}, {hi}]")


class PowerCache:
    """Memoised fractional powers of one positive definite matrix.

    Grid sweeps evaluate the same exponents many times; eigendecomposing once
    per exponent keeps them cheap.
    """

    def __init__(self, a):
        self.matrix = hermitize(a)
        lam = eigvalsh(self.matrix)
        if lam[0] <= PD_FLOOR * max(1.0, lam[-1]):
            raise NotPositiveDefinite("power surfaces need positive definite inputs")
        self._cache: dict[float, np.ndarray] = {}

    def __call__(self, nu: float) -> np.ndarray:
        nu = float(nu)
        if nu not in self._cache:
            self._cache[nu] = fractional_power(self.matrix, nu)
        return self._cache[nu]


def _powers(m) -> PowerCache:
    return m if isinstance(m, PowerCache) else PowerCache(m)


def h_surface(a, b, s: float, t: float) -> np.ndarray:
    """``H(s,t) = A^{1+s} (x) B^{1-t} + A^{1-s} (x) B^{1+t}`` on ``[-1,1]^2``.

    ``a`` and ``b`` may be matrices or :class:`PowerCache` instances.
    """
    _check_range("s", s, -1.0, 1.0)
    _check_range("t", t, -1.0, 1.0)
    pa, pb = _powers(a), _powers(b)
    return np.kron(pa(1 + s), pb(1 - t)) + np.kron(pa(1 - s), pb(1 + t))


def k_surface(a, b, s: float, t: float) -> np.ndarray:
    """``K(s,t) = A^s o B^{1-t} + A^{1-s} o B^t`` on ``[0,1]^2``."""
    _check_range("s", s, 0.0, 1.0)
    _check_range("t", t, 0.0, 1.0)
    pa, pb = _powers(a), _powers(b)
    return pa(s) * pb(1 - t) + pa(1 - s) * pb(t)
