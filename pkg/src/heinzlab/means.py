"""Scalar Heinz-type quantities and operator means of positive definite matrices."""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, ExponentOutOfRange, NonPositiveScalar
from .linalg import NU_MAX, as_matrix, fractional_power, hermitize


def _check_pair(a: float, b: float) -> None:
    if not (a > 0 and b > 0):
        raise NonPositiveScalar(f"need a, b > 0, got a={a!r}, b={b!r}")


def _pow(x: float, nu: float) -> float:
    return math.exp(nu * math.log(x))


def r0_min(nu: float) -> float:
    return min(nu, 1.0 - nu)


def r0_max(nu: float) -> float:
    return max(nu, 1.0 - nu)


def r1(nu: float) -> float:
    """Weight ``min{nu, |1/2 - nu|, 1 - nu}``; zero at nu in {0, 1/2, 1}."""
    return min(nu, abs(0.5 - nu), 1.0 - nu)


def scalar_heinz(a: float, b: float, nu: float) -> float:
    """Heinz mean ``(a^nu b^(1-nu) + a^(1-nu) b^nu) / 2`` for ``a, b > 0``."""
    _check_pair(a, b)
    return 0.5 * (_pow(a, nu) * _pow(b, 1.0 - nu) + _pow(a, 1.0 - nu) * _pow(b, nu))


def young_reverse_gap(a: float, b: float, nu: float) -> float:
    """``a^nu b^(1-nu) - (nu a + (1-nu) b)``; nonnegative whenever nu is outside [0, 1]."""
    _check_pair(a, b)
    return _pow(a, nu) * _pow(b, 1.0 - nu) - (nu * a + (1.0 - nu) * b)


def lemma21_gap(a: float, b: float, nu: float) -> float:
    """``a^nu b^(1-nu) + b^nu a^(1-nu) - (a + b)``; nonnegative for nu outside [0, 1]."""
    _check_pair(a, b)
    return _pow(a, nu) * _pow(b, 1.0 - nu) + _pow(b, nu) * _pow(a, 1.0 - nu) - (a + b)


def lemma23_gaps(a: float, b: float, nu: float) -> tuple[float, float, float]:
    """The three refined reverse-Young gaps, all nonnegative for nu outside [1/2, 1].

    Returns
    -------
    g1 : float
        ``a^nu b^(1-nu) - [nu a + (1-nu) b + (nu-1)(sqrt a - sqrt b)^2]``
    g2 : float
        ``a^nu b^(1-nu) + b^nu a^(1-nu) - [(a+b) + 2(nu-1)(sqrt a - sqrt b)^2]``
    g3 : float
        ``(a^nu b^(1-nu) + b^nu a^(1-nu))^2 - [(a+b)^2 + 2(nu-1)(a-b)^2]``
    """
    _check_pair(a, b)
    p = _pow(a, nu) * _pow(b, 1.0 - nu)
    q = _pow(b, nu) * _pow(a, 1.0 - nu)
    d = (math.sqrt(a) - math.sqrt(b)) ** 2
    g1 = p - (nu * a + (1.0 - nu) * b + (nu - 1.0) * d)
    g2 = p + q - ((a + b) + 2.0 * (nu - 1.0) * d)
    g3 = (p + q) ** 2 - ((a + b) ** 2 + 2.0 * (nu - 1.0) * (a - b) ** 2)
    return g1, g2, g3


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")


def arithmetic_mean(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _same_shape(a, b)
    return 0.5 * (a + b)


class _Congruence:
    """Caches ``A^{1/2}``, ``A^{-1/2}`` and ``A^{-1/2} B A^{-1/2}`` for one pair."""

    def __init__(self, a, b):
        a, b = hermitize(a), hermitize(b)
        _same_shape(a, b)
        self.half = fractional_power(a, 0.5)
        self.neg_half = fractional_power(a, -0.5)
        # B must be PD too; this raises for singular B
        fractional_power(b, -0.5)
        self.inner = self.neg_half @ b @ self.neg_half

    def sharp(self, mu: float) -> np.ndarray:
        m = self.half @ fractional_power(self.inner, mu) @ self.half
        return 0.5 * (m + m.conj().T)


def geometric_mean_weighted(a, b, mu: float) -> np.ndarray:
    """Weighted geometric mean ``A #_mu B = A^{1/2} (A^{-1/2} B A^{-1/2})^mu A^{1/2}``.

    Defined for positive definite ``A`` and ``B`` and any real ``mu`` with
    ``|mu| <= NU_MAX``.
    """
    return _Congruence(a, b).sharp(mu)


def heinz_operator_mean(a, b, nu: float) -> np.ndarray:
    """Operator Heinz mean ``(A #_nu B + A #_{1-nu} B) / 2``."""
    if abs(nu) > NU_MAX or abs(1.0 - nu) > NU_MAX:
        raise ExponentOutOfRange(f"nu={nu} puts an exponent outside [-{NU_MAX}, {NU_MAX}]")
    c = _Congruence(a, b)
    return 0.5 * (c.sharp(nu) + c.sharp(1.0 - nu))
