"""Unitarily invariant norms computed from singular values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, KOutOfRange
from .linalg import as_matrix, singular_values

SV_ZERO_FLOOR = 1e-13
FAMILY_SCHATTEN = (1.0, 1.5, 2.0, 3.0)


@dataclass(frozen=True)
class NormKind:
    """A unitarily invariant norm.

    ``tag`` is one of ``"hs"``, ``"schatten"``, ``"kyfan"``, ``"op"``; ``param``
    holds ``p`` for Schatten norms and ``k`` for Ky Fan norms.  The string form
    (``"hs"``, ``"schatten:1.5"``, ``"kyfan:2"``, ``"op"``) is what the CLI and
    reports use.
    """

    tag: str
    param: float | int | None = None

    def __post_init__(self):
        if self.tag == "schatten":
            if self.param is None or not float(self.param) >= 1.0:
                raise ValueError(f"Schatten norms need p >= 1, got {self.param!r}")
        elif self.tag == "kyfan":
            if self.param is None or int(self.param) != self.param or self.param < 1:
                raise ValueError(f"Ky Fan norms need a positive integer k, got {self.param!r}")
        elif self.tag in ("hs", "op"):
            if self.param is not None:
                raise ValueError(f"{self.tag} takes no parameter")
        else:
            raise ValueError(f"unknown norm tag {self.tag!r}")

    @classmethod
    def parse(cls, text: str) -> "NormKind":
        tag, _, arg = text.strip().partition(":")
        if tag == "schatten":
            return cls(tag, float(arg))
        if tag == "kyfan":
            return cls(tag, int(arg))
        if arg:
            raise ValueError(f"{tag} takes no parameter")
        return cls(tag)

    def __str__(self) -> str:
        if self.tag == "schatten":
            return f"schatten:{float(self.param):g}"
        if self.tag == "kyfan":
            return f"kyfan:{int(self.param)}"
        return self.tag


HS = NormKind("hs")
OP = NormKind("op")


def norm_family(n: int) -> list[NormKind]:
    """Ky Fan k-norms for k = 1..n, Schatten p in {1, 1.5, 2, 3}, and the operator norm.

    The Ky Fan part alone certifies every unitarily invariant norm; the rest
    are spot checks.
    """
    kinds = [NormKind("kyfan", k) for k in range(1, n + 1)]
    kinds += [NormKind("schatten", p) for p in FAMILY_SCHATTEN]
    kinds.append(OP)
    return kinds


def _clean(sv: np.ndarray) -> np.ndarray:
    if sv.size == 0 or sv[0] == 0.0:
        return sv
    return np.where(sv < SV_ZERO_FLOOR * sv[0], 0.0, sv)


def norm_from_sv(sv: np.ndarray, kind: NormKind) -> float:
    """Evaluate ``kind`` on a descending singular value list."""
    sv = _clean(np.asarray(sv, dtype=float))
    if kind.tag == "op":
        return float(sv[0])
    if kind.tag == "hs":
        return float(np.sqrt(np.sum(sv**2)))
    if kind.tag == "kyfan":
        k = int(kind.param)
        if k > sv.size:
            raise KOutOfRange(f"Ky Fan k={k} exceeds {sv.size} singular values")
        return float(np.sum(sv[:k]))
    p = float(kind.param)
    if sv[0] == 0.0:
        return 0.0
    # factor out s_1 so large p cannot overflow
    return float(sv[0] * np.sum((sv / sv[0]) ** p) ** (1.0 / p))


def norm(a, kind: NormKind) -> float:
    return norm_from_sv(singular_values(a), kind)


def hs_norm_sq(a) -> float:
    """Squared Hilbert-Schmidt norm as the entrywise sum ``sum |a_ij|^2``."""
    m = as_matrix(a)
    return float(np.sum(m.real**2 + m.imag**2))


def ky_fan_profile(a) -> np.ndarray:
    """Cumulative sums of singular values: entry k-1 is the Ky Fan k-norm."""
    return np.cumsum(_clean(singular_values(a)))


def fan_dominance_leq(a, b, tol: float = 1e-8) -> bool:
    """Whether every Ky Fan norm of ``a`` is at most that of ``b`` (up to tolerance).

    By Fan dominance this certifies ``|||a||| <= |||b|||`` for every
    unitarily invariant norm.  The tolerance is relative to
    ``max(1, ||a||_(k), ||b||_(k))`` for each k.
    """
    a, b = as_matrix(a), as_matrix(b)
    if min(a.shape) != min(b.shape):
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} have different min-dimension")
    fa, fb = ky_fan_profile(a), ky_fan_profile(b)
    scale = np.maximum(1.0, np.maximum(fa, fb))
    return bool(np.all(fa <= fb + tol * scale))
