"""Seeded, platform-independent witness generation.

Randomness comes from xoshiro256** seeded through SplitMix64.  Both are
implemented on Python integers so the bit stream is identical everywhere,
and matrix construction is done in plain Python floating point using only
``+ - * /``, ``sqrt``, ``exp`` and ``log`` (correctly rounded or nearly so on
every mainstream libm), so a ``GenSpec`` maps to the same matrix on any
platform.

Constants
---------
SplitMix64 increment ``0x9E3779B97F4A7C15``, finaliser multipliers
``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB`` with shifts 30/27/31.
xoshiro256** uses ``rotl(s1 * 5, 7) * 9`` as output and shifts 17 / rot 45.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import InvalidSpec

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
KINDS = (
    "PD",
    "PSD",
    "Hermitian",
    "GeneralComplex",
    "Unitary",
    "DiagonalPD",
    "CommutingPDPair",
    "EqualPair",
)
PAIR_KINDS = ("CommutingPDPair", "EqualPair")
MAX_DIM = 16
DEFAULT_COND_CAP = 100.0


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_substream(master_seed: int, trial_index: int) -> int:
    """Seed for trial ``trial_index``: the ``(trial_index+1)``-th SplitMix64 output from ``master_seed``.

    ``mix64`` is a bijection and the state walk is injective in the index
    modulo 2**64, so distinct indices never collide.
    """
    return mix64((master_seed + (trial_index + 1) * GOLDEN_GAMMA) & MASK64)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256:
    """xoshiro256** with SplitMix64 seeding."""

    def __init__(self, seed: int):
        seed &= MASK64
        self.s = [derive_substream(seed, i) for i in range(4)]

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def uniform(self) -> float:
        """Uniform double in the open interval (0, 1)."""
        return ((self.next_u64() >> 11) + 0.5) * (1.0 / (1 << 53))

    def uniform_in(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.uniform()

    def integer(self, lo: int, hi: int) -> int:
        """Integer in ``[lo, hi]`` (inclusive), via rejection to avoid modulo bias."""
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            x = self.next_u64()
            if x < limit:
                return lo + x % span

    def normal(self) -> float:
        # Marsaglia polar method: no trigonometric functions needed
        while True:
            u = 2.0 * self.uniform() - 1.0
            v = 2.0 * self.uniform() - 1.0
            r = u * u + v * v
            if 0.0 < r < 1.0:
                return u * math.sqrt(-2.0 * math.log(r) / r)

    def complex_normal(self) -> complex:
        return complex(self.normal(), self.normal()) * (1.0 / math.sqrt(2.0))


@dataclass(frozen=True)
class GenSpec:
    """What to generate.

    ``rank`` is used by ``PSD`` only (defaults to ``dim - 1``).  ``cond_cap``
    bounds the ratio of largest to smallest nonzero eigenvalue magnitude.
    """

    dim: int
    kind: str
    cond_cap: float = DEFAULT_COND_CAP
    seed: int = 0
    rank: Optional[int] = None

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown kind {self.kind!r}")
        if not (isinstance(self.dim, int) and 1 <= self.dim <= MAX_DIM):
            raise InvalidSpec(f"dim must be an integer in [1, {MAX_DIM}], got {self.dim!r}")
        if not self.cond_cap >= 1.0:
            raise InvalidSpec(f"cond_cap must be >= 1, got {self.cond_cap}")
        if not 0 <= self.seed <= MASK64:
            raise InvalidSpec("seed must be an unsigned 64-bit integer")
        if self.kind == "PSD" and self.rank is not None and not 0 <= self.rank <= self.dim:
            raise InvalidSpec(f"rank {self.rank} not in [0, {self.dim}]")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "GenSpec":
        return cls(**d)


def _log_uniform_spectrum(rng: Xoshiro256, n: int, cond_cap: float) -> list[float]:
    half = 0.5 * math.log(cond_cap)
    return [math.exp(-half + 2.0 * half * rng.uniform()) for _ in range(n)]


def _random_unitary(rng: Xoshiro256, n: int) -> list[list[complex]]:
    """Modified Gram-Schmidt on the columns of a complex Gaussian matrix (Haar distributed)."""
    cols = [[rng.complex_normal() for _ in range(n)] for _ in range(n)]
    for j in range(n):
        v = cols[j]
        for i in range(j):
            q = cols[i]
            proj = sum(q[k].conjugate() * v[k] for k in range(n))
            v = [v[k] - proj * q[k] for k in range(n)]
        nrm = math.sqrt(sum(x.real * x.real + x.imag * x.imag for x in v))
        cols[j] = [x / nrm for x in v]
    # rows of the result are indexed first
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _conjugate_diag(u: list[list[complex]], lam: list[float]) -> np.ndarray:
    """``U diag(lam) U*`` with an exactly Hermitian result."""
    n = len(lam)
    out = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        out[i, i] = sum(lam[k] * (u[i][k].real ** 2 + u[i][k].imag ** 2) for k in range(n))
        for j in range(i + 1, n):
            z = sum(lam[k] * u[i][k] * u[j][k].conjugate() for k in range(n))
            out[i, j] = z
            out[j, i] = z.conjugate()
    return out


def _pd(rng: Xoshiro256, n: int, cond_cap: float) -> np.ndarray:
    lam = _log_uniform_spectrum(rng, n, cond_cap)
    if n == 1:
        return np.array([[lam[0]]], dtype=np.complex128)
    return _conjugate_diag(_random_unitary(rng, n), lam)


def generate(spec: GenSpec):
    """Build the matrix (or pair of matrices) described by ``spec``.

    PD spectra are log-uniform on ``[1/sqrt(cond_cap), sqrt(cond_cap)]``;
    ``Hermitian`` uses the same magnitudes with random signs, so it is
    invertible; ``PSD`` has exactly ``dim - rank`` zero eigenvalues.  Pair
    kinds return a tuple ``(A, B)``.
    """
    spec.validate()
    rng = Xoshiro256(spec.seed)
    n, cap = spec.dim, spec.cond_cap
    kind = spec.kind
    if kind == "PD":
        return _pd(rng, n, cap)
    if kind == "DiagonalPD":
        return np.diag(np.array(_log_uniform_spectrum(rng, n, cap), dtype=np.complex128))
    if kind == "PSD":
        rank = n - 1 if spec.rank is None else spec.rank
        lam = _log_uniform_spectrum(rng, rank, cap) + [0.0] * (n - rank)
        return _conjugate_diag(_random_unitary(rng, n), lam)
    if kind == "Hermitian":
        lam = [x if rng.uniform() < 0.5 else -x for x in _log_uniform_spectrum(rng, n, cap)]
        return _conjugate_diag(_random_unitary(rng, n), lam)
    if kind == "GeneralComplex":
        return np.array(
            [[rng.complex_normal() for _ in range(n)] for _ in range(n)], dtype=np.complex128
        )
    if kind == "Unitary":
        return np.array(_random_unitary(rng, n), dtype=np.complex128)
    if kind == "CommutingPDPair":
        u = _random_unitary(rng, n)
        a = _conjugate_diag(u, _log_uniform_spectrum(rng, n, cap))
        b = _conjugate_diag(u, _log_uniform_spectrum(rng, n, cap))
        return a, b
    a = _pd(rng, n, cap)
    return a, a.copy()
