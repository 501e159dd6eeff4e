"""Dense complex matrix core.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  The
Hermitian eigensolver is a cyclic complex Jacobi method compiled with numba;
everything else in the package (matrix powers, singular values, Loewner
order tests) is built on top of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import (
    DimensionMismatch,
    ExponentOutOfRange,
    NoConvergence,
    NonHermitian,
    NotPositiveDefinite,
)

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60
PD_FLOOR = 1e-10
NU_MAX = 4.0


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex128 array (scalars become 1x1)."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _require_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")


def hermitian_asymmetry(h: np.ndarray) -> float:
    """Return ``max |h - h*|`` relative to ``max(1, max |h_ij|)``."""
    scale = max(1.0, float(np.max(np.abs(h))))
    return float(np.max(np.abs(h - h.conj().T))) / scale


def hermitize(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Check that ``h`` is Hermitian within ``tol`` and return ``(h + h*)/2``."""
    m = as_matrix(h)
    _require_square(m)
    asym = hermitian_asymmetry(m)
    if asym > tol:
        raise NonHermitian(f"matrix is not Hermitian (relative asymmetry {asym:.3e})")
    return 0.5 * (m + m.conj().T)


@numba.njit(cache=True)
def _jacobi_kernel(a, tol, max_sweeps):
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j].real ** 2 + a[i, j].imag ** 2
    fro = np.sqrt(fro)
    target = tol * fro
    sweeps = 0
    while True:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * (a[i, j].real ** 2 + a[i, j].imag ** 2)
        if np.sqrt(off) <= target or fro == 0.0:
            return a, v, sweeps, True
        if sweeps >= max_sweeps:
            return a, v, sweeps, False
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                b = abs(apq)
                if b == 0.0:
                    continue
                # phase factor e^{i phi} of a_pq; rotating by it leaves a real 2x2 problem
                ph = apq / b
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * b)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                phc = ph.conjugate()
                # columns: A <- A J with J = [[c, s], [-s conj(ph), c conj(ph)]]
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * phc * akq
                    a[k, q] = s * akp + c * phc * akq
                # rows: A <- J* A
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * ph * aqk
                    a[q, k] = s * apk + c * ph * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * phc * vkq
                    v[k, q] = s * vkp + c * phc * vkq


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and the unitary whose columns are eigenvectors."""

    eigenvalues: np.ndarray
    unitary: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.unitary
        return (u * self.eigenvalues) @ u.conj().T

    def apply(self, f) -> np.ndarray:
        """Return ``U diag(f(lambda)) U*`` (Hermitized)."""
        u = self.unitary
        m = (u * f(self.eigenvalues)) @ u.conj().T
        return 0.5 * (m + m.conj().T)


def hermitian_eig(h, tol: float = HERMITIAN_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Eigenvalues are sorted ascending; each eigenvector is normalised so that
    its largest-modulus entry (first one on ties) is real and positive, which
    makes the output deterministic.

    Raises
    ------
    NonHermitian
        If ``h`` fails the symmetry check.
    NoConvergence
        If the off-diagonal mass does not fall below the threshold within
        ``JACOBI_MAX_SWEEPS`` sweeps.
    """
    a = np.ascontiguousarray(hermitize(h, tol))
    d, v, sweeps, ok = _jacobi_kernel(a.copy(), JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if not ok:
        raise NoConvergence(f"Jacobi iteration did not converge in {sweeps} sweeps")
    lam = d.diagonal().real.copy()
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    v = v[:, order]
    idx = np.argmax(np.abs(v), axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    cols = np.arange(v.shape[1])
    v = v * (lead.conj() / np.abs(lead))
    v[idx, cols] = np.abs(lead)  # exactly real, no rounding residue
    return SpectralDecomposition(lam, v)


def eigvalsh(h) -> np.ndarray:
    return hermitian_eig(h).eigenvalues


def singular_values(a) -> np.ndarray:
    """Singular values of a rectangular matrix in descending order.

    Computed as square roots of the eigenvalues of the smaller Gram matrix, so
    the result has ``min(rows, cols)`` entries.
    """
    m = as_matrix(a)
    top = float(np.abs(m).max()) if m.size else 0.0
    if top == 0.0:
        return np.zeros(min(m.shape))
    # exact power-of-two rescaling keeps the Gram matrix clear of overflow/underflow
    e = math.frexp(top)[1]
    m = np.ldexp(m.real, -e) + 1j * np.ldexp(m.imag, -e)
    gram = m.conj().T @ m if m.shape[1] <= m.shape[0] else m @ m.conj().T
    lam = eigvalsh(0.5 * (gram + gram.conj().T))
    return np.ldexp(np.sqrt(np.clip(lam, 0.0, None))[::-1], e)


def _is_integer(nu: float) -> bool:
    return float(nu).is_integer()


def fractional_power(a, nu: float, nu_max: float = NU_MAX, pd_floor: float = PD_FLOOR) -> np.ndarray:
    """Matrix power ``a**nu`` of a Hermitian matrix via spectral calculus.

    Accepted inputs: any Hermitian matrix for integer ``nu`` (invertible when
    ``nu < 0``); positive semidefinite for non-integer ``nu > 0``; positive
    definite for non-integer ``nu < 0``.  ``nu = 0`` always gives the identity.
    Eigenvalues within ``pd_floor * max(1, lambda_max)`` of zero count as zero.
    """
    nu = float(nu)
    if not abs(nu) <= nu_max:
        raise ExponentOutOfRange(f"|nu| = {abs(nu)} exceeds nu_max = {nu_max}")
    dec = hermitian_eig(a)
    lam = dec.eigenvalues
    n = lam.size
    if nu == 0.0:
        return np.eye(n, dtype=np.complex128)
    floor = pd_floor * max(1.0, float(np.max(np.abs(lam))))
    if _is_integer(nu):
        if nu < 0 and np.any(np.abs(lam) <= floor):
            raise NotPositiveDefinite("negative integer power of a singular matrix")
        k = int(nu)
        return dec.apply(lambda x: x**k)
    if nu > 0:
        if np.any(lam < -floor):
            raise NotPositiveDefinite("fractional power of a matrix that is not PSD")
        lam = np.where(lam <= floor, 0.0, lam)
        return dec.apply(lambda _: lam**nu)
    if np.any(lam <= floor):
        raise NotPositiveDefinite(
            f"negative fractional power needs eigenvalues above {floor:.3e}, min is {lam[0]:.3e}"
        )
    return dec.apply(lambda x: x**nu)


def inverse(a) -> np.ndarray:
    """Inverse of an invertible Hermitian matrix through its spectrum."""
    return fractional_power(a, -1.0)


def op_norm(a) -> float:
    return float(singular_values(a)[0])


def min_eig(h) -> float:
    return float(eigvalsh(h)[0])


def is_psd(h, tol: float = 1e-8) -> bool:
    """``True`` iff the smallest eigenvalue is ``>= -tol * max(1, ||h||_op)``."""
    lam = eigvalsh(h)
    scale = max(1.0, float(np.max(np.abs(lam))))
    return bool(lam[0] >= -tol * scale)


def loewner_leq(a, b, tol: float = 1e-8) -> bool:
    """Loewner order ``a <= b``, i.e. ``b - a`` positive semidefinite."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return is_psd(b - a, tol)


def block_2x2(a, x, b) -> np.ndarray:
    """Assemble ``[[a, x], [x*, b]]``."""
    a, x, b = as_matrix(a), as_matrix(x), as_matrix(b)
    _require_square(a)
    _require_square(b)
    if x.shape != (a.shape[0], b.shape[0]):
        raise DimensionMismatch(
            f"off-diagonal block {x.shape} incompatible with {a.shape} and {b.shape}"
        )
    return np.block([[a, x], [x.conj().T, b]])


def block_psd_equivalence_check(a, x, b, tol: float = 1e-8) -> tuple[bool, bool]:
    """Evaluate both sides of the Schur-complement criterion.

    Returns ``(is_psd([[a, x], [x*, b]]), x b^-1 x* <= a)``; for positive
    definite ``b`` the two booleans agree.
    """
    b = hermitize(b)
    if min_eig(b) <= PD_FLOOR * max(1.0, op_norm(b)):
        raise NotPositiveDefinite("lower-right block must be positive definite")
    x = as_matrix(x)
    lhs = is_psd(block_2x2(a, x, b), tol)
    schur = x @ inverse(b) @ x.conj().T
    rhs = loewner_leq(0.5 * (schur + schur.conj().T), hermitize(a), tol)
    return lhs, rhs
