"""Executable checks for Heinz-type matrix inequalities.

Every check evaluates both sides of one inequality on concrete matrices and
returns :class:`InequalityCase` records with ``slack = rhs - lhs`` oriented so
that ``slack >= 0`` is the claimed direction.  A case holds when
``slack >= -tol * scale`` with ``scale = max(1, |lhs|, |rhs|)``.

For Loewner-order claims ``LHS <= RHS`` the scalar reported is the smallest
eigenvalue of ``RHS - LHS``: ``lhs`` is 0, ``rhs`` is that eigenvalue, and the
scale is ``max(1, ||LHS||_op, ||RHS||_op)``.

A witness that does not satisfy a check's hypotheses raises
:class:`~heinzlab.errors.SkippedHypothesis`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import NotFound, SkippedHypothesis, UnknownCheck
from .linalg import (
    PD_FLOOR,
    as_matrix,
    eigvalsh,
    fractional_power,
    hermitian_asymmetry,
    hermitize,
    singular_values,
)
from .means import arithmetic_mean, geometric_mean_weighted, heinz_operator_mean, r0_max, r0_min, r1
from .norms import HS, NormKind, hs_norm_sq, norm_from_sv
from .products import hadamard
from .randgen import GenSpec, Xoshiro256, derive_substream, generate

DEFAULT_TOL = 1e-8


@dataclass
class InequalityCase:
    check_id: str
    part: str
    params: dict
    lhs: float
    rhs: float
    slack: float
    scale: float
    holds: bool
    norm_kind: str = ""

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "part": self.part,
            "params": dict(self.params),
            "norm_kind": self.norm_kind,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "scale": self.scale,
            "holds": self.holds,
        }


def make_case(check_id, part, lhs, rhs, tol, params=None, norm_kind="", scale=None, holds=None):
    lhs, rhs = float(lhs), float(rhs)
    if scale is None:
        scale = max(1.0, abs(lhs), abs(rhs))
    slack = rhs - lhs
    if holds is None:
        holds = slack >= -tol * scale
    return InequalityCase(
        check_id, part, dict(params or {}), lhs, rhs, slack, float(scale), bool(holds), norm_kind
    )


@dataclass
class Witness:
    """Matrices a check is evaluated on, plus how they were produced."""

    matrices: dict
    seed: int = 0
    dim: int = 0
    gen: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.matrices[name]


# -- hypothesis helpers -------------------------------------------------------


def _spectrum(m) -> np.ndarray:
    if hermitian_asymmetry(as_matrix(m)) > 1e-10:
        raise SkippedHypothesis("matrix is not Hermitian")
    return eigvalsh(m)


def _require_psd(*ms) -> None:
    for m in ms:
        lam = _spectrum(m)
        if lam[0] < -PD_FLOOR * max(1.0, abs(lam[-1])):
            raise SkippedHypothesis("matrix is not positive semidefinite")


def _require_pd(*ms) -> None:
    for m in ms:
        lam = _spectrum(m)
        if lam[0] <= PD_FLOOR * max(1.0, abs(lam[-1])):
            raise SkippedHypothesis("matrix is not positive definite")


def _require_invertible_hermitian(*ms) -> None:
    for m in ms:
        lam = np.abs(_spectrum(m))
        if lam.min() <= PD_FLOOR * max(1.0, lam.max()):
            raise SkippedHypothesis("matrix is not invertible")


def _require(cond: bool, why: str) -> None:
    if not cond:
        raise SkippedHypothesis(why)


def _same_square(*ms) -> None:
    shapes = {as_matrix(m).shape for m in ms}
    n = as_matrix(ms[0]).shape[0]
    _require(shapes == {(n, n)}, "matrices must be square and of one size")


class _Powers:
    def __init__(self, m):
        self.m = hermitize(m)
        self._cache = {}

    def __call__(self, nu):
        nu = float(nu)
        if nu not in self._cache:
            self._cache[nu] = fractional_power(self.m, nu)
        return self._cache[nu]


def _heinz_term(pa, pb, x, nu):
    return pa(nu) @ x @ pb(1.0 - nu) + pa(1.0 - nu) @ x @ pb(nu)


def _norm_cases(check_id, part, left, right, kinds, tol, params, combine=None):
    """Cases ``|||left||| <= |||right|||`` for each kind.

    ``left``/``right`` are matrices or lists of matrices; with a list the
    norms are combined with ``combine`` (default ``max``).
    """
    left_sv = [singular_values(m) for m in (left if isinstance(left, list) else [left])]
    right_sv = [singular_values(m) for m in (right if isinstance(right, list) else [right])]
    combine = combine or max
    out = []
    for kind in kinds:
        lhs = combine(norm_from_sv(sv, kind) for sv in left_sv)
        rhs = combine(norm_from_sv(sv, kind) for sv in right_sv)
        out.append(make_case(check_id, part, lhs, rhs, tol, params, str(kind)))
    return out


def _loewner_case(check_id, part, lower, upper, tol, params):
    lower, upper = hermitize(lower, 1e-8), hermitize(upper, 1e-8)
    diff = eigvalsh(upper - lower)
    scale = max(1.0, float(np.max(np.abs(eigvalsh(lower)))), float(np.max(np.abs(eigvalsh(upper)))))
    return make_case(check_id, part, 0.0, diff[0], tol, params, "loewner", scale=scale)


def _kinds(kinds) -> list:
    if kinds is None:
        return [HS]
    if isinstance(kinds, NormKind):
        return [kinds]
    return list(kinds)


# -- norm inequalities --------------------------------------------------------


def heinz_double_check(a, b, x, nu, kinds=None, tol=DEFAULT_TOL):
    """``2|||A^½XB^½||| <= |||A^νXB^{1-ν}+A^{1-ν}XB^ν||| <= |||AX+XB|||`` for PSD A, B and ν in [0, 1]."""
    _require(0.0 <= nu <= 1.0, "nu must lie in [0, 1]")
    _same_square(a, b)
    _require_psd(a, b)
    x = as_matrix(x)
    pa, pb = _Powers(a), _Powers(b)
    params = {"nu": nu}
    geo = 2.0 * pa(0.5) @ x @ pb(0.5)
    mid = _heinz_term(pa, pb, x, nu)
    top = pa.m @ x + x @ pb.m
    kinds = _kinds(kinds)
    return _norm_cases("heinz_double", "lower", geo, mid, kinds, tol, params) + _norm_cases(
        "heinz_double", "upper", mid, top, kinds, tol, params
    )


def heinz_reverse_check(a, b, x, nu, kinds=None, tol=DEFAULT_TOL):
    """``|||AX+XB||| <= |||A^νXB^{1-ν}+A^{1-ν}XB^ν|||`` for PD A, B and ν outside [0, 1]."""
    _require(not 0.0 <= nu <= 1.0, "nu must lie outside [0, 1]")
    _same_square(a, b)
    _require_pd(a, b)
    x = as_matrix(x)
    pa, pb = _Powers(a), _Powers(b)
    top = pa.m @ x + x @ pb.m
    mid = _heinz_term(pa, pb, x, nu)
    return _norm_cases("heinz_reverse", "main", top, mid, _kinds(kinds), tol, {"nu": nu})


def _hs_pieces(a, b, x, nu):
    x = as_matrix(x)
    pa, pb = _Powers(a), _Powers(b)
    plus = hs_norm_sq(pa.m @ x + x @ pb.m)
    minus = hs_norm_sq(pa.m @ x - x @ pb.m)
    mid = hs_norm_sq(_heinz_term(pa, pb, x, nu))
    return plus, minus, mid


def hs_refine_check(a, b, x, nu, tol=DEFAULT_TOL):
    """``||H_ν||² + 2 r0 ||AX-XB||² <= ||AX+XB||²`` (Hilbert-Schmidt), ``r0 = min{ν, 1-ν}``."""
    _require(0.0 <= nu <= 1.0, "nu must lie in [0, 1]")
    _same_square(a, b)
    _require_psd(a, b)
    r = r0_min(nu)
    plus, minus, mid = _hs_pieces(a, b, x, nu)
    return [make_case("hs_refine", "main", mid + 2 * r * minus, plus, tol, {"nu": nu, "r0": r}, "hs")]


def hs_reverse_check(a, b, x, nu, tol=DEFAULT_TOL):
    """``||AX+XB||² <= ||H_ν||² + 2 r0 ||AX-XB||²`` (Hilbert-Schmidt), ``r0 = max{ν, 1-ν}``."""
    _require(0.0 <= nu <= 1.0, "nu must lie in [0, 1]")
    _same_square(a, b)
    _require_psd(a, b)
    r = r0_max(nu)
    plus, minus, mid = _hs_pieces(a, b, x, nu)
    return [make_case("hs_reverse", "main", plus, mid + 2 * r * minus, tol, {"nu": nu, "r0": r}, "hs")]


def hs_strong_reverse_check(a, b, x, nu, tol=DEFAULT_TOL):
    """``||AX+XB||² + 2(ν-1)||AX-XB||² <= ||A^νXB^{1-ν}+A^{1-ν}XB^ν||²`` for PD A, B.

    The main regime is ν >= 1; ν < 1/2 is also valid and is reported with
    part ``"low_nu"``.
    """
    _require(nu >= 1.0 or nu < 0.5, "nu must satisfy nu >= 1 or nu < 1/2")
    _same_square(a, b)
    _require_pd(a, b)
    plus, minus, mid = _hs_pieces(a, b, x, nu)
    part = "main" if nu >= 1.0 else "low_nu"
    return [make_case("hs_strong_reverse", part, plus + 2 * (nu - 1) * minus, mid, tol, {"nu": nu}, "hs")]


def equality_case_check(a, b, x, nu, tol=DEFAULT_TOL):
    """Equality ``||AX+XB||₂ = ||A^νXB^{1-ν}+A^{1-ν}XB^ν||₂`` for ν > 1 exactly when ``AX = XB``.

    ``slack`` is the norm gap; the case holds when the gap is nonnegative and
    "gap is zero" agrees with "commutator is zero" (both within
    ``tol * scale``).
    """
    _require(nu > 1.0, "nu must exceed 1")
    _same_square(a, b)
    _require_pd(a, b)
    plus, minus, mid = _hs_pieces(a, b, x, nu)
    lhs, rhs = math.sqrt(plus), math.sqrt(mid)
    scale = max(1.0, lhs, rhs)
    comm = math.sqrt(minus)
    gap = rhs - lhs
    equal = abs(gap) <= tol * scale
    commuting = comm <= tol * scale
    holds = gap >= -tol * scale and equal == commuting
    params = {"nu": nu, "commutator": comm, "commuting": commuting}
    return [make_case("equality_case", "main", lhs, rhs, tol, params, "hs", scale, holds)]


def sv_equality_check(a, b, nu, tol=DEFAULT_TOL):
    """``s_j(A+B) = s_j(A^νB^{1-ν}+A^{1-ν}B^ν)`` for all j, ν > 1, exactly when ``A = B``.

    ``lhs``/``rhs`` are the Hilbert-Schmidt norms of the two matrices (the
    gap is nonnegative); the case holds when "spectra agree" matches
    "A equals B".
    """
    _require(nu > 1.0, "nu must exceed 1")
    _same_square(a, b)
    _require_pd(a, b)
    pa, pb = _Powers(a), _Powers(b)
    s_sum = singular_values(pa.m + pb.m)
    s_mid = singular_values(pa(nu) @ pb(1 - nu) + pa(1 - nu) @ pb(nu))
    lhs, rhs = float(np.sqrt(np.sum(s_sum**2))), float(np.sqrt(np.sum(s_mid**2)))
    scale = max(1.0, lhs, rhs)
    sv_dev = float(np.max(np.abs(s_sum - s_mid)))
    same_spectra = sv_dev <= tol * scale
    equal_pair = float(np.linalg.norm(pa.m - pb.m)) <= tol * scale
    holds = rhs - lhs >= -tol * scale and same_spectra == equal_pair
    params = {"nu": nu, "sv_deviation": sv_dev, "equal_pair": equal_pair}
    return [make_case("sv_equality", "main", lhs, rhs, tol, params, "sv", scale, holds)]


def audenaert_sv_check(a, b, nu, tol=DEFAULT_TOL):
    """``s_j(A^νB^{1-ν}+A^{1-ν}B^ν) <= s_j(A+B)`` for every j; PSD A, B, ν in [0, 1].

    Reported at the index j with the smallest slack.
    """
    _require(0.0 <= nu <= 1.0, "nu must lie in [0, 1]")
    _same_square(a, b)
    _require_psd(a, b)
    pa, pb = _Powers(a), _Powers(b)
    s_mid = singular_values(pa(nu) @ pb(1 - nu) + pa(1 - nu) @ pb(nu))
    s_sum = singular_values(pa.m + pb.m)
    j = int(np.argmin(s_sum - s_mid))
    scale = max(1.0, float(s_sum[0]), float(s_mid[0]))
    return [make_case("audenaert", "main", s_mid[j], s_sum[j], tol, {"nu": nu, "j": j + 1}, "sv", scale)]


def mcintosh_check(a, b, x, kinds=None, tol=DEFAULT_TOL):
    """``2|||AXB*||| <= |||A*AX + XB*B|||`` for arbitrary A, B, X."""
    a, b, x = as_matrix(a), as_matrix(b), as_matrix(x)
    left = 2.0 * a @ x @ b.conj().T
    right = a.conj().T @ a @ x + x @ b.conj().T @ b
    return _norm_cases("mcintosh", "main", left, right, _kinds(kinds), tol, {})


def cpr_check(a, x, kinds=None, tol=DEFAULT_TOL):
    """``2|||X||| <= |||AXA⁻¹ + A⁻¹XA|||`` for invertible Hermitian A."""
    _require_invertible_hermitian(a)
    a = hermitize(a)
    x = as_matrix(x)
    ainv = fractional_power(a, -1)
    right = a @ x @ ainv + ainv @ x @ a
    return _norm_cases("cpr", "main", 2.0 * x, right, _kinds(kinds), tol, {})


def power_diff_check(a, b, x, m, n, kinds=None, tol=DEFAULT_TOL):
    """``|||A^{2m}X + XB^{2m}||| <= |||A^{2m+n}XB^{-n} + A^{-n}XB^{2m+n}|||``.

    A, B invertible Hermitian, m, n nonnegative integers.
    """
    _require(int(m) == m and int(n) == n and m >= 0 and n >= 0, "m, n must be nonnegative integers")
    _same_square(a, b)
    _require_invertible_hermitian(a, b)
    m, n = int(m), int(n)
    pa, pb = _Powers(a), _Powers(b)
    x = as_matrix(x)
    left = pa(2 * m) @ x + x @ pb(2 * m)
    right = pa(2 * m + n) @ x @ pb(-n) + pa(-n) @ x @ pb(2 * m + n)
    return _norm_cases("power_diff", "main", left, right, _kinds(kinds), tol, {"m": m, "n": n})


def kaur_refinement_check(a, b, x, nu, kinds=None, tol=DEFAULT_TOL):
    """``|||H_ν||| <= |||4 r1 A^½XB^½ + (1 - 2 r1)(AX+XB)|||``, ``r1 = min{ν, |½-ν|, 1-ν}``."""
    _require(0.0 <= nu <= 1.0, "nu must lie in [0, 1]")
    _same_square(a, b)
    _require_psd(a, b)
    x = as_matrix(x)
    pa, pb = _Powers(a), _Powers(b)
    r = r1(nu)
    mid = _heinz_term(pa, pb, x, nu)
    right = 4 * r * pa(0.5) @ x @ pb(0.5) + (1 - 2 * r) * (pa.m @ x + x @ pb.m)
    return _norm_cases("kaur", "main", mid, right, _kinds(kinds), tol, {"nu": nu, "r1": r})


def aujla_bounds_check(a, b, x, s, t, kinds=None, tol=DEFAULT_TOL):
    """``2|||A^½XB^½||| <= |||A^sXB^{1-t} + A^{1-s}XB^t||| <= max{|||AX+XB|||, |||AXB+X|||}``."""
    _require(0.0 <= s <= 1.0 and 0.0 <= t <= 1.0, "s, t must lie in [0, 1]")
    _same_square(a, b)
    _require_psd(a, b)
    x = as_matrix(x)
    pa, pb = _Powers(a), _Powers(b)
    params = {"s": s, "t": t}
    mid = pa(s) @ x @ pb(1 - t) + pa(1 - s) @ x @ pb(t)
    geo = 2.0 * pa(0.5) @ x @ pb(0.5)
    corners = [pa.m @ x + x @ pb.m, pa.m @ x @ pb.m + x]
    kinds = _kinds(kinds)
    return _norm_cases("aujla", "lower", geo, mid, kinds, tol, params) + _norm_cases(
        "aujla", "upper", mid, corners, kinds, tol, params
    )


def hadamard_heinz_bounds_check(a, b, s, t, kinds=None, tol=DEFAULT_TOL):
    """``2|||A^½∘B^½||| <= |||A^s∘B^{1-t} + A^{1-s}∘B^t||| <= max{|||(A+B)∘I|||, |||A∘B + I|||}``."""
    _require(0.0 <= s <= 1.0 and 0.0 <= t <= 1.0, "s, t must lie in [0, 1]")
    _same_square(a, b)
    _require_pd(a, b)
    pa, pb = _Powers(a), _Powers(b)
    eye = np.eye(pa.m.shape[0])
    params = {"s": s, "t": t}
    mid = pa(s) * pb(1 - t) + pa(1 - s) * pb(t)
    geo = 2.0 * hadamard(pa(0.5), pb(0.5))
    corners = [(pa.m + pb.m) * eye, pa.m * pb.m + eye]
    kinds = _kinds(kinds)
    return _norm_cases("hadamard_heinz", "lower", geo, mid, kinds, tol, params) + _norm_cases(
        "hadamard_heinz", "upper", mid, corners, kinds, tol, params
    )


# -- Loewner-order inequalities ----------------------------------------------


def op_heinz_reverse_check(a, b, nu, tol=DEFAULT_TOL):
    """``A∇B <= H_{1-ν}(A, B)`` in Loewner order for PD A, B and ν outside [0, 1]."""
    _require(not 0.0 <= nu <= 1.0, "nu must lie outside [0, 1]")
    _same_square(a, b)
    _require_pd(a, b)
    return [
        _loewner_case(
            "op_heinz_reverse", "main", arithmetic_mean(a, b), heinz_operator_mean(a, b, 1 - nu), tol, {"nu": nu}
        )
    ]


def nege_check(a, b, nu, tol=DEFAULT_TOL):
    """``A∇B + 2(ν-1)(A∇B - A♯B) <= H_{1-ν}(A, B)`` for PD A, B.

    Main regime ν > 1; ν < 1/2 is reported with part ``"low_nu"``.
    """
    _require(nu > 1.0 or nu < 0.5, "nu must satisfy nu > 1 or nu < 1/2")
    _same_square(a, b)
    _require_pd(a, b)
    am = arithmetic_mean(a, b)
    gm = geometric_mean_weighted(a, b, 0.5)
    lower = am + 2 * (nu - 1) * (am - gm)
    part = "main" if nu > 1.0 else "low_nu"
    return [_loewner_case("nege", part, lower, heinz_operator_mean(a, b, 1 - nu), tol, {"nu": nu})]


def tensor_hadamard_check(a, b, nu, tol=DEFAULT_TOL):
    """For PD A, B and ν >= 1, in Loewner order:

    * ``A⊗B⁻¹ + A⁻¹⊗B <= A^ν⊗B^{-ν} + A^{-ν}⊗B^ν`` (part ``"tensor"``)
    * the same with ``∘`` in place of ``⊗`` (part ``"hadamard"``)
    """
    _require(nu >= 1.0, "nu must be at least 1")
    _same_square(a, b)
    _require_pd(a, b)
    pa, pb = _Powers(a), _Powers(b)
    params = {"nu": nu}
    out = []
    for part, op in (("tensor", np.kron), ("hadamard", hadamard)):
        lower = op(pa(1), pb(-1)) + op(pa(-1), pb(1))
        upper = op(pa(nu), pb(-nu)) + op(pa(-nu), pb(nu))
        out.append(_loewner_case("tensor_hadamard", part, lower, upper, tol, params))
    return out


# -- falsification ------------------------------------------------------------


def falsify_eval(a, b, x, nu, kinds=None, margin=0.1, tol=DEFAULT_TOL):
    """Measure how far ``|||A^νXB^{1-ν}+A^{1-ν}XB^ν||| <= |||AX+XB|||`` fails.

    ``lhs = |||AX+XB||| + margin * scale`` and ``rhs = |||H_ν|||``, so the case
    holds (a counterexample to the classical bound) when the Heinz term
    exceeds ``|||AX+XB|||`` by at least ``margin * scale``.
    """
    _require(not 0.0 <= nu <= 1.0, "nu must lie outside [0, 1]")
    _same_square(a, b)
    _require_pd(a, b)
    x = as_matrix(x)
    pa, pb = _Powers(a), _Powers(b)
    s_top = singular_values(pa.m @ x + x @ pb.m)
    s_mid = singular_values(_heinz_term(pa, pb, x, nu))
    out = []
    for kind in _kinds(kinds):
        top, mid = norm_from_sv(s_top, kind), norm_from_sv(s_mid, kind)
        scale = max(1.0, top, mid)
        params = {"nu": nu, "margin": margin}
        out.append(make_case("falsify_heinz", "main", top + margin * scale, mid, tol, params, str(kind), scale))
    return out


def _pd_pair_witness(seed, dim, cond_cap, general_x=True) -> Witness:
    specs = {
        "A": GenSpec(dim, "PD", cond_cap, derive_substream(seed, 0)),
        "B": GenSpec(dim, "PD", cond_cap, derive_substream(seed, 1)),
    }
    if general_x:
        specs["X"] = GenSpec(dim, "GeneralComplex", cond_cap, derive_substream(seed, 2))
    return Witness({k: generate(v) for k, v in specs.items()}, seed, dim, {k: v.to_dict() for k, v in specs.items()})


def falsification_check(seed, dim, nu, kinds=None, max_trials=1000, margin=0.1, cond_cap=100.0, tol=DEFAULT_TOL):
    """Search up to ``max_trials`` random witnesses for a violation of the classical Heinz upper bound.

    Returns ``(cases, witness)`` for the first witness that violates it by
    ``margin * scale`` in every requested norm.  Raises :class:`NotFound`
    (with the best witness seen attached as ``.best``) otherwise.
    """
    best = None
    for i in range(max_trials):
        w = _pd_pair_witness(derive_substream(seed, 1000 + i), dim, cond_cap)
        cases = falsify_eval(w["A"], w["B"], w["X"], nu, kinds, margin, tol)
        if all(c.holds for c in cases):
            return cases, w
        worst = min(c.slack / c.scale for c in cases)
        if best is None or worst > best[0]:
            best = (worst, cases, w)
    err = NotFound(f"no witness violated the classical bound by {margin} within {max_trials} trials")
    err.best = best
    raise err


# -- registry -----------------------------------------------------------------

NU_IN = ((0.0, 1.0),)
NU_REVERSE = ((1.05, 3.0), (-2.0, -0.05))
NU_ABOVE_ONE = ((1.05, 3.0),)
# near nu = 0 or 1 the Heinz term barely exceeds AX + XB, so a 10% margin is out of reach
NU_FALSIFY = ((2.0, 3.0), (-2.0, -1.0))


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    statement: str
    hypotheses: str
    source: str
    nu_ranges: Optional[tuple]
    uses_norms: bool
    run: Callable
    sample: Callable

    def explain(self) -> str:
        lines = [
            f"{self.check_id}",
            f"  claim:      {self.statement}",
            f"  hypotheses: {self.hypotheses}",
            f"  source:     {self.source}",
        ]
        if self.nu_ranges:
            rng = " U ".join(f"[{lo:g}, {hi:g}]" for lo, hi in self.nu_ranges)
            lines.append(f"  default nu sampling: {rng}")
        return "\n".join(lines)


def sample_nu(rng: Xoshiro256, ranges: Sequence[tuple]) -> float:
    """Uniform draw from a union of intervals, weighted by length."""
    lengths = [hi - lo for lo, hi in ranges]
    total = sum(lengths)
    u = rng.uniform() * total
    for (lo, hi), length in zip(ranges, lengths):
        if u < length or (lo, hi) == ranges[-1]:
            return lo + min(u, length)
        u -= length
    raise AssertionError("unreachable")


@dataclass
class SampleContext:
    """Campaign knobs a sampler may consult."""

    cond_cap: float = 100.0
    nu_ranges: Optional[tuple] = None
    falsify_trials: int = 1000
    psd_fraction: float = 0.25
    kinds: Optional[list] = None


def _gen(specs: dict, seed: int, dim: int) -> Witness:
    mats = {}
    for name, spec in specs.items():
        mats[name] = generate(spec)
    return Witness(mats, seed, dim, {k: v.to_dict() for k, v in specs.items()})


def _psd_or_pd(rng, seed, dim, ctx, general_x=True) -> Witness:
    """PD pair, or with probability ``psd_fraction`` a singular PSD pair (dim >= 2)."""
    singular = dim >= 2 and rng.uniform() < ctx.psd_fraction
    kind = "PSD" if singular else "PD"
    specs = {
        "A": GenSpec(dim, kind, ctx.cond_cap, derive_substream(seed, 0)),
        "B": GenSpec(dim, kind, ctx.cond_cap, derive_substream(seed, 1)),
    }
    if general_x:
        specs["X"] = GenSpec(dim, "GeneralComplex", ctx.cond_cap, derive_substream(seed, 2))
    return _gen(specs, seed, dim)


def _param_rng(seed: int) -> Xoshiro256:
    return Xoshiro256(derive_substream(seed, 3))


def _sampler_nu(default_ranges, psd_ok=False, general_x=True):
    def sample(seed, dim, ctx: SampleContext):
        rng = _param_rng(seed)
        nu = sample_nu(rng, ctx.nu_ranges or default_ranges)
        if psd_ok:
            w = _psd_or_pd(rng, seed, dim, ctx, general_x)
        else:
            w = _pd_pair_witness(seed, dim, ctx.cond_cap, general_x)
        return w, {"nu": nu}

    return sample


def _sampler_st(psd_ok):
    def sample(seed, dim, ctx: SampleContext):
        rng = _param_rng(seed)
        s, t = rng.uniform(), rng.uniform()
        w = _psd_or_pd(rng, seed, dim, ctx, general_x=True) if psd_ok else _pd_pair_witness(seed, dim, ctx.cond_cap, False)
        return w, {"s": s, "t": t}

    return sample


def _sample_equality(seed, dim, ctx: SampleContext):
    """Half the trials get a constructed solution of ``AX = XB``, half a generic triple."""
    rng = _param_rng(seed)
    nu = sample_nu(rng, ctx.nu_ranges or NU_ABOVE_ONE)
    if rng.uniform() >= 0.5:
        return _pd_pair_witness(seed, dim, ctx.cond_cap), {"nu": nu}
    specs = {
        "A": GenSpec(dim, "PD", ctx.cond_cap, derive_substream(seed, 0)),
        "W": GenSpec(dim, "Unitary", ctx.cond_cap, derive_substream(seed, 1)),
    }
    w = _gen(specs, seed, dim)
    a, u = w.matrices.pop("A"), w.matrices.pop("W")
    b = u.conj().T @ a @ u
    b = 0.5 * (b + b.conj().T)
    c0, c1 = rng.complex_normal(), rng.complex_normal()
    # B = W*AW gives AW = WB, so X = W (c0 I + c1 B) satisfies AX = XB
    x = u @ (c0 * np.eye(dim) + c1 * b)
    w.matrices.update(A=a, B=b, X=x)
    w.gen["construction"] = "B = W*AW, X = W(c0 I + c1 B)"
    return w, {"nu": nu}


def _sample_sv_equality(seed, dim, ctx: SampleContext):
    rng = _param_rng(seed)
    nu = sample_nu(rng, ctx.nu_ranges or NU_ABOVE_ONE)
    if rng.uniform() < 0.5:
        spec = GenSpec(dim, "EqualPair", ctx.cond_cap, derive_substream(seed, 0))
        a, b = generate(spec)
        return Witness({"A": a, "B": b}, seed, dim, {"AB": spec.to_dict()}), {"nu": nu}
    return _pd_pair_witness(seed, dim, ctx.cond_cap, general_x=False), {"nu": nu}


def _sample_general(seed, dim, ctx: SampleContext):
    specs = {k: GenSpec(dim, "GeneralComplex", ctx.cond_cap, derive_substream(seed, i)) for i, k in enumerate("ABX")}
    return _gen(specs, seed, dim), {}


def _sample_cpr(seed, dim, ctx: SampleContext):
    specs = {
        "A": GenSpec(dim, "Hermitian", ctx.cond_cap, derive_substream(seed, 0)),
        "X": GenSpec(dim, "GeneralComplex", ctx.cond_cap, derive_substream(seed, 2)),
    }
    return _gen(specs, seed, dim), {}


def _sample_power_diff(seed, dim, ctx: SampleContext):
    rng = _param_rng(seed)
    specs = {
        "A": GenSpec(dim, "Hermitian", ctx.cond_cap, derive_substream(seed, 0)),
        "B": GenSpec(dim, "Hermitian", ctx.cond_cap, derive_substream(seed, 1)),
        "X": GenSpec(dim, "GeneralComplex", ctx.cond_cap, derive_substream(seed, 2)),
    }
    return _gen(specs, seed, dim), {"m": rng.integer(0, 1), "n": rng.integer(0, 2)}


def _sample_falsify(seed, dim, ctx: SampleContext):
    rng = _param_rng(seed)
    nu = sample_nu(rng, ctx.nu_ranges or NU_FALSIFY)
    try:
        _, w = falsification_check(seed, dim, nu, ctx.kinds, ctx.falsify_trials, cond_cap=ctx.cond_cap)
    except NotFound as err:
        w = err.best[2]
    return w, {"nu": nu}


CHECKS: dict[str, CheckSpec] = {}


def _register(spec: CheckSpec) -> None:
    CHECKS[spec.check_id] = spec


_register(CheckSpec(
    "heinz_double",
    "2|||A^(1/2) X B^(1/2)||| <= |||A^v X B^(1-v) + A^(1-v) X B^v||| <= |||AX + XB|||",
    "A, B positive semidefinite; X arbitrary; v in [0, 1]; every unitarily invariant norm",
    "Heinz double inequality (Bhatia-Davis form for unitarily invariant norms)",
    NU_IN, True,
    lambda w, p, kinds, tol: heinz_double_check(w["A"], w["B"], w["X"], p["nu"], kinds, tol),
    _sampler_nu(NU_IN, psd_ok=True),
))
_register(CheckSpec(
    "heinz_reverse",
    "|||AX + XB||| <= |||A^v X B^(1-v) + A^(1-v) X B^v|||",
    "A, B positive definite; X arbitrary; v outside [0, 1]; every unitarily invariant norm",
    "reverse of the Heinz upper bound for exponents outside [0, 1]",
    NU_REVERSE, True,
    lambda w, p, kinds, tol: heinz_reverse_check(w["A"], w["B"], w["X"], p["nu"], kinds, tol),
    _sampler_nu(NU_REVERSE),
))
_register(CheckSpec(
    "hs_refine",
    "||A^v X B^(1-v) + A^(1-v) X B^v||_2^2 + 2 r0 ||AX - XB||_2^2 <= ||AX + XB||_2^2, r0 = min{v, 1-v}",
    "A, B positive semidefinite; X arbitrary; v in [0, 1]",
    "Kittaneh-Manasrah refinement of the Heinz upper bound (Hilbert-Schmidt norm)",
    NU_IN, False,
    lambda w, p, kinds, tol: hs_refine_check(w["A"], w["B"], w["X"], p["nu"], tol),
    _sampler_nu(NU_IN, psd_ok=True),
))
_register(CheckSpec(
    "hs_reverse",
    "||AX + XB||_2^2 <= ||A^v X B^(1-v) + A^(1-v) X B^v||_2^2 + 2 r0 ||AX - XB||_2^2, r0 = max{v, 1-v}",
    "A, B positive semidefinite; X arbitrary; v in [0, 1]",
    "Kittaneh-Manasrah reverse refinement (Hilbert-Schmidt norm)",
    NU_IN, False,
    lambda w, p, kinds, tol: hs_reverse_check(w["A"], w["B"], w["X"], p["nu"], tol),
    _sampler_nu(NU_IN, psd_ok=True),
))
_register(CheckSpec(
    "hs_strong_reverse",
    "||AX + XB||_2^2 + 2(v-1) ||AX - XB||_2^2 <= ||A^v X B^(1-v) + A^(1-v) X B^v||_2^2",
    "A, B positive definite; X arbitrary; v > 1 (also valid for v < 1/2, reported as part low_nu)",
    "reverse Kittaneh-Manasrah refinement for v > 1, via the spectral decompositions of A and B",
    NU_ABOVE_ONE, False,
    lambda w, p, kinds, tol: hs_strong_reverse_check(w["A"], w["B"], w["X"], p["nu"], tol),
    _sampler_nu(NU_ABOVE_ONE),
))
_register(CheckSpec(
    "equality_case",
    "||AX + XB||_2 = ||A^v X B^(1-v) + A^(1-v) X B^v||_2  iff  AX = XB",
    "A, B positive definite; X arbitrary; v > 1",
    "equality case of the v > 1 Hilbert-Schmidt reverse inequality",
    NU_ABOVE_ONE, False,
    lambda w, p, kinds, tol: equality_case_check(w["A"], w["B"], w["X"], p["nu"], tol),
    _sample_equality,
))
_register(CheckSpec(
    "sv_equality",
    "s_j(A + B) = s_j(A^v B^(1-v) + A^(1-v) B^v) for all j  iff  A = B",
    "A, B positive definite; v > 1",
    "singular value equality case, from the Hilbert-Schmidt equality case with X = I",
    NU_ABOVE_ONE, False,
    lambda w, p, kinds, tol: sv_equality_check(w["A"], w["B"], p["nu"], tol),
    _sample_sv_equality,
))
_register(CheckSpec(
    "audenaert",
    "s_j(A^v B^(1-v) + A^(1-v) B^v) <= s_j(A + B) for every j",
    "A, B positive semidefinite; v in [0, 1]",
    "Audenaert singular value inequality for Heinz means",
    NU_IN, False,
    lambda w, p, kinds, tol: audenaert_sv_check(w["A"], w["B"], p["nu"], tol),
    _sampler_nu(NU_IN, psd_ok=True, general_x=False),
))
_register(CheckSpec(
    "mcintosh",
    "2|||A X B*||| <= |||A*A X + X B*B|||",
    "A, B, X arbitrary; every unitarily invariant norm",
    "McIntosh inequality",
    None, True,
    lambda w, p, kinds, tol: mcintosh_check(w["A"], w["B"], w["X"], kinds, tol),
    _sample_general,
))
_register(CheckSpec(
    "cpr",
    "2|||X||| <= |||A X A^-1 + A^-1 X A|||",
    "A Hermitian and invertible; X arbitrary; every unitarily invariant norm",
    "Corach-Porta-Recht inequality",
    None, True,
    lambda w, p, kinds, tol: cpr_check(w["A"], w["X"], kinds, tol),
    _sample_cpr,
))
_register(CheckSpec(
    "power_diff",
    "|||A^(2m) X + X B^(2m)||| <= |||A^(2m+n) X B^(-n) + A^(-n) X B^(2m+n)|||",
    "A, B Hermitian and invertible; X arbitrary; m, n nonnegative integers",
    "power-difference form equivalent to the Heinz upper bound",
    None, True,
    lambda w, p, kinds, tol: power_diff_check(w["A"], w["B"], w["X"], p["m"], p["n"], kinds, tol),
    _sample_power_diff,
))
_register(CheckSpec(
    "kaur",
    "|||A^v X B^(1-v) + A^(1-v) X B^v||| <= |||4 r1 A^(1/2) X B^(1/2) + (1 - 2 r1)(AX + XB)|||, "
    "r1 = min{v, |1/2 - v|, 1-v}",
    "A, B positive semidefinite; X arbitrary; v in [0, 1]",
    "Kaur et al. convexity refinement of the Heinz upper bound",
    NU_IN, True,
    lambda w, p, kinds, tol: kaur_refinement_check(w["A"], w["B"], w["X"], p["nu"], kinds, tol),
    _sampler_nu(NU_IN, psd_ok=True),
))
_register(CheckSpec(
    "aujla",
    "2|||A^(1/2) X B^(1/2)||| <= |||A^s X B^(1-t) + A^(1-s) X B^t||| <= max{|||AX + XB|||, |||AXB + X|||}",
    "A, B positive semidefinite; X arbitrary; s, t in [0, 1]",
    "Aujla two-parameter bounds (maximum attained at a vertex of the unit square)",
    None, True,
    lambda w, p, kinds, tol: aujla_bounds_check(w["A"], w["B"], w["X"], p["s"], p["t"], kinds, tol),
    _sampler_st(psd_ok=True),
))
_register(CheckSpec(
    "op_heinz_reverse",
    "(A + B)/2 <= (A #_(1-v) B + A #_v B)/2   (Loewner order)",
    "A, B positive definite; v outside [0, 1]",
    "reverse of the operator Heinz mean interpolation, via functional calculus of A^(-1/2) B A^(-1/2)",
    NU_REVERSE, False,
    lambda w, p, kinds, tol: op_heinz_reverse_check(w["A"], w["B"], p["nu"], tol),
    _sampler_nu(NU_REVERSE, general_x=False),
))
_register(CheckSpec(
    "nege",
    "A∇B + 2(v-1)(A∇B - A#B) <= H_(1-v)(A, B)   (Loewner order); equality iff A = B",
    "A, B positive definite; v > 1 (also valid for v < 1/2, reported as part low_nu)",
    "refinement of the operator Heinz mean reverse for v > 1",
    NU_ABOVE_ONE, False,
    lambda w, p, kinds, tol: nege_check(w["A"], w["B"], p["nu"], tol),
    _sampler_nu(NU_ABOVE_ONE, general_x=False),
))
_register(CheckSpec(
    "tensor_hadamard",
    "A (x) B^-1 + A^-1 (x) B <= A^v (x) B^-v + A^-v (x) B^v, and the same with the Hadamard product",
    "A, B positive definite; v >= 1",
    "tensor and Hadamard product reverses from a + 1/a <= a^v + a^-v",
    NU_ABOVE_ONE, False,
    lambda w, p, kinds, tol: tensor_hadamard_check(w["A"], w["B"], p["nu"], tol),
    _sampler_nu(NU_ABOVE_ONE, general_x=False),
))
_register(CheckSpec(
    "hadamard_heinz",
    "2|||A^(1/2) o B^(1/2)||| <= |||A^s o B^(1-t) + A^(1-s) o B^t||| <= max{|||(A + B) o I|||, |||A o B + I|||}",
    "A, B positive definite; s, t in [0, 1]; every unitarily invariant norm",
    "Hadamard-product Heinz double bound, from Loewner convexity of K(s, t) and Fan dominance",
    None, True,
    lambda w, p, kinds, tol: hadamard_heinz_bounds_check(w["A"], w["B"], p["s"], p["t"], kinds, tol),
    _sampler_st(psd_ok=False),
))
_register(CheckSpec(
    "falsify_heinz",
    "EXISTS witness with |||A^v X B^(1-v) + A^(1-v) X B^v||| >= |||AX + XB||| + margin * scale",
    "A, B positive definite; X arbitrary; v outside [0, 1]; margin 0.1",
    "shows the classical Heinz upper bound genuinely fails once v leaves [0, 1]",
    NU_FALSIFY, True,
    lambda w, p, kinds, tol: falsify_eval(w["A"], w["B"], w["X"], p["nu"], kinds, p.get("margin", 0.1), tol),
    _sample_falsify,
))

CHECK_IDS = tuple(CHECKS)


def get_check(check_id: str) -> CheckSpec:
    try:
        return CHECKS[check_id]
    except KeyError:
        raise UnknownCheck(f"unknown check {check_id!r}; known: {', '.join(CHECK_IDS)}") from None


def explain_check(check_id: str) -> str:
    return get_check(check_id).explain()


def evaluate(check_id: str, witness: Witness, params: dict, kinds: Optional[Iterable[NormKind]] = None, tol=DEFAULT_TOL):
    """Run a registered check on a witness."""
    spec = get_check(check_id)
    return spec.run(witness, params, list(kinds) if kinds is not None else None, tol)
