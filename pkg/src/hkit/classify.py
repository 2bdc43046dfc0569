"""Sequence-class membership tests and the full interval-parameter extraction.

The classes tested are the moment-sequence cones: Hankel-nonnegative (real
line), the two half-line variants, and the interval class characterizing
Hausdorff moment sequences (PSD-ness of H_n and H_c,n-1 for even length, of
H_a,n and H_b,n for odd length). Parameter extraction produces the one-step
extension endpoints u_j/o_j, midpoints, the distance sequence d_j, both
Schur-complement families, the interleaved f-parameters, and the canonical
moments e_j.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import blockmat, seq
from .matcore import (
    DEFAULT_TOL,
    ToleranceProfile,
    is_psd,
    matrices_close,
    min_eigenvalue,
    ortho_projector,
    pinv,
    psd_pinv_sqrt,
    psd_sqrt,
    rel_residual,
)
from .seq import MatrixSequence, MomentSequence

__all__ = [
    "ClassMembershipError",
    "ClassReport",
    "IntervalParams",
    "classify",
    "extension_interval",
    "interval_params",
    "h_params",
    "in_E_class",
    "is_completely_degenerate",
    "is_central",
]


class ClassMembershipError(ValueError):
    """An operation's sequence-class precondition is violated."""


@dataclass(frozen=True)
class ClassReport:
    """Membership booleans plus the (matrix name, min eigenvalue) witnesses."""

    in_Hgg: bool
    in_Kgg: bool
    in_Lgg: bool
    in_Fgg: bool
    in_Fg: bool
    witnesses: dict[str, list[tuple[str, float]]]


@dataclass(frozen=True)
class IntervalParams:
    """Derived parameter sequences of a moment sequence on [alpha, beta].

    u/o: one-step extension endpoints, indices 0..kappa.
    m: midpoints (u+o)/2.  d: distances o-u.
    lower_sc: lower Schur complements A_j, indices 0..kappa.
    upper_sc: upper Schur complements B_j, stored for j = 1..kappa (entry j-1);
        B_0 is undefined and `B(0)` raises.
    f: interleaved interval parameters, indices 0..2*kappa.
    e: canonical moments, indices 0..kappa.
    e_reliable: False when the input was not in the interval class and the
        canonical moments are only formal.
    degenerate_tail: indices j where d_{j-1} vanished and e_j = 0 by convention.
    """

    u: MatrixSequence
    o: MatrixSequence
    m: MatrixSequence
    d: MatrixSequence
    lower_sc: MatrixSequence
    upper_sc: Optional[MatrixSequence]
    f: MatrixSequence
    e: MatrixSequence
    e_reliable: bool
    degenerate_tail: tuple[int, ...]

    def A(self, j: int) -> np.ndarray:
        return self.lower_sc[j]

    def B(self, j: int) -> np.ndarray:
        if j < 1:
            raise IndexError("upper Schur complements start at index 1")
        if self.upper_sc is None:
            raise IndexError("sequence too short for upper Schur complements")
        return self.upper_sc[j - 1]


def _psd_witness(m: np.ndarray, tol: ToleranceProfile) -> tuple[float, bool, bool]:
    """(min eigenvalue, psd within tolerance, strictly positive beyond tolerance)."""
    scale = max(float(np.linalg.norm(m, 2)) if m.size else 0.0, 1.0)
    lo = min_eigenvalue(0.5 * (m + m.conj().T), tol)
    return lo, lo >= -tol.psd_tol * scale, lo > tol.psd_tol * scale


def classify(ms: MomentSequence, tol: ToleranceProfile = DEFAULT_TOL) -> ClassReport:
    """Class membership of the sequence on its interval.

    PSD-ness is evaluated on the exact block Hankel matrices the class
    definitions prescribe: for even kappa the pair (H_n, H_c,n-1), for odd
    kappa the pair (H_a,n, H_b,n); the half-line classes pair H_n with
    H_a resp. H_b of adjusted index, and the line class uses H_n alone.
    """
    s = ms.seq
    kappa = s.kappa
    half = kappa // 2
    a = seq.shift_a(ms) if kappa >= 1 else None
    b = seq.shift_b(ms) if kappa >= 1 else None
    c = seq.shift_c(ms) if kappa >= 2 else None

    tests: dict[str, list[tuple[str, np.ndarray]]] = {"Hgg": [("H", blockmat.hankel_H(s, half).data)]}
    if kappa % 2 == 0:
        n = half
        tests["Kgg"] = [("H", blockmat.hankel_H(s, n).data)]
        tests["Lgg"] = [("H", blockmat.hankel_H(s, n).data)]
        tests["Fgg"] = [("H", blockmat.hankel_H(s, n).data)]
        if n >= 1:
            tests["Kgg"].append(("H_a", blockmat.hankel_H(a, n - 1).data))
            tests["Lgg"].append(("H_b", blockmat.hankel_H(b, n - 1).data))
            tests["Fgg"].append(("H_c", blockmat.hankel_H(c, n - 1).data))
    else:
        n = half
        tests["Kgg"] = [("H", blockmat.hankel_H(s, n).data), ("H_a", blockmat.hankel_H(a, n).data)]
        tests["Lgg"] = [("H", blockmat.hankel_H(s, n).data), ("H_b", blockmat.hankel_H(b, n).data)]
        tests["Fgg"] = [("H_a", blockmat.hankel_H(a, n).data), ("H_b", blockmat.hankel_H(b, n).data)]

    witnesses: dict[str, list[tuple[str, float]]] = {}
    verdict: dict[str, bool] = {}
    strict: dict[str, bool] = {}
    for cls, mats in tests.items():
        entries = []
        ok = True
        pd = True
        for name, mat in mats:
            lo, psd, pos = _psd_witness(mat, tol)
            entries.append((name, lo))
            ok &= psd
            pd &= pos
        witnesses[cls] = entries
        verdict[cls] = ok
        strict[cls] = pd

    return ClassReport(
        in_Hgg=verdict["Hgg"],
        in_Kgg=verdict["Kgg"],
        in_Lgg=verdict["Lgg"],
        in_Fgg=verdict["Fgg"],
        in_Fg=verdict["Fgg"] and strict["Fgg"],
        witnesses=witnesses,
    )


def _theta(x: MatrixSequence | None, k: int, tol: ToleranceProfile) -> np.ndarray | float:
    """Theta_k of a shifted family; exactly zero for a vanished family.

    A family that is zero in exact arithmetic survives only as rounding
    noise, and z * pinv(H) * y over pure noise is arbitrary garbage, so a
    family below the floor contributes nothing (x is None encodes that).
    """
    if k < 1:
        return 0.0
    if x is None:
        return 0.0
    return blockmat.extremal_ingredients(x, k, tol).theta


def _shift_or_none(
    x: MatrixSequence | None, floor: float
) -> MatrixSequence | None:
    if x is None:
        return None
    if max(float(np.linalg.norm(m, 2)) for m in x) <= floor:
        return None
    return x


def _endpoints_last(
    ms: MomentSequence, tol: ToleranceProfile, zero_floor: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """Extension-interval endpoints (u_kappa, o_kappa) at the final index only."""
    alpha, beta = ms.interval.alpha, ms.interval.beta
    s = ms.seq
    j = ms.kappa
    scale = max((float(np.linalg.norm(m, 2)) for m in s), default=0.0)
    coeff = (1.0 + abs(alpha)) * (1.0 + abs(beta))
    floor = max(tol.psd_tol * coeff * scale, zero_floor)
    if j % 2 == 0:
        k = j // 2
        a = _shift_or_none(seq.shift_a(ms) if j >= 1 else None, floor)
        b = _shift_or_none(seq.shift_b(ms) if j >= 1 else None, floor)
        return alpha * s[j] + _theta(a, k, tol), beta * s[j] - _theta(b, k, tol)
    k = (j - 1) // 2
    c = _shift_or_none(seq.shift_c(ms) if j >= 2 else None, floor)
    s_fam = _shift_or_none(s, floor)
    zero = np.zeros((ms.q, ms.q), dtype=np.complex128)
    u = zero + _theta(s_fam, k + 1, tol)
    o = -alpha * beta * s[j - 1] + (alpha + beta) * s[j] - _theta(c, k, tol)
    return u, o


def _endpoints(
    ms: MomentSequence, tol: ToleranceProfile, zero_floor: float = 0.0
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    alpha, beta = ms.interval.alpha, ms.interval.beta
    s = ms.seq
    scale = max((float(np.linalg.norm(m, 2)) for m in s), default=0.0)
    coeff = (1.0 + abs(alpha)) * (1.0 + abs(beta))
    floor = max(tol.psd_tol * coeff * scale, zero_floor)
    a = _shift_or_none(seq.shift_a(ms) if ms.kappa >= 1 else None, floor)
    b = _shift_or_none(seq.shift_b(ms) if ms.kappa >= 1 else None, floor)
    c = _shift_or_none(seq.shift_c(ms) if ms.kappa >= 2 else None, floor)
    s_fam = _shift_or_none(s, floor)
    zero = np.zeros((ms.q, ms.q), dtype=np.complex128)
    u: list[np.ndarray] = []
    o: list[np.ndarray] = []
    for j in range(ms.kappa + 1):
        if j % 2 == 0:
            k = j // 2
            u.append(alpha * s[j] + _theta(a, k, tol))
            o.append(beta * s[j] - _theta(b, k, tol))
        else:
            k = (j - 1) // 2
            u.append(zero + _theta(s_fam, k + 1, tol))
            o.append(-alpha * beta * s[j - 1] + (alpha + beta) * s[j] - _theta(c, k, tol))
    return u, o


def extension_interval(
    ms: MomentSequence, tol: ToleranceProfile = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints (u_kappa, o_kappa) of the one-step extension interval.

    Any Hermitian X with u_kappa <= X <= o_kappa extends the sequence within
    the interval class. Raises when the input is not in the class.
    """
    if not classify(ms, tol).in_Fgg:
        raise ClassMembershipError("extension interval requires an interval-class moment sequence")
    u, o = _endpoints(ms, tol)
    return u[-1], o[-1]


def interval_params(
    ms: MomentSequence, tol: ToleranceProfile = DEFAULT_TOL, d_zero_floor: float = 0.0
) -> IntervalParams:
    """Full parameter record (u, o, m, d, A, B, f, e) of a moment sequence.

    Everything except the canonical moments is well defined for arbitrary
    input; the e-sequence is flagged unreliable when the input is outside
    the interval class. Indices j with vanishing d_{j-1} take e_j = 0;
    ``d_zero_floor`` lets callers that know the sequence's provenance (e.g.
    transform iteration) widen what counts as a vanished distance.
    """
    s = ms.seq
    kappa = ms.kappa

    # Lower/upper Schur complements via one-pivot-at-a-time peeling of the
    # four Hankel families; equivalent to the endpoint-distance definition
    # but backward stable where the distances decay toward degeneracy.
    lower: list[np.ndarray] = [s[0].copy()]
    upper: list[np.ndarray] = []
    if kappa >= 1:
        peel_s = blockmat.sequential_schur_diagonal(
            blockmat.hankel_H(s, kappa // 2).data, s.q, tol
        )
        peel_a = blockmat.sequential_schur_diagonal(
            blockmat.hankel_H(seq.shift_a(ms), (kappa - 1) // 2).data, s.q, tol
        )
        peel_b = blockmat.sequential_schur_diagonal(
            blockmat.hankel_H(seq.shift_b(ms), (kappa - 1) // 2).data, s.q, tol
        )
        peel_c = (
            blockmat.sequential_schur_diagonal(
                blockmat.hankel_H(seq.shift_c(ms), (kappa - 2) // 2).data, s.q, tol
            )
            if kappa >= 2
            else []
        )
        for j in range(1, kappa + 1):
            lower.append(peel_a[(j - 1) // 2] if j % 2 == 1 else peel_s[j // 2])
            upper.append(peel_b[(j - 1) // 2] if j % 2 == 1 else peel_c[(j - 2) // 2])

    u = [s[j + 1] - lower[j + 1] for j in range(kappa)]
    o = [s[j + 1] + upper[j] for j in range(kappa)]
    u_last, o_last = _endpoints_last(ms, tol, zero_floor=d_zero_floor)
    u.append(u_last)
    o.append(o_last)
    mid = [0.5 * (u[j] + o[j]) for j in range(kappa + 1)]
    d = [o[j] - u[j] for j in range(kappa + 1)]

    f: list[np.ndarray] = [s[0].copy()]
    for m in range(1, kappa + 1):
        if m % 2 == 1:
            f.extend([lower[m], upper[m - 1]])
        else:
            f.extend([upper[m - 1], lower[m]])

    # below sqrt(eps) relative to the distance scale, the ratio defining e_j
    # cannot be resolved in double precision; the zero convention applies
    d_scale = max((float(np.linalg.norm(dj, 2)) for dj in d), default=0.0)
    e_rel_floor = max(tol.psd_tol, float(np.sqrt(np.finfo(np.float64).eps)))
    floor = max(e_rel_floor * max(d_scale, 1e-300), d_zero_floor)
    e: list[np.ndarray] = [s[0].copy()]
    reliable = True
    tail: list[int] = []
    for j in range(1, kappa + 1):
        if float(np.linalg.norm(d[j - 1], 2)) <= floor:
            e.append(np.zeros_like(s[0]))
            tail.append(j)
            continue
        try:
            root_pinv = psd_pinv_sqrt(d[j - 1], tol, eig_floor=floor)
        except ValueError:
            reliable = False
            e.append(np.zeros_like(s[0]))
            continue
        e.append(root_pinv @ f[2 * j] @ root_pinv)

    return IntervalParams(
        u=MatrixSequence(np.stack(u)),
        o=MatrixSequence(np.stack(o)),
        m=MatrixSequence(np.stack(mid)),
        d=MatrixSequence(np.stack(d)),
        lower_sc=MatrixSequence(np.stack(lower)),
        upper_sc=MatrixSequence(np.stack(upper)) if upper else None,
        f=MatrixSequence(np.stack(f)),
        e=MatrixSequence(np.stack(e)),
        e_reliable=reliable,
        degenerate_tail=tuple(tail),
    )


def h_params(s: MatrixSequence, tol: ToleranceProfile = DEFAULT_TOL) -> MatrixSequence:
    """Hamburger-side parameters: h_{2k} = s_{2k} - Theta_k, h_{2k+1} = s_{2k+1} - Lambda_k."""
    out: list[np.ndarray] = []
    for j in range(s.kappa + 1):
        k = j // 2
        ing = blockmat.extremal_ingredients(s, k, tol)
        if j % 2 == 0:
            out.append(s[j] - ing.theta)
        else:
            out.append(s[j] - ing.lambda_)
    return MatrixSequence(np.stack(out))


def in_E_class(
    e: MatrixSequence, eta: float, tol: ToleranceProfile = DEFAULT_TOL
) -> bool:
    """Membership in the admissible canonical-moment set for scale eta.

    Rebuilds the companion distance sequence d_0 = eta*e_0,
    d_k = eta d_{k-1}^{1/2} e_k^{1/2} (P_{ran d_{k-1}} - e_k) e_k^{1/2} d_{k-1}^{1/2}
    and checks 0 <= e_k <= P_{ran d_{k-1}} throughout.
    """
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    if not is_psd(e[0], tol):
        return False
    d_prev = eta * e[0]
    for k in range(1, e.kappa + 1):
        if not is_psd(e[k], tol):
            return False
        proj = ortho_projector(d_prev, tol)
        if not is_psd(proj - e[k], tol):
            return False
        try:
            d_root = psd_sqrt(d_prev, tol)
            e_root = psd_sqrt(e[k], tol)
        except ValueError:
            return False
        d_prev = eta * d_root @ e_root @ (proj - e[k]) @ e_root @ d_root
    return True


def _degenerate_floor(params: IntervalParams, tol: ToleranceProfile) -> float:
    scale = max(float(np.linalg.norm(params.d[0], 2)), 1e-300)
    return tol.eq_rel_tol * scale


def is_completely_degenerate(
    ms: MomentSequence, k: int, tol: ToleranceProfile = DEFAULT_TOL
) -> bool:
    """True iff the distance d_k vanishes (order-k complete degeneracy)."""
    if not 0 <= k <= ms.kappa:
        raise IndexError(f"k={k} out of range 0..{ms.kappa}")
    params = interval_params(ms, tol)
    return float(np.linalg.norm(params.d[k], 2)) <= _degenerate_floor(params, tol)


def is_central(ms: MomentSequence, k: int, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """True iff s_j equals the midpoint m_{j-1} for all j = k..kappa.

    The canonical-moment criterion e_j = (1/2) P_{ran d_{j-1}} is evaluated
    as a consistency check; disagreement emits a warning, not an error.
    """
    if not 1 <= k <= ms.kappa:
        raise IndexError(f"k={k} out of range 1..{ms.kappa}")
    params = interval_params(ms, tol)
    primary = all(
        matrices_close(ms.seq[j], params.m[j - 1], tol) for j in range(k, ms.kappa + 1)
    )
    if classify(ms, tol).in_Fgg:
        floor = _degenerate_floor(params, tol)
        secondary = True
        for j in range(k, ms.kappa + 1):
            if float(np.linalg.norm(params.d[j - 1], 2)) <= floor:
                secondary = secondary and float(np.linalg.norm(params.e[j], 2)) <= tol.eq_rel_tol
                continue
            proj = ortho_projector(params.d[j - 1], tol)
            secondary = secondary and rel_residual(params.e[j], 0.5 * proj, tol) <= tol.eq_rel_tol
        if secondary != primary:
            warnings.warn(
                f"centrality checks disagree at k={k}: midpoint test {primary}, "
                f"canonical-moment test {secondary}",
                stacklevel=2,
            )
    return primary
