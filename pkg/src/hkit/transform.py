"""Length-reducing sequence transforms and their structural verifiers.

Two transforms live here: the real-line step t_j = -s_0 r_{j+2} s_0 built on
the reciprocal sequence, and the interval step that feeds the b-shift through
the reciprocal of the modified a-shift and shortens a moment sequence by one
while left-shifting its canonical moments. The verifier operations rebuild
the block Hankel matrices of a transformed sequence from explicit
resolvent/D-factor products and report relative residuals, rank matches, and
determinant predictions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from . import blockmat, seq as seqmod
from .classify import ClassMembershipError, IntervalParams, classify, interval_params
from .matcore import DEFAULT_TOL, ToleranceProfile, family_residuals, pinv, rel_residual
from .seq import MatrixSequence, MomentSequence

__all__ = [
    "TransformTrace",
    "IdentityReport",
    "hankel_transform",
    "hankel_transform_iter",
    "f_transform",
    "f_transform_iter",
    "verify_ft_representations",
    "verify_ldu_reductions",
    "shift_theorem_check",
]


def hankel_transform(s: MatrixSequence, tol: ToleranceProfile = DEFAULT_TOL) -> MatrixSequence:
    """Real-line elementary step: t_j = -s_0 r_{j+2} s_0 with r the reciprocal.

    Shortens by exactly two.
    """
    if s.kappa < 2:
        raise ValueError(f"hankel_transform needs kappa >= 2, got {s.kappa}")
    r = seqmod.reciprocal(s, tol)
    return MatrixSequence(np.stack([-s[0] @ r[j + 2] @ s[0] for j in range(s.kappa - 1)]))


def hankel_transform_iter(
    s: MatrixSequence, k: int, tol: ToleranceProfile = DEFAULT_TOL
) -> list[MatrixSequence]:
    """Iterates of the real-line step; stage j has kappa - 2j. Returns stages 0..k."""
    if not 0 <= 2 * k <= s.kappa:
        raise ValueError(f"need 0 <= 2k <= kappa, got k={k}, kappa={s.kappa}")
    stages = [s]
    for _ in range(k):
        stages.append(hankel_transform(stages[-1], tol))
    return stages


def f_transform(ms: MomentSequence, tol: ToleranceProfile = DEFAULT_TOL) -> MomentSequence:
    """Interval step: shortens the sequence by one, same interval.

    With a/b the interval shifts and g the (-inf, beta]-modification of a,
    forms x = b * reciprocal(g) (Cauchy product) and t_j = -a_0 s_0^+ x_j a_0.
    """
    if ms.kappa < 1:
        raise ValueError("f_transform needs kappa >= 1")
    a = seqmod.shift_a(ms)
    b = seqmod.shift_b(ms)
    g = seqmod.modified_b(ms.with_seq(a))
    x = seqmod.cauchy_product(b, seqmod.reciprocal(g, tol))
    head = a[0] @ pinv(ms.seq[0], tol)
    t = np.stack([-head @ x[j] @ a[0] for j in range(ms.kappa)])
    return ms.with_seq(MatrixSequence(t))


@dataclass(frozen=True)
class TransformTrace:
    """Stages 0..k of the iterated interval transform with cached parameters."""

    stages: tuple[MomentSequence, ...]
    params_per_stage: tuple[IntervalParams, ...]
    identity_residuals: dict[str, float]

    @property
    def depth(self) -> int:
        return len(self.stages) - 1


def f_transform_iter(
    ms: MomentSequence, k: int, tol: ToleranceProfile = DEFAULT_TOL
) -> TransformTrace:
    """Iterate the interval transform k times; stage j has kappa - j.

    Stage parameters are cached by value. Degeneracy handling rides on the
    mass law (stage-j mass equals delta^(j-1) d_j): a stage whose head falls
    below that scale's floor is the zero measure exactly, so it is flushed
    to exact zeros before transforming further (transforming bare rounding
    noise would amplify it arbitrarily), and the distance-zero floor for
    each stage's canonical moments is transported the same way.
    """
    if not 0 <= k <= ms.kappa:
        raise ValueError(f"need 0 <= k <= kappa, got k={k}, kappa={ms.kappa}")
    delta = ms.interval.delta
    base = interval_params(ms, tol)
    d_scale = max((float(np.linalg.norm(dj, 2)) for dj in base.d), default=0.0)
    stages = [ms]
    for j in range(1, k + 1):
        nxt = f_transform(stages[-1], tol)
        mass_floor = tol.psd_tol * delta ** (j - 1) * d_scale
        if float(np.linalg.norm(nxt.seq[0], 2)) <= mass_floor:
            nxt = nxt.with_seq(MatrixSequence(np.zeros_like(nxt.seq.items)))
        stages.append(nxt)
    params = [base] + [
        interval_params(stage, tol, d_zero_floor=tol.psd_tol * delta**j * d_scale)
        for j, stage in enumerate(stages[1:], start=1)
    ]
    return TransformTrace(tuple(stages), tuple(params), {})


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one structural identity check."""

    residual: float
    rank_lhs: int
    rank_rhs: int
    det_lhs: complex
    det_rhs: complex

    @property
    def rank_match(self) -> bool:
        return self.rank_lhs == self.rank_rhs

    @property
    def det_residual(self) -> float:
        scale = max(abs(self.det_lhs), abs(self.det_rhs))
        if scale == 0.0:
            return 0.0
        return abs(self.det_lhs - self.det_rhs) / scale


def _shared_rank(matrices: list[np.ndarray], tol: ToleranceProfile) -> list[int]:
    """Ranks under one cutoff taken from the largest singular value present."""
    svals = [np.linalg.svd(m, compute_uv=False) if m.size else np.zeros(1) for m in matrices]
    top = max((float(s[0]) for s in svals if s.size), default=0.0)
    if top == 0.0:
        return [0 for _ in matrices]
    cut = tol.rank_rel_tol * top
    return [int(np.count_nonzero(s > cut)) for s in svals]


def _report(
    lhs: np.ndarray,
    rhs: np.ndarray,
    rank_parts: list[np.ndarray],
    det_rhs: complex,
    tol: ToleranceProfile,
) -> IdentityReport:
    ranks = _shared_rank([lhs, *rank_parts], tol)
    return IdentityReport(
        residual=rel_residual(lhs, rhs, tol),
        rank_lhs=ranks[0],
        rank_rhs=sum(ranks[1:]),
        det_lhs=complex(np.linalg.det(lhs)),
        det_rhs=det_rhs,
    )


def verify_ft_representations(
    ms: MomentSequence, tol: ToleranceProfile = DEFAULT_TOL
) -> dict[str, IdentityReport]:
    """Rebuild the transformed sequence's Hankel matrices from explicit factors.

    For t the transform of an interval-class ms and every admissible block
    index n, checks the five representations (keys, with delta the interval
    length, R the resolvent factor at beta, D the unipotent factors):

    - ``H_t[n]``:  H_n(t) == R D2(a,b) diag(d_1, delta*DL(b) LL_n(b) DR(b)) D2'(a,b) R^*
    - ``LL_t[n]``: LL_n(t) == delta * R D2(a,b) DL(b) LL_n(b) DR(b) D2'(a,b) R^*
    - ``H_u[n]``:  H_n of the a-shift of t == delta * R DL(a) H_n(c) DR(a) R^*
    - ``H_v[n]``:  H_n of the b-shift of t == delta * D2(a,s) DL(s) LL_{n+1}(s) DR(s) D2'(a,s)
    - ``H_w[n]``:  H_n of the c-shift of t == delta * DL(a) LL_{n+1}(a) DR(a)

    Each report carries the relative residual, ranks of both sides under a
    shared singular-value cutoff, and both determinants.
    """
    if not classify(ms, tol).in_Fgg:
        raise ClassMembershipError("representation suite requires an interval-class moment sequence")
    if ms.kappa < 1:
        raise ValueError("representation suite needs kappa >= 1")
    kappa = ms.kappa
    q = ms.q
    delta = ms.interval.delta
    beta = ms.interval.beta

    s = ms.seq
    a = seqmod.shift_a(ms)
    b = seqmod.shift_b(ms)
    c = seqmod.shift_c(ms) if kappa >= 2 else None
    t_ms = f_transform(ms, tol)
    t = t_ms.seq
    d1 = interval_params(ms, tol).d[1]

    out: dict[str, IdentityReport] = {}

    for n in range(1, (kappa - 1) // 2 + 1):
        # needs s_0..s_{2n+1}
        ll_b = blockmat.schur_LL(b, n, tol)
        rb = blockmat.resolvent_R(q, n, beta).data
        inner = block_diag(
            d1,
            delta
            * blockmat.d_left(b, n - 1, tol).data
            @ ll_b
            @ blockmat.d_right(b, n - 1, tol).data,
        )
        rhs = (
            rb
            @ blockmat.d_left2(a, b, n, tol).data
            @ inner
            @ blockmat.d_right2(a, b, n, tol).data
            @ rb.conj().T
        )
        lhs = blockmat.hankel_H(t, n).data
        det_rhs = delta ** (n * q) * np.linalg.det(d1) * np.linalg.det(ll_b)
        out[f"H_t[{n}]"] = _report(lhs, rhs, [d1, ll_b], det_rhs, tol)

        rb1 = blockmat.resolvent_R(q, n - 1, beta).data
        rhs_ll = (
            delta
            * rb1
            @ blockmat.d_left2(a, b, n - 1, tol).data
            @ blockmat.d_left(b, n - 1, tol).data
            @ ll_b
            @ blockmat.d_right(b, n - 1, tol).data
            @ blockmat.d_right2(a, b, n - 1, tol).data
            @ rb1.conj().T
        )
        lhs_ll = blockmat.schur_LL(t, n, tol)
        out[f"LL_t[{n}]"] = _report(
            lhs_ll, rhs_ll, [ll_b], delta ** (n * q) * np.linalg.det(ll_b), tol
        )

    if kappa >= 2:
        u = seqmod.shift_a(t_ms)
        v = seqmod.shift_b(t_ms)
        for n in range((kappa - 2) // 2 + 1):
            # needs s_0..s_{2n+2}
            hc = blockmat.hankel_H(c, n).data
            rb = blockmat.resolvent_R(q, n, beta).data
            rhs_u = (
                delta
                * rb
                @ blockmat.d_left(a, n, tol).data
                @ hc
                @ blockmat.d_right(a, n, tol).data
                @ rb.conj().T
            )
            lhs_u = blockmat.hankel_H(u, n).data
            out[f"H_u[{n}]"] = _report(
                lhs_u, rhs_u, [hc], delta ** ((n + 1) * q) * np.linalg.det(hc), tol
            )

            ll_s = blockmat.schur_LL(s, n + 1, tol)
            rhs_v = (
                delta
                * blockmat.d_left2(a, s, n, tol).data
                @ blockmat.d_left(s, n, tol).data
                @ ll_s
                @ blockmat.d_right(s, n, tol).data
                @ blockmat.d_right2(a, s, n, tol).data
            )
            lhs_v = blockmat.hankel_H(v, n).data
            out[f"H_v[{n}]"] = _report(
                lhs_v, rhs_v, [ll_s], delta ** ((n + 1) * q) * np.linalg.det(ll_s), tol
            )

    if kappa >= 3:
        w = seqmod.shift_c(t_ms)
        for n in range((kappa - 3) // 2 + 1):
            # needs s_0..s_{2n+3}
            ll_a = blockmat.schur_LL(a, n + 1, tol)
            rhs_w = (
                delta
                * blockmat.d_left(a, n, tol).data
                @ ll_a
                @ blockmat.d_right(a, n, tol).data
            )
            lhs_w = blockmat.hankel_H(w, n).data
            out[f"H_w[{n}]"] = _report(
                lhs_w, rhs_w, [ll_a], delta ** ((n + 1) * q) * np.linalg.det(ll_a), tol
            )

    return out


def verify_ldu_reductions(
    ms: MomentSequence, tol: ToleranceProfile = DEFAULT_TOL
) -> dict[str, float]:
    """Compare block-LDU diagonals of the four Hankel families with transform heads.

    For an interval-class sequence the unipotent-factorization diagonal of
    each family is unique; it must consist of delta-scaled heads of the
    iterated transform:

    - ``H``:   (s_0, delta^-1 b_0 of stage 1, delta^-3 b_0 of stage 3, ...)
    - ``H_a``: (delta^-2j a_0 of stage 2j)
    - ``H_b``: (delta^-2j b_0 of stage 2j)
    - ``H_c``: (delta^-(2j+1) a_0 of stage 2j+1)

    Diagonals decay to exact zeros at the degeneracy boundary, so each
    family is compared under one shared scale; returns the max residual
    per family.
    """
    if not classify(ms, tol).in_Fgg:
        raise ClassMembershipError("LDU suite requires an interval-class moment sequence")
    if ms.kappa < 1:
        raise ValueError("LDU suite needs kappa >= 1")
    kappa = ms.kappa
    delta = ms.interval.delta
    trace = f_transform_iter(ms, kappa - 1, tol)

    def head(which: str, stage: int) -> np.ndarray:
        st = trace.stages[stage]
        return (seqmod.shift_a(st) if which == "a" else seqmod.shift_b(st))[0]

    out: dict[str, float] = {}

    n = kappa // 2
    diag = blockmat.sequential_schur_diagonal(blockmat.hankel_H(ms.seq, n).data, ms.q, tol)
    predicted = [ms.seq[0]] + [
        delta ** (-(2 * j - 1)) * head("b", 2 * j - 1) for j in range(1, n + 1)
    ]
    out["H"] = max(family_residuals(list(zip(diag, predicted)), tol))

    if kappa >= 1:
        m = (kappa - 1) // 2
        ha = blockmat.hankel_H(seqmod.shift_a(ms), m).data
        hb = blockmat.hankel_H(seqmod.shift_b(ms), m).data
        pred_a = [delta ** (-2 * j) * head("a", 2 * j) for j in range(m + 1)]
        pred_b = [delta ** (-2 * j) * head("b", 2 * j) for j in range(m + 1)]
        out["H_a"] = max(
            family_residuals(
                list(zip(blockmat.sequential_schur_diagonal(ha, ms.q, tol), pred_a)), tol
            )
        )
        out["H_b"] = max(
            family_residuals(
                list(zip(blockmat.sequential_schur_diagonal(hb, ms.q, tol), pred_b)), tol
            )
        )

    if kappa >= 2:
        m = (kappa - 2) // 2
        hc = blockmat.hankel_H(seqmod.shift_c(ms), m).data
        pred_c = [delta ** (-(2 * j + 1)) * head("a", 2 * j + 1) for j in range(m + 1)]
        out["H_c"] = max(
            family_residuals(
                list(zip(blockmat.sequential_schur_diagonal(hc, ms.q, tol), pred_c)), tol
            )
        )

    return out


def shift_theorem_check(
    ms: MomentSequence, k: int, tol: ToleranceProfile = DEFAULT_TOL
) -> dict[str, float]:
    """Verify the stage-k parameter laws of the iterated transform.

    Returns max relative residuals for the four laws:

    - ``f_params``: stage-k f-sequence equals (delta^(k-1) d_k, delta^k f_{2k+1}, ...)
    - ``e_params``: stage-k canonical moments equal (delta^(k-1) d_k, e_{k+1}, ...)
    - ``d_params``: stage-k distances equal delta^k d_{k+j}
    - ``d_from_heads``: d_j == delta^-(j-1) * stage-j head, j = 0..k

    Each law is a parameter family whose tail decays to exact zeros on
    degenerate inputs; residuals are scaled per family.
    """
    if not classify(ms, tol).in_Fgg:
        raise ClassMembershipError("shift theorems require an interval-class moment sequence")
    if not 0 <= k <= ms.kappa:
        raise ValueError(f"need 0 <= k <= kappa, got k={k}, kappa={ms.kappa}")
    delta = ms.interval.delta
    trace = f_transform_iter(ms, k, tol)
    base = trace.params_per_stage[0]
    stage = trace.params_per_stage[k]

    pairs_f = [(stage.f[0], delta ** (k - 1) * base.d[k])]
    for j in range(1, 2 * (ms.kappa - k) + 1):
        pairs_f.append((stage.f[j], delta**k * base.f[2 * k + j]))

    pairs_e = [(stage.e[0], delta ** (k - 1) * base.d[k])]
    for j in range(1, ms.kappa - k + 1):
        pairs_e.append((stage.e[j], base.e[k + j]))

    pairs_d = [
        (stage.d[j], delta**k * base.d[k + j]) for j in range(ms.kappa - k + 1)
    ]

    pairs_heads = [
        (base.d[j], delta ** (-(j - 1)) * trace.stages[j].seq[0]) for j in range(k + 1)
    ]

    # transported zero floors: stage-k parameters live at delta^k * base scale
    scale_d = max((float(np.linalg.norm(x, 2)) for x in base.d), default=0.0)
    scale_f = max((float(np.linalg.norm(x, 2)) for x in base.f), default=0.0)
    scale_e = max((float(np.linalg.norm(x, 2)) for x in base.e), default=0.0)
    floor_f = tol.eq_rel_tol * delta**k * max(scale_f, scale_d)
    floor_d = tol.eq_rel_tol * delta**k * scale_d
    floor_e = tol.eq_rel_tol * max(scale_e, delta ** (k - 1) * scale_d)

    return {
        "f_params": max(family_residuals(pairs_f, tol, zero_floor=floor_f)),
        "e_params": max(family_residuals(pairs_e, tol, zero_floor=floor_e)),
        "d_params": max(family_residuals(pairs_d, tol, zero_floor=floor_d)),
        "d_from_heads": max(family_residuals(pairs_heads, tol, zero_floor=tol.eq_rel_tol * scale_d)),
    }
