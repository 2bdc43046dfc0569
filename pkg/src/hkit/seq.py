"""Finite square-matrix sequences and their algebra.

Covers the interval shifts a/b/c, the length-preserving modified sequences,
the Cauchy product, the reciprocal sequence (forward recursion, dual
recursion, and the closed alternating-sum form over integer compositions),
and the first-term-dominance test. Sequences are immutable values; derived
sequences are fresh arrays, never views.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ._backend import kernels
from .matcore import DEFAULT_TOL, ToleranceProfile, matrices_close, pinv

__all__ = [
    "Interval",
    "MatrixSequence",
    "MomentSequence",
    "CLOSED_FORM_MAX",
    "shift_a",
    "shift_b",
    "shift_c",
    "modified_a",
    "modified_b",
    "modified_c",
    "cauchy_product",
    "reciprocal",
    "reciprocal_dual",
    "reciprocal_closed",
    "is_first_term_dominated",
]

#: Length cap for the closed-form reciprocal: compositions of j number 2^(j-1).
CLOSED_FORM_MAX = 14


@dataclass(frozen=True)
class Interval:
    """Compact interval [alpha, beta] with alpha < beta."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError("interval endpoints must be finite")
        if not self.alpha < self.beta:
            raise ValueError(f"need alpha < beta, got [{self.alpha}, {self.beta}]")

    @property
    def delta(self) -> float:
        return self.beta - self.alpha

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.alpha - slack <= x <= self.beta + slack


@dataclass(frozen=True)
class MatrixSequence:
    """Finite sequence of square complex matrices, indices 0..kappa.

    Stores a read-only stacked array of shape (kappa+1, q, q).
    """

    items: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(np.asarray(self.items, dtype=np.complex128))
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1, 1)
        if arr.ndim != 3 or arr.shape[0] == 0 or arr.shape[1] != arr.shape[2]:
            raise ValueError(f"expected a nonempty stack of square matrices, got shape {arr.shape}")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("sequence contains NaN/Inf entries")
        arr.setflags(write=False)
        object.__setattr__(self, "items", arr)

    @classmethod
    def from_matrices(cls, matrices) -> "MatrixSequence":
        return cls(np.stack([np.atleast_2d(np.asarray(m, dtype=np.complex128)) for m in matrices]))

    @property
    def q(self) -> int:
        return self.items.shape[1]

    @property
    def kappa(self) -> int:
        return self.items.shape[0] - 1

    def __len__(self) -> int:
        return self.items.shape[0]

    def __getitem__(self, j: int) -> np.ndarray:
        return self.items[j]

    def __iter__(self):
        return iter(self.items)

    def truncated(self, kappa: int) -> "MatrixSequence":
        if not 0 <= kappa <= self.kappa:
            raise ValueError(f"cannot truncate length-{len(self)} sequence to kappa={kappa}")
        return MatrixSequence(self.items[: kappa + 1])

    def conj_elementwise(self) -> "MatrixSequence":
        return MatrixSequence(np.conj(np.transpose(self.items, (0, 2, 1))))

    def scaled(self, factor: complex) -> "MatrixSequence":
        return MatrixSequence(self.items * factor)

    def appended(self, matrix) -> "MatrixSequence":
        m = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
        if m.shape != (self.q, self.q):
            raise ValueError(f"appended block must be {self.q}x{self.q}, got {m.shape}")
        return MatrixSequence(np.concatenate([self.items, m[np.newaxis]], axis=0))


@dataclass(frozen=True)
class MomentSequence:
    """A matrix sequence paired with its interval [alpha, beta]."""

    interval: Interval
    seq: MatrixSequence

    @classmethod
    def create(cls, alpha: float, beta: float, matrices) -> "MomentSequence":
        return cls(Interval(alpha, beta), MatrixSequence.from_matrices(matrices))

    @property
    def q(self) -> int:
        return self.seq.q

    @property
    def kappa(self) -> int:
        return self.seq.kappa

    def with_seq(self, seq: MatrixSequence) -> "MomentSequence":
        return MomentSequence(self.interval, seq)


def _require_kappa(ms: MomentSequence, minimum: int, op: str) -> None:
    if ms.kappa < minimum:
        raise ValueError(f"{op} needs kappa >= {minimum}, got kappa={ms.kappa}")


def shift_a(ms: MomentSequence) -> MatrixSequence:
    """a_j = -alpha*s_j + s_{j+1}, indices 0..kappa-1."""
    _require_kappa(ms, 1, "shift_a")
    s = ms.seq.items
    return MatrixSequence(-ms.interval.alpha * s[:-1] + s[1:])


def shift_b(ms: MomentSequence) -> MatrixSequence:
    """b_j = beta*s_j - s_{j+1}, indices 0..kappa-1."""
    _require_kappa(ms, 1, "shift_b")
    s = ms.seq.items
    return MatrixSequence(ms.interval.beta * s[:-1] - s[1:])


def shift_c(ms: MomentSequence) -> MatrixSequence:
    """c_j = -alpha*beta*s_j + (alpha+beta)*s_{j+1} - s_{j+2}, indices 0..kappa-2."""
    _require_kappa(ms, 2, "shift_c")
    alpha, beta = ms.interval.alpha, ms.interval.beta
    s = ms.seq.items
    return MatrixSequence(-alpha * beta * s[:-2] + (alpha + beta) * s[1:-1] - s[2:])


def modified_a(ms: MomentSequence) -> MatrixSequence:
    """Length-preserving [alpha, inf) modification: (s_0, a_0, ..., a_{kappa-1})."""
    s = ms.seq.items
    if ms.kappa == 0:
        return MatrixSequence(s.copy())
    a = shift_a(ms).items
    return MatrixSequence(np.concatenate([s[:1], a], axis=0))


def modified_b(ms: MomentSequence) -> MatrixSequence:
    """Length-preserving (-inf, beta] modification: (-s_0, b_0, ..., b_{kappa-1})."""
    s = ms.seq.items
    if ms.kappa == 0:
        return MatrixSequence(-s.copy())
    b = shift_b(ms).items
    return MatrixSequence(np.concatenate([-s[:1], b], axis=0))


def modified_c(ms: MomentSequence) -> MatrixSequence:
    """Length-preserving [alpha, beta] modification.

    (-s_0, (alpha+beta)s_0 - s_1, c_0, ..., c_{kappa-2}); for kappa = 0 only
    the head -s_0 exists.
    """
    alpha, beta = ms.interval.alpha, ms.interval.beta
    s = ms.seq.items
    if ms.kappa == 0:
        return MatrixSequence(-s.copy())
    head = np.stack([-s[0], (alpha + beta) * s[0] - s[1]])
    if ms.kappa == 1:
        return MatrixSequence(head)
    return MatrixSequence(np.concatenate([head, shift_c(ms).items], axis=0))


def cauchy_product(s: MatrixSequence, t: MatrixSequence) -> MatrixSequence:
    """Convolution (s*t)_j = sum_{l<=j} s_l t_{j-l}, truncated to the shorter input."""
    if s.q != t.q:
        raise ValueError(f"block size mismatch {s.q} vs {t.q}")
    return MatrixSequence(kernels.cauchy_product(s.items, t.items))


def reciprocal(s: MatrixSequence, tol: ToleranceProfile = DEFAULT_TOL) -> MatrixSequence:
    """Reciprocal sequence by the forward recursion.

    r_0 = s_0^+ and r_j = -s_0^+ sum_{l<j} s_{j-l} r_l.
    """
    return MatrixSequence(kernels.reciprocal_forward(s.items, pinv(s[0], tol)))


def reciprocal_dual(s: MatrixSequence, tol: ToleranceProfile = DEFAULT_TOL) -> MatrixSequence:
    """Reciprocal sequence by the dual recursion r_j = -(sum_{l>=1} r_{j-l} s_l) s_0^+."""
    return MatrixSequence(kernels.reciprocal_dual(s.items, pinv(s[0], tol)))


def _compositions(j: int):
    """Ordered tuples of positive integers summing to j (2^(j-1) of them)."""
    for cuts in range(j):
        for positions in combinations(range(1, j), cuts):
            bounds = (0, *positions, j)
            yield tuple(bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1))


def reciprocal_closed(s: MatrixSequence, tol: ToleranceProfile = DEFAULT_TOL) -> MatrixSequence:
    """Reciprocal sequence by the closed alternating sum over compositions.

    t_j = sum_{l=1..j} (-1)^l sum_{k_1+...+k_l=j} s_0^+ s_{k_1} s_0^+ ... s_{k_l} s_0^+.
    Exponential in kappa; capped at CLOSED_FORM_MAX terms (oracle use only).
    """
    if s.kappa + 1 > CLOSED_FORM_MAX:
        raise ValueError(
            f"closed-form reciprocal capped at {CLOSED_FORM_MAX} terms, got {s.kappa + 1}"
        )
    s0p = pinv(s[0], tol)
    out = np.zeros_like(s.items)
    out[0] = s0p
    for j in range(1, len(s)):
        acc = np.zeros((s.q, s.q), dtype=np.complex128)
        for comp in _compositions(j):
            term = s0p
            for k in comp:
                term = term @ s[k] @ s0p
            acc += (-1) ** len(comp) * term
        out[j] = acc
    return MatrixSequence(out)


def is_first_term_dominated(s: MatrixSequence, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """True iff ran(s_j) is within ran(s_0) and ker(s_0) within ker(s_j) for all j.

    Tested via s_0 s_0^+ s_j == s_j and s_j s_0^+ s_0 == s_j.
    """
    s0p = pinv(s[0], tol)
    left = s[0] @ s0p
    right = s0p @ s[0]
    return all(
        matrices_close(left @ sj, sj, tol) and matrices_close(sj @ right, sj, tol) for sj in s
    )
