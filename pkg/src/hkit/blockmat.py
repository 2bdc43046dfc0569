"""Block Toeplitz/Hankel constructors and the Schur-complement layer.

Builds the structured matrices the identity suites manipulate: triangular
block Toeplitz matrices of a sequence, the three block Hankel variants, the
resolvent-type polynomial R_{q,n}(z) = (I - z T_{q,n})^{-1}, regularized
unipotent triangular D-factors (one- and two-sequence), sequential Schur
complements, and the extremal ingredients feeding endpoint/h-parameter
formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .matcore import DEFAULT_TOL, ToleranceProfile, pinv, rel_residual
from .seq import MatrixSequence, reciprocal

__all__ = [
    "BlockMatrix",
    "sdiag",
    "block_col",
    "block_row",
    "toeplitz_lower",
    "toeplitz_upper",
    "hankel_H",
    "hankel_K",
    "hankel_G",
    "resolvent_R",
    "d_left",
    "d_right",
    "d_left2",
    "d_right2",
    "schur_L",
    "schur_LL",
    "sequential_schur_diagonal",
    "ExtremalIngredients",
    "extremal_ingredients",
    "verify_reciprocal_identities",
]


@dataclass(frozen=True)
class BlockMatrix:
    """Dense matrix with block-grid metadata; data shape (rows*q, cols*q)."""

    block_rows: int
    block_cols: int
    block_size: tuple[int, int]
    data: np.ndarray

    def __post_init__(self) -> None:
        p, q = self.block_size
        expected = (self.block_rows * p, self.block_cols * q)
        if self.data.shape != expected:
            raise ValueError(f"data shape {self.data.shape} inconsistent with grid {expected}")

    def block(self, j: int, k: int) -> np.ndarray:
        p, q = self.block_size
        return self.data[j * p : (j + 1) * p, k * q : (k + 1) * q]


def _grid(s: MatrixSequence, m: int, fill) -> np.ndarray:
    q = s.q
    data = np.zeros(((m + 1) * q, (m + 1) * q), dtype=np.complex128)
    for j in range(m + 1):
        for k in range(m + 1):
            blk = fill(j, k)
            if blk is not None:
                data[j * q : (j + 1) * q, k * q : (k + 1) * q] = blk
    return data


def sdiag(a: np.ndarray, m: int) -> np.ndarray:
    """Block diagonal of m+1 copies of ``a``."""
    return np.kron(np.eye(m + 1), a)


def block_col(s: MatrixSequence, lo: int, hi: int) -> np.ndarray:
    """Stacked column col(s_lo, ..., s_hi), shape ((hi-lo+1)q, q)."""
    if not 0 <= lo <= hi <= s.kappa:
        raise ValueError(f"column range [{lo},{hi}] out of bounds for kappa={s.kappa}")
    return s.items[lo : hi + 1].reshape((hi - lo + 1) * s.q, s.q)


def block_row(s: MatrixSequence, lo: int, hi: int) -> np.ndarray:
    """Stacked row (s_lo, ..., s_hi), shape (q, (hi-lo+1)q)."""
    if not 0 <= lo <= hi <= s.kappa:
        raise ValueError(f"row range [{lo},{hi}] out of bounds for kappa={s.kappa}")
    return np.hstack(list(s.items[lo : hi + 1]))


def toeplitz_lower(s: MatrixSequence, m: int) -> BlockMatrix:
    """Lower triangular block Toeplitz with block (j,k) = s_{j-k}."""
    if m > s.kappa:
        raise ValueError(f"m={m} exceeds kappa={s.kappa}")
    data = _grid(s, m, lambda j, k: s[j - k] if j >= k else None)
    return BlockMatrix(m + 1, m + 1, (s.q, s.q), data)


def toeplitz_upper(s: MatrixSequence, m: int) -> BlockMatrix:
    """Upper triangular block Toeplitz with block (j,k) = s_{k-j}."""
    if m > s.kappa:
        raise ValueError(f"m={m} exceeds kappa={s.kappa}")
    data = _grid(s, m, lambda j, k: s[k - j] if k >= j else None)
    return BlockMatrix(m + 1, m + 1, (s.q, s.q), data)


def hankel_H(s: MatrixSequence, n: int) -> BlockMatrix:
    """Block Hankel with block (j,k) = s_{j+k}; needs 2n <= kappa."""
    if 2 * n > s.kappa:
        raise ValueError(f"hankel_H needs 2n <= kappa, got n={n}, kappa={s.kappa}")
    data = _grid(s, n, lambda j, k: s[j + k])
    return BlockMatrix(n + 1, n + 1, (s.q, s.q), data)


def hankel_K(s: MatrixSequence, n: int) -> BlockMatrix:
    """Block Hankel with block (j,k) = s_{j+k+1}; needs 2n+1 <= kappa."""
    if 2 * n + 1 > s.kappa:
        raise ValueError(f"hankel_K needs 2n+1 <= kappa, got n={n}, kappa={s.kappa}")
    data = _grid(s, n, lambda j, k: s[j + k + 1])
    return BlockMatrix(n + 1, n + 1, (s.q, s.q), data)


def hankel_G(s: MatrixSequence, n: int) -> BlockMatrix:
    """Block Hankel with block (j,k) = s_{j+k+2}; needs 2n+2 <= kappa."""
    if 2 * n + 2 > s.kappa:
        raise ValueError(f"hankel_G needs 2n+2 <= kappa, got n={n}, kappa={s.kappa}")
    data = _grid(s, n, lambda j, k: s[j + k + 2])
    return BlockMatrix(n + 1, n + 1, (s.q, s.q), data)


def resolvent_R(q: int, n: int, z: complex) -> BlockMatrix:
    """R_{q,n}(z) = (I - z T_{q,n})^{-1} = sum_l z^l T^l, unit-determinant lower Toeplitz."""
    powers = MatrixSequence(np.stack([(z**j) * np.eye(q, dtype=np.complex128) for j in range(n + 1)]))
    return toeplitz_lower(powers, n)


def d_left(s: MatrixSequence, m: int, tol: ToleranceProfile = DEFAULT_TOL) -> BlockMatrix:
    """Regularized lower factor diag(s_0) S_L(s^rec) + diag(I - s_0 s_0^+)."""
    if m > s.kappa:
        raise ValueError(f"m={m} exceeds kappa={s.kappa}")
    r = reciprocal(s, tol)
    q = s.q
    data = sdiag(s[0], m) @ toeplitz_lower(r, m).data + sdiag(
        np.eye(q) - s[0] @ pinv(s[0], tol), m
    )
    return BlockMatrix(m + 1, m + 1, (q, q), data)


def d_right(s: MatrixSequence, m: int, tol: ToleranceProfile = DEFAULT_TOL) -> BlockMatrix:
    """Regularized upper factor S_U(s^rec) diag(s_0) + diag(I - s_0^+ s_0)."""
    if m > s.kappa:
        raise ValueError(f"m={m} exceeds kappa={s.kappa}")
    r = reciprocal(s, tol)
    q = s.q
    data = toeplitz_upper(r, m).data @ sdiag(s[0], m) + sdiag(
        np.eye(q) - pinv(s[0], tol) @ s[0], m
    )
    return BlockMatrix(m + 1, m + 1, (q, q), data)


def d_left2(
    s: MatrixSequence, t: MatrixSequence, m: int, tol: ToleranceProfile = DEFAULT_TOL
) -> BlockMatrix:
    """Two-sequence lower factor diag(s_0) S_L(s^rec) S_L(t) diag(t_0^+) + diag(I - s_0 s_0^+ t_0 t_0^+)."""
    if m > min(s.kappa, t.kappa):
        raise ValueError(f"m={m} exceeds min kappa {min(s.kappa, t.kappa)}")
    if s.q != t.q:
        raise ValueError("block size mismatch")
    q = s.q
    r = reciprocal(s, tol)
    s0p, t0p = pinv(s[0], tol), pinv(t[0], tol)
    data = (
        sdiag(s[0], m) @ toeplitz_lower(r, m).data @ toeplitz_lower(t, m).data @ sdiag(t0p, m)
        + sdiag(np.eye(q) - s[0] @ s0p @ t[0] @ t0p, m)
    )
    return BlockMatrix(m + 1, m + 1, (q, q), data)


def d_right2(
    s: MatrixSequence, t: MatrixSequence, m: int, tol: ToleranceProfile = DEFAULT_TOL
) -> BlockMatrix:
    """Two-sequence upper factor diag(t_0^+) S_U(t) S_U(s^rec) diag(s_0) + diag(I - t_0^+ t_0 s_0^+ s_0)."""
    if m > min(s.kappa, t.kappa):
        raise ValueError(f"m={m} exceeds min kappa {min(s.kappa, t.kappa)}")
    if s.q != t.q:
        raise ValueError("block size mismatch")
    q = s.q
    r = reciprocal(s, tol)
    s0p, t0p = pinv(s[0], tol), pinv(t[0], tol)
    data = (
        sdiag(t0p, m) @ toeplitz_upper(t, m).data @ toeplitz_upper(r, m).data @ sdiag(s[0], m)
        + sdiag(np.eye(q) - t0p @ t[0] @ s0p @ s[0], m)
    )
    return BlockMatrix(m + 1, m + 1, (q, q), data)


def schur_L(s: MatrixSequence, n: int, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """L_n = s_{2n} - z_{n,2n-1} H_{n-1}^+ y_{n,2n-1}; L_0 = s_0."""
    if 2 * n > s.kappa:
        raise ValueError(f"schur_L needs 2n <= kappa, got n={n}, kappa={s.kappa}")
    if n == 0:
        return s[0].copy()
    h_prev = hankel_H(s, n - 1).data
    z = block_row(s, n, 2 * n - 1)
    y = block_col(s, n, 2 * n - 1)
    return s[2 * n] - z @ pinv(h_prev, tol) @ y


def schur_LL(s: MatrixSequence, n: int, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """LL_n = G_{n-1} - y_{1,n} s_0^+ z_{1,n}, the Schur complement of s_0 in H_n; LL_0 = s_0."""
    if 2 * n > s.kappa:
        raise ValueError(f"schur_LL needs 2n <= kappa, got n={n}, kappa={s.kappa}")
    if n == 0:
        return s[0].copy()
    g_prev = hankel_G(s, n - 1).data
    y = block_col(s, 1, n)
    z = block_row(s, 1, n)
    return g_prev - y @ pinv(s[0], tol) @ z


def sequential_schur_diagonal(
    m: np.ndarray, q: int, tol: ToleranceProfile = DEFAULT_TOL
) -> list[np.ndarray]:
    """Diagonal blocks of the block LDU factorization, peeled one pivot at a time.

    Entry j is the Schur complement of the leading j*q grid in the leading
    (j+1)*q grid; entry 0 is the top-left block. For PSD inputs this is the
    unique diagonal among all unipotent-triangular factorizations, and the
    one-pivot-at-a-time elimination (never a pseudoinverse of a large
    leading block) keeps the decaying tail pivots backward stable.
    """
    if m.shape[0] != m.shape[1] or m.shape[0] % q:
        raise ValueError(f"matrix shape {m.shape} is not a square grid of {q}x{q} blocks")
    n_blocks = m.shape[0] // q
    out = [m[:q, :q].copy()]
    rest = m.copy()
    for _ in range(1, n_blocks):
        pivot_inv = pinv(rest[:q, :q], tol)
        rest = rest[q:, q:] - rest[q:, :q] @ pivot_inv @ rest[:q, q:]
        out.append(rest[:q, :q].copy())
    return out


@dataclass(frozen=True)
class ExtremalIngredients:
    """Theta/Sigma/M/N/Lambda blocks at index n (None where the length forbids)."""

    theta: np.ndarray
    sigma: np.ndarray
    mn: Optional[np.ndarray]
    nn: Optional[np.ndarray]
    lambda_: Optional[np.ndarray]


def extremal_ingredients(
    s: MatrixSequence, n: int, tol: ToleranceProfile = DEFAULT_TOL
) -> ExtremalIngredients:
    """Theta_n, Sigma_n (need 2n-1 <= kappa) and M_n, N_n, Lambda_n (need 2n <= kappa).

    All five vanish at n = 0.
    """
    zero = np.zeros((s.q, s.q), dtype=np.complex128)
    if n == 0:
        return ExtremalIngredients(zero, zero.copy(), zero.copy(), zero.copy(), zero.copy())
    if 2 * n - 1 > s.kappa:
        raise ValueError(f"extremal ingredients need 2n-1 <= kappa, got n={n}, kappa={s.kappa}")
    hp = pinv(hankel_H(s, n - 1).data, tol)
    z_mid = block_row(s, n, 2 * n - 1)
    y_mid = block_col(s, n, 2 * n - 1)
    theta = z_mid @ hp @ y_mid
    sigma = z_mid @ hp @ hankel_K(s, n - 1).data @ hp @ y_mid
    if 2 * n <= s.kappa:
        mn = z_mid @ hp @ block_col(s, n + 1, 2 * n)
        nn = block_row(s, n + 1, 2 * n) @ hp @ y_mid
        lam = mn + nn - sigma
    else:
        mn = nn = lam = None
    return ExtremalIngredients(theta, sigma, mn, nn, lam)


def verify_reciprocal_identities(
    s: MatrixSequence, tol: ToleranceProfile = DEFAULT_TOL
) -> dict[str, float]:
    """Residuals of the Hankel/reciprocal interplay identities of a sequence.

    With r the reciprocal of s and X^rec denoting the structure built from r:

    - ``hankel_sum[n]``:   H_n^rec + S_L^rec H_n S_U^rec == [y^rec | 0] + [z^rec / 0]
    - ``K_sandwich[n]``:   K_n^rec == -S_L^rec K_n S_U^rec
    - ``G_sandwich[n]``:   G_n^rec == -S_L^rec LL_{n+1} S_U^rec
    - ``SL_reflexive[m]``: S_L^rec S_L S_L^rec == S_L^rec (and the S_U twin)

    These hold for arbitrary sequences; residuals are relative.
    """
    r = reciprocal(s, tol)
    q = s.q
    out: dict[str, float] = {}
    for n in range(s.kappa // 2 + 1):
        sl = toeplitz_lower(s, n).data
        su = toeplitz_upper(s, n).data
        slr = toeplitz_lower(r, n).data
        sur = toeplitz_upper(r, n).data
        lhs = hankel_H(r, n).data + slr @ hankel_H(s, n).data @ sur
        rhs = np.zeros_like(lhs)
        rhs[:, :q] += block_col(r, 0, n)
        rhs[:q, :] += block_row(r, 0, n)
        out[f"hankel_sum[{n}]"] = rel_residual(lhs, rhs, tol)
    for n in range((s.kappa - 1) // 2 + 1) if s.kappa >= 1 else []:
        slr = toeplitz_lower(r, n).data
        sur = toeplitz_upper(r, n).data
        out[f"K_sandwich[{n}]"] = rel_residual(
            hankel_K(r, n).data, -slr @ hankel_K(s, n).data @ sur, tol
        )
    for n in range((s.kappa - 2) // 2 + 1) if s.kappa >= 2 else []:
        slr = toeplitz_lower(r, n).data
        sur = toeplitz_upper(r, n).data
        out[f"G_sandwich[{n}]"] = rel_residual(
            hankel_G(r, n).data, -slr @ schur_LL(s, n + 1, tol) @ sur, tol
        )
    m = s.kappa
    sl = toeplitz_lower(s, m).data
    su = toeplitz_upper(s, m).data
    slr = toeplitz_lower(r, m).data
    sur = toeplitz_upper(r, m).data
    out[f"SL_reflexive[{m}]"] = rel_residual(slr @ sl @ slr, slr, tol)
    out[f"SU_reflexive[{m}]"] = rel_residual(sur @ su @ sur, sur, tol)
    return out
