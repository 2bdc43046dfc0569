"""Dense complex matrix kernel: pseudoinverse, PSD calculus, Schur complements.

All operations are pure functions of immutable values. Comparisons are
relative to the Frobenius norm of the larger operand; two matrices whose
norms both fall below ``eq_rel_tol`` are treated as zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

Matrix = NDArray[np.complex128]

__all__ = [
    "ToleranceProfile",
    "DEFAULT_TOL",
    "as_matrix",
    "pinv",
    "psd_sqrt",
    "psd_pinv_sqrt",
    "parallel_sum",
    "ortho_projector",
    "schur_complement",
    "is_hermitian",
    "is_psd",
    "min_eigenvalue",
    "loewner_leq",
    "rank_of",
    "kron",
    "rel_residual",
    "matrices_close",
    "family_residuals",
]


@dataclass(frozen=True)
class ToleranceProfile:
    """Numerical thresholds governing rank, PSD, and equality decisions.

    rank_rel_tol: relative singular-value cutoff for numerical rank.
    psd_tol: eigenvalue floor, absolute after scaling by the matrix norm.
    eq_rel_tol: relative Frobenius tolerance for identity checks.
    """

    rank_rel_tol: float = 1e-10
    psd_tol: float = 1e-9
    eq_rel_tol: float = 1e-8

    def __post_init__(self) -> None:
        for name in ("rank_rel_tol", "psd_tol", "eq_rel_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")


DEFAULT_TOL = ToleranceProfile()


def as_matrix(a) -> Matrix:
    """Coerce input to a finite 2-d complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.view(np.float64))):
        raise ValueError("matrix contains NaN/Inf entries")
    return m


def pinv(a, tol: ToleranceProfile = DEFAULT_TOL) -> Matrix:
    """Moore-Penrose pseudoinverse via SVD with relative rank cutoff.

    Returns the X satisfying AXA=A, XAX=X with AX and XA Hermitian; rank is
    decided by discarding singular values below rank_rel_tol * sigma_max.
    """
    m = as_matrix(a)
    if not m.size:
        return m.conj().T.copy()
    return np.linalg.pinv(m, rcond=tol.rank_rel_tol)


def is_hermitian(a, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        return False
    scale = max(np.linalg.norm(m, "fro"), 1.0)
    return bool(np.linalg.norm(m - m.conj().T, "fro") <= tol.eq_rel_tol * scale)


def _hermitian_part(m: Matrix) -> Matrix:
    return 0.5 * (m + m.conj().T)


def min_eigenvalue(a, tol: ToleranceProfile = DEFAULT_TOL) -> float:
    """Smallest eigenvalue of the Hermitian part of ``a``."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError("eigenvalues require a square matrix")
    return float(np.linalg.eigvalsh(_hermitian_part(m))[0])


def is_psd(a, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """PSD check: Hermitian within tolerance and min eigenvalue >= -psd_tol*norm."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        return False
    if not is_hermitian(m, tol):
        return False
    scale = max(float(np.linalg.norm(m, 2)) if m.size else 0.0, 1.0)
    return min_eigenvalue(m, tol) >= -tol.psd_tol * scale


def loewner_leq(a, b, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """Loewner semi-ordering: A <= B iff B - A is Hermitian PSD."""
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.shape != mb.shape:
        raise ValueError(f"shape mismatch {ma.shape} vs {mb.shape}")
    if not (is_hermitian(ma, tol) and is_hermitian(mb, tol)):
        raise ValueError("Loewner comparison requires Hermitian operands")
    return is_psd(mb - ma, tol)


def psd_sqrt(a, tol: ToleranceProfile = DEFAULT_TOL) -> Matrix:
    """Hermitian PSD square root Q of a PSD matrix, Q @ Q == A.

    Eigenvalues within the PSD tolerance below zero are clamped to zero;
    anything further negative raises.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError("psd_sqrt requires a square matrix")
    if not is_hermitian(m, tol):
        raise ValueError("psd_sqrt requires a Hermitian matrix")
    w, v = np.linalg.eigh(_hermitian_part(m))
    scale = max(float(np.abs(w).max()) if w.size else 0.0, 1.0)
    if w.size and w[0] < -tol.psd_tol * scale:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def psd_pinv_sqrt(a, tol: ToleranceProfile = DEFAULT_TOL, eig_floor: float = 0.0) -> Matrix:
    """Pseudoinverse of the PSD square root, rank decided on ``a`` itself.

    Equals pinv(psd_sqrt(a)) except that eigenvalues are cut at
    max(rank_rel_tol * lambda_max, eig_floor) before taking 1/sqrt; deciding
    rank on the square root would turn noise eigenvalues eps into
    eps**(1/2), lifting them above any relative cutoff and amplifying them
    into the inverse. ``eig_floor`` lets callers impose an absolute noise
    floor (e.g. from the scale of the family ``a`` belongs to) on what
    counts as a live eigenvalue.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError("psd_pinv_sqrt requires a square matrix")
    if not is_hermitian(m, tol):
        raise ValueError("psd_pinv_sqrt requires a Hermitian matrix")
    w, v = np.linalg.eigh(_hermitian_part(m))
    scale = max(float(np.abs(w).max()) if w.size else 0.0, 0.0)
    if w.size and scale and w[0] < -tol.psd_tol * max(scale, 1.0):
        raise ValueError(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")
    cut = max(tol.rank_rel_tol * scale, eig_floor)
    inv_root = np.where(w > cut, 1.0 / np.sqrt(np.clip(w, 1e-300, None)), 0.0)
    return (v * inv_root) @ v.conj().T


def parallel_sum(a, b, tol: ToleranceProfile = DEFAULT_TOL) -> Matrix:
    """Parallel sum A (A+B)^+ B."""
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.shape != mb.shape:
        raise ValueError(f"shape mismatch {ma.shape} vs {mb.shape}")
    return ma @ pinv(ma + mb, tol) @ mb


def ortho_projector(a, tol: ToleranceProfile = DEFAULT_TOL) -> Matrix:
    """Orthogonal projector onto the column space: A A^+."""
    m = as_matrix(a)
    return m @ pinv(m, tol)


def schur_complement(m, p: int, r: int, tol: ToleranceProfile = DEFAULT_TOL) -> Matrix:
    """Schur complement D - C A^+ B of the p x r top-left block A in m."""
    mm = as_matrix(m)
    rows, cols = mm.shape
    if not (0 <= p < rows and 0 <= r < cols):
        raise ValueError(f"block ({p},{r}) out of bounds for {mm.shape}")
    a = mm[:p, :r]
    b = mm[:p, r:]
    c = mm[p:, :r]
    d = mm[p:, r:]
    return d - c @ pinv(a, tol) @ b


def rank_of(a, tol: ToleranceProfile = DEFAULT_TOL) -> int:
    """Numerical rank by singular-value cutoff rank_rel_tol * sigma_max."""
    m = as_matrix(a)
    if not m.size:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel_tol * s[0]))


def kron(a, b) -> Matrix:
    """Kronecker product."""
    return np.kron(as_matrix(a), as_matrix(b))


def rel_residual(lhs, rhs, tol: ToleranceProfile = DEFAULT_TOL) -> float:
    """Relative Frobenius distance, scaled by the larger operand.

    Both operands below eq_rel_tol in norm count as equal (residual 0).
    """
    ml, mr = as_matrix(lhs), as_matrix(rhs)
    if ml.shape != mr.shape:
        raise ValueError(f"shape mismatch {ml.shape} vs {mr.shape}")
    scale = max(np.linalg.norm(ml, "fro"), np.linalg.norm(mr, "fro"))
    if scale <= tol.eq_rel_tol:
        return 0.0
    return float(np.linalg.norm(ml - mr, "fro") / scale)


def matrices_close(lhs, rhs, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    return rel_residual(lhs, rhs, tol) <= tol.eq_rel_tol


def family_residuals(
    pairs, tol: ToleranceProfile = DEFAULT_TOL, zero_floor: float = 0.0
) -> list[float]:
    """Residuals of matched matrix pairs, scaled by the whole family's norm.

    Sequence-level identities decay toward exact zeros at degeneracy
    boundaries; entry-relative comparison there only amplifies rounding
    noise. One scale, the largest Frobenius norm present across all
    operands, keeps the residuals meaningful for every member. A family
    whose scale falls below ``zero_floor`` (or eq_rel_tol) counts as zero.
    """
    pairs = [(as_matrix(l), as_matrix(r)) for l, r in pairs]
    floor = max(zero_floor, tol.eq_rel_tol)
    tops = [max(np.linalg.norm(l, "fro"), np.linalg.norm(r, "fro")) for l, r in pairs]
    live = [t for t in tops if t > floor]
    scale = max(live, default=0.0)
    if scale == 0.0:
        return [0.0 for _ in pairs]
    return [
        0.0 if top <= floor else float(np.linalg.norm(l - r, "fro") / scale)
        for (l, r), top in zip(pairs, tops)
    ]
