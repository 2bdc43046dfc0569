"""Independent brute-force oracles and seeded random generators.

Everything here is deliberately kept apart from the main code paths: the
reciprocal oracle is a frozen copy of the composition-sum formula, the
arcsine moment oracle integrates the density directly, and the generators
only use numpy primitives. Main-path refactors must not touch this module.
"""

from __future__ import annotations

from itertools import combinations
from threading import Lock

import numpy as np
from scipy.integrate import quad

from .measures import MolecularMeasure
from .seq import Interval, MatrixSequence

__all__ = [
    "random_molecular",
    "random_sequence",
    "random_ftd_sequence",
    "random_real_line_measure",
    "oracle_reciprocal",
    "oracle_arcsine_moment",
    "ARCSINE_MAX_ORDER",
]

ARCSINE_MAX_ORDER = 32

_arcsine_table: dict[int, float] = {}
_arcsine_lock = Lock()


def oracle_arcsine_moment(j: int) -> float:
    """j-th moment of the [0,1] arcsine density 1/(pi sqrt(x(1-x))).

    Computed once by adaptive quadrature after the substitution x = sin^2(t),
    which removes the endpoint singularities:
    integral = (2/pi) * int_0^{pi/2} sin(t)^{2j} dt. Memoized; j <= 32.
    """
    if not 0 <= j <= ARCSINE_MAX_ORDER:
        raise ValueError(f"arcsine moment order must lie in 0..{ARCSINE_MAX_ORDER}, got {j}")
    with _arcsine_lock:
        if j not in _arcsine_table:
            value, _err = quad(
                lambda t: (2.0 / np.pi) * np.sin(t) ** (2 * j), 0.0, np.pi / 2.0, epsabs=1e-13
            )
            _arcsine_table[j] = float(value)
        return _arcsine_table[j]


def oracle_reciprocal(s: MatrixSequence) -> MatrixSequence:
    """Frozen reference reciprocal: alternating sum over integer compositions.

    t_j = sum over compositions (k_1..k_l) of j of
    (-1)^l s_0^+ s_{k_1} s_0^+ ... s_{k_l} s_0^+. Exponential in kappa; meant
    for oracle use at kappa <= 13. Uses numpy's pinv directly.
    """
    if s.kappa > 13:
        raise ValueError(f"oracle reciprocal capped at kappa <= 13, got {s.kappa}")
    s0p = np.linalg.pinv(s[0])
    out = [s0p]
    for j in range(1, s.kappa + 1):
        acc = np.zeros((s.q, s.q), dtype=np.complex128)
        for cuts in range(j):
            for positions in combinations(range(1, j), cuts):
                bounds = (0, *positions, j)
                parts = [bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1)]
                term = s0p
                for k in parts:
                    term = term @ s[k] @ s0p
                acc += (-1.0) ** len(parts) * term
        out.append(acc)
    return MatrixSequence(np.stack(out))


def _random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _random_unitary(rng: np.random.Generator, q: int) -> np.ndarray:
    qf, r = np.linalg.qr(_random_complex(rng, (q, q)))
    return qf * (np.diag(r) / np.abs(np.diag(r)))


def _random_psd(rng: np.random.Generator, q: int, rank: int) -> np.ndarray:
    """Random PSD matrix with exact rank and eigenvalues in [0.5, 2].

    The spectrum floor keeps downstream Hankel/Schur computations well
    conditioned; rank deficiency is produced by exact zeros, never by tiny
    eigenvalues.
    """
    if rank == 0:
        return np.zeros((q, q), dtype=np.complex128)
    u = _random_unitary(rng, q)
    lam = np.concatenate([rng.uniform(0.5, 2.0, rank), np.zeros(q - rank)])
    return (u * lam) @ u.conj().T


def random_molecular(
    q: int,
    n_atoms: int,
    interval: Interval,
    seed: int,
    rank_deficient: bool = False,
    endpoint_atoms: bool = False,
    min_separation: float = 0.0,
) -> MolecularMeasure:
    """Seeded random molecular measure with PSD atom weights.

    Nodes are uniform in the interval (optionally forcing the two endpoint
    atoms and a minimum node separation); weights are G^H G with randomized
    rank deficiency when requested. Deterministic per seed.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if n_atoms < 0:
        raise ValueError(f"n_atoms must be >= 0, got {n_atoms}")
    rng = np.random.default_rng(seed)
    if n_atoms == 0:
        return MolecularMeasure(interval, q, np.zeros(0), np.zeros((0, q, q), dtype=np.complex128))
    if min_separation > 0.0:
        # jittered grid keeps nodes apart; used by determinant-sensitive fixtures
        grid = np.linspace(interval.alpha, interval.beta, n_atoms + 2)[1:-1]
        jitter = rng.uniform(-0.4, 0.4, n_atoms) * min_separation
        nodes = np.clip(grid + jitter, interval.alpha, interval.beta)
    else:
        nodes = rng.uniform(interval.alpha, interval.beta, n_atoms)
    if endpoint_atoms and n_atoms >= 2:
        nodes[0] = interval.alpha
        nodes[-1] = interval.beta
    ranks = rng.integers(0, q + 1, n_atoms) if rank_deficient else np.full(n_atoms, q)
    if rank_deficient and not np.any(ranks):
        ranks[0] = q
    weights = np.stack([_random_psd(rng, q, int(r)) for r in ranks])
    return MolecularMeasure(interval, q, nodes, weights)


def random_sequence(
    q: int, kappa: int, seed: int, rank_deficient: bool = False, max_cond: float = 1e3
) -> MatrixSequence:
    """Seeded random complex sequence with controlled head conditioning.

    The head s_0 is resampled until well conditioned on its range (exactly
    rank-deficient heads are produced by zeroing singular values, never by
    near-singular draws), so reciprocal-based identities stay verifiable at
    tight tolerances.
    """
    rng = np.random.default_rng(seed)
    while True:
        s0 = _random_complex(rng, (q, q))
        u, sv, vh = np.linalg.svd(s0)
        if sv[-1] > 0 and sv[0] / sv[-1] <= max_cond:
            break
    if rank_deficient and q > 1:
        rank = int(rng.integers(1, q))
        sv = np.concatenate([sv[:rank], np.zeros(q - rank)])
        s0 = (u * sv) @ vh
    items = [s0] + [_random_complex(rng, (q, q)) for _ in range(kappa)]
    return MatrixSequence(np.stack(items))


def random_ftd_sequence(q: int, kappa: int, seed: int, rank: int | None = None) -> MatrixSequence:
    """Seeded random first-term-dominated sequence.

    Every term is compressed as P s_j Q with P/Q the orthogonal projectors
    onto the column/row space of s_0, which forces the range/null-space
    containments of first-term dominance.
    """
    rng = np.random.default_rng(seed)
    rank = q if rank is None else rank
    if not 1 <= rank <= q:
        raise ValueError(f"rank must lie in 1..{q}, got {rank}")
    while True:
        g = _random_complex(rng, (q, q))
        u, sv, vh = np.linalg.svd(g)
        if sv[rank - 1] > 1e-2 * sv[0]:
            break
    s0 = (u[:, :rank] * sv[:rank]) @ vh[:rank]
    p = u[:, :rank] @ u[:, :rank].conj().T
    qproj = vh[:rank].conj().T @ vh[:rank]
    items = [s0] + [p @ _random_complex(rng, (q, q)) @ qproj for _ in range(kappa)]
    return MatrixSequence(np.stack(items))


def random_real_line_measure(
    q: int, n_atoms: int, seed: int, span: float = 2.0, rank_deficient: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded atoms (nodes, weights) on the real line for Hamburger fixtures."""
    rng = np.random.default_rng(seed)
    nodes = rng.uniform(-span, span, n_atoms)
    ranks = rng.integers(1, q + 1, n_atoms) if rank_deficient else np.full(n_atoms, q)
    weights = np.stack([_random_psd(rng, q, int(r)) for r in ranks])
    return nodes, weights
