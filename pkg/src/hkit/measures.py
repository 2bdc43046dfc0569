"""Measure-level layer: molecular matrix measures and arcsine fixtures.

A molecular measure is a finite set of PSD-weighted atoms on the interval;
its moments are plain power sums. The matrix-weighted arcsine distribution
supplies the canonical central fixture (all canonical moments equal half the
range projector), and the diagnostics tie measure-level notions (molecular,
central) to the vanishing/stationarity of the distance sequence under the
iterated transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np

from ._backend import kernels
from .classify import ClassMembershipError, classify, interval_params, is_central
from .matcore import DEFAULT_TOL, ToleranceProfile, is_psd, ortho_projector, rel_residual
from .seq import Interval, MatrixSequence, MomentSequence
from .transform import f_transform_iter

__all__ = [
    "MolecularMeasure",
    "MeasureDiagnostics",
    "moments",
    "arcsine_moments",
    "measure_transform_diagnostics",
    "centrality_oracle",
    "example_e_half",
]


@dataclass(frozen=True)
class MolecularMeasure:
    """Finitely many PSD-weighted atoms on [alpha, beta]; empty = zero measure."""

    interval: Interval
    q: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=np.float64).reshape(-1)
        weights = np.asarray(self.weights, dtype=np.complex128)
        if weights.size == 0:
            weights = weights.reshape(0, self.q, self.q)
        if weights.shape != (nodes.size, self.q, self.q):
            raise ValueError(f"weights shape {weights.shape} does not match {nodes.size} atoms of size {self.q}")
        slack = 1e-12 * max(1.0, abs(self.interval.alpha), abs(self.interval.beta))
        for x in nodes:
            if not self.interval.contains(float(x), slack):
                raise ValueError(f"atom node {x} outside [{self.interval.alpha}, {self.interval.beta}]")
        for w in weights:
            if not is_psd(w):
                raise ValueError("atom weights must be Hermitian PSD")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_atoms(cls, interval: Interval, atoms, q: Optional[int] = None) -> "MolecularMeasure":
        atoms = list(atoms)
        if atoms:
            weights = [np.atleast_2d(np.asarray(w, dtype=np.complex128)) for _, w in atoms]
            q = weights[0].shape[0]
            return cls(interval, q, np.array([x for x, _ in atoms]), np.stack(weights))
        if q is None:
            raise ValueError("zero measure needs an explicit block size q")
        return cls(interval, q, np.zeros(0), np.zeros((0, q, q), dtype=np.complex128))

    @property
    def is_zero(self) -> bool:
        return self.nodes.size == 0 or not np.any(self.weights)

    def total_mass(self) -> np.ndarray:
        if self.nodes.size == 0:
            return np.zeros((self.q, self.q), dtype=np.complex128)
        return self.weights.sum(axis=0)


@dataclass(frozen=True)
class MeasureDiagnostics:
    """Transform-level diagnostics of a moment sequence."""

    total_mass: np.ndarray
    molecular_order: Optional[int]
    central_order: Optional[int]
    canonical_moments: MatrixSequence
    stage_masses: MatrixSequence


def moments(mu: MolecularMeasure, kappa: int) -> MomentSequence:
    """Power moments s_j = sum_l x_l^j A_l for j = 0..kappa."""
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")
    if mu.nodes.size == 0:
        s = np.zeros((kappa + 1, mu.q, mu.q), dtype=np.complex128)
    else:
        s = kernels.power_moments(mu.nodes, mu.weights, kappa)
    return MomentSequence(mu.interval, MatrixSequence(s))


def _unit_arcsine_moments(kappa: int) -> np.ndarray:
    """Scalar moments of the [0,1] arcsine law from the memoized quadrature table."""
    from .oracle import oracle_arcsine_moment

    return np.array([oracle_arcsine_moment(j) for j in range(kappa + 1)])


def arcsine_moments(
    interval: Interval, m: np.ndarray, kappa: int, tol: ToleranceProfile = DEFAULT_TOL
) -> MomentSequence:
    """Moments of the matrix-weighted arcsine distribution on the interval.

    The scalar [0,1] arcsine moments are pushed forward through
    x -> delta*x + alpha by binomial expansion, then scaled by the PSD
    weight matrix.
    """
    m = np.atleast_2d(np.asarray(m, dtype=np.complex128))
    if not is_psd(m, tol):
        raise ValueError("arcsine weight matrix must be Hermitian PSD")
    base = _unit_arcsine_moments(kappa)
    alpha, delta = interval.alpha, interval.delta
    scalars = [
        sum(comb(j, i) * delta**i * alpha ** (j - i) * base[i] for i in range(j + 1))
        for j in range(kappa + 1)
    ]
    return MomentSequence(interval, MatrixSequence(np.stack([x * m for x in scalars])))


def measure_transform_diagnostics(
    ms: MomentSequence, max_k: int, tol: ToleranceProfile = DEFAULT_TOL
) -> MeasureDiagnostics:
    """Stage masses, molecularity order, centrality order, canonical moments.

    The k-th transform of the underlying measure has total mass
    delta^(k-1) d_k; molecular_order is the first k (up to max_k, capped at
    kappa) where that mass vanishes.
    """
    if not classify(ms, tol).in_Fgg:
        raise ClassMembershipError("diagnostics require an interval-class moment sequence")
    if max_k < 0:
        raise ValueError(f"max_k must be >= 0, got {max_k}")
    delta = ms.interval.delta
    params = interval_params(ms, tol)
    k_hi = min(max_k, ms.kappa)
    masses = [delta ** (k - 1) * params.d[k] for k in range(k_hi + 1)]

    scale = max(float(np.linalg.norm(params.d[0], 2)), 1e-300)
    molecular_order: Optional[int] = None
    for k, mass in enumerate(masses):
        if float(np.linalg.norm(mass, 2)) <= tol.eq_rel_tol * scale:
            molecular_order = k
            break

    central_order: Optional[int] = None
    for k in range(1, ms.kappa + 1):
        if is_central(ms, k, tol):
            central_order = k
            break

    return MeasureDiagnostics(
        total_mass=ms.seq[0].copy(),
        molecular_order=molecular_order,
        central_order=central_order,
        canonical_moments=params.e,
        stage_masses=MatrixSequence(np.stack(masses)),
    )


def centrality_oracle(ms: MomentSequence, k: int, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """Measure-level centrality criterion realized at moment level.

    True iff the (k-1)-th transform's moments coincide with those of the
    arcsine distribution weighted by delta^(k-2) d_{k-1}.
    """
    if not classify(ms, tol).in_Fgg:
        raise ClassMembershipError("centrality oracle requires an interval-class moment sequence")
    if not 1 <= k <= ms.kappa:
        raise ValueError(f"k={k} out of range 1..{ms.kappa}")
    delta = ms.interval.delta
    trace = f_transform_iter(ms, k - 1, tol)
    stage = trace.stages[k - 1]
    weight = delta ** (k - 2) * trace.params_per_stage[0].d[k - 1]
    predicted = arcsine_moments(ms.interval, weight, stage.kappa, tol)
    return all(
        rel_residual(stage.seq[j], predicted.seq[j], tol) <= tol.eq_rel_tol
        for j in range(stage.kappa + 1)
    )


@dataclass(frozen=True)
class EHalfFixture:
    e: MatrixSequence
    d: MatrixSequence
    f: MatrixSequence


def example_e_half(
    interval: Interval, b: np.ndarray, lam: float, kappa: int, tol: ToleranceProfile = DEFAULT_TOL
) -> EHalfFixture:
    """Closed-form parameter fixture with constant canonical moments lam*P.

    e_0 = B, e_j = lam*P_{ran B}; d_j = eta (eta lam (1-lam))^j B;
    f_{2j-1} = lam^(j-1) (eta(1-lam))^j B, f_{2j} = (lam eta)^j (1-lam)^(j-1) B,
    where eta is the interval length. lam = 1/2 on [0,1] reproduces the
    arcsine parameters.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lam must lie in (0, 1), got {lam}")
    b = np.atleast_2d(np.asarray(b, dtype=np.complex128))
    if not is_psd(b, tol):
        raise ValueError("B must be Hermitian PSD")
    eta = interval.delta
    proj = ortho_projector(b, tol)
    e = [b] + [lam * proj for _ in range(kappa)]
    d = [eta * (eta * lam * (1.0 - lam)) ** j * b for j in range(kappa + 1)]
    f: list[np.ndarray] = [b]
    for j in range(1, kappa + 1):
        f.append(lam ** (j - 1) * (eta * (1.0 - lam)) ** j * b)
        f.append((lam * eta) ** j * (1.0 - lam) ** (j - 1) * b)
    return EHalfFixture(
        e=MatrixSequence(np.stack(e)),
        d=MatrixSequence(np.stack(d)),
        f=MatrixSequence(np.stack(f)),
    )
