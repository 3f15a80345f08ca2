"""Matrix-level averaging map: the long-time average of
exp(h0 s) X exp(-h0 s) with h0 = -iM, M Hermitian, evaluated exactly as a
spectral (resonant-block) projection, plus a finite-time quadrature
cross-check and the effective moment propagator built on top of it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch
from .fermion import SplitHamiltonian, moment_generator

DEFAULT_RESONANCE_TOL = 1e-9


@dataclass(frozen=True)
class ResonancePartition:
    """Equivalence classes of eigenvalue indices with (clustered) equal values.

    Eigenvalues within tol * (1 + spread) of each other (single linkage on
    the sorted spectrum) land in the same cluster; an index pair (a, b) is
    resonant iff a and b share a cluster.
    """

    eigenvalues: np.ndarray
    tolerance: float
    labels: np.ndarray
    decomposition: linalg.HermitianEigenDecomposition

    @property
    def mask(self) -> np.ndarray:
        """Boolean resonance mask R with R[a, b] = (same cluster)."""
        return self.labels[:, None] == self.labels[None, :]

    @property
    def resonant_pairs(self) -> frozenset:
        a, b = np.nonzero(self.mask)
        return frozenset(zip(a.tolist(), b.tolist()))

    @property
    def max_cluster_width(self) -> float:
        width = 0.0
        for lab in np.unique(self.labels):
            vals = self.eigenvalues[self.labels == lab]
            width = max(width, float(vals.max() - vals.min()))
        return width


@dataclass(frozen=True)
class ProjectedMatrix:
    value: np.ndarray
    partition: ResonancePartition


def resonance_partition(
    M: np.ndarray, tol: float = DEFAULT_RESONANCE_TOL
) -> ResonancePartition:
    """Cluster the spectrum of Hermitian M into resonance classes."""
    eig = linalg.hermitian_eigendecompose(M)
    w = eig.eigenvalues
    spread = float(w[-1] - w[0]) if len(w) > 1 else 0.0
    gap = tol * (1.0 + spread)
    labels = np.zeros(len(w), dtype=int)
    for i in range(1, len(w)):
        labels[i] = labels[i - 1] + (1 if w[i] - w[i - 1] > gap else 0)
    return ResonancePartition(
        eigenvalues=w, tolerance=tol, labels=labels, decomposition=eig
    )


def project_with(X: np.ndarray, partition: ResonancePartition) -> np.ndarray:
    """Apply a precomputed resonance partition to X."""
    X = linalg.as_matrix(X)
    eig = partition.decomposition
    if X.shape[0] != eig.dim:
        raise DimensionMismatch(f"X dim {X.shape[0]} != generator dim {eig.dim}")
    Y = eig.to_eigenbasis(X)
    Y[~partition.mask] = 0.0
    return eig.from_eigenbasis(Y)


def project(
    X: np.ndarray, M: np.ndarray, tol: float = DEFAULT_RESONANCE_TOL
) -> ProjectedMatrix:
    """Long-time average of exp(-iMs) X exp(iMs): keep resonant entries only."""
    partition = resonance_partition(M, tol)
    return ProjectedMatrix(value=project_with(X, partition), partition=partition)


def numeric_time_average(
    X: np.ndarray, M: np.ndarray, T: float, steps: int
) -> np.ndarray:
    """Trapezoidal (1/T) integral of exp(-iMs) X exp(iMs) over [0, T].

    Converges to project(X, M) at O(1/T) for generic spectra; kept as an
    independent cross-check of the exact spectral projection.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    eig = linalg.hermitian_eigendecompose(M)
    X = linalg.as_matrix(X)
    if X.shape[0] != eig.dim:
        raise DimensionMismatch(f"X dim {X.shape[0]} != generator dim {eig.dim}")
    Y = eig.to_eigenbasis(X)
    delta = eig.eigenvalues[:, None] - eig.eigenvalues[None, :]
    s_grid = np.linspace(0.0, T, steps)
    # entrywise phase averages; cache repeated frequency differences
    cache: dict = {}
    avg = np.empty_like(Y)
    for a in range(eig.dim):
        for b in range(eig.dim):
            key = round(float(delta[a, b]), 14)
            if key not in cache:
                cache[key] = np.trapezoid(np.exp(-1j * delta[a, b] * s_grid), s_grid) / T
            avg[a, b] = cache[key]
    return eig.from_eigenbasis(Y * avg)


def free_moment_generator_hermitian(split: SplitHamiltonian, m: int) -> np.ndarray:
    """Hermitian matrix M0 with h0^(m) = -i M0 (the free moment generator)."""
    return linalg.kron_sum(split.base.single_particle_generator(), m)


def effective_propagator(
    split: SplitHamiltonian, m: int, t: float, tol: float = DEFAULT_RESONANCE_TOL
) -> np.ndarray:
    """Averaged m-th moment propagator: project exp(h t) onto resonant blocks
    of the free generator, h = -i kron_sum(E(H0 + lambda HI), m)."""
    h = moment_generator(split.total(), m).matrix
    M0 = free_moment_generator_hermitian(split, m)
    return project(linalg.matrix_exponential(h * t), M0, tol).value
