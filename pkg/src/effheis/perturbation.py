"""Time-convolutionless expansion of the projected interaction-picture
propagator: Dyson moments mu_k, their closed forms at orders 1-2, the
cumulant combinations kappa_k and the assembled time-local generator.

All spectral-function sandwiches are evaluated entrywise in the eigenbasis
of the Hermitian free generator M0 (h0 = -i M0), where the commutator
superoperator [h0, . ] acts diagonally with eigenvalue
delta_ab = -i (lam_a - lam_b) on the (a, b) entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import DimensionMismatch, UnsupportedOrder
from .fermion import SplitHamiltonian, moment_generator
from .projector import (
    DEFAULT_RESONANCE_TOL,
    ResonancePartition,
    free_moment_generator_hermitian,
    project_with,
    resonance_partition,
)

SERIES_SWITCH = 1e-4
SERIES_TERMS = 6


def spectral_function(delta: np.ndarray, t: float, kind: str) -> np.ndarray:
    """psi(d, t) = (e^{td} - 1)/d or phi(d, t) = (e^{td} - 1 - td)/d^2.

    Entrywise on an array of commutator eigenvalues; |td| below the switch
    threshold uses the truncated power series, which also covers d = 0
    (psi(0, t) = t, phi(0, t) = t^2 / 2).
    """
    if kind not in ("psi", "phi"):
        raise ValueError(f"unknown spectral function kind {kind!r}")
    delta = np.asarray(delta, dtype=complex)
    z = t * delta
    small = np.abs(z) < SERIES_SWITCH
    shift = 1 if kind == "psi" else 2
    # series: t^shift * sum_{k=0}^{5} z^k / (k + shift)!
    term = np.ones_like(z) / (1.0 if kind == "psi" else 2.0)
    series = term.copy()
    for k in range(1, SERIES_TERMS):
        term = term * z / (k + shift)
        series += term
    series *= t**shift
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind == "psi":
            direct = np.where(small, 0, (np.exp(z) - 1) / np.where(small, 1, delta))
        else:
            direct = np.where(
                small, 0, (np.exp(z) - 1 - z) / np.where(small, 1, delta) ** 2
            )
    return np.where(small, series, direct)


def interaction_hI(hI: np.ndarray, h0: np.ndarray, t: float) -> np.ndarray:
    """Interaction-picture generator exp(-h0 t) hI exp(h0 t)."""
    hI, h0 = linalg.as_matrix(hI), linalg.as_matrix(h0)
    if hI.shape != h0.shape:
        raise DimensionMismatch("hI and h0 dimensions differ")
    return linalg.matrix_exponential(-h0 * t) @ hI @ linalg.matrix_exponential(h0 * t)


def apply_ad_function(hI: np.ndarray, M: np.ndarray, t: float, kind: str) -> np.ndarray:
    """Evaluate F(t [h0, .]) hI with h0 = -iM, F = psi or phi."""
    eig = linalg.hermitian_eigendecompose(M)
    hI = linalg.as_matrix(hI)
    if hI.shape[0] != eig.dim:
        raise DimensionMismatch("hI and M dimensions differ")
    delta = -1j * (eig.eigenvalues[:, None] - eig.eigenvalues[None, :])
    Y = eig.to_eigenbasis(hI) * spectral_function(delta, t, kind)
    return eig.from_eigenbasis(Y)


@dataclass(frozen=True)
class MomentFrame:
    """Eigenbasis workspace shared by the perturbative formulas."""

    split: SplitHamiltonian
    order: int
    partition: ResonancePartition
    hI_eig: np.ndarray  # interaction moment generator, in M0's eigenbasis
    delta: np.ndarray  # commutator eigenvalues -i(lam_a - lam_b)

    @property
    def M0(self) -> np.ndarray:
        eig = self.partition.decomposition
        return eig.from_eigenbasis(np.diag(self.partition.eigenvalues))

    def h0(self) -> np.ndarray:
        return -1j * self.M0

    def hI(self) -> np.ndarray:
        return self.partition.decomposition.from_eigenbasis(self.hI_eig)

    def hI_at(self, t: float) -> np.ndarray:
        """Interaction-picture hI(t) in the eigenbasis (entrywise phases)."""
        return self.hI_eig * np.exp(-t * self.delta)

    def project_eig(self, Y: np.ndarray) -> np.ndarray:
        """Averaging projection of an eigenbasis matrix, back in the original basis."""
        out = Y.copy()
        out[~self.partition.mask] = 0.0
        return self.partition.decomposition.from_eigenbasis(out)


def moment_frame(
    split: SplitHamiltonian, m: int, tol: float = DEFAULT_RESONANCE_TOL
) -> MomentFrame:
    M0 = free_moment_generator_hermitian(split, m)
    partition = resonance_partition(M0, tol)
    eig = partition.decomposition
    hI = moment_generator(split.interaction, m).matrix
    w = partition.eigenvalues
    return MomentFrame(
        split=split,
        order=m,
        partition=partition,
        hI_eig=eig.to_eigenbasis(hI),
        delta=-1j * (w[:, None] - w[None, :]),
    )


def mu1(
    split: SplitHamiltonian, m: int, tol: float = DEFAULT_RESONANCE_TOL
) -> Callable[[float], np.ndarray]:
    """First Dyson moment mu_1(t) = t * P(hI)."""
    frame = moment_frame(split, m, tol)
    p_hI = frame.project_eig(frame.hI_eig)
    return lambda t: t * p_hI


def mu2_closed(
    split: SplitHamiltonian, m: int, tol: float = DEFAULT_RESONANCE_TOL
) -> Callable[[float], np.ndarray]:
    """Second Dyson moment mu_2(t) = P(hI phi(t [h0, .]) hI), closed form."""
    frame = moment_frame(split, m, tol)

    def evaluate(t: float) -> np.ndarray:
        weighted = frame.hI_eig * spectral_function(frame.delta, t, "phi")
        return frame.project_eig(frame.hI_eig @ weighted)

    return evaluate


def _gauss_legendre(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    # map from [-1, 1] to [0, 1]
    return (x + 1) / 2, w / 2


def mu_k_quadrature(
    split: SplitHamiltonian,
    m: int,
    k: int,
    t: float,
    tol: float = DEFAULT_RESONANCE_TOL,
    nodes: int = 64,
) -> np.ndarray:
    """Dyson moment mu_k(t) by nested Gauss-Legendre over the ordered simplex.

    Independent of the closed forms; supported for k in {1, 2, 3}.
    """
    if k not in (1, 2, 3):
        raise UnsupportedOrder(f"quadrature implemented for k <= 3, got {k}")
    if nodes < 16:
        raise ValueError("nodes must be >= 16")
    frame = moment_frame(split, m, tol)
    x01, w01 = _gauss_legendre(nodes)

    def nested(depth: int, upper: float) -> np.ndarray:
        # integral over 0 <= t_1 <= ... <= t_depth <= upper of
        # hI(t_depth) ... hI(t_1), in the eigenbasis
        if depth == 0:
            return np.eye(len(frame.delta), dtype=complex)
        acc = np.zeros((len(frame.delta),) * 2, dtype=complex)
        for xi, wi in zip(upper * x01, upper * w01):
            acc += wi * (frame.hI_at(xi) @ nested(depth - 1, xi))
        return acc

    return frame.project_eig(nested(k, t))


@dataclass(frozen=True)
class TimeLocalGenerator:
    """Generator l(t) = h0 + coupling * kappa1 + coupling^2 * kappa2(t)."""

    h0: np.ndarray
    kappa1: np.ndarray
    kappa2_of_t: Callable[[float], np.ndarray]
    coupling: float

    def at(self, t: float, order: int) -> np.ndarray:
        if order not in (1, 2):
            raise UnsupportedOrder(f"time-local generator truncation order {order}")
        l = self.h0 + self.coupling * self.kappa1
        if order == 2:
            l = l + self.coupling**2 * self.kappa2_of_t(t)
        return l


def kappa12(
    split: SplitHamiltonian, m: int, tol: float = DEFAULT_RESONANCE_TOL
) -> TimeLocalGenerator:
    """First two cumulants: kappa1 = P(hI),
    kappa2(t) = P(hI psi(t [h0, .]) hI) - t (P(hI))^2."""
    frame = moment_frame(split, m, tol)
    kappa1 = frame.project_eig(frame.hI_eig)

    def kappa2(t: float) -> np.ndarray:
        weighted = frame.hI_eig * spectral_function(frame.delta, t, "psi")
        return frame.project_eig(frame.hI_eig @ weighted) - t * (kappa1 @ kappa1)

    return TimeLocalGenerator(
        h0=frame.h0(), kappa1=kappa1, kappa2_of_t=kappa2, coupling=split.coupling
    )


def _compositions(k: int):
    """All tuples of positive integers summing to k, in lexicographic order."""
    if k == 0:
        yield ()
        return
    for first in range(1, k + 1):
        for rest in _compositions(k - first):
            yield (first,) + rest


def general_kappa(
    split: SplitHamiltonian,
    m: int,
    k: int,
    t: float,
    tol: float = DEFAULT_RESONANCE_TOL,
    nodes: int = 32,
) -> np.ndarray:
    """Cumulant kappa_k(t) assembled from quadrature moments.

    kappa_k = sum over compositions (k0, .., kq) of k with positive parts of
    (-1)^q mudot_{k0} mu_{k1} ... mu_{kq}; the derivative mudot uses central
    finite differences on the quadrature moments.  Cross-check only; k <= 3.
    """
    if k not in (1, 2, 3):
        raise UnsupportedOrder(f"general_kappa implemented for k <= 3, got {k}")
    step = abs(t) * 1e-5 if t != 0 else 1e-5
    cache: dict[tuple[int, float], np.ndarray] = {}

    def mu(j: int, tau: float) -> np.ndarray:
        key = (j, tau)
        if key not in cache:
            cache[key] = mu_k_quadrature(split, m, j, tau, tol, nodes)
        return cache[key]

    def mudot(j: int, tau: float) -> np.ndarray:
        return (mu(j, tau + step) - mu(j, tau - step)) / (2 * step)

    dim = mu(1, t).shape[0]
    total = np.zeros((dim, dim), dtype=complex)
    for parts in _compositions(k):
        q = len(parts) - 1
        term = mudot(parts[0], t)
        for kj in parts[1:]:
            term = term @ mu(kj, t)
        total += (-1) ** q * term
    return total
