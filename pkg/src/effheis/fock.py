"""Brute-force ground truth on the full 2^n-dimensional Fock space:
Jordan-Wigner fermion operators, quadratic-form Hamiltonians, the
superoperator-level averaging projection, and the exactly averaged unitary
conjugation of operator products.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import DimensionMismatch, TooManyModes
from .fermion import FermionHamiltonian, heisenberg_matrix

MAX_MODES = 6
MAX_SUPEROP_MODES = 3
CLUSTER_TOL = 1e-9

_SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class FockRep:
    """Jordan-Wigner representation of n fermionic modes on dim 2^n."""

    n: int
    annihilators: tuple

    @property
    def dim(self) -> int:
        return 2**self.n

    @property
    def creators(self) -> tuple:
        return tuple(c.conj().T for c in self.annihilators)

    @property
    def operator_vector(self) -> tuple:
        """The 2n-component vector (c_1..c_n, c_1^dag..c_n^dag)."""
        return self.annihilators + self.creators


@lru_cache(maxsize=None)
def jordan_wigner(n: int) -> FockRep:
    """Build fermion operators with the string on modes 1..j-1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_MODES:
        raise TooManyModes(f"n={n} exceeds Fock-space cap {MAX_MODES}")
    ops = []
    for j in range(n):
        factors = [_SIGMA_Z] * j + [_SIGMA_MINUS] + [np.eye(2, dtype=complex)] * (n - j - 1)
        c = factors[0]
        for f in factors[1:]:
            c = np.kron(c, f)
        ops.append(c)
    return FockRep(n=n, annihilators=tuple(ops))


def quadratize(K: FermionHamiltonian, rep: FockRep) -> np.ndarray:
    """Fock-space Hamiltonian (1/2) c^T K c; Hermitian for valid K."""
    if K.n != rep.n:
        raise DimensionMismatch("mode counts differ")
    ops = rep.operator_vector
    H = np.zeros((rep.dim, rep.dim), dtype=complex)
    for a in range(2 * K.n):
        for b in range(2 * K.n):
            if K.H[a, b] != 0:
                H += 0.5 * K.H[a, b] * (ops[a] @ ops[b])
    return H


@dataclass(frozen=True)
class SpectralProjectors:
    """Clustered eigenvalues of a Hermitian operator with their projectors."""

    eigenvalues: np.ndarray  # one representative per cluster
    projectors: tuple

    def __len__(self) -> int:
        return len(self.eigenvalues)


def spectral_projectors(H0hat: np.ndarray, tol: float = CLUSTER_TOL) -> SpectralProjectors:
    eig = linalg.hermitian_eigendecompose(H0hat)
    w, V = eig.eigenvalues, eig.basis
    spread = float(w[-1] - w[0]) if len(w) > 1 else 0.0
    gap = tol * (1.0 + spread)
    values, projectors = [], []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > gap:
            block = V[:, start:i]
            values.append(float(np.mean(w[start:i])))
            projectors.append(block @ block.conj().T)
            start = i
    return SpectralProjectors(eigenvalues=np.array(values), projectors=tuple(projectors))


def _check_superop_modes(dim: int):
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    if n > MAX_SUPEROP_MODES:
        raise TooManyModes(f"n={n} exceeds superoperator cap {MAX_SUPEROP_MODES}")


def project_superoperator(
    Phi: np.ndarray, H0hat: np.ndarray, tol: float = CLUSTER_TOL
) -> np.ndarray:
    """Averaging projection of a superoperator given as a dim-4^n matrix.

    Uses column-stacking vec so that the map Z -> A Z B is (B^T kron A);
    sums Pi_1 Phi(Pi_2 . Pi_3) Pi_4 over eigenvalue quadruples with
    e1 - e2 + e3 - e4 = 0 within the clustering tolerance.
    """
    H0hat = linalg.as_matrix(H0hat)
    d = H0hat.shape[0]
    _check_superop_modes(d)
    Phi = linalg.as_matrix(Phi)
    if Phi.shape[0] != d * d:
        raise DimensionMismatch(f"superoperator dim {Phi.shape[0]} != {d * d}")
    spec = spectral_projectors(H0hat, tol)
    e = spec.eigenvalues
    spread = float(e.max() - e.min()) if len(e) > 1 else 0.0
    gap = tol * (1.0 + spread)
    out = np.zeros_like(Phi)
    for i1, P1 in enumerate(spec.projectors):
        for i2, P2 in enumerate(spec.projectors):
            for i3, P3 in enumerate(spec.projectors):
                for i4, P4 in enumerate(spec.projectors):
                    if abs(e[i1] - e[i2] + e[i3] - e[i4]) <= gap:
                        out += np.kron(P4.T, P1) @ Phi @ np.kron(P3.T, P2)
    return out


def unitary_conjugation_superoperator(U: np.ndarray) -> np.ndarray:
    """Matrix (column-stacking vec) of Z -> U Z U^dag."""
    return np.kron(U.conj(), U)


def averaged_unitary_moments(
    Hhat: np.ndarray,
    H0hat: np.ndarray,
    operators,
    t: float,
    tol: float = CLUSTER_TOL,
    numeric: bool = False,
    numeric_T: float = 200.0,
    numeric_steps: int = 20000,
) -> np.ndarray:
    """Long-time average of X_1(s;t) ... X_m(s;t) over the free-frame shift s,
    where X_k(s;t) conjugates X_k by exp(i Hhat(s) t).

    Evaluated exactly by Bohr-frequency decomposition: with M = exp(i Hhat t)
    and X the operator product, the average equals
    sum over projector pairs (a,b), (c,d) of Hhat_0 with
    (e_a - e_b) + (e_c - e_d) = 0 of  Pi_a M Pi_b X Pi_c M^dag Pi_d.
    The numeric flag switches to a finite-T trapezoidal s-average (sanity
    check only; slowly convergent).
    """
    H0hat = linalg.as_matrix(H0hat)
    Hhat = linalg.as_matrix(Hhat)
    _check_superop_modes(H0hat.shape[0])
    X = np.eye(H0hat.shape[0], dtype=complex)
    for op in operators:
        X = X @ linalg.as_matrix(op)
    M = linalg.matrix_exponential(1j * t * Hhat)
    if numeric:
        s_grid = np.linspace(0.0, numeric_T, numeric_steps)
        eig0 = linalg.hermitian_eigendecompose(H0hat)
        acc = np.zeros_like(X)
        for idx, s in enumerate(s_grid):
            Us = (eig0.basis * np.exp(1j * eig0.eigenvalues * s)) @ eig0.basis.conj().T
            Ms = Us.conj().T @ M @ Us
            weight = 0.5 if idx in (0, len(s_grid) - 1) else 1.0
            acc += weight * (Ms @ X @ Ms.conj().T)
        return acc / (numeric_steps - 1)
    spec = spectral_projectors(H0hat, tol)
    e = spec.eigenvalues
    spread = float(e.max() - e.min()) if len(e) > 1 else 0.0
    gap = tol * (1.0 + spread)
    out = np.zeros_like(X)
    for a, Pa in enumerate(spec.projectors):
        for b, Pb in enumerate(spec.projectors):
            left = Pa @ M @ Pb
            for c, Pc in enumerate(spec.projectors):
                for d_, Pd in enumerate(spec.projectors):
                    if abs((e[a] - e[b]) + (e[c] - e[d_])) <= gap:
                        out += left @ X @ (Pc @ M.conj().T @ Pd)
    return out


def check_heisenberg_reduction(H: FermionHamiltonian, rep: FockRep, t: float) -> float:
    """Max residual of exp(iHhat t) c_a exp(-iHhat t) = sum_b O(t)_ab c_b."""
    if H.n != rep.n:
        raise DimensionMismatch("mode counts differ")
    Hhat = quadratize(H, rep)
    U = linalg.matrix_exponential(1j * t * Hhat)
    O = heisenberg_matrix(H, t)
    ops = rep.operator_vector
    worst = 0.0
    for a in range(2 * H.n):
        lhs = U @ ops[a] @ U.conj().T
        rhs = sum(O[a, b] * ops[b] for b in range(2 * H.n))
        worst = max(worst, linalg.max_abs(lhs - rhs))
    return worst
