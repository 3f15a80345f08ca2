"""Oracle cross-checks between the matrix-level reduction and the exact
Fock-space computation, packaged for both the test suite and the CLI
`verify` command.  Every check returns its worst residual; thresholds are
applied by the caller.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg
from .errors import TooManyModes
from .fermion import (
    FermionHamiltonian,
    SplitHamiltonian,
    exchange_matrix,
    tilde_conjugate,
    validate_fermion,
)
from .fock import (
    averaged_unitary_moments,
    check_heisenberg_reduction,
    jordan_wigner,
    project_superoperator,
    quadratize,
    unitary_conjugation_superoperator,
)
from .perturbation import moment_frame
from .projector import (
    effective_propagator,
    free_moment_generator_hermitian,
    project_with,
    resonance_partition,
)

STATIONARITY_PAIRS = ((0.2, 0.9), (1.3, 0.4))


def random_valid_fermion(n: int, rng: np.random.Generator, scale: float = 1.0) -> FermionHamiltonian:
    """Random coefficient matrix made valid by antisymmetrize-then-tilde-project."""
    A = scale * (rng.standard_normal((2 * n, 2 * n)) + 1j * rng.standard_normal((2 * n, 2 * n)))
    A = (A - A.T) / 2
    A = (A - tilde_conjugate(A, n)) / 2
    return validate_fermion(A, n)


def random_complex(dim: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def heisenberg_reduction_residual(split: SplitHamiltonian, rng: np.random.Generator,
                    samples: int = 5, times=(0.3, 1.0, 2.5)) -> float:
    """Heisenberg-matrix reduction against the Fock oracle, random valid H."""
    rep = jordan_wigner(split.n)
    worst = 0.0
    for _ in range(samples):
        H = random_valid_fermion(split.n, rng)
        for t in times:
            worst = max(worst, check_heisenberg_reduction(H, rep, t))
    return worst


def matrix_projector_law_residuals(
    split: SplitHamiltonian, m: int, rng: np.random.Generator,
    samples: int = 20, tol: float = 1e-9,
) -> dict:
    """Idempotency, commutation with free evolution, pulling, linearity."""
    M0 = free_moment_generator_hermitian(split, m)
    part = resonance_partition(M0, tol)
    dim = M0.shape[0]
    res = {"idempotency": 0.0, "commutation": 0.0, "pulling": 0.0, "linearity": 0.0}
    for _ in range(samples):
        X = random_complex(dim, rng)
        PX = project_with(X, part)
        res["idempotency"] = max(res["idempotency"], linalg.max_abs(project_with(PX, part) - PX))
        for t in (0.3, 1.7):
            U = linalg.matrix_exponential(1j * t * M0)  # exp(-h0 t)
            res["commutation"] = max(res["commutation"], linalg.max_abs(PX @ U - U @ PX))
            res["pulling"] = max(
                res["pulling"], linalg.max_abs(project_with(U @ X, part) - U @ PX)
            )
        Y = random_complex(dim, rng)
        alpha, beta = 0.7 - 0.2j, -1.1 + 0.4j
        res["linearity"] = max(
            res["linearity"],
            linalg.max_abs(
                project_with(alpha * X + beta * Y, part)
                - alpha * PX - beta * project_with(Y, part)
            ),
        )
    return res


def superoperator_law_residuals(
    split: SplitHamiltonian, rng: np.random.Generator, samples: int = 10
) -> dict:
    """Fock-level projection laws on random superoperators."""
    rep = jordan_wigner(split.n)
    H0hat = quadratize(split.base, rep)
    d = rep.dim
    res = {"idempotency": 0.0, "commutation": 0.0, "pulling": 0.0}
    for _ in range(samples):
        Phi = random_complex(d * d, rng)
        PPhi = project_superoperator(Phi, H0hat)
        res["idempotency"] = max(
            res["idempotency"], linalg.max_abs(project_superoperator(PPhi, H0hat) - PPhi)
        )
        for t in (0.3, 1.7):
            U = linalg.matrix_exponential(1j * t * H0hat)
            F = unitary_conjugation_superoperator(U)
            res["commutation"] = max(res["commutation"], linalg.max_abs(PPhi @ F - F @ PPhi))
            res["pulling"] = max(
                res["pulling"],
                linalg.max_abs(project_superoperator(F @ Phi, H0hat) - F @ PPhi),
            )
    return res


def operator_products(rep, m: int) -> list:
    """Fock matrices of c_{j1} ... c_{jm} for every multi-index, kron order."""
    ops = rep.operator_vector
    products = []
    for multi in itertools.product(range(len(ops)), repeat=m):
        prod = np.eye(rep.dim, dtype=complex)
        for j in multi:
            prod = prod @ ops[j]
        products.append(prod)
    return products


def moment_equivalence_residual(split: SplitHamiltonian, m: int, t: float, tol: float = 1e-9) -> float:
    """Core equivalence: matrix-level averaged moment propagator applied to
    the operator tensor versus the Fock-oracle averaged conjugation."""
    if split.n > 3:
        raise TooManyModes("oracle comparison limited to n <= 3")
    rep = jordan_wigner(split.n)
    Hhat = quadratize(split.total(), rep)
    H0hat = quadratize(split.base, rep)
    W = effective_propagator(split, m, t, tol)
    products = operator_products(rep, m)
    ops = rep.operator_vector
    worst = 0.0
    for row, multi in enumerate(itertools.product(range(len(ops)), repeat=m)):
        oracle = averaged_unitary_moments(Hhat, H0hat, [ops[j] for j in multi], t)
        approx = sum(W[row, col] * products[col] for col in range(len(products)))
        worst = max(worst, linalg.max_abs(oracle - approx))
    return worst


def stationarity_residual(
    split: SplitHamiltonian, m: int, pairs=STATIONARITY_PAIRS, tol: float = 1e-9
) -> float:
    """P(hI(t2) hI(t1)) = P(hI hI(t1 - t2))."""
    frame = moment_frame(split, m, tol)
    worst = 0.0
    for t1, t2 in pairs:
        lhs = frame.project_eig(frame.hI_at(t2) @ frame.hI_at(t1))
        rhs = frame.project_eig(frame.hI_eig @ frame.hI_at(t1 - t2))
        worst = max(worst, linalg.max_abs(lhs - rhs))
    return worst


DEFAULT_THRESHOLDS = {
    "heisenberg_reduction": 1e-10,
    "matrix_laws": 1e-10,
    "superoperator_laws": 1e-10,
    "moment_equivalence": 1e-8,
    "stationarity": 1e-10,
}


def run_verification(split: SplitHamiltonian, m: int, seed: int = 0,
                     resonance_tol: float = 1e-9, thresholds: dict | None = None,
                     times=(0.5, 1.0)) -> dict:
    """Full oracle cross-check suite; returns per-check residuals and verdicts."""
    if split.n > 3:
        raise TooManyModes("verification requires n <= 3")
    thr = dict(DEFAULT_THRESHOLDS)
    if thresholds:
        thr.update(thresholds)
    rng = np.random.default_rng(seed)
    # the 4^n-dimensional superoperator checks get expensive at n=3
    superop_samples = 10 if split.n <= 2 else 2
    residuals = {
        "heisenberg_reduction": heisenberg_reduction_residual(split, rng),
        "matrix_laws": max(
            matrix_projector_law_residuals(split, m, rng, tol=resonance_tol).values()
        ),
        "superoperator_laws": max(
            superoperator_law_residuals(split, rng, samples=superop_samples).values()
        ),
        "moment_equivalence": max(moment_equivalence_residual(split, m, t, resonance_tol) for t in times),
        "stationarity": stationarity_residual(split, m, tol=resonance_tol),
    }
    checks = {
        name: {"residual": residuals[name], "threshold": thr[name],
               "pass": bool(residuals[name] <= thr[name])}
        for name in residuals
    }
    return {"checks": checks, "all_pass": all(c["pass"] for c in checks.values())}
