"""Model configuration parsing and the complex-matrix JSON conventions.

Matrices travel as row-major nested arrays of [re, im] pairs.  Hamiltonian
specs are either a raw matrix or a builder: {"frequencies": [...]} for free
modes, {"hopping": [{"j":, "k":, "g":}, ...]} for hopping terms.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .boson import BosonHamiltonian, validate_boson
from .errors import ConfigError, EffheisError
from .fermion import FermionHamiltonian, SplitHamiltonian, diagonal_modes, hopping, validate_fermion

DEFAULT_TOLERANCES = {"resonance": 1e-9, "report": None}


def encode_matrix(M: np.ndarray) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed matrix entries: {exc}") from exc
    if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 2:
        raise ConfigError(f"matrix must be square with [re, im] entries, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _build_fermion(spec, n: int) -> FermionHamiltonian:
    if not isinstance(spec, dict):
        raise ConfigError("Hamiltonian spec must be an object")
    keys = set(spec) & {"matrix", "frequencies", "hopping"}
    if len(keys) != 1:
        raise ConfigError("Hamiltonian spec needs exactly one of matrix/frequencies/hopping")
    if "matrix" in spec:
        return validate_fermion(decode_matrix(spec["matrix"]), n)
    if "frequencies" in spec:
        omega = spec["frequencies"]
        if len(omega) != n:
            raise ConfigError(f"expected {n} frequencies, got {len(omega)}")
        return diagonal_modes(omega)
    H = np.zeros((2 * n, 2 * n), dtype=complex)
    for term in spec["hopping"]:
        H = H + hopping(n, int(term["j"]), int(term["k"]), float(term["g"])).H
    return validate_fermion(H, n)


def _build_boson_matrix(spec, n: int) -> np.ndarray:
    if "matrix" in spec:
        return decode_matrix(spec["matrix"])
    if "frequencies" in spec:
        omega = np.asarray(spec["frequencies"], dtype=float)
        if len(omega) != n:
            raise ConfigError(f"expected {n} frequencies, got {len(omega)}")
        W = np.diag(omega).astype(complex)
        zero = np.zeros((n, n), dtype=complex)
        return np.block([[zero, W], [W, zero]])
    raise ConfigError("boson Hamiltonian spec needs matrix or frequencies")


@dataclass(frozen=True)
class ModelConfig:
    n: int
    m: int
    coupling: float
    H0_spec: Optional[dict]
    HI_spec: Optional[dict]
    grid_t_end: float
    grid_steps: int
    tolerances: dict
    seed: int
    boson: Optional[dict]
    raw: dict = field(repr=False)

    @property
    def resonance_tol(self) -> float:
        return float(self.tolerances.get("resonance", 1e-9))

    @property
    def report_tol(self) -> Optional[float]:
        value = self.tolerances.get("report")
        return None if value is None else float(value)

    def digest(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def split(self) -> SplitHamiltonian:
        if self.H0_spec is None or self.HI_spec is None:
            raise ConfigError("config has no fermionic H0/HI specs")
        base = _build_fermion(self.H0_spec, self.n)
        interaction = _build_fermion(self.HI_spec, self.n)
        return SplitHamiltonian(base=base, interaction=interaction, coupling=self.coupling)

    def boson_h0(self) -> BosonHamiltonian:
        if self.boson is None or "H0" not in self.boson:
            raise ConfigError("config has no boson section")
        return validate_boson(_build_boson_matrix(self.boson["H0"], self.n), self.n)


def parse_config(data: dict) -> ModelConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    try:
        n = int(data["n"])
    except KeyError:
        raise ConfigError("config is missing 'n'")
    if n < 1:
        raise ConfigError("n must be >= 1")
    m = int(data.get("m", 1))
    if m < 1:
        raise ConfigError("m must be >= 1")
    coupling = data.get("lambda", 0.0)
    if isinstance(coupling, bool) or not isinstance(coupling, (int, float)):
        raise ConfigError("lambda must be real")
    grid = data.get("grid", {})
    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(data.get("tolerances", {}))
    return ModelConfig(
        n=n,
        m=m,
        coupling=float(coupling),
        H0_spec=data.get("H0"),
        HI_spec=data.get("HI"),
        grid_t_end=float(grid.get("t_end", 1.0)),
        grid_steps=int(grid.get("steps", 200)),
        tolerances=tolerances,
        seed=int(data.get("seed", 0)),
        boson=data.get("boson"),
        raw=data,
    )


def load_config(path: str) -> ModelConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(data)
