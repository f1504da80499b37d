"""Sector Hamiltonians as real symmetric tridiagonal operators."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hilbert import Family, SectorBasis


@dataclass(frozen=True)
class TridiagonalOperator:
    basis: SectorBasis
    diag: np.ndarray = field(repr=False)
    offdiag: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.diag.shape != (self.basis.dim,) or self.offdiag.shape != (self.basis.dim - 1,):
            raise ValueError("operator shape does not match basis")
        if not (np.all(np.isfinite(self.diag)) and np.all(np.isfinite(self.offdiag))):
            raise ValueError("non-finite matrix element")

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def expectation(self, amplitudes: np.ndarray) -> float:
        return float(np.real(np.vdot(amplitudes, self.matvec(amplitudes))))


# Parameter records. These are what a run config names; the builders below
# take plain numbers.


@dataclass(frozen=True)
class StaticBEC:
    c: float
    q: float
    rho0_init: float
    theta_init: float = 0.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"interaction c must be positive, got {self.c}")


@dataclass(frozen=True)
class DrivenBEC:
    G0: float
    Gj: float
    rho0_init: float
    theta_init: float = 0.0

    def __post_init__(self):
        if not self.G0 > 0:
            raise ValueError(f"G0 must be positive, got {self.G0}")
        if not 0.0 <= self.eta < 2.0:
            raise ValueError(f"eta = Gj/G0 must lie in [0, 2), got {self.eta}")

    @property
    def eta(self) -> float:
        return self.Gj / self.G0


@dataclass(frozen=True)
class LMG:
    chi: float
    z_init: float
    phi_init: float = 0.0
    Omega: float = 1.0

    def __post_init__(self):
        if not self.chi >= 0:
            raise ValueError(f"chi must be nonnegative, got {self.chi}")


def _require(basis: SectorBasis, family: Family) -> None:
    if basis.family is not family:
        raise ValueError(f"expected a {family.value} basis, got {basis.family.value}")


def _pair_hopping(basis: SectorBasis) -> np.ndarray:
    # <n0+2| a0+ a0+ a1 a-1 |n0> in the M = 0 sector, n1 = n-1 = (N - n0)/2
    n0 = basis.labels[:-1]
    return 0.5 * (basis.N - n0) * np.sqrt((n0 + 1.0) * (n0 + 2.0))


def build_static_spinor_hamiltonian(basis: SectorBasis, c: float, q: float) -> TridiagonalOperator:
    _require(basis, Family.SPINOR)
    N = basis.N
    n0 = basis.labels
    diag = (c / N) * n0 * (N - n0) + q * (N - n0)
    offdiag = (c / N) * _pair_hopping(basis)
    return TridiagonalOperator(basis, diag, offdiag)


def build_driven_spinor_hamiltonian(basis: SectorBasis, G0: float, Gj: float) -> TridiagonalOperator:
    """Effective near-resonance Hamiltonian of the periodically driven BEC with
    the residual Zeeman shift set to zero."""
    _require(basis, Family.SPINOR)
    N = basis.N
    n0 = basis.labels
    diag = (G0 / N) * n0 * (N - n0)
    offdiag = (Gj / (2.0 * N)) * _pair_hopping(basis)
    return TridiagonalOperator(basis, diag, offdiag)


def build_lmg_hamiltonian(basis: SectorBasis, chi: float, Omega: float = 1.0) -> TridiagonalOperator:
    """H = (2 chi / N) Jz^2 - 2 Omega Jx in the Jz eigenbasis."""
    _require(basis, Family.LMG)
    N = basis.N
    n = basis.labels
    diag = (2.0 * chi / N) * n**2
    m = n[:-1]
    offdiag = -Omega * np.sqrt((N / 2 - m) * (N / 2 + m + 1))
    return TridiagonalOperator(basis, diag, offdiag)


def position_observable(basis: SectorBasis) -> np.ndarray:
    """Eigenvalues of X (n0 for the spinor BEC, Jz for LMG)."""
    return basis.labels


def build_hamiltonian(basis: SectorBasis, params) -> TridiagonalOperator:
    if isinstance(params, StaticBEC):
        return build_static_spinor_hamiltonian(basis, params.c, params.q)
    if isinstance(params, DrivenBEC):
        return build_driven_spinor_hamiltonian(basis, params.G0, params.Gj)
    if isinstance(params, LMG):
        return build_lmg_hamiltonian(basis, params.chi, params.Omega)
    raise TypeError(f"unknown parameter record {type(params).__name__}")
