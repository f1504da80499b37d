"""Sector bases and initial coherent states for the spinor BEC and LMG models."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

SPINOR_KINDS = ("static-bec", "driven-bec")
MODEL_KINDS = SPINOR_KINDS + ("lmg",)


class Family(str, Enum):
    SPINOR = "spinor"
    LMG = "lmg"


@dataclass(frozen=True, eq=False)
class SectorBasis:
    """Eigenbasis of the position-like observable in one symmetry sector.

    Labels are the eigenvalues of X: n0 = 0, 2, ..., N for the spinor BEC
    (M = 0, even parity) and n = -N/2, ..., N/2 for the LMG model.
    """

    family: Family
    N: int
    labels: np.ndarray = field(repr=False)
    step: int

    @property
    def dim(self) -> int:
        return self.labels.shape[0]

    @property
    def delta_D(self) -> float:
        return 0.5 * float(self.labels[-1] - self.labels[0])

    @property
    def delta_ave(self) -> float:
        return 0.5 * float(self.labels[-1] + self.labels[0])

    @property
    def x(self) -> np.ndarray:
        """Labels mapped onto the scaled coordinate in [-1, 1]."""
        return (self.labels - self.delta_ave) / self.delta_D

    @property
    def dx(self) -> float:
        """Label spacing in scaled units, i.e. step / delta_D."""
        return self.step / self.delta_D

    def index_of(self, label: float) -> int:
        i = int(round((label - self.labels[0]) / self.step))
        if not (0 <= i < self.dim) or self.labels[i] != label:
            raise ValueError(f"label {label} not in basis")
        return i

    def __eq__(self, other) -> bool:
        if not isinstance(other, SectorBasis):
            return NotImplemented
        return self.family == other.family and self.N == other.N

    def __hash__(self) -> int:
        return hash((self.family, self.N))


@dataclass(frozen=True)
class QuantumState:
    basis: SectorBasis
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def spinor_sector_basis(N: int) -> SectorBasis:
    if int(N) != N or N < 2 or N % 2:
        raise ValueError(f"spinor sector needs an even N >= 2, got {N}")
    N = int(N)
    labels = np.arange(0, N + 1, 2, dtype=np.float64)
    labels.setflags(write=False)
    return SectorBasis(Family.SPINOR, N, labels, 2)


def lmg_basis(N: int) -> SectorBasis:
    if int(N) != N or N < 1:
        raise ValueError(f"LMG basis needs a positive integer N, got {N}")
    N = int(N)
    labels = np.arange(N + 1, dtype=np.float64) - N / 2
    labels.setflags(write=False)
    return SectorBasis(Family.LMG, N, labels, 1)


def _normalized(log_mag: np.ndarray, phase: np.ndarray) -> np.ndarray:
    # amplitudes kept as log|c| + phase until the end so large N cannot overflow
    log_mag = log_mag - np.max(log_mag)
    amp = np.exp(log_mag) * np.exp(1j * phase)
    return amp / np.sqrt(np.sum(np.abs(amp) ** 2))


def spinor_coherent_state(basis: SectorBasis, rho0: float, theta: float = 0.0) -> QuantumState:
    """Mean-field coherent state |rho0, theta> projected onto the M = 0 sector.

    Built by the downward recursion from the n0 = N coefficient; rho0 = 0 and
    rho0 = 1 give the single basis states |0> and |N>.
    """
    if basis.family is not Family.SPINOR:
        raise ValueError("spinor coherent state needs a spinor basis")
    if not 0.0 <= rho0 <= 1.0:
        raise ValueError(f"rho0 must lie in [0, 1], got {rho0}")
    dim = basis.dim
    if rho0 in (0.0, 1.0):
        amp = np.zeros(dim, dtype=complex)
        amp[0 if rho0 == 0.0 else -1] = 1.0
        return QuantumState(basis, amp)

    N = basis.N
    n0 = basis.labels.astype(np.int64)
    # log of the ratio |c_{n0-2} / c_{n0}| for n0 = N, N-2, ..., 2
    top = n0[1:][::-1]
    log_ratio = (
        np.log(2.0)
        + 0.5 * (np.log(top) + np.log(top - 1))
        - np.log(N - top + 2)
        + np.log((1.0 - rho0) / (2.0 * rho0))
    )
    log_mag = np.empty(dim)
    log_mag[-1] = 0.0
    log_mag[:-1] = np.cumsum(log_ratio)[::-1]
    # each step down multiplies by exp(-2i theta)
    phase = -theta * (N - n0)
    return QuantumState(basis, _normalized(log_mag, phase))


def lmg_coherent_state(basis: SectorBasis, z: float, phi: float = 0.0) -> QuantumState:
    """Spin coherent state |z, phi> of the LMG model."""
    if basis.family is not Family.LMG:
        raise ValueError("LMG coherent state needs an LMG basis")
    if not -1.0 <= z <= 1.0:
        raise ValueError(f"z must lie in [-1, 1], got {z}")
    dim = basis.dim
    if abs(z) == 1.0:
        amp = np.zeros(dim, dtype=complex)
        amp[-1 if z == 1.0 else 0] = 1.0
        return QuantumState(basis, amp)

    half = basis.N / 2
    n = basis.labels
    top = n[1:][::-1]
    log_ratio = 0.5 * (np.log(half + top) - np.log(half - top + 1)) + 0.5 * np.log(
        (1.0 - z) / (1.0 + z)
    )
    log_mag = np.empty(dim)
    log_mag[-1] = 0.0
    log_mag[:-1] = np.cumsum(log_ratio)[::-1]
    phase = -phi * (half - n)
    return QuantumState(basis, _normalized(log_mag, phase))


def cat_state(basis: SectorBasis) -> QuantumState:
    if basis.dim < 2:
        raise ValueError("cat state needs at least two basis states")
    amp = np.zeros(basis.dim, dtype=complex)
    amp[0] = amp[-1] = 1.0 / np.sqrt(2.0)
    return QuantumState(basis, amp)


def basis_state(basis: SectorBasis, label: float) -> QuantumState:
    amp = np.zeros(basis.dim, dtype=complex)
    amp[basis.index_of(label)] = 1.0
    return QuantumState(basis, amp)
