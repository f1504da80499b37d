"""Exact time evolution in the energy eigenbasis and long-time averages of the
occupation probabilities."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .hilbert import Family, QuantumState
from .models import TridiagonalOperator
from .numerics import EigenSystem

CHUNK = 256


class UndefinedValueError(ArithmeticError):
    pass


@dataclass(frozen=True)
class TimeGrid:
    dt: float
    steps: int
    t0: float = 0.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps}")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.steps)


@dataclass(frozen=True)
class LtaEstimate:
    pbar: np.ndarray = field(repr=False)
    estimator: str  # "time-average" | "diagonal-ensemble"
    grid: Optional[TimeGrid] = None


@dataclass
class Trajectory:
    """Quantities accumulated over one pass through a time grid."""

    grid: TimeGrid
    pbar: np.ndarray
    pair_avg: Optional[np.ndarray] = None  # avg_t P(x_i, t) P(x_j, t)
    qfi: Optional[np.ndarray] = None  # F_Q(t) at every sample
    norm_error: float = 0.0  # max | ||psi(t)|| - 1 |
    energy: Optional[np.ndarray] = None  # <H>(t) at every sample


def _check_basis(eig: EigenSystem, psi0: QuantumState) -> None:
    if eig.dim != psi0.basis.dim:
        raise ValueError(
            f"eigensystem dimension {eig.dim} does not match state basis {psi0.basis.dim}"
        )


def eigen_coefficients(eig: EigenSystem, psi0: QuantumState) -> np.ndarray:
    _check_basis(eig, psi0)
    return eig.eigenvectors.T @ psi0.amplitudes


def evolve(eig: EigenSystem, psi0: QuantumState, t: float) -> QuantumState:
    """|psi(t)> = sum_k exp(-i E_k t) <k|psi0> |k>."""
    coeff = eigen_coefficients(eig, psi0)
    amp = eig.eigenvectors @ (np.exp(-1j * eig.eigenvalues * t) * coeff)
    return QuantumState(psi0.basis, amp)


def probability_snapshot(state: QuantumState) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def sample(
    eig: EigenSystem,
    psi0: QuantumState,
    grid: TimeGrid,
    X: Optional[np.ndarray] = None,
    pairs: bool = False,
    hamiltonian: Optional[TridiagonalOperator] = None,
) -> Trajectory:
    """Sweep the time grid once, accumulating everything the averages need.

    Chunks are processed in a fixed order, so results are reproducible.
    """
    coeff = eigen_coefficients(eig, psi0)
    V = eig.eigenvectors
    E = eig.eigenvalues
    dim = eig.dim
    times = grid.times

    psum = np.zeros(dim)
    pair_sum = np.zeros((dim, dim)) if pairs else None
    qfi = np.empty(grid.steps) if X is not None else None
    energy = np.empty(grid.steps) if hamiltonian is not None else None
    if X is not None:
        X = np.asarray(X, dtype=np.float64)
    norm_error = 0.0

    for start in range(0, grid.steps, CHUNK):
        t = times[start : start + CHUNK]
        rot = np.exp(-1j * np.outer(t, E)) * coeff
        re = rot.real @ V.T
        im = rot.imag @ V.T
        P = re**2 + im**2
        psum += P.sum(axis=0)
        norm_error = max(norm_error, float(np.max(np.abs(np.sqrt(P.sum(axis=1)) - 1.0))))
        if pairs:
            pair_sum += P.T @ P
        if X is not None:
            mean = (P @ X) / P.sum(axis=1)
            centered = (X[None, :] - mean[:, None]) ** 2
            qfi[start : start + len(t)] = 4.0 * np.sum(P * centered, axis=1)
        if hamiltonian is not None:
            d, o = hamiltonian.diag, hamiltonian.offdiag
            e = np.sum(d * P, axis=1)
            e += 2.0 * np.sum(o * (re[:, :-1] * re[:, 1:] + im[:, :-1] * im[:, 1:]), axis=1)
            energy[start : start + len(t)] = e

    n = grid.steps
    return Trajectory(
        grid=grid,
        pbar=psum / n,
        pair_avg=pair_sum / n if pairs else None,
        qfi=qfi,
        norm_error=norm_error,
        energy=energy,
    )


def lta_distribution_time_avg(eig: EigenSystem, psi0: QuantumState, grid: TimeGrid) -> LtaEstimate:
    traj = sample(eig, psi0, grid)
    return LtaEstimate(traj.pbar, "time-average", grid)


def degenerate_blocks(eigenvalues: np.ndarray, rtol: float = 1e-10) -> list[np.ndarray]:
    """Group (sorted) eigenvalues whose neighbours are closer than rtol * ||H||."""
    scale = max(float(np.max(np.abs(eigenvalues))), 1.0) * rtol
    breaks = np.nonzero(np.diff(eigenvalues) > scale)[0] + 1
    return np.split(np.arange(eigenvalues.shape[0]), breaks)


def lta_distribution_diagonal(eig: EigenSystem, psi0: QuantumState, rtol: float = 1e-10) -> LtaEstimate:
    """Infinite-time average: sum over energy blocks of |P_block psi0|^2 in the X basis."""
    coeff = eigen_coefficients(eig, psi0)
    V = eig.eigenvectors
    pbar = (V**2) @ (np.abs(coeff) ** 2)
    for block in degenerate_blocks(eig.eigenvalues, rtol):
        if block.size > 1:
            sub = V[:, block]
            pbar -= (sub**2) @ (np.abs(coeff[block]) ** 2)
            pbar += np.abs(sub @ coeff[block]) ** 2
    return LtaEstimate(pbar / pbar.sum(), "diagonal-ensemble")


def factorization_error_matrix(traj: Trajectory) -> np.ndarray:
    """eps(n, n') = |1 - Pbar(n) Pbar(n') / avg[P(n) P(n')]|; NaN where the
    averaged product vanishes."""
    if traj.pair_avg is None:
        raise ValueError("trajectory was sampled without pair products")
    outer = np.outer(traj.pbar, traj.pbar)
    with np.errstate(divide="ignore", invalid="ignore"):
        eps = np.abs(1.0 - outer / traj.pair_avg)
    eps[traj.pair_avg == 0.0] = np.nan
    return eps


def factorization_error(
    eig: EigenSystem, psi0: QuantumState, grid: TimeGrid, n: float, nprime: float
) -> float:
    basis = psi0.basis
    i, j = basis.index_of(n), basis.index_of(nprime)
    traj = sample(eig, psi0, grid, pairs=True)
    value = factorization_error_matrix(traj)[i, j]
    if math.isnan(value):
        raise UndefinedValueError(f"time-averaged product vanishes for ({n}, {nprime})")
    return float(value)


@dataclass(frozen=True)
class ErrorAverage:
    value: float
    excluded: int
    n_min: int
    n_max: int


def allowed_window(N: int, z0: float) -> tuple[int, int]:
    z0 = abs(z0)
    return -math.ceil(N * z0 / 2), math.floor(N * z0 / 2)


def average_error_in_window(eps: np.ndarray, labels: np.ndarray, N: int, z0: float) -> ErrorAverage:
    n_min, n_max = allowed_window(N, z0)
    if n_max <= n_min:
        raise ValueError("classically allowed window is empty")
    sel = (labels >= n_min) & (labels <= n_max)
    block = eps[np.ix_(sel, sel)]
    bad = np.isnan(block)
    area = float(n_max - n_min) ** 2
    return ErrorAverage(float(np.sum(block[~bad])) / area, int(bad.sum()), n_min, n_max)


def avg_factorization_error(
    eig: EigenSystem, psi0: QuantumState, grid: TimeGrid, z0: float
) -> ErrorAverage:
    """Mean factorization error over -ceil(N z0/2) <= n, n' <= floor(N z0/2),
    normalized by (n_max - n_min)^2. Pairs with a vanishing averaged product
    are skipped and counted in ``excluded``."""
    if psi0.basis.family is not Family.LMG:
        raise ValueError("window average is defined for the LMG model")
    traj = sample(eig, psi0, grid, pairs=True)
    eps = factorization_error_matrix(traj)
    return average_error_in_window(eps, psi0.basis.labels, psi0.basis.N, z0)
