"""Quantum Fisher information of pure states under a diagonal generator."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import LtaEstimate, TimeGrid, sample
from .hilbert import QuantumState
from .numerics import EigenSystem


@dataclass(frozen=True)
class QfiRecord:
    fq_exact: float
    fq_factorized: float
    normalization: str = "raw"  # raw | delta_D^2 | (delta_D x0)^2

    def scaled(self, scale: float, tag: str) -> "QfiRecord":
        return QfiRecord(self.fq_exact / scale, self.fq_factorized / scale, tag)


def variance(p: np.ndarray, X: np.ndarray) -> float:
    mean = p @ X
    return float(p @ (X - mean) ** 2)


def qfi_instant(state: QuantumState, X: np.ndarray) -> float:
    """4 Var(X) for a pure state."""
    p = np.abs(state.amplitudes) ** 2
    return 4.0 * variance(p, np.asarray(X, dtype=np.float64))


def qfi_lta_exact(eig: EigenSystem, psi0: QuantumState, X: np.ndarray, grid: TimeGrid) -> float:
    """Time average of the instantaneous QFI over the grid."""
    traj = sample(eig, psi0, grid, X=X)
    return float(np.mean(traj.qfi))


def qfi_lta_factorized(lta: LtaEstimate, X: np.ndarray) -> float:
    """QFI with the long-time pair correlations factorized: 4 Var under Pbar."""
    return 4.0 * variance(lta.pbar, np.asarray(X, dtype=np.float64))
