"""Single runs, parameter sweeps and the factorization-error scaling study."""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .config import RunConfig
from .dynamics import (
    TimeGrid,
    average_error_in_window,
    factorization_error_matrix,
    lta_distribution_diagonal,
    sample,
)
from .hilbert import lmg_basis, lmg_coherent_state, spinor_coherent_state, spinor_sector_basis
from .models import build_hamiltonian, build_lmg_hamiltonian, position_observable
from .numerics import eigh_tridiagonal
from .qfi import variance
from .semiclassics import (
    Phase,
    chi_for_m,
    driven_potential,
    eta_for_m,
    lmg_potential,
    semiclassical_qfi_limits,
    static_potential,
)


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class SweepRecord:
    model: str
    N: int
    parameter: str
    value: float
    control: float  # the model's own parameter: q, eta or chi
    m: float = math.nan  # Type B elliptic parameter
    q_over_qc: float = math.nan  # Type A
    phase: str = ""
    fq_exact: float = math.nan
    fq_factorized: float = math.nan
    fq_semiclassical: float = math.nan
    fq_semiclassical_above: float = math.nan  # differs from the above only at a kink
    fq_exact_scaled: float = math.nan  # / delta_D^2
    fq_factorized_scaled: float = math.nan
    fq_semiclassical_scaled: float = math.nan
    fq_exact_x0_scaled: float = math.nan  # / (delta_D x0)^2, Type B only
    fq_factorized_x0_scaled: float = math.nan
    fq_semiclassical_x0_scaled: float = math.nan
    fq_min: float = math.nan  # extremes of F_Q(t) over the grid
    fq_max: float = math.nan
    norm_error: float = math.nan
    energy_drift: float = math.nan  # max |<H>(t) - <H>(0)| / ||H||
    estimator_gap: float = math.nan  # L1 between diagonal-ensemble and time-average Pbar
    status: str = "ok"
    wall_time: float = 0.0
    pbar: Optional[np.ndarray] = field(default=None, repr=False)

    def row(self) -> dict:
        d = asdict(self)
        d.pop("pbar")
        return d


COLUMNS = [k for k in SweepRecord.__dataclass_fields__ if k not in ("pbar", "wall_time")]


def resolve(config: RunConfig, value: Optional[float] = None) -> RunConfig:
    """Fill in the model parameter from the sweep axis value."""
    if config.sweep is None or value is None:
        return config
    axis = config.sweep
    if axis == "q":
        return config.with_(q=value)
    if axis == "q_over_qc":
        return config.with_(q=value * 2.0 * config.c * (1.0 - config.rho0))
    if axis == "eta":
        return config.with_(eta=value)
    if axis == "chi":
        return config.with_(chi=value)
    if axis == "m":
        if config.model == "driven-bec":
            return config.with_(eta=eta_for_m(value, config.rho0))
        return config.with_(chi=chi_for_m(value, config.z0))
    raise ValueError(f"unknown sweep axis {axis!r}")


def potential_for(config: RunConfig):
    if config.model == "static-bec":
        return static_potential(config.c, config.q, config.rho0)
    if config.model == "driven-bec":
        return driven_potential(config.eta, config.rho0)
    if config.Omega != 1.0:
        raise ValueError("semiclassical LMG potential assumes Omega = 1")
    return lmg_potential(config.chi, config.z0)


def build_basis(config: RunConfig):
    return lmg_basis(config.N) if config.model == "lmg" else spinor_sector_basis(config.N)


def initial_state(config: RunConfig, basis):
    if config.model == "lmg":
        return lmg_coherent_state(basis, config.z0, config.phi)
    return spinor_coherent_state(basis, config.rho0, config.theta)


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except StageError:
        raise
    except Exception as exc:  # noqa: BLE001 - re-raised with the stage attached
        raise StageError(name, exc) from exc


def fill_semiclassical(rec: SweepRecord, config: RunConfig, delta_D: float) -> None:
    model = _stage("semiclassics", potential_for, config)
    rec.phase = model.phase.value
    if model.dqpt_type == "A":
        rec.q_over_qc = config.q / model.critical_value
    else:
        rec.m = model.m
    below, above = _stage("semiclassics", semiclassical_qfi_limits, model, delta_D)
    if model.phase is Phase.ABOVE:
        below = above
    rec.fq_semiclassical = below
    rec.fq_semiclassical_above = above
    rec.fq_semiclassical_scaled = below / delta_D**2
    if model.dqpt_type == "B" and model.x0 != 0.0:
        rec.fq_semiclassical_x0_scaled = below / (delta_D * model.x0) ** 2
    if model.degenerate:
        rec.status = "degenerate"


def run_single(config: RunConfig, value: Optional[float] = None, quantum: bool = True) -> SweepRecord:
    """basis -> Hamiltonian -> eigensystem -> coherent state -> long-time
    averages -> QFI, plus the semiclassical prediction for the same point."""
    start = time.perf_counter()
    config = resolve(config, value)
    control = {"static-bec": config.q, "driven-bec": config.eta, "lmg": config.chi}[config.model]
    rec = SweepRecord(
        model=config.model,
        N=config.N,
        parameter=config.sweep or {"static-bec": "q", "driven-bec": "eta", "lmg": "chi"}[config.model],
        value=value if value is not None else control,
        control=control,
    )
    basis = _stage("basis", build_basis, config)
    delta_D = basis.delta_D
    try:
        fill_semiclassical(rec, config, delta_D)
    except StageError as exc:
        if not quantum:
            raise
        rec.status = f"error:{exc}"

    if quantum:
        params = _stage("params", config.params)
        H = _stage("hamiltonian", build_hamiltonian, basis, params)
        eig = _stage("eigensolver", eigh_tridiagonal, H.diag, H.offdiag)
        psi0 = _stage("initial-state", initial_state, config, basis)
        X = position_observable(basis)
        grid = TimeGrid(config.dt, config.steps)
        traj = _stage("dynamics", sample, eig, psi0, grid, X=X, hamiltonian=H)
        diag_pbar = _stage("dynamics", lta_distribution_diagonal, eig, psi0).pbar
        pbar = diag_pbar if config.estimator == "diagonal" else traj.pbar
        rec.estimator_gap = float(np.abs(diag_pbar - traj.pbar).sum())
        rec.fq_exact = float(np.mean(traj.qfi))
        rec.fq_factorized = 4.0 * variance(pbar, X)
        rec.fq_min = float(np.min(traj.qfi))
        rec.fq_max = float(np.max(traj.qfi))
        rec.norm_error = traj.norm_error
        scale = float(np.max(np.abs(eig.eigenvalues))) or 1.0
        rec.energy_drift = float(np.max(np.abs(traj.energy - traj.energy[0]))) / scale
        rec.fq_exact_scaled = rec.fq_exact / delta_D**2
        rec.fq_factorized_scaled = rec.fq_factorized / delta_D**2
        x0 = _scaled_x0(config)
        if config.model != "static-bec" and x0 != 0.0:
            rec.fq_exact_x0_scaled = rec.fq_exact / (delta_D * x0) ** 2
            rec.fq_factorized_x0_scaled = rec.fq_factorized / (delta_D * x0) ** 2
        if config.store_pbar:
            rec.pbar = pbar
    rec.wall_time = time.perf_counter() - start
    return rec


def _scaled_x0(config: RunConfig) -> float:
    return config.z0 if config.model == "lmg" else 2.0 * config.rho0 - 1.0


def _row_task(args):
    config, value, quantum = args
    try:
        return run_single(config, value, quantum)
    except StageError as exc:
        rec = SweepRecord(
            model=config.model,
            N=config.N,
            parameter=config.sweep or "",
            value=value,
            control=math.nan,
        )
        rec.status = f"error:{exc}"
        return rec


def run_sweep(config: RunConfig, jobs: int = 1, quantum: bool = True) -> list[SweepRecord]:
    """One record per sweep value, ordered by value. Failed rows are recorded
    and the sweep continues."""
    values = config.sweep_values() or [None]
    tasks = [(config, v, quantum) for v in values]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_row_task, tasks))
    return [_row_task(t) for t in tasks]


@dataclass
class ErrorScaling:
    N: list[int]
    eps_ave: list[float]
    excluded: list[int]
    slope: float
    intercept: float
    residuals: list[float]
    slope_without_largest: float
    diagonal_mean: float  # mean eps on n = n' at the largest N
    offdiagonal_mean: float
    norm_error: float = 0.0  # worst over all N
    matrix: Optional[np.ndarray] = field(default=None, repr=False)  # eps(n, n') at the largest N
    labels: Optional[np.ndarray] = field(default=None, repr=False)


def loglog_fit(N, values) -> tuple[float, float, np.ndarray]:
    x = np.log(np.asarray(N, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), float(intercept), y - (slope * x + intercept)


def error_scaling_from_table(N, eps_ave) -> tuple[float, float, np.ndarray, float]:
    if len(N) < 3:
        raise ValueError("need at least three N values for the fit")
    if list(N) != sorted(N):
        raise ValueError("N values must be ascending")
    slope, intercept, resid = loglog_fit(N, eps_ave)
    jack, _, _ = loglog_fit(N[:-1], eps_ave[:-1])
    return slope, intercept, resid, jack


def run_error_scaling(
    Ns, chi: float = 5.0, z0: float = 0.6, grid: TimeGrid = TimeGrid(1.0, 20_000)
) -> ErrorScaling:
    Ns = [int(n) for n in Ns]
    if len(Ns) < 3:
        raise ValueError("need at least three N values for the fit")
    if Ns != sorted(Ns):
        raise ValueError("N values must be ascending")
    eps_ave, excluded = [], []
    norm_error = 0.0
    for N in Ns:
        basis = lmg_basis(N)
        H = build_lmg_hamiltonian(basis, chi)
        eig = eigh_tridiagonal(H.diag, H.offdiag)
        psi0 = lmg_coherent_state(basis, z0)
        traj = sample(eig, psi0, grid, pairs=True)
        norm_error = max(norm_error, traj.norm_error)
        eps = factorization_error_matrix(traj)
        avg = average_error_in_window(eps, basis.labels, N, z0)
        eps_ave.append(avg.value)
        excluded.append(avg.excluded)
    slope, intercept, resid, jack = error_scaling_from_table(Ns, eps_ave)

    sel = (basis.labels >= avg.n_min) & (basis.labels <= avg.n_max)
    block = eps[np.ix_(sel, sel)]
    diag = np.nanmean(np.diag(block))
    off = np.nanmean(block[~np.eye(block.shape[0], dtype=bool)])
    return ErrorScaling(
        N=Ns,
        eps_ave=eps_ave,
        excluded=excluded,
        slope=slope,
        intercept=intercept,
        residuals=[float(r) for r in resid],
        slope_without_largest=jack,
        diagonal_mean=float(diag),
        offdiagonal_mean=float(off),
        norm_error=norm_error,
        matrix=eps,
        labels=basis.labels,
    )
