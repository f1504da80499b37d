"""Data recipes for the standard figures (data only, no plotting)."""
from __future__ import annotations

import numpy as np

from .config import RunConfig
from .dynamics import TimeGrid, lta_distribution_diagonal, lta_distribution_time_avg
from .experiments import (
    build_basis,
    initial_state,
    potential_for,
    run_error_scaling,
    run_sweep,
)
from .models import build_hamiltonian
from .numerics import eigh_tridiagonal
from .semiclassics import driven_critical_eta, potential_eval, semiclassical_distribution

# Distribution panels: one point on each side of the transition.
FIG1 = RunConfig(model="static-bec", N=1000, c=1.0, rho0=0.6, steps=20_000, dt=1.0)
FIG1_Q_OVER_QC = (0.5, 1.5)
FIG2 = RunConfig(model="driven-bec", N=1000, G0=1.0, rho0=0.8, steps=20_000, dt=1.0)
FIG2_ETA_OVER_ETAC = (0.5, 1.5)  # trapped, untrapped

FIG3A = RunConfig(
    model="static-bec", N=1000, c=1.0, rho0=0.6, steps=10_000, dt=10.0,
    sweep="q_over_qc", sweep_min=0.2, sweep_max=2.2, sweep_points=41,
)
FIG3B_DRIVEN = RunConfig(
    model="driven-bec", N=1000, G0=1.0, rho0=0.8, steps=10_000, dt=10.0,
    sweep="m", sweep_min=0.2, sweep_max=3.0, sweep_points=29,
)
FIG3B_LMG = RunConfig(
    model="lmg", N=500, z0=0.6, steps=10_000, dt=10.0,
    sweep="m", sweep_min=0.2, sweep_max=3.0, sweep_points=29,
)
FIG4_N = (100, 150, 200, 250, 300, 350, 400)
FIG4_GRID = TimeGrid(1.0, 20_000)


def panel_config(figure: str, ratio: float, base: RunConfig | None = None) -> RunConfig:
    if figure == "1":
        cfg = base or FIG1
        return cfg.with_(q=ratio * 2.0 * cfg.c * (1.0 - cfg.rho0)).validate()
    cfg = base or FIG2
    return cfg.with_(eta=ratio * driven_critical_eta(cfg.rho0)).validate()


def distribution_panel(config: RunConfig) -> dict[str, np.ndarray]:
    """Quantum long-time distribution next to the semiclassical one on the
    basis grid, plus the effective potential at the same points."""
    basis = build_basis(config)
    H = build_hamiltonian(basis, config.params())
    eig = eigh_tridiagonal(H.diag, H.offdiag)
    psi0 = initial_state(config, basis)
    if config.estimator == "diagonal":
        pbar = lta_distribution_diagonal(eig, psi0).pbar
    else:
        pbar = lta_distribution_time_avg(eig, psi0, TimeGrid(config.dt, config.steps)).pbar
    model = potential_for(config)
    x = basis.x
    coord = (x + 1.0) / 2.0 if model.kind == "static-bec" else x
    return {
        "label": basis.labels,
        "rho0": (x + 1.0) / 2.0,
        "x": x,
        "pbar": pbar,
        "semiclassical": semiclassical_distribution(model, x, basis.dx),
        "potential": potential_eval(model, np.clip(coord, *model.domain)),
        "model": model,
    }


def distribution_l1(data: dict, model, exclude: int = 3) -> float:
    """L1 distance between quantum and semiclassical Pbar, skipping grid
    points within ``exclude`` spacings of a turning point."""
    x = data["x"]
    dx = x[1] - x[0]
    keep = np.ones(x.shape, dtype=bool)
    for t in model.allowed_interval:
        keep &= np.abs(x - t) > exclude * dx * (1.0 + 1e-9)
    sc = np.nan_to_num(data["semiclassical"])
    return float(np.abs(data["pbar"][keep] - sc[keep]).sum())


def figure_distributions(figure: str, base: RunConfig | None = None) -> list[dict]:
    rows = []
    ratios = FIG1_Q_OVER_QC if figure == "1" else FIG2_ETA_OVER_ETAC
    for panel, ratio in zip("cd", ratios):
        cfg = panel_config(figure, ratio, base)
        data = distribution_panel(cfg)
        model = data.pop("model")
        for i in range(len(data["x"])):
            row = {"panel": panel, "ratio_to_critical": ratio, "phase": model.phase.value}
            row.update({k: float(v[i]) for k, v in data.items()})
            rows.append(row)
    return rows


def figure_3a(base: RunConfig = FIG3A, jobs: int = 1):
    return run_sweep(base, jobs=jobs)


def figure_3b(driven: RunConfig = FIG3B_DRIVEN, lmg: RunConfig = FIG3B_LMG, jobs: int = 1):
    return run_sweep(driven, jobs=jobs) + run_sweep(lmg, jobs=jobs)


def figure_4(Ns=FIG4_N, grid: TimeGrid = FIG4_GRID):
    return run_error_scaling(Ns, chi=5.0, z0=0.6, grid=grid)
