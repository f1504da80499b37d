"""Effective potentials, turning points and the semiclassical long-time QFI.

Coordinates: the static BEC potential lives in rho0 in [0, 1]. The driven BEC
potential is written in the shifted coordinate x = 2 rho0 - 1 so that its
double well is symmetric about the origin, and the LMG potential in z = 2n/N.
The variance formulas all work in the scaled coordinate x in [-1, 1], which for
the spinor BEC is again 2 rho0 - 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from .numerics import chebyshev_quadrature, elliptic_E, elliptic_K

CRITICAL_RTOL = 1e-12


class Phase(str, Enum):
    BELOW = "typeA-below"
    ABOVE = "typeA-above"
    TRAPPED = "trapped"
    UNTRAPPED = "untrapped"
    CRITICAL = "critical"


class CriticalPointError(ArithmeticError):
    """The prediction is only defined as one-sided limits here."""

    def __init__(self, below: float, above: float):
        super().__init__(f"exactly critical: one-sided limits {below!r} / {above!r}")
        self.below = below
        self.above = above


@dataclass(frozen=True)
class PotentialModel:
    kind: str  # static-bec | driven-bec | lmg
    params: dict
    x0: float  # initial position in the potential's own coordinate
    roots: tuple
    active_pair: tuple
    critical_value: float
    phase: Phase
    m: Optional[float] = None
    r_squared: Optional[float] = None
    degenerate: bool = False
    notes: tuple = field(default=())

    @property
    def dqpt_type(self) -> str:
        return "A" if self.kind == "static-bec" else "B"

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, 1.0) if self.kind == "static-bec" else (-1.0, 1.0)

    def scaled(self, x):
        """Map the potential coordinate onto x in [-1, 1]."""
        return 2.0 * np.asarray(x) - 1.0 if self.kind == "static-bec" else np.asarray(x)

    @property
    def scaled_x0(self) -> float:
        return float(self.scaled(self.x0))

    @property
    def allowed_interval(self) -> tuple[float, float]:
        """Classically allowed interval in scaled coordinates."""
        if self.dqpt_type == "A":
            a, b = sorted(float(self.scaled(v)) for v in self.active_pair)
            return a, b
        x0 = abs(self.x0)
        if self.phase is Phase.TRAPPED:
            r = math.sqrt(max(self.r_squared, 0.0))
            return (r, x0) if self.x0 > 0 else (-x0, -r)
        return -x0, x0


def _classify(value: float, critical: float, below: Phase, above: Phase) -> Phase:
    if abs(value - critical) <= CRITICAL_RTOL * max(1.0, abs(critical)):
        return Phase.CRITICAL
    return below if value < critical else above


def static_potential(c: float, q: float, rho0_init: float) -> PotentialModel:
    """Single-well (Type A) potential of the static spinor BEC."""
    if not c > 0:
        raise ValueError("c must be positive")
    if not 0.0 < rho0_init < 1.0:
        raise ValueError("rho0_init must lie in (0, 1)")
    if q < 0:
        raise ValueError("q must be nonnegative")
    rho = rho0_init
    q_c = 2.0 * c * (1.0 - rho)
    r1 = rho
    r2 = 1.0 - rho - q / (2.0 * c)
    notes = ()
    if q == 0:
        roots = (r1, r2)
        notes = ("q = 0: third root undefined",)
    else:
        r3 = rho - (2.0 * c / q) * rho * (1.0 - rho)
        roots = (r1, r2, r3)
    phase = _classify(q, q_c, Phase.BELOW, Phase.ABOVE)
    if phase is Phase.ABOVE:
        active = (r1, roots[2])
    else:
        active = (r1, r2)
    return PotentialModel(
        kind="static-bec",
        params={"c": c, "q": q, "rho0_init": rho},
        x0=rho,
        roots=roots,
        active_pair=active,
        critical_value=q_c,
        phase=phase,
        notes=notes,
    )


def driven_critical_eta(rho0_init: float) -> float:
    rho = rho0_init
    return 2.0 * (1.0 - 2.0 * rho) ** 2 / (1.0 + 4.0 * rho - 4.0 * rho**2)


def _type_b_phase(x0: float, r_squared: float) -> tuple[Phase, float]:
    x2 = x0 * x0
    gap = x2 - r_squared
    if x2 == 0.0:
        return Phase.UNTRAPPED, 0.0
    if abs(r_squared) <= CRITICAL_RTOL * x2:
        return Phase.CRITICAL, 1.0
    m = x2 / gap if gap > 0 else math.inf
    return (Phase.TRAPPED if r_squared > 0 else Phase.UNTRAPPED), m


def _type_b_roots(x0: float, r_squared: float) -> tuple:
    if r_squared >= 0:
        r = math.sqrt(r_squared)
        return (x0, r, -r, -x0)
    r = 1j * math.sqrt(-r_squared)
    return (x0, r, -r, -x0)


def driven_potential(eta: float, rho0_init: float) -> PotentialModel:
    """Symmetric double-well (Type B) potential of the driven spinor BEC, in the
    shifted coordinate 2 rho0 - 1."""
    if not 0.0 <= eta < 2.0:
        raise ValueError("eta must lie in [0, 2)")
    if not 0.0 < rho0_init < 1.0:
        raise ValueError("rho0_init must lie in (0, 1)")
    rho = rho0_init
    x0 = 2.0 * rho - 1.0
    r_squared = 1.0 - 4.0 * ((2.0 + eta) / (2.0 - eta)) * rho * (1.0 - rho)
    eta_c = driven_critical_eta(rho)
    degenerate = x0 == 0.0
    phase, m = _type_b_phase(x0, r_squared)
    roots = _type_b_roots(x0, r_squared)
    return PotentialModel(
        kind="driven-bec",
        params={"eta": eta, "rho0_init": rho},
        x0=x0,
        roots=roots,
        active_pair=(roots[0], roots[1]) if phase is Phase.TRAPPED else (roots[0], roots[3]),
        critical_value=eta_c,
        phase=phase,
        m=m,
        r_squared=r_squared,
        degenerate=degenerate,
        notes=("rho0 = 1/2: critical eta is 0, never trapped",) if degenerate else (),
    )


def lmg_critical_chi(z_init: float) -> float:
    return 2.0 * (1.0 + math.sqrt(1.0 - z_init**2)) / z_init**2


def lmg_potential(chi: float, z_init: float) -> PotentialModel:
    """Symmetric double-well potential of the LMG model (Omega = 1, phi(0) = 0)."""
    if not chi >= 0:
        raise ValueError("chi must be nonnegative")
    if not 0.0 < abs(z_init) < 1.0:
        raise ValueError("z_init must satisfy 0 < |z| < 1")
    z0 = z_init
    s = math.sqrt(1.0 - z0 * z0)
    chi_c = lmg_critical_chi(z0)
    energy = chi * z0 * z0 / 2.0 - s
    if chi == 0.0:
        return PotentialModel(
            kind="lmg",
            params={"chi": chi, "z_init": z0, "E0": energy},
            x0=z0,
            roots=(z0, -z0),
            active_pair=(z0, -z0),
            critical_value=chi_c,
            phase=Phase.UNTRAPPED,
            m=0.0,
            r_squared=-math.inf,
            notes=("chi = 0: free rotation",),
        )
    # sqrt(1 - 2 chi E0 + chi^2) = 1 + chi s exactly, which avoids cancellation
    r_squared = z0 * z0 - 4.0 * (1.0 + chi * s) / chi**2
    phase, m = _type_b_phase(z0, r_squared)
    roots = _type_b_roots(z0, r_squared)
    return PotentialModel(
        kind="lmg",
        params={"chi": chi, "z_init": z0, "E0": energy},
        x0=z0,
        roots=roots,
        active_pair=(roots[0], roots[1]) if phase is Phase.TRAPPED else (roots[0], roots[3]),
        critical_value=chi_c,
        phase=phase,
        m=m,
        r_squared=r_squared,
    )


def potential_eval(model: PotentialModel, x):
    lo, hi = model.domain
    xa = np.asarray(x, dtype=np.float64)
    if np.any(xa < lo - 1e-15) or np.any(xa > hi + 1e-15):
        raise ValueError(f"x outside [{lo}, {hi}]")
    p = model.params
    if model.kind == "static-bec":
        c, q, r0 = p["c"], p["q"], p["rho0_init"]
        inner = c * (1 - r0) * r0 + (1 - r0) * (q + c * r0) - (1 - xa) * (q + c * xa)
        # sign chosen so that xdot^2 + V = 0 holds, as for the other two models
        out = 4 * inner**2 - 4 * c**2 * xa**2 * (1 - xa) ** 2
    elif model.kind == "driven-bec":
        eta, r0 = p["eta"], p["rho0_init"]
        u = (1.0 - xa**2) / 4.0  # rho (1 - rho)
        out = -(eta**2) * u**2 + (2 * u - (2 + eta) * r0 * (1 - r0)) ** 2
    else:
        out = xa**2 - 1 + (p["chi"] / 2 * xa**2 - p["E0"]) ** 2
    return out if out.ndim else float(out)


# Densities


def density_type_a(x, x0: float, r: float):
    """Single-well turning-point density 1 / (pi sqrt((x0 - x)(x - r)))."""
    lo, hi = min(x0, r), max(x0, r)
    xa = np.asarray(x, dtype=np.float64)
    if np.any(xa <= lo) or np.any(xa >= hi):
        raise ValueError("x must lie strictly between the turning points")
    out = 1.0 / (np.pi * np.sqrt((hi - xa) * (xa - lo)))
    return out if out.ndim else float(out)


def _type_b_region(x0: float, r_squared: float, phase: Phase) -> tuple[float, float]:
    a = abs(x0)
    if phase is Phase.TRAPPED:
        r = math.sqrt(r_squared)
        return (r, a) if x0 > 0 else (-a, -r)
    if phase is Phase.UNTRAPPED:
        return -a, a
    raise ValueError(f"no density at phase {phase.value}")


def _type_b_kernel(x, x0: float, r_squared: float):
    return 1.0 / np.sqrt((x0 * x0 - x * x) * (x * x - r_squared))


def _type_b_smooth(x, x0: float, r_squared: float, phase: Phase):
    # kernel with the endpoint factor 1/sqrt((b - x)(x - a)) divided out
    if phase is Phase.TRAPPED:
        r = math.sqrt(r_squared)
        return 1.0 / np.sqrt((abs(x0) + np.abs(x)) * (np.abs(x) + r))
    return 1.0 / np.sqrt(x * x - r_squared)


@lru_cache(maxsize=256)
def type_b_normalization(x0: float, r_squared: float, phase: Phase) -> float:
    a, b = _type_b_region(x0, r_squared, phase)
    total = chebyshev_quadrature(lambda x: _type_b_smooth(x, x0, r_squared, phase), a, b)
    return 1.0 / total


def density_type_b(x, x0: float, r_squared: float, phase: Phase):
    """Double-well density N / sqrt((x0^2 - x^2)(x^2 - r^2)), normalized over
    the region the phase allows (one well if trapped, both if not)."""
    phase = Phase(phase)
    a, b = _type_b_region(x0, r_squared, phase)
    xa = np.asarray(x, dtype=np.float64)
    if np.any(xa <= a) or np.any(xa >= b):
        raise ValueError("x outside the open allowed region")
    out = type_b_normalization(x0, r_squared, phase) * _type_b_kernel(xa, x0, r_squared)
    return out if out.ndim else float(out)


# Variances (in units where the scaled coordinate spans [-1, 1])


def variance_type_a(x0: float, r: float, delta_D: float = 1.0) -> float:
    return delta_D**2 / 8.0 * (x0 - r) ** 2


def variance_type_b_trapped(m: float, x0: float, delta_D: float = 1.0) -> float:
    if not m > 1.0:
        raise ValueError(f"trapped variance needs m > 1, got {m}")
    if math.isinf(m):
        return 0.0
    K = elliptic_K(1.0 / m)
    E = elliptic_E(1.0 / m)
    return delta_D**2 * x0**2 / K**2 * (E * K - (math.pi / 2) ** 2)


def variance_type_b_untrapped(m: float, x0: float, delta_D: float = 1.0) -> float:
    if not 0.0 < m < 1.0:
        raise ValueError(f"untrapped variance needs 0 < m < 1, got {m}")
    k = m / (m - 1.0)
    return delta_D**2 * x0**2 * ((1.0 - m) / m) * (elliptic_E(k) / elliptic_K(k) - 1.0)


def universal_qfi(m: float) -> float:
    """Long-time QFI divided by (delta_D x0)^2 for any symmetric double well."""
    if m == 0.0:
        return 2.0
    if m == 1.0:
        return 0.0
    if m < 1.0:
        return 4.0 * variance_type_b_untrapped(m, 1.0)
    return 4.0 * variance_type_b_trapped(m, 1.0)


def qfi_asymptotics(m: float, regime: str) -> float:
    """Leading-order forms of ``universal_qfi``.

    regime: "deep-untrapped" (m << 1), "deep-trapped" (m >> 1) or
    "near-critical-below" (m -> 1 from below).
    """
    if regime == "deep-untrapped":
        return 2.0 * (1.0 - m / 8.0)
    if regime == "deep-trapped":
        return 1.0 / (8.0 * m * m)
    if regime == "near-critical-below":
        return 2.0 * (m - 1.0 + (m + 3.0) / math.log(16.0 / (1.0 - m)))
    raise ValueError(f"unknown regime {regime!r}")


def _static_qfi(model: PotentialModel, active_r: float, delta_D: float) -> float:
    x0 = float(model.scaled(model.x0))
    r = float(model.scaled(active_r))
    return 4.0 * variance_type_a(x0, r, delta_D)


def semiclassical_qfi_limits(model: PotentialModel, delta_D: float = 1.0) -> tuple[float, float]:
    """One-sided limits (below, above) of the prediction at the model's
    parameters. They differ only when the model sits exactly at a kink."""
    if model.dqpt_type == "A":
        r1, r2 = model.roots[0], model.roots[1]
        below = _static_qfi(model, r2, delta_D)
        above = _static_qfi(model, model.roots[2], delta_D) if len(model.roots) > 2 else below
        return below, above
    value = _type_b_qfi(model, delta_D)
    return value, value


def _type_b_qfi(model: PotentialModel, delta_D: float) -> float:
    if model.phase is Phase.CRITICAL:
        return 0.0
    return delta_D**2 * model.x0**2 * universal_qfi(model.m)


def semiclassical_qfi(model: PotentialModel, delta_D: float = 1.0) -> float:
    """Long-time QFI predicted from the turning points.

    With the default ``delta_D = 1`` the value is in units of delta_D^2.
    Raises CriticalPointError at an exactly critical Type A model.
    """
    if model.dqpt_type == "A":
        below, above = semiclassical_qfi_limits(model, delta_D)
        if model.phase is Phase.CRITICAL:
            if abs(below - above) > 1e-12 * max(abs(below), 1e-300):
                raise CriticalPointError(below, above)
            return below
        return above if model.phase is Phase.ABOVE else below
    return _type_b_qfi(model, delta_D)


def semiclassical_distribution(model: PotentialModel, scaled_x: np.ndarray, dx: float) -> np.ndarray:
    """Density times grid spacing at every scaled grid point.

    Points outside the open allowed interval get 0; points sitting exactly on
    a turning point get NaN.
    """
    xs = np.asarray(scaled_x, dtype=np.float64)
    out = np.zeros_like(xs)
    a, b = model.allowed_interval
    inside = (xs > a) & (xs < b)
    if model.dqpt_type == "A":
        out[inside] = density_type_a(xs[inside], b, a)
    else:
        out[inside] = density_type_b(xs[inside], model.x0, model.r_squared, model.phase)
    out[(xs == a) | (xs == b)] = np.nan
    return out * dx


# Sweep-axis inversions


def eta_for_m(m: float, rho0_init: float) -> float:
    """Drive ratio eta at which the driven BEC has elliptic parameter m."""
    if not m > 0:
        raise ValueError("m must be positive")
    u0 = rho0_init * (1.0 - rho0_init)
    x2 = (2.0 * rho0_init - 1.0) ** 2
    k = 1.0 + x2 / (4.0 * u0 * m)
    return 2.0 * (k - 1.0) / (k + 1.0)


def chi_for_m(m: float, z_init: float) -> float:
    """LMG interaction at which the LMG potential has elliptic parameter m."""
    if not m > 0:
        raise ValueError("m must be positive")
    s = math.sqrt(1.0 - z_init**2)
    z2 = z_init**2
    return 2.0 * (m * s + math.sqrt(m * m * s * s + m * z2)) / z2
