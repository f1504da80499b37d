"""Numerical kernels: tridiagonal eigensolver, complete elliptic integrals and
endpoint-singular quadrature."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numba
import numpy as np

MAX_QL_ITERATIONS = 10_000


class ConvergenceError(ArithmeticError):
    """Raised when the QL iteration fails to deflate an eigenvalue."""

    def __init__(self, index: int):
        super().__init__(f"implicit QL did not converge for eigenvalue {index}")
        self.index = index


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns are eigenvectors

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


@numba.njit(cache=True)
def _tql2(d, e, zt, max_iter):
    # d: diagonal (overwritten with eigenvalues); e: off-diagonal padded to length n.
    # zt rows accumulate the eigenvectors. Returns -1 on success or the failing index.
    n = d.shape[0]
    eps = np.finfo(np.float64).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                return l
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(n):
                    f = zt[i + 1, k]
                    zt[i + 1, k] = s * zt[i, k] + c * f
                    zt[i, k] = c * zt[i, k] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


def eigh_tridiagonal(diag, offdiag, backend: str = "ql") -> EigenSystem:
    """Full eigendecomposition of a real symmetric tridiagonal matrix.

    ``backend="ql"`` runs the implicit-shift QL iteration; ``"lapack"`` defers to
    scipy and exists mainly as a cross-check.
    """
    d = np.array(diag, dtype=np.float64)
    off = np.asarray(offdiag, dtype=np.float64)
    n = d.shape[0]
    if n < 1:
        raise ValueError("empty matrix")
    if off.shape[0] != n - 1:
        raise ValueError(f"off-diagonal must have length {n - 1}, got {off.shape[0]}")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(off))):
        raise ValueError("matrix entries must be finite")

    if backend == "lapack":
        from scipy.linalg import eigh_tridiagonal as _lapack

        w, v = _lapack(d, off)
        return EigenSystem(w, v)
    if backend != "ql":
        raise ValueError(f"unknown backend {backend!r}")

    e = np.zeros(n)
    e[: n - 1] = off
    zt = np.eye(n)
    status = _tql2(d, e, zt, MAX_QL_ITERATIONS)
    if status >= 0:
        raise ConvergenceError(int(status))
    order = np.argsort(d, kind="stable")
    return EigenSystem(d[order], np.ascontiguousarray(zt[order].T))


# Carlson symmetric forms. Tolerances give errors near machine epsilon.
_RF_TOL = 0.0025
_RD_TOL = 0.0015


def carlson_rf(x: float, y: float, z: float) -> float:
    if min(x, y, z) < 0 or min(x + y, x + z, y + z) == 0:
        raise ValueError("R_F needs nonnegative arguments with at most one zero")
    while True:
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        ave = (x + y + z) / 3.0
        dx, dy, dz = (ave - x) / ave, (ave - y) / ave, (ave - z) / ave
        if max(abs(dx), abs(dy), abs(dz)) <= _RF_TOL:
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / math.sqrt(ave)


def carlson_rd(x: float, y: float, z: float) -> float:
    if min(x, y) < 0 or x + y == 0 or z <= 0:
        raise ValueError("R_D needs x, y >= 0 (not both zero) and z > 0")
    total = 0.0
    fac = 1.0
    while True:
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        total += fac / (sz * (z + lam))
        fac *= 0.25
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        ave = 0.2 * (x + y + 3.0 * z)
        dx, dy, dz = (ave - x) / ave, (ave - y) / ave, (ave - z) / ave
        if max(abs(dx), abs(dy), abs(dz)) <= _RD_TOL:
            break
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + ec + ec
    c1, c2, c3, c4 = 3.0 / 14.0, 1.0 / 6.0, 9.0 / 22.0, 3.0 / 26.0
    c5, c6 = 0.25 * 9.0 / 22.0, 1.5 * 3.0 / 26.0
    s = (
        1.0
        + ed * (-c1 + c5 * ed - c6 * dz * ee)
        + dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))
    )
    return 3.0 * total + fac * s / (ave * math.sqrt(ave))


def elliptic_K(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter convention."""
    m = float(m)
    if not m < 1.0:
        raise ValueError(f"K(m) requires m < 1, got {m}")
    return carlson_rf(0.0, 1.0 - m, 1.0)


def elliptic_E(m: float) -> float:
    """Complete elliptic integral of the second kind, parameter convention."""
    m = float(m)
    if m > 1.0 or math.isnan(m):
        raise ValueError(f"E(m) requires m <= 1, got {m}")
    if m == 1.0:
        return 1.0
    y = 1.0 - m
    return carlson_rf(0.0, y, 1.0) - m * carlson_rd(0.0, y, 1.0) / 3.0


def singular_quadrature(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    n: int | None = None,
    rtol: float = 1e-13,
    max_nodes: int = 1 << 21,
) -> float:
    """Integrate ``f`` over (a, b) where ``f`` may blow up like an inverse square
    root at either endpoint.

    Uses x = (a+b)/2 - (b-a)/2 cos(t), which cancels both singularities, and a
    midpoint (Gauss-Chebyshev) rule in t. ``f`` must accept an array of nodes.
    With ``n`` unset the node count doubles until successive results agree to
    ``rtol``.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    half, mid = 0.5 * (b - a), 0.5 * (a + b)

    def rule(k: int) -> float:
        t = (np.arange(k) + 0.5) * (np.pi / k)
        x = mid - half * np.cos(t)
        return float(np.sum(np.asarray(f(x)) * np.sin(t)) * half * np.pi / k)

    return rule(n) if n is not None else _doubling(rule, rtol, max_nodes)


def chebyshev_quadrature(
    g: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    n: int | None = None,
    rtol: float = 1e-14,
    max_nodes: int = 1 << 20,
) -> float:
    """Integral of g(x) / sqrt((b - x)(x - a)) over (a, b) for smooth ``g``.

    The endpoint factor is handled analytically (Gauss-Chebyshev of the
    first kind), so ``g`` is never evaluated in a cancelling form and the
    rule converges exponentially for analytic ``g``.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    half, mid = 0.5 * (b - a), 0.5 * (a + b)

    def rule(k: int) -> float:
        t = (np.arange(k) + 0.5) * (np.pi / k)
        return float(np.sum(np.asarray(g(mid - half * np.cos(t)))) * np.pi / k)

    return rule(n) if n is not None else _doubling(rule, rtol, max_nodes)


def _doubling(rule: Callable[[int], float], rtol: float, max_nodes: int) -> float:
    k = 64
    prev = rule(k)
    while k < max_nodes:
        k *= 2
        cur = rule(k)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return prev
