#!/usr/bin/env python3
"""Trapped-side Type B QFI versus N (driven BEC, diagonal ensemble).

The factorized long-time QFI at fixed m approaches the elliptic prediction
as the coherent-state width shrinks. Uses the diagonal ensemble so that no
time grid is involved; prints a CSV on stdout.

    python3 scripts/trapped_finite_size.py --m 1.2 2 3 --N 500 1000 2000 4000
"""
import argparse

from ltaqfi.dynamics import lta_distribution_diagonal
from ltaqfi.hilbert import spinor_coherent_state, spinor_sector_basis
from ltaqfi.models import build_driven_spinor_hamiltonian
from ltaqfi.numerics import eigh_tridiagonal
from ltaqfi.qfi import variance
from ltaqfi.semiclassics import driven_potential, eta_for_m, semiclassical_qfi


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--m", type=float, nargs="+", default=[1.2, 2.0, 3.0])
    p.add_argument("--N", type=int, nargs="+", default=[500, 1000, 2000, 4000])
    p.add_argument("--rho0", type=float, default=0.8)
    args = p.parse_args()

    x0 = 2 * args.rho0 - 1
    print("m,N,fq_factorized_x0_scaled,fq_semiclassical_x0_scaled")
    for m in args.m:
        eta = eta_for_m(m, args.rho0)
        sc = semiclassical_qfi(driven_potential(eta, args.rho0)) / x0**2
        for N in args.N:
            basis = spinor_sector_basis(N)
            H = build_driven_spinor_hamiltonian(basis, 1.0, eta)
            eig = eigh_tridiagonal(H.diag, H.offdiag)
            pbar = lta_distribution_diagonal(eig, spinor_coherent_state(basis, args.rho0)).pbar
            fq = 4 * variance(pbar, basis.labels) / (basis.delta_D * x0) ** 2
            print(f"{m},{N},{fq:.6g},{sc:.6g}", flush=True)


if __name__ == "__main__":
    main()
