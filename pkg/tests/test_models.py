import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltaqfi.hilbert import lmg_basis, lmg_coherent_state, spinor_coherent_state, spinor_sector_basis
from ltaqfi.models import (
    LMG,
    DrivenBEC,
    StaticBEC,
    TridiagonalOperator,
    build_driven_spinor_hamiltonian,
    build_hamiltonian,
    build_lmg_hamiltonian,
    build_static_spinor_hamiltonian,
    position_observable,
)
from ltaqfi.numerics import eigh_tridiagonal


def ladder(cutoff):
    return np.diag(np.sqrt(np.arange(1, cutoff + 1)), 1)


def fock_spinor(N, kind, a, b):
    """Three-mode Fock-space Hamiltonian projected on the M = 0 sector.

    static:  (a/N)[n0 (n1 + n-1) + a0+a0+ a1 a-1 + h.c.] + b (n1 + n-1)
    driven:  (a/N) n0 (n1 + n-1) + (b/2N)[a0+a0+ a1 a-1 + h.c.]
    """
    d = N + 1
    low, eye = ladder(N), np.eye(d)

    def mode(k):
        ops = [eye, eye, eye]
        ops[k] = low
        return np.kron(np.kron(ops[0], ops[1]), ops[2])

    ap, a0, am = mode(0), mode(1), mode(2)
    num = lambda x: x.T @ x  # noqa: E731
    pair = a0.T @ a0.T @ ap @ am
    side = num(ap) + num(am)
    if kind == "static":
        H = (a / N) * (num(a0) @ side + pair + pair.T) + b * side
    else:
        H = (a / N) * num(a0) @ side + (b / (2 * N)) * (pair + pair.T)
    # sector states |k, n0, k> ordered by n0
    idx = [
        (k * d + n0) * d + k
        for n0 in range(0, N + 1, 2)
        for k in [(N - n0) // 2]
    ]
    return H[np.ix_(idx, idx)]


def fock_lmg(N, chi, Omega):
    d = N + 1
    low, eye = ladder(N), np.eye(d)
    aR, aL = np.kron(low, eye), np.kron(eye, low)
    Jz = 0.5 * (aR.T @ aR - aL.T @ aL)
    Jx = 0.5 * (aR.T @ aL + aL.T @ aR)
    H = (2 * chi / N) * Jz @ Jz - 2 * Omega * Jx
    idx = [nR * d + (N - nR) for nR in range(N + 1)]  # n = nR - N/2 ascending
    return H[np.ix_(idx, idx)]


def test_static_N4_elements():
    H = build_static_spinor_hamiltonian(spinor_sector_basis(4), c=1.0, q=0.0)
    assert np.allclose(H.diag, [0.0, 1.0, 0.0])
    # (c/N) (N-n0)/2 sqrt((n0+1)(n0+2)) at n0 = 0, 2
    assert np.allclose(H.offdiag, [0.25 * 2 * np.sqrt(2), 0.25 * 1 * np.sqrt(12)])


@pytest.mark.parametrize("N", [2, 4, 6, 8])
@pytest.mark.parametrize("c,q", [(1.0, 0.0), (0.7, 0.3), (2.0, -0.5)])
def test_static_matches_fock_space(N, c, q):
    H = build_static_spinor_hamiltonian(spinor_sector_basis(N), c, q)
    assert np.allclose(H.dense(), fock_spinor(N, "static", c, q), atol=1e-12)


@pytest.mark.parametrize("N", [2, 4, 6, 8])
@pytest.mark.parametrize("G0,Gj", [(1.0, 0.0), (1.0, 0.6), (2.0, 3.5)])
def test_driven_matches_fock_space(N, G0, Gj):
    H = build_driven_spinor_hamiltonian(spinor_sector_basis(N), G0, Gj)
    assert np.allclose(H.dense(), fock_spinor(N, "driven", G0, Gj), atol=1e-12)


@pytest.mark.parametrize("N", [1, 2, 5, 8])
@pytest.mark.parametrize("chi,Omega", [(0.0, 1.0), (5.0, 1.0), (1.3, 0.4)])
def test_lmg_matches_two_mode(N, chi, Omega):
    H = build_lmg_hamiltonian(lmg_basis(N), chi, Omega)
    assert np.allclose(H.dense(), fock_lmg(N, chi, Omega), atol=1e-12)


@pytest.mark.parametrize("N", [1, 10, 101, 400])
def test_free_spin_spectrum(N):
    H = build_lmg_hamiltonian(lmg_basis(N), 0.0, 0.75)
    ev = eigh_tridiagonal(H.diag, H.offdiag).eigenvalues
    j = N / 2
    assert np.allclose(ev, -2 * 0.75 * np.arange(j, -j - 1, -1), atol=1e-10 * N)


@settings(max_examples=30, deadline=None)
@given(
    st.floats(0.1, 5.0), st.floats(-2.0, 2.0), st.floats(0.1, 10.0),
    st.integers(1, 60),
)
def test_linearity_in_couplings(c, q, lam, half):
    b = spinor_sector_basis(2 * half)
    H = build_static_spinor_hamiltonian(b, c, q)
    H2 = build_static_spinor_hamiltonian(b, lam * c, lam * q)
    assert np.allclose(H2.diag, lam * H.diag) and np.allclose(H2.offdiag, lam * H.offdiag)
    D = build_driven_spinor_hamiltonian(b, c, 0.5 * c)
    D2 = build_driven_spinor_hamiltonian(b, lam * c, 0.5 * lam * c)
    assert np.allclose(D2.dense(), lam * D.dense())


def test_lmg_reflection_symmetry():
    b = lmg_basis(40)
    H = build_lmg_hamiltonian(b, 3.0)
    P = np.eye(b.dim)[::-1]
    assert np.allclose(P @ H.dense() @ P, H.dense())


@pytest.mark.parametrize("rho0", [0.3, 0.6, 0.8])
@pytest.mark.parametrize("theta", [0.0, np.pi / 2, 0.4])
def test_static_mean_field_energy(rho0, theta):
    N, c, q = 2000, 1.0, 0.35
    b = spinor_sector_basis(N)
    psi = spinor_coherent_state(b, rho0, theta)
    E = build_static_spinor_hamiltonian(b, c, q).expectation(psi.amplitudes) / N
    mf = c * rho0 * (1 - rho0) * (1 + np.cos(2 * theta)) + q * (1 - rho0)
    assert abs(E - mf) < 5.0 / N


@pytest.mark.parametrize("rho0", [0.3, 0.8])
@pytest.mark.parametrize("theta", [0.0, np.pi / 2])
def test_driven_mean_field_energy(rho0, theta):
    N, G0, Gj = 2000, 1.0, 0.8
    b = spinor_sector_basis(N)
    psi = spinor_coherent_state(b, rho0, theta)
    E = build_driven_spinor_hamiltonian(b, G0, Gj).expectation(psi.amplitudes) / N
    mf = (G0 + 0.5 * Gj * np.cos(2 * theta)) * rho0 * (1 - rho0)
    assert abs(E - mf) < 5.0 / N


@pytest.mark.parametrize("z", [-0.5, 0.0, 0.6])
def test_lmg_mean_field_energy(z):
    N, chi = 2000, 5.0
    b = lmg_basis(N)
    psi = lmg_coherent_state(b, z)
    E = build_lmg_hamiltonian(b, chi).expectation(psi.amplitudes) / N
    # classical spin: (chi/2) z^2 - sqrt(1 - z^2) cos(phi), phi = 0
    assert abs(E - (0.5 * chi * z**2 - np.sqrt(1 - z**2))) < 5.0 / N


def test_matvec_matches_dense():
    rng = np.random.default_rng(3)
    H = build_lmg_hamiltonian(lmg_basis(17), 2.0)
    v = rng.normal(size=18) + 1j * rng.normal(size=18)
    assert np.allclose(H.matvec(v.copy()), H.dense() @ v)


def test_dispatch_and_records():
    b = spinor_sector_basis(6)
    H = build_hamiltonian(b, StaticBEC(1.0, 0.2, 0.6))
    assert np.allclose(H.dense(), build_static_spinor_hamiltonian(b, 1.0, 0.2).dense())
    assert DrivenBEC(2.0, 1.0, 0.8).eta == 0.5
    assert np.array_equal(position_observable(b), b.labels)
    with pytest.raises(TypeError):
        build_hamiltonian(b, object())


@pytest.mark.parametrize(
    "factory",
    [
        lambda: StaticBEC(0.0, 0.1, 0.5),
        lambda: DrivenBEC(1.0, 2.0, 0.5),
        lambda: DrivenBEC(1.0, -0.1, 0.5),
        lambda: DrivenBEC(0.0, 0.0, 0.5),
        lambda: LMG(-1.0, 0.5),
    ],
)
def test_invalid_parameters(factory):
    with pytest.raises(ValueError):
        factory()


def test_wrong_basis_and_shapes():
    with pytest.raises(ValueError):
        build_lmg_hamiltonian(spinor_sector_basis(4), 1.0)
    with pytest.raises(ValueError):
        build_static_spinor_hamiltonian(lmg_basis(4), 1.0, 0.0)
    b = lmg_basis(2)
    with pytest.raises(ValueError):
        TridiagonalOperator(b, np.zeros(2), np.zeros(2))
    with pytest.raises(ValueError):
        TridiagonalOperator(b, np.array([0.0, np.nan, 0.0]), np.zeros(2))


def test_fock_oracle_is_hermitian():
    for N, kind in itertools.product([4, 6], ["static", "driven"]):
        H = fock_spinor(N, kind, 1.0, 0.5)
        assert np.allclose(H, H.T)
