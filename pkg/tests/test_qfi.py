import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ltaqfi.dynamics import TimeGrid, lta_distribution_diagonal, lta_distribution_time_avg, sample
from ltaqfi.hilbert import (
    basis_state,
    cat_state,
    lmg_basis,
    lmg_coherent_state,
    spinor_coherent_state,
    spinor_sector_basis,
)
from ltaqfi.models import build_lmg_hamiltonian, build_static_spinor_hamiltonian, position_observable
from ltaqfi.numerics import eigh_tridiagonal
from ltaqfi.qfi import QfiRecord, qfi_instant, qfi_lta_exact, qfi_lta_factorized, variance

probs = arrays(np.float64, st.integers(2, 40), elements=st.floats(0.0, 1.0)).filter(
    lambda p: p.sum() > 1e-3
)


@settings(max_examples=100)
@given(probs, st.floats(-50, 50), st.floats(0.1, 10))
def test_variance_shift_and_scale(p, shift, scale):
    p = p / p.sum()
    X = np.arange(p.size, dtype=float)
    v = variance(p, X)
    assert v >= 0
    assert variance(p, X + shift) == pytest.approx(v, rel=1e-9, abs=1e-9)
    assert variance(p, scale * X) == pytest.approx(scale**2 * v, rel=1e-9, abs=1e-9)
    # Popoviciu bound
    assert v <= (X[-1] - X[0]) ** 2 / 4 + 1e-12


def test_uniform_and_cat():
    b = lmg_basis(7)  # labels -3.5 .. 3.5
    p = np.full(8, 1 / 8)
    assert 4 * variance(p, b.labels) == pytest.approx(4 * (64 - 1) / 12)
    b = spinor_sector_basis(6)  # labels 0, 2, 4, 6
    assert 4 * variance(np.full(4, 0.25), b.labels) == pytest.approx(4 * 4 * (16 - 1) / 12)
    for b in (spinor_sector_basis(100), lmg_basis(51)):
        assert qfi_instant(cat_state(b), position_observable(b)) == pytest.approx(4 * b.delta_D**2)


def test_basis_state_has_zero_qfi():
    b = lmg_basis(10)
    assert qfi_instant(basis_state(b, 2), b.labels) == 0.0


def test_coherent_state_qfi_is_shot_noise():
    # a spin coherent state has Var(Jz) = N (1 - z^2) / 4
    N, z = 400, 0.3
    b = lmg_basis(N)
    assert qfi_instant(lmg_coherent_state(b, z), b.labels) == pytest.approx(N * (1 - z**2), rel=1e-12)


def test_exact_matches_trajectory_and_bounds():
    b = spinor_sector_basis(200)
    H = build_static_spinor_hamiltonian(b, 1.0, 0.5)
    eig = eigh_tridiagonal(H.diag, H.offdiag)
    psi0 = spinor_coherent_state(b, 0.6)
    X = position_observable(b)
    grid = TimeGrid(3.0, 700)
    fq = qfi_lta_exact(eig, psi0, X, grid)
    traj = sample(eig, psi0, grid, X=X)
    assert fq == pytest.approx(np.mean(traj.qfi))
    assert 0 <= fq <= 4 * b.delta_D**2
    fac = qfi_lta_factorized(lta_distribution_time_avg(eig, psi0, grid), X)
    # variance of the mixture >= mean variance (law of total variance)
    assert fac >= fq - 1e-9
    assert fac <= 4 * b.delta_D**2


def test_factorized_estimators_agree():
    b = lmg_basis(100)
    eig = eigh_tridiagonal(*(lambda H: (H.diag, H.offdiag))(build_lmg_hamiltonian(b, 5.0)))
    psi0 = lmg_coherent_state(b, 0.6)
    a = qfi_lta_factorized(lta_distribution_diagonal(eig, psi0), b.labels)
    c = qfi_lta_factorized(lta_distribution_time_avg(eig, psi0, TimeGrid(1.0, 20000)), b.labels)
    assert c == pytest.approx(a, rel=2e-2)


def test_record_scaling():
    r = QfiRecord(8.0, 4.0).scaled(4.0, "delta_D^2")
    assert (r.fq_exact, r.fq_factorized, r.normalization) == (2.0, 1.0, "delta_D^2")
