"""Long-time averaged quantum Fisher information across dynamical phase
transitions of the spinor BEC and LMG models."""

from .dynamics import (
    LtaEstimate,
    TimeGrid,
    avg_factorization_error,
    evolve,
    factorization_error,
    lta_distribution_diagonal,
    lta_distribution_time_avg,
    probability_snapshot,
)
from .hilbert import (
    QuantumState,
    SectorBasis,
    cat_state,
    lmg_basis,
    lmg_coherent_state,
    spinor_coherent_state,
    spinor_sector_basis,
)
from .models import (
    TridiagonalOperator,
    build_driven_spinor_hamiltonian,
    build_lmg_hamiltonian,
    build_static_spinor_hamiltonian,
    position_observable,
)
from .numerics import (
    EigenSystem,
    chebyshev_quadrature,
    eigh_tridiagonal,
    elliptic_E,
    elliptic_K,
    singular_quadrature,
)
from .qfi import qfi_instant, qfi_lta_exact, qfi_lta_factorized
from .semiclassics import (
    PotentialModel,
    driven_potential,
    lmg_potential,
    semiclassical_qfi,
    static_potential,
)

__version__ = "0.1.0"
