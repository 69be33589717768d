"""
ESBL concurrence for two fermions with a four-dimensional single-particle space

The state is written in the coupled basis
    |2,2>, |2,1>, |2,0>, |2,-1>, |2,-2>, i|0,0>
where the dual state is rho_tilde = D rho D^-1 with D = M K (K complex conjugation).
C = max(0, l1 - l2 - ... - l6) with l the descending square roots of eig(rho rho_tilde).
"""

from functools import lru_cache

import numpy as np

from config.entanglement_config import TOLERANCES
from numerics.angular_momentum import antisymmetric_basis
from numerics.linalg_core import ComplexMatrix, as_complex_matrix, product_sqrt_eigvals
from states.fermion_states import SPIN_3_2, DensityMatrix
from utils.error_handler import SupportLeak, WrongDimension

# (j, m) in coupled-basis order: |2,2> ... |2,-2>, then |0,0>
CONCURRENCE_LABELS = antisymmetric_basis(SPIN_3_2).labels()

# Real orthogonal part of the antiunitary D, rows/columns in CONCURRENCE_LABELS order
D_MATRIX = np.array([
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, -1, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [0, -1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1],
], dtype=float)
D_MATRIX.flags.writeable = False


@lru_cache(maxsize=1)
def concurrence_basis() -> ComplexMatrix:
    """16 x 6 isometry; sixth column carries the imaginary unit (read-only)"""
    basis = antisymmetric_basis(SPIN_3_2)
    columns = [basis.state(j, m) for j, m in CONCURRENCE_LABELS[:5]]
    columns.append(1j * basis.state(0, 0))
    b = np.hstack(columns)
    b.flags.writeable = False
    return b


def _require_two_fermions_in_four(rho: DensityMatrix) -> None:
    if rho.n != 4 or rho.N != 2:
        raise WrongDimension(f"concurrence needs n=4, N=2, got n={rho.n}, N={rho.N}",
                             n=rho.n, N=rho.N)


def to_concurrence_basis(rho: DensityMatrix) -> ComplexMatrix:
    """
    rho6 = B^dagger rho B

    Raises:
        WrongDimension: rho is not a two-fermion state with n = 4
        SupportLeak: trace of rho6 falls short of 1
    """
    _require_two_fermions_in_four(rho)
    b = concurrence_basis()
    rho6 = b.conj().T @ rho.matrix @ b
    rho6 = (rho6 + rho6.conj().T) / 2
    trace = float(np.real(np.trace(rho6)))
    if trace < 1.0 - TOLERANCES['support']:
        raise SupportLeak(f"only {trace:.12f} of the trace lies in the antisymmetric sector",
                          trace=trace)
    return rho6


def d_conjugate(rho6) -> ComplexMatrix:
    """
    rho_tilde = M conj(rho6) M^T

    Raises:
        WrongDimension: input is not 6 x 6
    """
    rho6 = as_complex_matrix(rho6)
    if rho6.shape != (6, 6):
        raise WrongDimension(f"expected a 6x6 matrix, got {rho6.shape}", shape=list(rho6.shape))
    return D_MATRIX @ rho6.conj() @ D_MATRIX.T


def esbl_concurrence(rho: DensityMatrix) -> float:
    """
    Concurrence in [0, 1]; zero exactly for mixtures of Slater determinants

    Raises:
        WrongDimension: rho is not a two-fermion state with n = 4
    """
    rho6 = to_concurrence_basis(rho)
    lambdas = product_sqrt_eigvals(rho6, d_conjugate(rho6))
    value = lambdas[0] - sum(lambdas[1:])
    return float(min(1.0, max(0.0, value)))
