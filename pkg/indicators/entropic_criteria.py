"""
Entropic entanglement indicators for N identical fermions

Every indicator has the form S[rho_r] - S[rho] - offset and certifies
entanglement when strictly positive:
    D_vN = S_vN[rho_r] - S_vN[rho] - ln N
    D_L  = S_L[rho_r]  - S_L[rho]  - 1/2      (N = 2 only)
    R_q  = S_q[rho_r]  - S_q[rho]  - ln N     (q >= 1, q = inf allowed)
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

from config.entanglement_config import TOLERANCES
from numerics.entropy import EntropicOrder, linear_entropy, renyi, von_neumann
from numerics.linalg_core import Spectrum
from states.fermion_states import DensityMatrix, partial_trace_single
from utils.error_handler import NotPure, UnsupportedParticleCount


@dataclass(frozen=True, eq=False)
class SpectralPair:
    """Spectra of a state and of its single-particle reduction; all indicators derive from these"""
    global_spectrum: Spectrum
    reduced_spectrum: Spectrum
    N: int

    @classmethod
    def of(cls, rho: DensityMatrix) -> 'SpectralPair':
        return cls(global_spectrum=rho.spectrum(),
                   reduced_spectrum=partial_trace_single(rho).spectrum(),
                   N=rho.N)

    def d_von_neumann(self) -> float:
        return (von_neumann(self.reduced_spectrum) - von_neumann(self.global_spectrum)
                - math.log(self.N))

    def d_linear(self) -> float:
        if self.N != 2:
            raise UnsupportedParticleCount(
                f"the linear-entropy criterion is defined for N=2, got N={self.N}", N=self.N)
        return linear_entropy(self.reduced_spectrum) - linear_entropy(self.global_spectrum) - 0.5

    def r_q(self, q: Union[EntropicOrder, float, str]) -> float:
        order = EntropicOrder.of(q)
        return renyi(self.reduced_spectrum, order) - renyi(self.global_spectrum, order) - math.log(self.N)

    def r_infinity(self) -> float:
        return (math.log(self.global_spectrum.max) - math.log(self.reduced_spectrum.max)
                - math.log(self.N))


def d_von_neumann(rho: DensityMatrix) -> float:
    """S_vN[rho_r] - S_vN[rho] - ln N"""
    return SpectralPair.of(rho).d_von_neumann()


def d_linear(rho: DensityMatrix) -> float:
    """
    S_L[rho_r] - S_L[rho] - 1/2

    Raises:
        UnsupportedParticleCount: N != 2
    """
    if rho.N != 2:
        raise UnsupportedParticleCount(
            f"the linear-entropy criterion is defined for N=2, got N={rho.N}", N=rho.N)
    return SpectralPair.of(rho).d_linear()


def r_q(rho: DensityMatrix, q: Union[EntropicOrder, float, str]) -> float:
    """
    S_q[rho_r] - S_q[rho] - ln N

    Raises:
        InvalidOrder: q < 1
    """
    order = EntropicOrder.of(q)
    return SpectralPair.of(rho).r_q(order)


def r_infinity(rho: DensityMatrix) -> float:
    """ln lmax(rho) - ln lmax(rho_r) - ln N; positive iff N lmax(rho_r) < lmax(rho)"""
    return SpectralPair.of(rho).r_infinity()


def slater_rank_one_test(rho: DensityMatrix, tol: Optional[float] = None) -> bool:
    """
    True iff the pure state rho is a single Slater determinant, i.e. Tr(rho_r^2) = 1/N

    Raises:
        NotPure: lmax(rho) < 1 - purity tolerance
    """
    tol = TOLERANCES['purity'] if tol is None else tol
    if not rho.is_pure():
        raise NotPure(f"largest eigenvalue {rho.spectrum().max:.12f} is below 1",
                      max_eigenvalue=rho.spectrum().max)
    reduced_purity = partial_trace_single(rho).purity()
    return abs(reduced_purity - 1.0 / rho.N) <= tol
