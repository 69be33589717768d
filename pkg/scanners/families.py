"""
Parametrized state families
Registry of the reference families scanned for detection thresholds
"""

import math
from dataclasses import dataclass
from functools import partial
from typing import Callable, Dict, Optional, Tuple

from indicators.entropic_criteria import SpectralPair
from states.fermion_states import (
    DensityMatrix, dim6_state, general_werner, general_werner_spectra, gisin_state, theta_state,
    werner_state
)
from utils.error_handler import UnknownFamily


@dataclass(frozen=True)
class StateFamily:
    """A map from a scalar parameter to a density matrix"""
    family_id: str
    n: int
    N: int
    build: Callable[[float], DensityMatrix]
    interval: Tuple[float, float] = (0.0, 1.0)
    description: str = ""
    spectra: Optional[Callable[[float], SpectralPair]] = None

    @property
    def has_concurrence(self) -> bool:
        return self.n == 4 and self.N == 2

    def __call__(self, p: float) -> DensityMatrix:
        return self.build(p)

    def pair(self, p: float) -> SpectralPair:
        """Spectra at p, through the spectral shortcut when the family has one"""
        if self.spectra is not None:
            return self.spectra(p)
        return SpectralPair.of(self.build(p))


FAMILIES: Dict[str, StateFamily] = {
    'werner': StateFamily('werner', 4, 2, werner_state,
                          description="singlet mixed with the antisymmetric identity"),
    'gisin': StateFamily('gisin', 4, 2, gisin_state,
                         description="singlet mixed with |2,2> and |2,-2>"),
    'theta': StateFamily('theta', 4, 2, theta_state, interval=(0.0, math.pi),
                         description="pure states interpolating two Slater determinants"),
    'dim6-1': StateFamily('dim6-1', 6, 2, partial(dim6_state, 1),
                          description="phi_1 mixed with the 15-dim identity"),
    'dim6-2': StateFamily('dim6-2', 6, 2, partial(dim6_state, 2),
                          description="phi_2 mixed with the 15-dim identity"),
    'dim6-3': StateFamily('dim6-3', 6, 2, partial(dim6_state, 3),
                          description="phi_3 mixed with the 15-dim identity"),
}

# Families parametrized by a mixing weight p in [0, 1]
MIXED_FAMILIES = ('werner', 'gisin', 'dim6-1', 'dim6-2', 'dim6-3')

FIGURE_FAMILIES = {
    1: ('werner', 'gisin'),
    2: ('dim6-1', 'dim6-2', 'dim6-3'),
}


def get_family(family_id: str) -> StateFamily:
    """
    Raises:
        UnknownFamily: id not registered
    """
    try:
        return FAMILIES[family_id]
    except KeyError:
        raise UnknownFamily(f"unknown family {family_id!r}; choose from {sorted(FAMILIES)}",
                            family=family_id)


def _general_werner_pair(N: int, k: int, p: float) -> SpectralPair:
    global_spectrum, reduced_spectrum = general_werner_spectra(N, k, p)
    return SpectralPair(global_spectrum, reduced_spectrum, N)


def general_werner_family(N: int, k: int) -> StateFamily:
    """
    N-fermion Werner-like family on n = kN single-particle states

    Scans read spectra from the state vector; the dense matrix is built only on request.
    """
    return StateFamily(f'general-werner-N{N}-k{k}', k * N, N, partial(general_werner, N, k),
                       description=f"{k} disjoint {N}-fermion Slater determinants mixed with the identity",
                       spectra=partial(_general_werner_pair, N, k))
