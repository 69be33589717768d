"""
Angular momentum coupling for two identical spins
Clebsch-Gordan coefficients and the coupled |j, m> basis of the two-particle space

Quantum numbers are passed doubled (two_j = 2j) so half-integers stay exact.
Single-particle basis index i (0-based) carries m_s = s - i, i.e. the first
basis vector is the stretched state |s, s>.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from config.entanglement_config import TOLERANCES
from utils.error_handler import InvalidQuantumNumbers, OddDimension
from .linalg_core import ComplexMatrix


@dataclass(frozen=True)
class SpinLabel:
    """Spin s = two_s / 2 of one particle; single-particle dimension n = two_s + 1"""
    two_s: int

    def __post_init__(self):
        if not isinstance(self.two_s, (int, np.integer)) or self.two_s < 0:
            raise InvalidQuantumNumbers(f"two_s must be a non-negative integer, got {self.two_s!r}")

    @classmethod
    def from_dimension(cls, n: int) -> 'SpinLabel':
        return cls(int(n) - 1)

    @property
    def n(self) -> int:
        return self.two_s + 1

    @property
    def s(self) -> float:
        return self.two_s / 2

    def two_m_of_index(self, i: int) -> int:
        """Doubled magnetic quantum number of single-particle basis index i"""
        return self.two_s - 2 * i

    def index_of_two_m(self, two_m: int) -> int:
        return (self.two_s - two_m) // 2


@dataclass(frozen=True, eq=False)
class CoupledState:
    j: int
    m: int
    vector: ComplexMatrix  # column of length n**2, read-only


@dataclass(frozen=True, eq=False)
class CoupledBasis:
    """Ordered coupled states (descending j, then descending m)"""
    s: SpinLabel
    states: Tuple[CoupledState, ...]

    def __len__(self) -> int:
        return len(self.states)

    def matrix(self) -> ComplexMatrix:
        """n**2 x len(basis) matrix whose columns are the basis vectors"""
        return np.hstack([st.vector for st in self.states])

    def state(self, j: int, m: int) -> ComplexMatrix:
        for st in self.states:
            if st.j == j and st.m == m:
                return st.vector
        raise InvalidQuantumNumbers(f"|{j},{m}> not in basis")

    def labels(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((st.j, st.m) for st in self.states)


def _check_pair(two_j: int, two_m: int, label: str) -> None:
    if two_j < 0:
        raise InvalidQuantumNumbers(f"{label}: negative j", two_j=two_j)
    if (two_j - two_m) % 2 != 0:
        raise InvalidQuantumNumbers(f"{label}: j and m parities differ", two_j=two_j, two_m=two_m)
    if abs(two_m) > two_j:
        raise InvalidQuantumNumbers(f"{label}: |m| > j", two_j=two_j, two_m=two_m)


def _log_factorial(k: int) -> float:
    return math.lgamma(k + 1)


@lru_cache(maxsize=None)
def clebsch_gordan(two_j1: int, two_m1: int, two_j2: int, two_m2: int,
                   two_j: int, two_m: int) -> float:
    """
    Condon-Shortley Clebsch-Gordan coefficient <j1 m1; j2 m2 | j m>

    Racah's closed-form sum evaluated with log-factorials; magnitudes below
    the cg_snap tolerance are returned as exactly 0.

    Raises:
        InvalidQuantumNumbers: parity mismatch or |m| > j
    """
    _check_pair(two_j1, two_m1, "j1")
    _check_pair(two_j2, two_m2, "j2")
    _check_pair(two_j, two_m, "j")
    if (two_j1 + two_j2 + two_j) % 2 != 0:
        raise InvalidQuantumNumbers("j1 + j2 + j is not an integer",
                                    two_j1=two_j1, two_j2=two_j2, two_j=two_j)

    if two_m1 + two_m2 != two_m:
        return 0.0
    if two_j < abs(two_j1 - two_j2) or two_j > two_j1 + two_j2:
        return 0.0

    # all of these are integers once halved
    a = (two_j1 + two_j2 - two_j) // 2
    b = (two_j1 - two_j2 + two_j) // 2
    c = (-two_j1 + two_j2 + two_j) // 2
    big = (two_j1 + two_j2 + two_j) // 2 + 1
    j1pm1, j1mm1 = (two_j1 + two_m1) // 2, (two_j1 - two_m1) // 2
    j2pm2, j2mm2 = (two_j2 + two_m2) // 2, (two_j2 - two_m2) // 2
    jpm, jmm = (two_j + two_m) // 2, (two_j - two_m) // 2
    d1 = (two_j - two_j2 + two_m1) // 2
    d2 = (two_j - two_j1 - two_m2) // 2

    log_prefactor = 0.5 * (
        math.log(two_j + 1)
        + _log_factorial(a) + _log_factorial(b) + _log_factorial(c) - _log_factorial(big)
        + _log_factorial(j1pm1) + _log_factorial(j1mm1)
        + _log_factorial(j2pm2) + _log_factorial(j2mm2)
        + _log_factorial(jpm) + _log_factorial(jmm)
    )

    k_min = max(0, -d1, -d2)
    k_max = min(a, j1mm1, j2pm2)
    total = 0.0
    for k in range(k_min, k_max + 1):
        log_den = (_log_factorial(k) + _log_factorial(a - k) + _log_factorial(j1mm1 - k)
                   + _log_factorial(j2pm2 - k) + _log_factorial(d1 + k) + _log_factorial(d2 + k))
        sign = -1.0 if k % 2 else 1.0
        total += sign * math.exp(log_prefactor - log_den)

    if abs(total) < TOLERANCES['cg_snap']:
        return 0.0
    return total


def coupled_state(s: SpinLabel, j: int, m: int) -> ComplexMatrix:
    """
    Coupled state |j, m> = sum CG(s m1; s m2 | j m) |m1> (x) |m2> as an n**2 column

    Raises:
        InvalidQuantumNumbers: j outside [0, 2s] or |m| > j
    """
    if not (0 <= j <= s.two_s) or abs(m) > j:
        raise InvalidQuantumNumbers(f"|{j},{m}> invalid for s={s.s}", j=j, m=m)
    n = s.n
    vec = np.zeros((n * n, 1), dtype=np.complex128)
    for a in range(n):
        two_m1 = s.two_m_of_index(a)
        two_m2 = 2 * m - two_m1
        if abs(two_m2) > s.two_s:
            continue
        b = s.index_of_two_m(two_m2)
        vec[a * n + b, 0] = clebsch_gordan(s.two_s, two_m1, s.two_s, two_m2, 2 * j, 2 * m)
    norm = np.linalg.norm(vec)
    vec /= norm
    vec.flags.writeable = False
    return vec


@lru_cache(maxsize=None)
def antisymmetric_basis(s: SpinLabel) -> CoupledBasis:
    """
    Even-j coupled states, spanning the antisymmetric two-particle sector

    Raises:
        OddDimension: n = two_s + 1 is odd
    """
    if s.two_s % 2 == 0:
        raise OddDimension(f"single-particle dimension {s.n} is odd", n=s.n)
    states = []
    top_even_j = s.two_s - 1
    for j in range(top_even_j, -1, -2):
        for m in range(j, -j - 1, -1):
            states.append(CoupledState(j=j, m=m, vector=coupled_state(s, j, m)))
    return CoupledBasis(s=s, states=tuple(states))


def swap_matrix(n: int) -> ComplexMatrix:
    """Particle exchange operator on C^n (x) C^n"""
    swap = np.zeros((n * n, n * n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            swap[b * n + a, a * n + b] = 1.0
    return swap
