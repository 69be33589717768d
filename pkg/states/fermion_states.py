"""
Fermionic State Construction
Slater determinants, the parametrized state families, random separable states
and the single-particle partial trace, all in the full product basis (C^n)^{(x)N}
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from config.entanglement_config import (
    MAX_DENSITY_DIMENSION, MAX_VECTOR_DIMENSION, TOLERANCES
)
from numerics.angular_momentum import SpinLabel, antisymmetric_basis
from numerics.linalg_core import (
    ComplexMatrix, Spectrum, as_complex_matrix, hermitian_eigvals, hermitian_part, spectrum_of
)
from utils.common import setup_logging
from utils.error_handler import (
    DimensionMismatch, DimensionTooLarge, InvalidDimensions, InvalidState, InvalidTrace,
    NegativeEigenvalue, NotOrthonormal, OddDimension, ParameterOutOfRange, RepeatedIndex,
    SupportLeak, UnknownFamily
)

logger = setup_logging(__name__)

SPIN_3_2 = SpinLabel(3)
SPIN_5_2 = SpinLabel(5)


def _check_dimensions(n: int, N: int, limit: int) -> None:
    if N < 2 or n < N:
        raise InvalidDimensions(f"need 2 <= N <= n, got n={n}, N={N}", n=n, N=N)
    if n ** N > limit:
        raise DimensionTooLarge(f"n**N = {n ** N} exceeds {limit}", n=n, N=N, limit=limit)


def _permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm))
                     if perm[a] > perm[b])
    return -1 if inversions % 2 else 1


@dataclass(frozen=True, eq=False)
class ReducedDensityMatrix:
    """Single-particle reduced state rho_r (n x n)"""
    n: int
    matrix: ComplexMatrix

    def spectrum(self) -> Spectrum:
        return spectrum_of(self.matrix)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Validated N-fermion density matrix in the n**N product basis

    Use DensityMatrix.create(); direct construction skips validation.
    """
    n: int
    N: int
    matrix: ComplexMatrix
    _support_eigenvalues: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @classmethod
    def create(cls, matrix, n: int, N: int) -> 'DensityMatrix':
        """
        Validate and wrap a product-basis density matrix

        Checks, in order: dimensions, Hermiticity, unit trace, support on the
        antisymmetric sector, positivity.

        Raises:
            InvalidDimensions, DimensionTooLarge, DimensionMismatch, NotHermitian,
            InvalidTrace, SupportLeak, NegativeEigenvalue
        """
        _check_dimensions(n, N, MAX_DENSITY_DIMENSION)
        m = as_complex_matrix(matrix)
        dim = n ** N
        if m.shape != (dim, dim):
            raise DimensionMismatch(f"expected {dim}x{dim} for n={n}, N={N}, got {m.shape}",
                                    n=n, N=N, shape=list(m.shape))
        m = hermitian_part(m)

        trace = float(np.real(np.trace(m)))
        if abs(trace - 1.0) > TOLERANCES['trace']:
            raise InvalidTrace(f"trace is {trace:.12f}", trace=trace)

        q = antisymmetric_sector_basis(n, N)
        compressed = q.conj().T @ m @ q
        leak = float(np.max(np.abs(m - q @ compressed @ q.conj().T)))
        if leak > TOLERANCES['support']:
            raise SupportLeak(f"weight outside the antisymmetric sector: {leak:.3e}", leak=leak)

        eigenvalues = hermitian_eigvals(compressed)
        if eigenvalues.min() < -TOLERANCES['clamp']:
            raise NegativeEigenvalue(f"eigenvalue {eigenvalues.min():.3e} is negative",
                                     min_eigenvalue=float(eigenvalues.min()))
        m.flags.writeable = False
        eigenvalues.flags.writeable = False
        return cls(n=n, N=N, matrix=m, _support_eigenvalues=eigenvalues)

    @property
    def dimension(self) -> int:
        return self.n ** self.N

    @property
    def sector_dimension(self) -> int:
        return math.comb(self.n, self.N)

    def spectrum(self) -> Spectrum:
        """Spectrum of rho on its support (zeros outside the antisymmetric sector omitted)"""
        eigenvalues = self._support_eigenvalues
        if eigenvalues is None:
            q = antisymmetric_sector_basis(self.n, self.N)
            eigenvalues = hermitian_eigvals(q.conj().T @ self.matrix @ q)
        return Spectrum.from_eigenvalues(eigenvalues)

    def is_pure(self, tol: Optional[float] = None) -> bool:
        tol = TOLERANCES['purity'] if tol is None else tol
        return self.spectrum().max >= 1.0 - tol


@lru_cache(maxsize=None)
def antisymmetric_sector_basis(n: int, N: int) -> ComplexMatrix:
    """
    Isometry onto the antisymmetric sector

    Columns are the Slater determinants |i1 ... iN| for i1 < ... < iN in
    lexicographic order; shape (n**N, C(n, N)). Returned array is read-only.
    """
    columns = [slater_n(n, [i + 1 for i in idx]) for idx in combinations(range(n), N)]
    q = np.hstack(columns)
    q.flags.writeable = False
    return q


@lru_cache(maxsize=None)
def antisymmetrizer(n: int, N: int) -> ComplexMatrix:
    """Projector P_anti onto the antisymmetric sector (read-only)"""
    q = antisymmetric_sector_basis(n, N)
    p = q @ q.conj().T
    p.flags.writeable = False
    return p


def sector_identity(n: int, N: int) -> ComplexMatrix:
    """Maximally mixed antisymmetric state I_anti / d"""
    return antisymmetrizer(n, N) / math.comb(n, N)


def _as_column(phi, n: Optional[int] = None) -> ComplexMatrix:
    vec = as_complex_matrix(phi).reshape(-1, 1)
    if n is not None and vec.shape[0] != n:
        raise DimensionMismatch(f"expected a length-{n} vector, got {vec.shape[0]}")
    return vec


def slater2(phi1, phi2) -> ComplexMatrix:
    """
    Two-fermion Slater determinant (|phi1>|phi2> - |phi2>|phi1>)/sqrt(2)

    Raises:
        NotOrthonormal: inputs are not unit vectors or not orthogonal
    """
    a = _as_column(phi1)
    b = _as_column(phi2, a.shape[0])
    tol = TOLERANCES['orthonormal']
    norms = (float(np.linalg.norm(a)), float(np.linalg.norm(b)))
    overlap = complex(np.vdot(a, b))
    if abs(norms[0] - 1) > tol or abs(norms[1] - 1) > tol or abs(overlap) > tol:
        raise NotOrthonormal(f"norms {norms}, overlap {abs(overlap):.3e}",
                             norms=list(norms), overlap=abs(overlap))
    return (np.kron(a, b) - np.kron(b, a)) / math.sqrt(2)


def slater_n(n: int, indices: Sequence[int]) -> ComplexMatrix:
    """
    N-fermion Slater determinant of single-particle basis vectors (1-based indices)

    Raises:
        RepeatedIndex, ParameterOutOfRange, InvalidDimensions, DimensionTooLarge
    """
    indices = [int(i) for i in indices]
    N = len(indices)
    if len(set(indices)) != N:
        raise RepeatedIndex(f"indices {indices} are not distinct", indices=indices)
    if any(i < 1 or i > n for i in indices):
        raise ParameterOutOfRange(f"indices {indices} outside [1, {n}]", indices=indices)
    _check_dimensions(n, N, MAX_VECTOR_DIMENSION)

    tensor = np.zeros((n,) * N, dtype=np.complex128)
    amplitude = 1.0 / math.sqrt(math.factorial(N))
    zero_based = [i - 1 for i in indices]
    for perm in permutations(range(N)):
        position = tuple(zero_based[k] for k in perm)
        tensor[position] = _permutation_sign(perm) * amplitude
    return tensor.reshape(-1, 1)


def basis_vector(n: int, index: int) -> ComplexMatrix:
    """Single-particle basis vector |index> (0-based) as a column"""
    vec = np.zeros((n, 1), dtype=np.complex128)
    vec[index, 0] = 1.0
    return vec


def density_from_vector(psi, n: int, N: int) -> DensityMatrix:
    """
    Projector |psi><psi| of a unit state vector

    Raises:
        InvalidState: psi is not normalized
    """
    vec = _as_column(psi)
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > TOLERANCES['orthonormal']:
        raise InvalidState(f"state vector has norm {norm:.12f}", norm=norm)
    return DensityMatrix.create(vec @ vec.conj().T, n, N)


def mix(states: Sequence[DensityMatrix], weights: Iterable[float]) -> DensityMatrix:
    """Convex combination of density matrices with common (n, N)"""
    weights = [float(w) for w in weights]
    if not states or len(weights) != len(states):
        raise DimensionMismatch("need one weight per state")
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > TOLERANCES['trace']:
        raise ParameterOutOfRange(f"weights {weights} are not a probability vector")
    n, N = states[0].n, states[0].N
    if any((s.n, s.N) != (n, N) for s in states):
        raise DimensionMismatch("states have different (n, N)")
    total = sum(w * s.matrix for w, s in zip(weights, states))
    return DensityMatrix.create(total, n, N)


def partial_trace_single(rho: DensityMatrix) -> ReducedDensityMatrix:
    """Trace out particles 2..N, leaving the n x n single-particle state"""
    n, rest = rho.n, rho.n ** (rho.N - 1)
    reduced = np.einsum('ajbj->ab', rho.matrix.reshape(n, rest, n, rest))
    reduced = (reduced + reduced.conj().T) / 2
    reduced.flags.writeable = False
    return ReducedDensityMatrix(n=n, matrix=reduced)


def _check_probability(p: float, name: str = 'p') -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise ParameterOutOfRange(f"{name}={p} outside [0, 1]", **{name: p})
    return p


def _projector(vec: ComplexMatrix) -> ComplexMatrix:
    return vec @ vec.conj().T


def werner_state(p: float) -> DensityMatrix:
    """Werner-like state p|0,0><0,0| + (1-p)/6 I_anti, n=4, N=2"""
    p = _check_probability(p)
    singlet = antisymmetric_basis(SPIN_3_2).state(0, 0)
    matrix = p * _projector(singlet) + (1 - p) * sector_identity(4, 2)
    return DensityMatrix.create(matrix, 4, 2)


def _product_ket(s: SpinLabel, two_m1: int, two_m2: int) -> ComplexMatrix:
    n = s.n
    return np.kron(basis_vector(n, s.index_of_two_m(two_m1)),
                   basis_vector(n, s.index_of_two_m(two_m2)))


def theta_state(theta: float) -> DensityMatrix:
    """
    Pure theta-state, n=4, N=2:
    sin(t)/sqrt2 (|-3/2,3/2> - |3/2,-3/2>) + cos(t)/sqrt2 (|-1/2,1/2> - |1/2,-1/2>)
    with |m1,m2> the product ket |m1>(x)|m2>
    """
    s = SPIN_3_2
    outer = _product_ket(s, -3, 3) - _product_ket(s, 3, -3)
    inner = _product_ket(s, -1, 1) - _product_ket(s, 1, -1)
    psi = (math.sin(theta) * outer + math.cos(theta) * inner) / math.sqrt(2)
    return density_from_vector(psi, 4, 2)


def gisin_state(p: float) -> DensityMatrix:
    """Gisin-like state p|0,0><0,0| + (1-p)/2 (|2,-2><2,-2| + |2,2><2,2|), n=4, N=2"""
    p = _check_probability(p)
    basis = antisymmetric_basis(SPIN_3_2)
    matrix = (p * _projector(basis.state(0, 0))
              + (1 - p) / 2 * (_projector(basis.state(2, -2)) + _projector(basis.state(2, 2))))
    return DensityMatrix.create(matrix, 4, 2)


def slater_bar(s: SpinLabel, two_m1: int, two_m2: int) -> ComplexMatrix:
    """Normalized Slater determinant |m1 m2| of two single-particle basis states"""
    return slater2(basis_vector(s.n, s.index_of_two_m(two_m1)),
                   basis_vector(s.n, s.index_of_two_m(two_m2)))


@lru_cache(maxsize=None)
def dim6_pure_vector(which: int) -> ComplexMatrix:
    """Entangled pure states of the n=6 families, built from |m1 m2| determinants"""
    s = SPIN_5_2
    top = slater_bar(s, 5, 3)        # |5/2 3/2|
    middle = slater_bar(s, 1, -1)    # |1/2 -1/2|
    bottom = slater_bar(s, -3, -5)   # |-3/2 -5/2|
    if which == 1:
        vec = (top + middle - bottom) / math.sqrt(3)
    elif which == 2:
        vec = -2 / 3 * top - 2 / 3 * middle + 1 / 3 * bottom
    elif which == 3:
        vec = (top + middle) / math.sqrt(2)
    else:
        raise UnknownFamily(f"dim-6 family {which!r} not in {{1, 2, 3}}", which=which)
    vec.flags.writeable = False
    return vec


def dim6_state(which: int, p: float) -> DensityMatrix:
    """p|phi_i><phi_i| + (1-p)/15 I_anti on the n=6 two-fermion space"""
    vec = dim6_pure_vector(which)
    p = _check_probability(p)
    matrix = p * _projector(vec) + (1 - p) * sector_identity(6, 2)
    return DensityMatrix.create(matrix, 6, 2)


@lru_cache(maxsize=None)
def general_werner_vector(N: int, k: int) -> ComplexMatrix:
    """|Phi> = k**-1/2 sum of k disjoint N-particle Slater determinants, n = kN"""
    if N < 2 or k < 2:
        raise InvalidDimensions(f"need N >= 2 and k >= 2, got N={N}, k={k}", N=N, k=k)
    n = k * N
    _check_dimensions(n, N, MAX_VECTOR_DIMENSION)
    blocks = [slater_n(n, range(b * N + 1, b * N + N + 1)) for b in range(k)]
    vec = sum(blocks) / math.sqrt(k)
    vec.flags.writeable = False
    return vec


@lru_cache(maxsize=None)
def general_werner_reduced(N: int, k: int) -> ComplexMatrix:
    """Single-particle reduction of |Phi><Phi|, contracted directly from the state vector"""
    n = k * N
    amplitudes = general_werner_vector(N, k).reshape(n, -1)
    reduced = hermitian_part(amplitudes @ amplitudes.conj().T)
    reduced.flags.writeable = False
    return reduced


def general_werner(N: int, k: int, p: float) -> DensityMatrix:
    """
    N-fermion Werner-like family p|Phi><Phi| + (1-p)/d I_d, single-particle dimension n = kN

    Raises:
        ParameterOutOfRange, InvalidDimensions, DimensionTooLarge
    """
    p = _check_probability(p)
    n = k * N
    vec = general_werner_vector(N, k)
    _check_dimensions(n, N, MAX_DENSITY_DIMENSION)
    matrix = p * _projector(vec) + (1 - p) * sector_identity(n, N)
    return DensityMatrix.create(matrix, n, N)


def general_werner_spectra(N: int, k: int, p: float) -> Tuple[Spectrum, Spectrum]:
    """
    Spectra of general_werner(N, k, p) and of its single-particle reduction

    No dense density matrix is formed, so only the state-vector guard applies.
    |Phi> lies in the sector, so rho has eigenvalue p + (1-p)/d once and (1-p)/d
    on the other d-1 sector states; the identity part reduces to I/n.

    Raises:
        ParameterOutOfRange, InvalidDimensions, DimensionTooLarge
    """
    p = _check_probability(p)
    n = k * N
    reduced_phi = general_werner_reduced(N, k)
    d = math.comb(n, N)
    global_values = np.full(d, (1 - p) / d)
    global_values[0] += p
    reduced = p * reduced_phi + (1 - p) * np.eye(n) / n
    return Spectrum.from_eigenvalues(global_values), spectrum_of(reduced)



def _random_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.normal(size=n) + 1j * rng.normal(size=n)
    return g / np.linalg.norm(g)


def _random_orthonormal_pair(rng: np.random.Generator, n: int):
    """Gram-Schmidt on two Gaussian complex vectors"""
    a = _random_unit(rng, n)
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    b = b - np.vdot(a, b) * a
    b = b / np.linalg.norm(b)
    return a, b


def random_separable(n: int, terms: int, seed: int) -> DensityMatrix:
    """
    Mixture of `terms` random two-fermion Slater determinants with Dirichlet weights

    Raises:
        OddDimension, ParameterOutOfRange
    """
    if n % 2:
        raise OddDimension(f"single-particle dimension {n} is odd", n=n)
    if terms < 1:
        raise ParameterOutOfRange(f"terms={terms} must be >= 1", terms=terms)
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    matrix = np.zeros((n * n, n * n), dtype=np.complex128)
    for weight in weights:
        a, b = _random_orthonormal_pair(rng, n)
        matrix += weight * _projector(slater2(a, b))
    return DensityMatrix.create(matrix, n, 2)


def random_antisymmetric_pure(n: int, seed: int) -> DensityMatrix:
    """Haar-random pure state of two fermions in the antisymmetric sector"""
    if n % 2:
        raise OddDimension(f"single-particle dimension {n} is odd", n=n)
    rng = np.random.default_rng(seed)
    q = antisymmetric_sector_basis(n, 2)
    coefficients = _random_unit(rng, q.shape[1]).reshape(-1, 1)
    return density_from_vector(q @ coefficients, n, 2)
