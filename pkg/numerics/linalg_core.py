"""
Dense complex linear algebra primitives
Hermitian eigendecomposition, PSD square root and the spectrum of rho * rho_tilde
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from config.entanglement_config import EIGENSOLVER, JACOBI_MAX_SWEEPS, TOLERANCES
from utils.error_handler import (
    ConvergenceFailure, DimensionMismatch, InvalidState, InvalidTrace,
    NegativeEigenvalue, NegativeProductEigenvalue, NotHermitian, NotSquare
)

# Dense complex matrix; the carrier for states, operators and basis changes
ComplexMatrix = np.ndarray

# Relative eigenvalue floor below which sqrt(rho) treats an eigenvalue as zero
SQRT_ZERO_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Descending eigenvalues of a density matrix, clamped to [0, 1]"""
    values: np.ndarray

    @classmethod
    def from_eigenvalues(cls, eigenvalues, check_normalization: bool = True) -> 'Spectrum':
        """
        Build a Spectrum from raw eigenvalues

        Args:
            eigenvalues: Real eigenvalues in any order
            check_normalization: Require the sum to be 1 within the trace tolerance

        Returns:
            Spectrum with values sorted non-increasing

        Raises:
            NegativeEigenvalue: An eigenvalue lies below the clamp window
            InvalidTrace: Sum differs from 1
        """
        vals = np.asarray(eigenvalues, dtype=float).ravel()
        if vals.size and vals.min() < -TOLERANCES['clamp']:
            raise NegativeEigenvalue(
                f"eigenvalue {vals.min():.3e} below -{TOLERANCES['clamp']:.0e}",
                min_eigenvalue=float(vals.min()))
        if check_normalization and abs(vals.sum() - 1.0) > TOLERANCES['trace']:
            raise InvalidTrace(f"eigenvalues sum to {vals.sum():.12f}", trace=float(vals.sum()))
        vals = np.clip(vals, 0.0, 1.0)
        vals = np.sort(vals)[::-1].copy()
        vals.flags.writeable = False
        return cls(vals)

    @property
    def max(self) -> float:
        return float(self.values[0])

    @property
    def dimension(self) -> int:
        return int(self.values.size)

    def purity(self) -> float:
        """Tr(rho^2)"""
        return float(np.sum(self.values ** 2))

    def __len__(self) -> int:
        return self.dimension


def as_complex_matrix(m) -> ComplexMatrix:
    """Coerce to a 2-D complex128 array with finite entries"""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidState(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidState("matrix has non-finite entries")
    return arr


def _require_square(m: ComplexMatrix) -> None:
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"matrix of shape {m.shape} is not square", shape=list(m.shape))


def hermitian_part(m, tol: Optional[float] = None) -> ComplexMatrix:
    """
    Symmetrize a matrix that is Hermitian within tolerance

    Raises:
        NotSquare, NotHermitian
    """
    tol = TOLERANCES['hermitian'] if tol is None else tol
    m = as_complex_matrix(m)
    _require_square(m)
    deviation = float(np.max(np.abs(m - m.conj().T)))
    if deviation > tol:
        raise NotHermitian(f"max |m - m^dagger| = {deviation:.3e} exceeds {tol:.0e}",
                           deviation=deviation)
    return (m + m.conj().T) / 2


def _off_diagonal_norm(a: ComplexMatrix) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_hermitian_eig(m, tol: Optional[float] = None,
                         max_sweeps: Optional[int] = None) -> Tuple[np.ndarray, ComplexMatrix]:
    """
    Cyclic Jacobi eigensolver for complex Hermitian matrices

    Each pivot (p, q) is annihilated by a unitary rotation J = diag(1, e*) R(t),
    where e is the phase of a[p, q] and R(t) the real Givens rotation.

    Args:
        m: Hermitian matrix
        tol: Off-diagonal Frobenius norm at which iteration stops
        max_sweeps: Hard cap on full sweeps

    Returns:
        (eigenvalues descending, eigenvectors as columns)

    Raises:
        ConvergenceFailure: Sweep cap reached
    """
    tol = TOLERANCES['jacobi_offdiag'] if tol is None else tol
    max_sweeps = JACOBI_MAX_SWEEPS if max_sweeps is None else max_sweeps
    a = hermitian_part(m).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)

    for _ in range(max_sweeps):
        if _off_diagonal_norm(a) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                b = abs(apq)
                if b == 0.0:
                    continue
                phase = apq / b
                diff = (a[p, p] - a[q, q]).real
                t = -math.pi / 4 if diff == 0.0 else 0.5 * math.atan(-2.0 * b / diff)
                c, s = math.cos(t), math.sin(t)
                rot = np.array([[c, s],
                                [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ rot
    else:
        if _off_diagonal_norm(a) >= tol:
            raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps",
                                     off_diagonal=_off_diagonal_norm(a))

    vals = np.diag(a).real
    order = np.argsort(vals)[::-1]
    return vals[order], v[:, order]


def hermitian_eig(m, method: Optional[str] = None) -> Tuple[np.ndarray, ComplexMatrix]:
    """
    Eigendecomposition of a Hermitian matrix

    Args:
        m: Square matrix, Hermitian within 1e-9 (symmetrized before use)
        method: 'lapack' or 'jacobi' (defaults to EIGENSOLVER)

    Returns:
        (real eigenvalues descending, orthonormal eigenvector columns)

    Raises:
        NotSquare, NotHermitian, ConvergenceFailure
    """
    method = (method or EIGENSOLVER).lower()
    if method == 'jacobi':
        return jacobi_hermitian_eig(m)

    h = hermitian_part(m)
    try:
        vals, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as e:
        raise ConvergenceFailure(f"LAPACK eigh failed: {e}") from e
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def hermitian_eigvals(m, method: Optional[str] = None) -> np.ndarray:
    """Eigenvalues only, descending"""
    method = (method or EIGENSOLVER).lower()
    if method == 'jacobi':
        return jacobi_hermitian_eig(m)[0]
    h = hermitian_part(m)
    try:
        vals = np.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as e:
        raise ConvergenceFailure(f"LAPACK eigvalsh failed: {e}") from e
    return vals[::-1].copy()


def spectrum_of(m, check_normalization: bool = True) -> Spectrum:
    """Spectrum of a Hermitian, PSD, unit-trace matrix"""
    return Spectrum.from_eigenvalues(hermitian_eigvals(m), check_normalization)


def psd_sqrt(m, floor: float = 0.0) -> ComplexMatrix:
    """
    Square root of a Hermitian positive semidefinite matrix

    Eigenvalues at or below `floor` are treated as exact zeros.

    Raises:
        NotHermitian, NegativeEigenvalue
    """
    vals, vecs = hermitian_eig(m)
    if vals.min() < -TOLERANCES['clamp']:
        raise NegativeEigenvalue(f"eigenvalue {vals.min():.3e} is not PSD",
                                 min_eigenvalue=float(vals.min()))
    vals = np.where(vals <= floor, 0.0, vals)
    roots = np.sqrt(np.clip(vals, 0.0, None))
    s = (vecs * roots) @ vecs.conj().T
    return (s + s.conj().T) / 2


def product_sqrt_eigvals(rho, rho_tilde) -> List[float]:
    """
    Square roots of the eigenvalues of rho * rho_tilde, descending

    Evaluated as the spectrum of the Hermitian matrix sqrt(rho) rho_tilde sqrt(rho),
    which is similar to rho * rho_tilde.

    Raises:
        NotSquare, DimensionMismatch, NegativeProductEigenvalue
    """
    rho = as_complex_matrix(rho)
    rho_tilde = as_complex_matrix(rho_tilde)
    _require_square(rho)
    _require_square(rho_tilde)
    if rho.shape != rho_tilde.shape:
        raise DimensionMismatch(f"shapes {rho.shape} and {rho_tilde.shape} differ")

    # round-off eigenvalues of a rank-deficient rho count as zero
    root = psd_sqrt(rho, floor=SQRT_ZERO_FLOOR * float(np.max(np.abs(rho))))
    h = root @ rho_tilde @ root
    vals = hermitian_eigvals(h)
    if vals.min() < -TOLERANCES['clamp']:
        raise NegativeProductEigenvalue(
            f"sqrt(rho) rho_tilde sqrt(rho) has eigenvalue {vals.min():.3e}",
            min_eigenvalue=float(vals.min()))
    scale = max(rho.shape[0] * float(np.max(np.abs(rho))) * float(np.max(np.abs(rho_tilde))),
                float(vals.max()))
    vals = np.where(vals <= SQRT_ZERO_FLOOR * scale, 0.0, vals)
    return [float(x) for x in np.sqrt(np.clip(vals, 0.0, None))]
