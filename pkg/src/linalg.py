"""
Dense complex matrix kernel.

Hilbert-Schmidt geometry, SVD based rank / null-space decisions,
eigendecomposition with residual checks and orthonormalization of
matrix families.

Vectorization is column stacking everywhere in the package:
vec(x y z) = (z^T kron x) vec(y).
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la

import config
from .errors import (ERROR_DIM_MISMATCH, ERROR_NOT_FINITE, ERROR_NOT_SQUARE,
                     NumericError, ShapeError)


# Matrices are plain complex numpy arrays
CMatrix = np.ndarray


@dataclass(frozen=True)
class Tolerance:
    """
    Numerical thresholds used by every rank, eigenvalue and identity decision.

    :param rank_eps: Relative singular-value cutoff
    :param eig_eps: Eigenvalue comparison threshold
    :param residual_eps: Identity-check residual
    """

    rank_eps: float = 1e-10
    eig_eps: float = 1e-8
    residual_eps: float = 1e-9

    def __post_init__(self) -> None:
        if min(self.rank_eps, self.eig_eps, self.residual_eps) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if self.rank_eps >= 1:
            raise ValueError("rank_eps must be < 1")

    @classmethod
    def from_config(cls) -> 'Tolerance':
        """
        Build the default tolerance from config (environment overrides included).

        :return: Tolerance record
        """
        return cls(rank_eps=config.RANK_EPS,
                   eig_eps=config.EIG_EPS,
                   residual_eps=config.RESIDUAL_EPS)

    @property
    def cluster_eps(self) -> float:
        """Eigenvalues closer than this are one cluster."""
        return getattr(config, 'DEGENERACY_FACTOR', 100) * self.eig_eps


def as_cmatrix(m: Iterable, square: bool = True) -> CMatrix:
    """
    Convert input to a finite complex128 matrix.

    :param m: Anything numpy can turn into a 2-D array
    :param square: Require a square matrix
    :return: Complex matrix (copy)
    """
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got {arr.ndim} dimensions")
    if square and arr.shape[0] != arr.shape[1]:
        raise ShapeError(ERROR_NOT_SQUARE.format(shape=arr.shape))
    if not np.all(np.isfinite(arr)):
        raise ShapeError(ERROR_NOT_FINITE)
    return arr


def dagger(a: CMatrix) -> CMatrix:
    return a.conj().T


def vec(x: CMatrix) -> np.ndarray:
    """
    Column-stacking vectorization.

    :param x: d x d matrix
    :return: Vector of length d^2
    """
    return np.asarray(x).reshape(-1, order='F')


def unvec(v: np.ndarray, dim: Optional[int] = None) -> CMatrix:
    """
    Inverse of vec.

    :param v: Vector of length d^2
    :param dim: d (inferred when omitted)
    :return: d x d matrix
    """
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise ShapeError(ERROR_DIM_MISMATCH.format(expected=dim * dim, got=v.size))
    return v.reshape((dim, dim), order='F')


def hs_inner(a: CMatrix, b: CMatrix) -> complex:
    """
    Hilbert-Schmidt inner product <a, b> = tr(a b*).

    :param a: Square matrix
    :param b: Square matrix of the same dimension
    :return: Complex scalar
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(ERROR_DIM_MISMATCH.format(expected=a.shape, got=b.shape))
    # vdot conjugates its first argument
    return complex(np.vdot(b.ravel(), a.ravel()))


def hs_norm(a: CMatrix) -> float:
    return float(np.linalg.norm(a))


def _borderline(singular_values: np.ndarray, cutoff: float) -> Optional[str]:
    """
    Report singular values sitting close to the rank cutoff.

    :param singular_values: Descending singular values
    :param cutoff: Absolute cutoff
    :return: Warning text or None
    """
    if cutoff <= 0 or singular_values.size == 0:
        return None
    factor = getattr(config, 'GAP_WARNING_FACTOR', 10)
    close = singular_values[(singular_values > cutoff / factor) & (singular_values < cutoff * factor)]
    if close.size == 0:
        return None
    return (f"borderline rank: {close.size} singular value(s) within a factor {factor} "
            f"of the cutoff {cutoff:.2e} (closest {close[np.argmin(np.abs(np.log(close / cutoff)))]:.2e})")


def null_space(m: CMatrix, tol: Tolerance, warnings: Optional[List[str]] = None,
               scale: float = 1.0) -> np.ndarray:
    """
    Orthonormal basis of {v : ||m v|| <= rank_eps * max(sigma_max, scale) * ||v||}.

    Singular values below rank_eps * scale are zero even when sigma_max is
    itself roundoff.

    :param m: Matrix (any shape)
    :param tol: Tolerances
    :param warnings: Optional list receiving borderline-rank warnings
    :param scale: Reference norm of the operator m was built from (1 for unit-scale inputs)
    :return: Array of shape (n_cols, k) whose columns span the null space
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got {m.ndim} dimensions")
    n_cols = m.shape[1]
    if m.size == 0:
        return np.eye(n_cols, dtype=complex)

    _, s, vh = la.svd(m, full_matrices=True, lapack_driver='gesvd')
    sigma_max = s[0] if s.size else 0.0
    if sigma_max == 0.0:
        return np.eye(n_cols, dtype=complex)

    cutoff = tol.rank_eps * max(sigma_max, scale)
    rank = int(np.sum(s > cutoff))
    if warnings is not None:
        note = _borderline(s, cutoff)
        if note:
            warnings.append(note)
    return vh[rank:].conj().T


def eig(m: CMatrix, tol: Optional[Tolerance] = None) -> Tuple[np.ndarray, CMatrix]:
    """
    Eigenvalues (with algebraic multiplicity) and unit-norm right eigenvectors.

    :param m: Square matrix
    :param tol: Tolerances (defaults from config)
    :return: (eigenvalues, eigenvector matrix with eigenvectors as columns)
    """
    tol = tol or Tolerance.from_config()
    m = as_cmatrix(m)
    try:
        values, vectors = la.eig(m)
    except la.LinAlgError as e:
        raise NumericError(f"eigendecomposition failed: {e}", {'shape': m.shape}) from e

    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
        raise NumericError("eigendecomposition returned non-finite values", {'shape': m.shape})

    norms = np.linalg.norm(vectors, axis=0)
    norms[norms == 0] = 1.0
    vectors = vectors / norms

    scale = max(np.linalg.norm(m), 1.0)
    residuals = np.linalg.norm(m @ vectors - vectors * values, axis=0)
    worst = float(residuals.max()) if residuals.size else 0.0
    if worst > tol.residual_eps * scale:
        raise NumericError("eigenpair residual above tolerance",
                           {'max_residual': worst, 'allowed': tol.residual_eps * scale})
    return values, vectors


def cluster_values(values: Sequence[complex], eps: float) -> List[List[int]]:
    """
    Group indices of nearly equal complex values (single linkage).

    :param values: Complex values
    :param eps: Merge distance
    :return: List of index clusters
    """
    values = np.asarray(values, dtype=complex)
    clusters: List[List[int]] = []
    for i, v in enumerate(values):
        hits = [c for c in clusters if np.min(np.abs(values[c] - v)) < eps]
        if not hits:
            clusters.append([i])
            continue
        merged = [i]
        for c in hits:
            merged.extend(c)
            clusters.remove(c)
        clusters.append(sorted(merged))
    return clusters


@dataclass(frozen=True, eq=False)
class OperatorSubspace:
    """
    Subspace of M_d with a Hilbert-Schmidt orthonormal basis.

    :param dim_ambient: d
    :param basis: Array (k, d, d) of orthonormal matrices
    :param warnings: Borderline-rank notes collected while computing it
    """

    dim_ambient: int
    basis: np.ndarray
    warnings: Tuple[str, ...] = field(default=())

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[0])

    @property
    def vectors(self) -> np.ndarray:
        """Basis as columns of a d^2 x k matrix."""
        k = self.dimension
        return self.basis.transpose(0, 2, 1).reshape(k, -1).T if k else \
            np.zeros((self.dim_ambient ** 2, 0), dtype=complex)

    @property
    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace, acting on vec(x)."""
        v = self.vectors
        return v @ v.conj().T

    def project(self, x: CMatrix) -> CMatrix:
        v = self.vectors
        return unvec(v @ (v.conj().T @ vec(x)), self.dim_ambient)

    def residual(self, x: CMatrix) -> float:
        """
        HS distance of x from the subspace.

        :param x: d x d matrix
        :return: ||x - P x||
        """
        return hs_norm(np.asarray(x) - self.project(x))

    def contains(self, x: CMatrix, tol: Tolerance) -> bool:
        return self.residual(x) <= tol.residual_eps * max(1.0, hs_norm(x))

    def complement(self, tol: Tolerance) -> 'OperatorSubspace':
        """
        Orthogonal complement in M_d.

        :param tol: Tolerances
        :return: OperatorSubspace
        """
        d = self.dim_ambient
        ns = null_space(self.vectors.conj().T, tol) if self.dimension else np.eye(d * d, dtype=complex)
        return from_vectors(ns, d)

    def with_warnings(self, extra: Iterable[str]) -> 'OperatorSubspace':
        return OperatorSubspace(self.dim_ambient, self.basis, tuple(self.warnings) + tuple(extra))


def from_vectors(columns: np.ndarray, dim: int, warnings: Iterable[str] = ()) -> OperatorSubspace:
    """
    Wrap orthonormal vec-columns into an OperatorSubspace.

    :param columns: d^2 x k matrix with orthonormal columns
    :param dim: d
    :param warnings: Notes to attach
    :return: OperatorSubspace
    """
    k = columns.shape[1]
    basis = np.array([unvec(columns[:, i], dim) for i in range(k)], dtype=complex).reshape(k, dim, dim)
    basis.setflags(write=False)
    return OperatorSubspace(dim, basis, tuple(warnings))


def zero_subspace(dim: int) -> OperatorSubspace:
    return from_vectors(np.zeros((dim * dim, 0), dtype=complex), dim)


def full_subspace(dim: int) -> OperatorSubspace:
    return from_vectors(np.eye(dim * dim, dtype=complex), dim)


def orthonormalize(mats: Sequence[CMatrix], tol: Tolerance, dim: Optional[int] = None,
                   scale: float = 1.0) -> OperatorSubspace:
    """
    HS-orthonormal basis of span(mats) from the SVD of the stacked vectors.

    :param mats: Matrices of one common dimension
    :param tol: Tolerances
    :param dim: d, needed only for empty input
    :param scale: Reference norm; singular values below rank_eps * scale are dropped
    :return: OperatorSubspace (zero subspace for empty input)
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    if not mats:
        if dim is None:
            raise ShapeError("orthonormalize needs dim for an empty family")
        return zero_subspace(dim)
    d = mats[0].shape[0]
    for m in mats:
        if m.shape != (d, d):
            raise ShapeError(ERROR_DIM_MISMATCH.format(expected=(d, d), got=m.shape))

    stacked = np.column_stack([vec(m) for m in mats])
    u, s, _ = la.svd(stacked, full_matrices=False, lapack_driver='gesvd')
    if s.size == 0 or s[0] == 0.0:
        return zero_subspace(d)
    cutoff = tol.rank_eps * max(s[0], scale)
    rank = int(np.sum(s > cutoff))
    notes = []
    note = _borderline(s, cutoff)
    if note:
        notes.append(note)
    return from_vectors(u[:, :rank], d, notes)


def gram_matrix(sub: OperatorSubspace) -> np.ndarray:
    v = sub.vectors
    return v.conj().T @ v


def orthonormal_columns(m: np.ndarray, tol: Tolerance) -> np.ndarray:
    """
    Orthonormal basis of the column space of m (rank from rank_eps).

    :param m: Matrix
    :param tol: Tolerances
    :return: Matrix with orthonormal columns
    """
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=complex)
    return la.orth(m, rcond=tol.rank_eps)
