"""
Finite-dimensional *-algebra engine.

Commutants, generated algebras, fixed-point algebras, subspace lattice
operations and Wedderburn structure extraction for subalgebras of M_d.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la

import config
from .channel import Superoperator
from .errors import ERROR_DIM_MISMATCH, ConsistencyError, NotAnAlgebraError, NumericError, ShapeError
from .linalg import (CMatrix, OperatorSubspace, Tolerance, cluster_values, from_vectors,
                     full_subspace, null_space, orthonormal_columns, orthonormalize,
                     zero_subspace)

__all__ = [
    'OperatorSubspace',
    'StarAlgebraStructure',
    'commutant',
    'generated_algebra',
    'fixed_point_algebra',
    'intersect',
    'subspace_equal',
    'subspace_distance',
    'is_contained',
    'closure_residual',
    'wedderburn',
]


def _vec_rows(mats: np.ndarray) -> np.ndarray:
    """Column-stacking vectors of a (N, d, d) stack, one per row."""
    n = mats.shape[0]
    return mats.transpose(0, 2, 1).reshape(n, -1)


def _default_rng(rng: Optional[np.random.Generator]) -> np.random.Generator:
    return rng if rng is not None else np.random.default_rng(getattr(config, 'DEFAULT_SEED', 1234))


def _debug_warn(notes: Sequence[str]) -> None:
    if config.DEBUG:
        for note in notes:
            print(f"⚠️  {note}")


def closure_residual(sub: OperatorSubspace) -> float:
    """
    Largest distance of a basis product or adjoint from the subspace.

    :param sub: Subspace of M_d
    :return: 0 for an exact *-algebra
    """
    if sub.dimension == 0:
        return 0.0
    basis = np.asarray(sub.basis)
    k = sub.dimension
    prods = np.einsum('aij,bjk->abik', basis, basis).reshape(k * k, sub.dim_ambient, sub.dim_ambient)
    adjs = basis.conj().transpose(0, 2, 1)
    rows = _vec_rows(np.concatenate([prods, adjs]))
    v = sub.vectors
    resid = rows - (rows @ v.conj()) @ v.T
    return float(np.max(np.linalg.norm(resid, axis=1)))


def commutant(gens: Sequence[CMatrix], tol: Tolerance, dim: Optional[int] = None) -> OperatorSubspace:
    """
    Commutant of a generator set, symmetrized with adjoints.

    :param gens: Square matrices of one dimension
    :param tol: Tolerances
    :param dim: d, needed only for an empty generator list
    :return: OperatorSubspace {x : xg = gx for all g in gens and gens*}
    """
    gens = [np.asarray(g, dtype=complex) for g in gens]
    if not gens:
        if dim is None:
            raise ShapeError("commutant of an empty set needs dim")
        return full_subspace(dim)
    d = gens[0].shape[0]
    sym = orthonormalize(gens + [g.conj().T for g in gens], tol, d)
    if sym.dimension == 0:
        return full_subspace(d)

    eye = np.eye(d)
    # vec(xg - gx) = (g^T kron I - I kron g) vec(x)
    rows = np.vstack([np.kron(g.T, eye) - np.kron(eye, g) for g in sym.basis])
    notes: List[str] = list(sym.warnings)
    ns = null_space(rows, tol, notes)
    _debug_warn(notes)
    return from_vectors(ns, d, notes)


def generated_algebra(gens: Sequence[CMatrix], tol: Tolerance, unital: bool = True,
                      dim: Optional[int] = None) -> OperatorSubspace:
    """
    Smallest *-closed, multiplicatively closed subspace containing gens.

    :param gens: Square matrices of one dimension
    :param tol: Tolerances
    :param unital: Include the identity
    :param dim: d, needed only for an empty generator list
    :return: OperatorSubspace
    """
    gens = [np.asarray(g, dtype=complex) for g in gens]
    if not gens and dim is None:
        raise ShapeError("generated_algebra of an empty set needs dim")
    d = gens[0].shape[0] if gens else dim
    mats = gens + [g.conj().T for g in gens]
    if unital:
        mats.append(np.eye(d, dtype=complex))
    if not mats:
        return zero_subspace(d)

    sub = orthonormalize(mats, tol, d)
    max_iter = getattr(config, 'GENERATED_ALGEBRA_MAX_ITER', None) or d * d
    for _ in range(max_iter):
        k = sub.dimension
        if k == 0:
            return sub
        basis = np.asarray(sub.basis)
        prods = np.einsum('aij,bjk->abik', basis, basis).reshape(k * k, d, d)
        grown = orthonormalize(np.concatenate([basis, prods, basis.conj().transpose(0, 2, 1)]), tol, d)
        if grown.dimension == k:
            return sub
        sub = grown
    raise NumericError("generated algebra did not stabilize",
                       {'iterations': max_iter, 'dimension': sub.dimension})


def fixed_point_algebra(s: Superoperator, tol: Tolerance, check_closure: bool = True) -> OperatorSubspace:
    """
    Fixed points ker(S - I), with a closure check.

    The fixed set is only guaranteed to be an algebra for unital trace
    preserving channels; a failed closure check is recorded as a warning.

    :param s: Superoperator
    :param tol: Tolerances
    :param check_closure: Verify multiplicative and adjoint closure
    :return: OperatorSubspace
    """
    n = s.dim * s.dim
    notes: List[str] = []
    ns = null_space(s.matrix - np.eye(n), tol, notes, scale=max(1.0, la.norm(s.matrix, 2)))
    sub = from_vectors(ns, s.dim)
    if check_closure and sub.dimension:
        residual = closure_residual(sub)
        if residual > tol.residual_eps:
            notes.append(f"fixed-point set is not closed under products/adjoints (residual {residual:.2e})")
    _debug_warn(notes)
    return sub.with_warnings(notes)


def intersect(a: OperatorSubspace, b: OperatorSubspace, tol: Tolerance) -> OperatorSubspace:
    """
    Intersection via the null space of stacked complement projectors.

    :param a: Subspace
    :param b: Subspace of the same ambient dimension
    :param tol: Tolerances
    :return: OperatorSubspace
    """
    if a.dim_ambient != b.dim_ambient:
        raise ShapeError(ERROR_DIM_MISMATCH.format(expected=a.dim_ambient, got=b.dim_ambient))
    d = a.dim_ambient
    if a.dimension == 0 or b.dimension == 0:
        return zero_subspace(d)
    eye = np.eye(d * d)
    stacked = np.vstack([eye - a.projector, eye - b.projector])
    notes: List[str] = []
    ns = null_space(stacked, tol, notes)
    return from_vectors(ns, d, tuple(a.warnings) + tuple(b.warnings) + tuple(notes))


def subspace_distance(a: OperatorSubspace, b: OperatorSubspace) -> float:
    """
    Largest projection residual of a basis element of a against b.

    :param a: Subspace
    :param b: Subspace
    :return: max_i ||a_i - P_b a_i||
    """
    if a.dimension == 0:
        return 0.0
    va = a.vectors
    vb = b.vectors
    resid = va - vb @ (vb.conj().T @ va)
    return float(np.max(np.linalg.norm(resid, axis=0)))


def is_contained(a: OperatorSubspace, b: OperatorSubspace, tol: Tolerance) -> bool:
    return a.dimension <= b.dimension and subspace_distance(a, b) <= tol.residual_eps


def subspace_equal(a: OperatorSubspace, b: OperatorSubspace, tol: Tolerance) -> bool:
    """
    Span equality: equal dimensions and a contained in b.

    :param a: Subspace
    :param b: Subspace
    :param tol: Tolerances
    :return: True when the spans agree within residual_eps
    """
    if a.dim_ambient != b.dim_ambient:
        raise ShapeError(ERROR_DIM_MISMATCH.format(expected=a.dim_ambient, got=b.dim_ambient))
    return a.dimension == b.dimension and subspace_distance(a, b) <= tol.residual_eps


@dataclass(frozen=True, eq=False)
class StarAlgebraStructure:
    """
    Wedderburn form U* a U = (+)_k M_{n_k} (x) I_{m_k} (+) 0.

    Columns of basis_change are ordered block by block; inside block k the
    index i * m_k + j belongs to matrix-unit row i and multiplicity copy j.

    :param dim_ambient: d
    :param blocks: Pairs (n_k, m_k)
    :param central_projections: Minimal central projections
    :param basis_change: d x d unitary U
    :param unital: True when the unit of the algebra is the identity
    :param unit: Unit of the algebra (projection)
    :param warnings: Numerical notes
    """

    dim_ambient: int
    blocks: Tuple[Tuple[int, int], ...]
    central_projections: Tuple[np.ndarray, ...]
    basis_change: np.ndarray
    unital: bool
    unit: np.ndarray
    warnings: Tuple[str, ...] = field(default=())

    @property
    def dimension(self) -> int:
        return sum(n * n for n, _ in self.blocks)

    def block_offsets(self) -> List[int]:
        offsets = [0]
        for n, m in self.blocks:
            offsets.append(offsets[-1] + n * m)
        return offsets

    def block_isometry(self, k: int) -> np.ndarray:
        """
        Columns of the basis change belonging to block k.

        :param k: Block index
        :return: d x (n_k m_k) isometry
        """
        offsets = self.block_offsets()
        return self.basis_change[:, offsets[k]:offsets[k + 1]]

    def matrix_unit(self, k: int, i: int, j: int) -> np.ndarray:
        """
        e_ij of block k, i.e. U_k (E_ij kron I_m) U_k*.

        :param k: Block index
        :param i: Row index in M_{n_k}
        :param j: Column index in M_{n_k}
        :return: d x d partial isometry
        """
        n, m = self.blocks[k]
        u = self.block_isometry(k)
        e = np.zeros((n, n))
        e[i, j] = 1.0
        return u @ np.kron(e, np.eye(m)) @ u.conj().T

    def matrix_units(self) -> List[np.ndarray]:
        return [self.matrix_unit(k, i, j)
                for k, (n, _) in enumerate(self.blocks)
                for i in range(n) for j in range(n)]

    def minimal_projections(self) -> List[np.ndarray]:
        """Diagonal matrix units e_ii of every block (rank m_k each)."""
        return [self.matrix_unit(k, i, i) for k, (n, _) in enumerate(self.blocks) for i in range(n)]

    def reconstruct(self, tol: Tolerance) -> OperatorSubspace:
        """
        Span of all matrix units, which must equal the decomposed algebra.

        :param tol: Tolerances
        :return: OperatorSubspace
        """
        units = self.matrix_units()
        return orthonormalize(units, tol, self.dim_ambient)

    def to_dict(self) -> dict:
        return {
            'blocks': [list(b) for b in self.blocks],
            'dimension': self.dimension,
            'unital': self.unital,
            'central_projection_ranks': [int(round(np.trace(p).real)) for p in self.central_projections],
        }


def _random_hermitian(basis: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    coeffs = rng.standard_normal(basis.shape[0]) + 1j * rng.standard_normal(basis.shape[0])
    x = np.einsum('k,kij->ij', coeffs, basis)
    return 0.5 * (x + x.conj().T)


def _central_blocks(center: OperatorSubspace, q: np.ndarray, tol: Tolerance,
                    rng: np.random.Generator, retries: int) -> List[np.ndarray]:
    """
    Range bases of the minimal central projections, restricted to range(q).
    """
    compressed = np.einsum('ai,kij,jb->kab', q.conj().T, np.asarray(center.basis), q)
    for _ in range(retries):
        h = _random_hermitian(compressed, rng)
        values, vectors = la.eigh(h)
        clusters = cluster_values(values, tol.cluster_eps)
        if len(clusters) == center.dimension:
            return [q @ vectors[:, c] for c in sorted(clusters, key=lambda c: values[c[0]])]
    raise NumericError("random central element kept a degenerate spectrum",
                       {'retries': retries, 'center_dimension': center.dimension})


def _block_basis(alg: OperatorSubspace, r: np.ndarray, tol: Tolerance,
                 rng: np.random.Generator, retries: int) -> Tuple[int, int, np.ndarray]:
    """
    (n, m, columns) for one central block with range basis r.

    The returned columns are ordered so that the compressed block algebra
    becomes M_n kron I_m.
    """
    rank = r.shape[1]
    compressed = orthonormalize(np.einsum('ai,kij,jb->kab', r.conj().T, np.asarray(alg.basis), r), tol, rank)
    n = int(round(np.sqrt(compressed.dimension)))
    if n * n != compressed.dimension or rank % n:
        raise NumericError("central block is not a full matrix algebra",
                           {'block_dimension': compressed.dimension, 'block_rank': rank})
    m = rank // n
    if n == 1:
        return 1, m, r

    basis = np.asarray(compressed.basis)
    for _ in range(retries):
        h = _random_hermitian(basis, rng)
        values, vectors = la.eigh(h)
        clusters = cluster_values(values, tol.cluster_eps)
        if len(clusters) != n or any(len(c) != m for c in clusters):
            continue
        eig_spaces = [vectors[:, c] for c in sorted(clusters, key=lambda c: values[c[0]])]
        x = np.einsum('k,kij->ij', rng.standard_normal(basis.shape[0]) + 1j * rng.standard_normal(basis.shape[0]),
                      basis)
        first = eig_spaces[0]
        columns = [first]
        ok = True
        for q in eig_spaces[1:]:
            w = q @ (q.conj().T @ x @ first)
            norm = np.linalg.norm(w)
            if norm < tol.cluster_eps:
                ok = False
                break
            # w = c * (partial isometry range(first) -> range(q)) restricted to first
            columns.append(w * np.sqrt(m) / norm)
        if ok:
            return n, m, r @ np.hstack(columns)
    raise NumericError("random block element kept a degenerate spectrum",
                       {'retries': retries, 'factor': n, 'multiplicity': m})


def wedderburn(alg: OperatorSubspace, tol: Tolerance,
               rng: Optional[np.random.Generator] = None) -> StarAlgebraStructure:
    """
    Block decomposition of a *-subalgebra of M_d.

    Minimal central projections come from the spectrum of a random
    self-adjoint central element; factor sizes and multiplicities from the
    eigenspaces of a random self-adjoint element of each block.

    :param alg: *-algebra (closure is verified)
    :param tol: Tolerances
    :param rng: Random generator for the generic elements
    :return: StarAlgebraStructure
    """
    rng = _default_rng(rng)
    retries = getattr(config, 'WEDDERBURN_RETRIES', 8)
    d = alg.dim_ambient
    if alg.dimension == 0:
        return StarAlgebraStructure(d, (), (), np.eye(d, dtype=complex), False,
                                    np.zeros((d, d), dtype=complex), tuple(alg.warnings))

    residual = closure_residual(alg)
    if residual > tol.residual_eps:
        raise NotAnAlgebraError("subspace is not closed under products and adjoints",
                                {'closure_residual': residual, 'dimension': alg.dimension})

    center = intersect(alg, commutant(list(alg.basis), tol), tol)
    q = orthonormal_columns(np.hstack(list(alg.basis)), tol)
    unit = q @ q.conj().T
    unital = q.shape[1] == d

    columns = []
    blocks = []
    projections = []
    for r in _central_blocks(center, q, tol, rng, retries):
        n, m, cols = _block_basis(alg, r, tol, rng, retries)
        blocks.append((n, m))
        projections.append(r @ r.conj().T)
        columns.append(cols)
    if not unital:
        columns.append(null_space(q.conj().T, tol))
    u = np.hstack(columns)

    structure = StarAlgebraStructure(d, tuple(blocks), tuple(projections), u, unital, unit,
                                     tuple(alg.warnings))
    rebuilt = structure.reconstruct(tol)
    if not subspace_equal(rebuilt, alg, tol):
        raise ConsistencyError("matrix units do not span the algebra",
                               {'algebra_dimension': alg.dimension,
                                'reconstructed_dimension': rebuilt.dimension,
                                'distance': subspace_distance(rebuilt, alg)})
    if config.DEBUG:
        print(f"🔍 Wedderburn blocks {blocks} (unital={unital})")
    return structure
