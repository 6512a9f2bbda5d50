"""
Completely positive maps on M_d.

Kraus, superoperator and Choi representations, the Hilbert-Schmidt
adjoint, composition, powers and structural verification.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.linalg as la

import config
from .errors import (ERROR_DIM_CAP, ERROR_DIM_MISMATCH, NotCompletelyPositiveError,
                     ResourceError, ShapeError)
from .linalg import CMatrix, Tolerance, as_cmatrix, unvec, vec


def check_dimension_cap(dim: int) -> None:
    """
    Enforce the configured dimension caps.

    :param dim: System dimension d
    """
    cap = getattr(config, 'MAX_DIM', 32)
    superop_cap = getattr(config, 'MAX_SUPEROP_DIM', 1024)
    if dim > cap:
        raise ResourceError(ERROR_DIM_CAP.format(dim=dim, cap=cap))
    if dim * dim > superop_cap:
        raise ResourceError(ERROR_DIM_CAP.format(dim=dim * dim, cap=superop_cap))


@dataclass(frozen=True)
class ChannelFlags:
    """
    Structural verdicts with their residuals.

    :param cp: Completely positive (always true for Kraus form)
    :param tp: Trace preserving
    :param unital: Unital
    :param tp_residual: ||sum a* a - I||
    :param unital_residual: ||sum a a* - I||
    """

    cp: bool
    tp: bool
    unital: bool
    tp_residual: float
    unital_residual: float

    def to_dict(self) -> dict:
        return {
            'cp': self.cp,
            'tp': self.tp,
            'unital': self.unital,
            'tp_residual': self.tp_residual,
            'unital_residual': self.unital_residual,
        }


def _flags(kraus: np.ndarray, tol: Tolerance) -> ChannelFlags:
    d = kraus.shape[1]
    eye = np.eye(d)
    tp_res = float(np.linalg.norm(np.einsum('kji,kjl->il', kraus.conj(), kraus) - eye))
    un_res = float(np.linalg.norm(np.einsum('kij,klj->il', kraus, kraus.conj()) - eye))
    return ChannelFlags(cp=True,
                        tp=tp_res <= tol.residual_eps,
                        unital=un_res <= tol.residual_eps,
                        tp_residual=tp_res,
                        unital_residual=un_res)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """
    Map x -> sum_j a_j x a_j* given by its Kraus operators.

    Flags are computed eagerly with the tolerance given at construction.

    :param kraus: Array (n, d, d) of Kraus operators
    :param tol: Tolerance used for the cached flags
    """

    kraus: np.ndarray
    tol: Tolerance
    flags: ChannelFlags

    @classmethod
    def from_kraus(cls, kraus: Iterable[CMatrix], tol: Optional[Tolerance] = None) -> 'KrausChannel':
        """
        Validate Kraus operators and build the channel.

        :param kraus: Kraus operators (at least one, all d x d)
        :param tol: Tolerances (defaults from config)
        :return: KrausChannel
        """
        tol = tol or Tolerance.from_config()
        ops = [as_cmatrix(a) for a in kraus]
        if not ops:
            raise ShapeError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for i, a in enumerate(ops):
            if a.shape != (d, d):
                raise ShapeError(f"kraus[{i}]: " + ERROR_DIM_MISMATCH.format(expected=(d, d), got=a.shape))
        check_dimension_cap(d)
        arr = np.array(ops, dtype=complex)
        arr.setflags(write=False)
        return cls(kraus=arr, tol=tol, flags=_flags(arr, tol))

    @property
    def dim(self) -> int:
        return int(self.kraus.shape[1])

    @property
    def n_kraus(self) -> int:
        return int(self.kraus.shape[0])

    @property
    def is_unital_tp(self) -> bool:
        return self.flags.tp and self.flags.unital

    def __call__(self, x: CMatrix) -> CMatrix:
        return apply(self, x)


@dataclass(frozen=True, eq=False)
class Superoperator:
    """
    d^2 x d^2 matrix of a linear map on M_d in the column-stacking convention.

    :param dim: d
    :param matrix: The d^2 x d^2 matrix
    """

    dim: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        n = self.dim * self.dim
        if self.matrix.shape != (n, n):
            raise ShapeError(ERROR_DIM_MISMATCH.format(expected=(n, n), got=self.matrix.shape))
        if not np.all(np.isfinite(self.matrix)):
            raise ShapeError("superoperator contains NaN or Inf entries")

    def apply(self, x: CMatrix) -> CMatrix:
        return unvec(self.matrix @ vec(x), self.dim)

    def adjoint(self) -> 'Superoperator':
        return Superoperator(self.dim, self.matrix.conj().T)

    def then(self, other: 'Superoperator') -> 'Superoperator':
        """Composition other o self."""
        return Superoperator(self.dim, other.matrix @ self.matrix)

    def power(self, n: int) -> 'Superoperator':
        """
        n-th power by repeated squaring (n = 0 gives the identity).

        :param n: Exponent
        :return: Superoperator
        """
        if n < 0:
            raise ValueError("power needs n >= 0")
        return Superoperator(self.dim, np.linalg.matrix_power(self.matrix, n))

    def normality_residual(self) -> float:
        s = self.matrix
        return float(np.linalg.norm(s.conj().T @ s - s @ s.conj().T))

    @classmethod
    def identity(cls, dim: int) -> 'Superoperator':
        return cls(dim, np.eye(dim * dim, dtype=complex))


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """
    Choi matrix sum_j vec(a_j) vec(a_j)^dagger.

    :param dim: d
    :param matrix: d^2 x d^2 Hermitian matrix
    """

    dim: int
    matrix: np.ndarray

    def hermiticity_residual(self) -> float:
        return float(np.linalg.norm(self.matrix - self.matrix.conj().T))


def apply(ch: KrausChannel, x: CMatrix) -> CMatrix:
    """
    Evaluate sum_j a_j x a_j*.

    :param ch: Channel
    :param x: d x d matrix
    :return: d x d matrix
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (ch.dim, ch.dim):
        raise ShapeError(ERROR_DIM_MISMATCH.format(expected=(ch.dim, ch.dim), got=x.shape))
    a = ch.kraus
    return np.einsum('kij,jl,kml->im', a, x, a.conj())


def adjoint(ch: KrausChannel) -> KrausChannel:
    """
    Hilbert-Schmidt adjoint: Kraus operators {a_j*}.

    :param ch: Channel
    :return: Adjoint channel
    """
    return KrausChannel.from_kraus(ch.kraus.conj().transpose(0, 2, 1), ch.tol)


def superop(ch: KrausChannel) -> Superoperator:
    """
    Superoperator S = sum_j conj(a_j) kron a_j.

    :param ch: Channel
    :return: Superoperator
    """
    d = ch.dim
    a = ch.kraus
    s = np.einsum('kij,klm->iljm', a.conj(), a).reshape(d * d, d * d)
    return Superoperator(d, s)


def choi(ch: KrausChannel) -> ChoiMatrix:
    """
    Choi matrix sum_j vec(a_j) vec(a_j)^dagger (PSD by construction).

    :param ch: Channel
    :return: ChoiMatrix
    """
    vecs = np.array([vec(a) for a in ch.kraus])
    return ChoiMatrix(ch.dim, vecs.T @ vecs.conj())


def kraus_from_choi(c: ChoiMatrix, tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    Minimal Kraus form from the eigendecomposition of a Choi matrix.

    :param c: Choi matrix (Hermitian PSD within tolerance)
    :param tol: Tolerances
    :return: KrausChannel with Kraus rank operators
    """
    tol = tol or Tolerance.from_config()
    herm = 0.5 * (c.matrix + c.matrix.conj().T)
    values, vectors = la.eigh(herm)
    lam_max = float(max(np.max(np.abs(values)), 0.0))
    if lam_max == 0.0:
        return KrausChannel.from_kraus([np.zeros((c.dim, c.dim), dtype=complex)], tol)
    if values[0] < -tol.residual_eps * lam_max:
        raise NotCompletelyPositiveError(
            f"Choi matrix has negative eigenvalue {values[0]:.3e}; map is not completely positive",
            residual_name='choi_min_eigenvalue', residual=float(values[0]))
    keep = values > tol.rank_eps * lam_max
    ops = [unvec(np.sqrt(values[i]) * vectors[:, i], c.dim) for i in np.flatnonzero(keep)[::-1]]
    return KrausChannel.from_kraus(ops, tol)


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """
    outer o inner with Kraus operators {b_i a_j} (all n*m products).

    :param outer: Channel applied second
    :param inner: Channel applied first
    :return: KrausChannel
    """
    if outer.dim != inner.dim:
        raise ShapeError(ERROR_DIM_MISMATCH.format(expected=outer.dim, got=inner.dim))
    d = outer.dim
    prods = np.einsum('iab,jbc->ijac', outer.kraus, inner.kraus).reshape(-1, d, d)
    return KrausChannel.from_kraus(prods, outer.tol)


def prune(ch: KrausChannel) -> KrausChannel:
    """
    Drop negligible Kraus operators; re-extract from Choi when count exceeds d^2.

    :param ch: Channel
    :return: Equivalent channel with a small Kraus list
    """
    tol = ch.tol
    norms = np.linalg.norm(ch.kraus, axis=(1, 2))
    if norms.max() == 0.0:
        return ch
    keep = norms > tol.rank_eps * norms.max()
    if keep.sum() <= ch.dim ** 2:
        return ch if keep.all() else KrausChannel.from_kraus(ch.kraus[keep], tol)
    return kraus_from_choi(choi(ch), tol)


def identity_channel(dim: int, tol: Optional[Tolerance] = None) -> KrausChannel:
    return KrausChannel.from_kraus([np.eye(dim, dtype=complex)], tol)


def power(ch: KrausChannel, n: int) -> KrausChannel:
    """
    n-fold composition with Kraus pruning; n = 0 returns the identity channel.

    :param ch: Channel
    :param n: Exponent
    :return: KrausChannel
    """
    if n < 0:
        raise ValueError("power needs n >= 0")
    if n == 0:
        return identity_channel(ch.dim, ch.tol)
    result = ch
    for _ in range(n - 1):
        result = prune(compose(ch, result))
    return result


def mixture(channels: Sequence[KrausChannel], weights: Sequence[float]) -> KrausChannel:
    """
    Convex combination sum_i w_i E_i.

    :param channels: Channels of one dimension
    :param weights: Nonnegative weights
    :return: KrausChannel
    """
    if len(channels) != len(weights) or not channels:
        raise ShapeError("mixture needs one weight per channel")
    if min(weights) < 0:
        raise ValueError("mixture weights must be nonnegative")
    ops = []
    for ch, w in zip(channels, weights):
        if ch.dim != channels[0].dim:
            raise ShapeError(ERROR_DIM_MISMATCH.format(expected=channels[0].dim, got=ch.dim))
        if w > 0:
            ops.extend(np.sqrt(w) * ch.kraus)
    return prune(KrausChannel.from_kraus(ops, channels[0].tol))


def verify(ch: KrausChannel) -> ChannelFlags:
    """
    Structural verdicts: cp (Kraus form), tp and unital with residuals.

    :param ch: Channel
    :return: ChannelFlags
    """
    return _flags(ch.kraus, ch.tol)


def commutes(a: Superoperator, b: Superoperator, tol: Tolerance) -> bool:
    return float(np.linalg.norm(a.matrix @ b.matrix - b.matrix @ a.matrix)) <= tol.residual_eps
