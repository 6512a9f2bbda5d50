"""
Multiplicative domains of general unital completely positive maps.

Works through a minimal Stinespring dilation, so trace preservation is not
needed. Also holds the density construction and the unital, non trace
preserving counterexample map on M_3.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import KrausChannel, mixture, superop
from .errors import ERROR_NOT_UNITAL, ConsistencyError, PreconditionError
from .linalg import (CMatrix, OperatorSubspace, Tolerance, from_vectors, hs_norm, null_space,
                     orthonormal_columns)
from .staralg import closure_residual, intersect, subspace_equal


def _matrix_unit(d: int, a: int, b: int) -> np.ndarray:
    e = np.zeros((d, d), dtype=complex)
    e[a, b] = 1.0
    return e


def _require_unital(ch: KrausChannel) -> None:
    if not ch.flags.unital:
        raise PreconditionError(ERROR_NOT_UNITAL.format(unital=ch.flags.unital_residual),
                                residual_name='unital', residual=ch.flags.unital_residual)


@dataclass(frozen=True, eq=False)
class StinespringData:
    """
    Phi(x) = V* (I_n kron x) V restricted to the minimal dilation space.

    :param dim: d
    :param env: Number of Kraus operators n
    :param v: (n d) x d matrix stacking the a_j*
    :param min_basis: Orthonormal basis of K_min (columns)
    :param p_min: Projection onto range(V) in K_min coordinates
    :param isometry_residual: ||V* V - I||
    :param reconstruction_residual: Worst ||V* (I kron x) V - Phi(x)|| over matrix units
    """

    dim: int
    env: int
    v: np.ndarray
    min_basis: np.ndarray
    p_min: np.ndarray
    isometry_residual: float
    reconstruction_residual: float

    def pi_min(self, a: CMatrix) -> np.ndarray:
        """I_n kron a compressed to K_min."""
        q = self.min_basis
        return q.conj().T @ np.kron(np.eye(self.env), a) @ q


def stinespring(ch: KrausChannel, tol: Optional[Tolerance] = None) -> StinespringData:
    """
    Minimal Stinespring data of a unital CP map.

    K_min is grown from range(V) under I kron E_ab until its dimension
    stops changing.

    :param ch: Unital CP map
    :param tol: Tolerances
    :return: StinespringData
    """
    tol = tol or ch.tol
    _require_unital(ch)
    d, n = ch.dim, ch.n_kraus
    v = np.vstack([a.conj().T for a in ch.kraus])
    env_eye = np.eye(n)
    units = [(a, b) for a in range(d) for b in range(d)]
    lifts = [np.kron(env_eye, _matrix_unit(d, a, b)) for a, b in units]

    q = orthonormal_columns(v, tol)
    while True:
        grown = orthonormal_columns(np.hstack([q] + [lift @ q for lift in lifts]), tol)
        if grown.shape[1] == q.shape[1]:
            break
        q = grown

    qv = q.conj().T @ v
    reconstruction = max(hs_norm(v.conj().T @ lift @ v - ch(_matrix_unit(d, a, b)))
                         for lift, (a, b) in zip(lifts, units))
    return StinespringData(dim=d, env=n, v=v, min_basis=q, p_min=qv @ qv.conj().T,
                           isometry_residual=float(np.linalg.norm(v.conj().T @ v - np.eye(d))),
                           reconstruction_residual=float(reconstruction))


def mult_domain_ucp(ch: KrausChannel, tol: Optional[Tolerance] = None) -> OperatorSubspace:
    """
    M_Phi = {a : [P_min, pi_min(a)] = 0} for a unital CP map.

    The result is checked against E(ab) = E(a)E(b) and E(ba) = E(b)E(a)
    on every basis element and matrix unit.

    :param ch: Unital CP map
    :param tol: Tolerances
    :return: OperatorSubspace
    """
    tol = tol or ch.tol
    data = stinespring(ch, tol)
    d = data.dim
    columns = []
    # column index a + b d matches vec(E_ab)
    for b in range(d):
        for a in range(d):
            pi = data.pi_min(_matrix_unit(d, a, b))
            columns.append((data.p_min @ pi - pi @ data.p_min).reshape(-1))
    notes = []
    ns = null_space(np.column_stack(columns), tol, notes)
    domain = from_vectors(ns, d, notes)

    closure = closure_residual(domain)
    if closure > tol.residual_eps:
        raise ConsistencyError("ucp multiplicative domain is not a *-algebra", {'closure_residual': closure})
    units = [_matrix_unit(d, a, b) for a in range(d) for b in range(d)]
    worst = 0.0
    for x in domain.basis:
        ex = ch(x)
        for y in units:
            ey = ch(y)
            worst = max(worst, hs_norm(ch(x @ y) - ex @ ey), hs_norm(ch(y @ x) - ey @ ex))
    if worst > tol.residual_eps:
        raise ConsistencyError("ucp multiplicative domain fails the product identity",
                               {'residual': worst, 'dimension': domain.dimension})
    return domain


def schwarz_defect(ch: KrausChannel, a: CMatrix) -> CMatrix:
    """
    Phi(a* a) - Phi(a)* Phi(a), positive semidefinite for unital CP maps.

    :param ch: Unital CP map
    :param a: d x d matrix
    :return: d x d Hermitian matrix
    """
    a = np.asarray(a, dtype=complex)
    ea = ch(a)
    return ch(a.conj().T @ a) - ea.conj().T @ ea


def density_perturbation(phi: KrausChannel, n: int) -> KrausChannel:
    """
    (1 - 1/n) Phi + (1/n) tr(.) 1/d, a strictly positive map near Phi.

    ||Phi - E||_cb <= 2/n holds analytically (see density_report).

    :param phi: Unital CP map
    :param n: Mixing parameter, n >= 2
    :return: KrausChannel
    """
    if n < 2:
        raise PreconditionError("density perturbation needs n >= 2", residual_name='n', residual=float(n))
    d = phi.dim
    ops = [np.sqrt(1 - 1 / n) * a for a in phi.kraus]
    weight = np.sqrt(1 / (n * d))
    ops.extend(weight * _matrix_unit(d, i, j) for i in range(d) for j in range(d))
    return KrausChannel.from_kraus(ops, phi.tol)


def density_report(phi: KrausChannel, n: int) -> dict:
    """
    Distances between Phi and its density perturbation.

    :param phi: Unital CP map
    :param n: Mixing parameter
    :return: Report dict with the superoperator distance and the analytic cb bound
    """
    perturbed = density_perturbation(phi, n)
    diff = superop(perturbed).matrix - superop(phi).matrix
    return {'n': n, 'superop_distance': float(np.linalg.norm(diff, 2)), 'cb_bound': 2.0 / n}


def averaging_intersection_check(phi: KrausChannel, psi: KrausChannel,
                                 tol: Optional[Tolerance] = None) -> dict:
    """
    M_E = M_Phi n M_Psi n {x : E(x) = Phi(x) = Psi(x)} for E = (Phi + Psi)/2.

    :param phi: Unital CP map
    :param psi: Unital CP map of the same dimension
    :param tol: Tolerances
    :return: Report dict with both sides
    """
    tol = tol or phi.tol
    avg = mixture([phi, psi], [0.5, 0.5])
    left = mult_domain_ucp(avg, tol)

    s_avg, s_phi, s_psi = (superop(c).matrix for c in (avg, phi, psi))
    agreement = from_vectors(null_space(np.vstack([s_avg - s_phi, s_avg - s_psi]), tol), phi.dim)
    right = intersect(intersect(mult_domain_ucp(phi, tol), mult_domain_ucp(psi, tol), tol), agreement, tol)
    return {'left_dim': left.dimension, 'right_dim': right.dimension,
            'equal': subspace_equal(left, right, tol)}


def counterexample_phi(tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    Unital, not trace preserving map on M_3: x -> diag(x11, x22, (x11 + x22)/2).

    :param tol: Tolerances
    :return: KrausChannel with four Kraus operators
    """
    e = np.eye(3)
    k1 = np.outer(e[0], e[0])
    k2 = np.outer(e[1], e[1])
    k3 = np.outer(e[2], e[0]) / np.sqrt(2)
    k4 = np.outer(e[2], e[1]) / np.sqrt(2)
    return KrausChannel.from_kraus([k1, k2, k3, k4], tol)
