"""
Error-correction view of the multiplicative algebras.

Unitarily correctable codes come from M_E, unitarily noiseless subsystems
from M_{E^inf} and noiseless subsystems from the fixed-point algebra F_E.
A block M_n (x) I_m carries an n-dimensional protected subsystem next to
an m-dimensional gauge factor.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

import config
from .channel import KrausChannel, adjoint, compose, power, superop
from .errors import ConsistencyError, ShapeError
from .linalg import OperatorSubspace, Tolerance, hs_norm
from .multdom import mult_chain, mult_domain, require_unital_tp, stabilizing_algebra
from .staralg import (StarAlgebraStructure, fixed_point_algebra, intersect, is_contained,
                      subspace_distance, subspace_equal, wedderburn)

UCC = 'UCC'
UNS = 'UNS'
NS = 'NS'


@dataclass(frozen=True, eq=False)
class CodeRecord:
    """
    One Wedderburn block read as a subsystem code.

    :param block: Block index
    :param protected_dim: n_k, dimension of the protected subsystem
    :param gauge_dim: m_k, dimension of the gauge subsystem
    :param isometry: d x (n_k m_k) columns of the basis change for the block
    """

    block: int
    protected_dim: int
    gauge_dim: int
    isometry: np.ndarray

    @property
    def nontrivial(self) -> bool:
        return self.protected_dim > 1

    def to_dict(self) -> dict:
        return {'block': self.block, 'n': self.protected_dim, 'm': self.gauge_dim,
                'nontrivial': self.nontrivial}


@dataclass(frozen=True, eq=False)
class CodeStructure:
    """
    Algebra, its block structure and the codes it defines.

    :param algebra: Code algebra
    :param structure: Wedderburn structure of the algebra
    :param codes: One record per block
    :param kind: UCC, UNS or NS
    :param verified: Independent cross-check passed (UNS only, None otherwise)
    """

    algebra: OperatorSubspace
    structure: StarAlgebraStructure
    codes: Tuple[CodeRecord, ...]
    kind: str
    verified: Optional[bool] = None

    @property
    def nontrivial_codes(self) -> List[CodeRecord]:
        return [c for c in self.codes if c.nontrivial]

    def to_dict(self) -> dict:
        data = {
            'kind': self.kind,
            'algebra_dim': self.algebra.dimension,
            'blocks': [list(b) for b in self.structure.blocks],
            'codes': [c.to_dict() for c in self.codes],
            'nontrivial': len(self.nontrivial_codes),
        }
        if self.verified is not None:
            data['verified'] = self.verified
        return data


def _codes(algebra: OperatorSubspace, kind: str, tol: Tolerance,
           verified: Optional[bool] = None) -> CodeStructure:
    structure = wedderburn(algebra, tol)
    codes = tuple(CodeRecord(k, n, m, structure.block_isometry(k))
                  for k, (n, m) in enumerate(structure.blocks))
    if config.DEBUG:
        print(f"🔍 {kind} blocks: {list(structure.blocks)}")
    return CodeStructure(algebra, structure, codes, kind, verified)


def ucc_codes(ch: KrausChannel, tol: Optional[Tolerance] = None) -> CodeStructure:
    """
    Unitarily correctable codes: the blocks of M_E.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :return: CodeStructure of kind UCC
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    return _codes(mult_domain(ch, tol), UCC, tol)


def noiseless_algebra(ch: KrausChannel, tol: Optional[Tolerance] = None,
                      n_max: Optional[int] = None) -> OperatorSubspace:
    """
    Intersection of the fixed-point algebras of (E*)^n E^n for n = 1 .. n_max.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :param n_max: Largest power (kappa when omitted)
    :return: OperatorSubspace
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    n_max = n_max or mult_chain(ch, tol=tol).kappa
    dual = adjoint(ch)
    result = None
    for n in range(1, n_max + 1):
        fixed = fixed_point_algebra(superop(compose(power(dual, n), power(ch, n))), tol)
        result = fixed if result is None else intersect(result, fixed, tol)
    return result


def uns_codes(ch: KrausChannel, tol: Optional[Tolerance] = None) -> CodeStructure:
    """
    Unitarily noiseless subsystems: the blocks of M_{E^inf}.

    The algebra is cross-checked against noiseless_algebra; the outcome is
    stored in `verified`.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :return: CodeStructure of kind UNS
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    chain = mult_chain(ch, tol=tol)
    algebra = stabilizing_algebra(ch, tol, chain=chain)
    independent = noiseless_algebra(ch, tol, n_max=chain.kappa)
    verified = subspace_equal(algebra, independent, tol)
    if not verified and config.DEBUG:
        print(f"⚠️  UNS algebra dim {algebra.dimension} vs fixed-point intersection dim {independent.dimension}")
    return _codes(algebra, UNS, tol, verified)


def ns_codes(ch: KrausChannel, tol: Optional[Tolerance] = None) -> CodeStructure:
    """
    Noiseless subsystems: the blocks of the fixed-point algebra F_E.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :return: CodeStructure of kind NS
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    return _codes(fixed_point_algebra(superop(ch), tol), NS, tol)


def unital_recovery_check(ch: KrausChannel, recovery: KrausChannel,
                          tol: Optional[Tolerance] = None) -> dict:
    """
    F_{R o E} is contained in M_E; equality when R = E*.

    :param ch: Unital trace preserving channel
    :param recovery: Unital trace preserving recovery R
    :param tol: Tolerances
    :return: Report dict
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    require_unital_tp(recovery)
    if recovery.dim != ch.dim:
        raise ShapeError(f"recovery acts on M_{recovery.dim}, channel on M_{ch.dim}")
    domain = mult_domain(ch, tol)
    fixed = fixed_point_algebra(superop(compose(recovery, ch)), tol)
    is_dual = float(np.linalg.norm(superop(recovery).matrix - superop(adjoint(ch)).matrix)) <= tol.residual_eps
    report = {
        'fixed_dim': fixed.dimension,
        'domain_dim': domain.dimension,
        'contained': is_contained(fixed, domain, tol),
        'distance': subspace_distance(fixed, domain),
        'recovery_is_adjoint': is_dual,
    }
    if is_dual:
        report['equal'] = subspace_equal(fixed, domain, tol)
    return report


def ucs_vs_uns(ch: KrausChannel, tol: Optional[Tolerance] = None) -> dict:
    """
    Compare correctable and noiseless codes through the chain.

    With kappa = 1 the two algebras must coincide. With kappa > 1 a
    minimal projection of M_E lying outside M_{E^2} is returned as a
    witness of a correctable code that is not noiseless.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :return: Verdict dict ('witness' holds a d x d matrix when kappa > 1)
    """
    tol = tol or ch.tol
    chain = mult_chain(ch, tol=tol)
    domain, stable = chain.chain[0], chain.stabilized
    verdict = {
        'kappa': chain.kappa,
        'ucc_dim': domain.dimension,
        'uns_dim': stable.dimension,
        'uns_in_ucc': is_contained(stable, domain, tol),
    }
    if chain.kappa == 1:
        verdict['equal'] = subspace_equal(domain, stable, tol)
        verdict['witness'] = None
        return verdict

    second = chain.chain[1]
    projections = wedderburn(domain, tol).minimal_projections()
    residuals = [second.residual(p) for p in projections]
    if not residuals or max(residuals) <= tol.residual_eps:
        raise ConsistencyError("kappa > 1 but every minimal projection of M_E lies in M_E^2",
                               {'kappa': chain.kappa, 'projections': len(projections),
                                'max_residual': max(residuals, default=0.0)})
    best = int(np.argmax(residuals))
    verdict['equal'] = False
    verdict['witness'] = projections[best]
    verdict['witness_residual'] = float(residuals[best])
    verdict['candidates'] = [p for p, r in zip(projections, residuals) if r > tol.residual_eps]
    verdict['witness_in_ucc'] = domain.contains(projections[best], tol)
    verdict['witness_idempotent'] = hs_norm(projections[best] @ projections[best] - projections[best]) \
        <= tol.residual_eps
    return verdict
