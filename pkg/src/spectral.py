"""
Spectral analysis of channels.

Peripheral eigenstructure, irreducibility and primitivity verdicts, and
the boundary-type checks for unital CP maps.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg as la

import config
from .channel import KrausChannel, adjoint, commutes, compose, mixture, power, superop
from .errors import ConsistencyError, NumericError, PreconditionError
from .linalg import (CMatrix, OperatorSubspace, Tolerance, hs_norm, orthonormal_columns, orthonormalize)
from .multdom import (is_normal, mult_chain, mult_domain, peripheral_eigenspace,
                      require_unital_tp)
from .staralg import commutant, fixed_point_algebra, wedderburn
from .ucp import mult_domain_ucp


@dataclass(frozen=True, eq=False)
class PeripheralData:
    """
    Peripheral eigenpairs of a unital channel.

    :param eigenvalues: One entry per eigenvector (values repeat with multiplicity)
    :param eigenvectors: Unit HS-norm eigen-operators
    :param group_order: Order of the cyclic peripheral group, when it is one
    :param max_residual: Worst ||E(u) - lambda u||
    :param warnings: Numerical notes
    """

    eigenvalues: Tuple[complex, ...]
    eigenvectors: Tuple[np.ndarray, ...]
    group_order: Optional[int]
    max_residual: float
    warnings: Tuple[str, ...] = field(default=())

    def distinct(self, eps: float) -> List[Tuple[complex, int]]:
        """
        Distinct values with multiplicities.

        :param eps: Merge distance
        :return: List of (value, multiplicity)
        """
        out: List[Tuple[complex, int]] = []
        for lam in self.eigenvalues:
            for i, (mu, k) in enumerate(out):
                if abs(mu - lam) < eps:
                    out[i] = (mu, k + 1)
                    break
            else:
                out.append((lam, 1))
        return out

    def to_dict(self, eps: float = 1e-6) -> dict:
        return {
            'eigenvalues': [{'value': [mu.real, mu.imag], 'multiplicity': k} for mu, k in self.distinct(eps)],
            'group_order': self.group_order,
            'max_residual': self.max_residual,
        }


def _cyclic_deviation(values: List[complex], m: int) -> float:
    """Largest distance between the values and the m-th roots of unity (both ways)."""
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    vals = np.asarray(values)
    one_way = max(np.min(np.abs(roots - v)) for v in vals)
    other_way = max(np.min(np.abs(vals - r)) for r in roots)
    return float(max(one_way, other_way))


def peripheral_eigenpairs(ch: KrausChannel, tol: Optional[Tolerance] = None) -> PeripheralData:
    """
    Eigenpairs of superop(ch) with |lambda| >= 1 - eig_eps.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :return: PeripheralData
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    spec = peripheral_eigenspace(superop(ch), tol)
    pairs = spec.eigenpairs()
    residual = max((hs_norm(ch(u) - lam * u) for lam, u in pairs), default=0.0)
    if residual > tol.residual_eps:
        raise NumericError("peripheral eigenvector residual above tolerance", {'residual': residual})

    order = None
    values = list(spec.values)
    if values and _cyclic_deviation(values, len(values)) <= tol.cluster_eps:
        order = len(values)
    return PeripheralData(tuple(lam for lam, _ in pairs), tuple(u for _, u in pairs), order,
                          residual, spec.warnings)


@dataclass(frozen=True, eq=False)
class IrreducibilityVerdict:
    """
    :param irreducible: dim F_E == 1
    :param fixed_dim: Dimension of the fixed-point algebra
    :param witness: Nontrivial fixed projection when reducible
    """

    irreducible: bool
    fixed_dim: int
    witness: Optional[np.ndarray] = None

    def __bool__(self) -> bool:
        return self.irreducible


def _minimal_projection(alg: OperatorSubspace, tol: Tolerance) -> np.ndarray:
    return wedderburn(alg, tol).minimal_projections()[0]


def is_irreducible(ch: KrausChannel, tol: Optional[Tolerance] = None) -> IrreducibilityVerdict:
    """
    Irreducibility of a unital channel through its fixed-point algebra.

    For a unital trace preserving channel E(p) <= lambda p forces
    E(p) = p, so E is irreducible exactly when F_E = C 1.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :return: IrreducibilityVerdict (with a fixed projection when reducible)
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    fixed = fixed_point_algebra(superop(ch), tol)
    if fixed.dimension <= 1:
        return IrreducibilityVerdict(True, fixed.dimension)
    return IrreducibilityVerdict(False, fixed.dimension, _minimal_projection(fixed, tol))


def is_primitive(ch: KrausChannel, tol: Optional[Tolerance] = None) -> bool:
    """
    Irreducible with trivial peripheral spectrum {1}.

    Cross-checked against dim M_{E^inf} == 1.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :return: Verdict
    """
    tol = tol or ch.tol
    irreducible = is_irreducible(ch, tol).irreducible
    pd = peripheral_eigenpairs(ch, tol)
    trivial = len(pd.eigenvalues) == 1 and abs(pd.eigenvalues[0] - 1) < tol.cluster_eps
    verdict = irreducible and trivial
    stable_dim = mult_chain(ch, tol=tol).stabilized.dimension
    if verdict != (stable_dim == 1):
        raise ConsistencyError("primitivity criteria disagree",
                               {'spectral_verdict': verdict, 'stabilizing_dim': stable_dim})
    return verdict


def cyclic_group_check(pd: PeripheralData, tol: Tolerance) -> dict:
    """
    Verify the peripheral spectrum is a cyclic group spanned by unitaries.

    :param pd: Peripheral data of an irreducible channel
    :param tol: Tolerances
    :return: Report with the group order m
    """
    distinct = pd.distinct(tol.cluster_eps)
    ones = [k for mu, k in distinct if abs(mu - 1) < tol.cluster_eps]
    if ones != [1]:
        raise PreconditionError("peripheral data of a reducible channel (eigenvalue 1 is not simple)",
                                residual_name='fixed_dim', residual=float(sum(ones)))
    values = [mu for mu, _ in distinct]
    m = len(values)
    deviation = _cyclic_deviation(values, m)
    simple = all(k == 1 for _, k in distinct)
    unitary_residual = 0.0
    for u in pd.eigenvectors:
        g = u.conj().T @ u
        unitary_residual = max(unitary_residual, hs_norm(g - np.trace(g) / u.shape[0] * np.eye(u.shape[0])))
    cyclic = deviation <= tol.cluster_eps and simple
    return {
        'order': m,
        'deviation': deviation,
        'cyclic': cyclic,
        'unitary_residual': unitary_residual,
        'passed': cyclic and unitary_residual <= tol.residual_eps,
    }


def compose_primitivity(phi: KrausChannel, psi: KrausChannel, tol: Optional[Tolerance] = None) -> dict:
    """
    Primitivity of commuting channels and of their composition.

    :param phi: Unital trace preserving channel
    :param psi: Unital trace preserving channel commuting with phi
    :param tol: Tolerances
    :return: Verdicts for phi, psi and phi o psi
    """
    tol = tol or phi.tol
    if not commutes(superop(phi), superop(psi), tol):
        raise PreconditionError("compose_primitivity needs commuting channels", residual_name='commutator')
    verdicts = {
        'phi': is_primitive(phi, tol),
        'psi': is_primitive(psi, tol),
        'composition': is_primitive(compose(phi, psi), tol),
    }
    if (verdicts['phi'] or verdicts['psi']) and not verdicts['composition']:
        raise ConsistencyError("composition with a primitive channel is not primitive", verdicts)
    return verdicts


def one_plus_e_primitivity(ch: KrausChannel, tol: Optional[Tolerance] = None) -> Tuple[bool, bool]:
    """
    (irreducible(E), primitive((E + E^2) / 2)); the two must agree.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :return: Verdict pair
    """
    tol = tol or ch.tol
    irreducible = is_irreducible(ch, tol).irreducible
    averaged = mixture([ch, power(ch, 2)], [0.5, 0.5])
    primitive = is_primitive(averaged, tol)
    if irreducible != primitive:
        raise ConsistencyError("irreducibility of E and primitivity of (E + E^2)/2 disagree",
                               {'irreducible': irreducible, 'primitive': primitive})
    return irreducible, primitive


def _range_basis(p: CMatrix) -> Tuple[np.ndarray, np.ndarray]:
    values, vectors = la.eigh(0.5 * (p + p.conj().T))
    inside = values > 0.5
    return vectors[:, inside], vectors[:, ~inside]


def _obstruction_witness(ch: KrausChannel, domain: OperatorSubspace, tol: Tolerance) -> np.ndarray:
    """
    Minimal projection of M_E that E moves farthest out of M_E.

    Ties go to a projection lying in E(M_E), then to the lowest diagonal position.

    :param ch: Unital trace preserving channel
    :param domain: M_E
    :param tol: Tolerances
    :return: Projection
    """
    projections = wedderburn(domain, tol).minimal_projections()
    images = orthonormalize([ch(b) for b in domain.basis], tol, ch.dim)
    leaving = np.array([domain.residual(ch(p)) for p in projections])
    reached = np.array([images.residual(p) for p in projections])
    farthest = np.flatnonzero(leaving >= leaving.max() - tol.residual_eps)
    closest = reached[farthest].min()
    ties = [i for i in farthest if reached[i] <= closest + tol.residual_eps]
    best = min(ties, key=lambda i: int(np.argmax(np.abs(np.diag(projections[i])) > 0.5)))
    if config.DEBUG:
        print(f"🔍 Obstruction witness: image residual {leaving[best]:.3g}, "
              f"distance from E(M_E) {reached[best]:.3g}")
    return projections[best]


def projection_unitary_obstruction(ch: KrausChannel, tol: Optional[Tolerance] = None,
                                   candidate: Optional[CMatrix] = None) -> dict:
    """
    Decide whether E* o E is irreducible; otherwise give p, u with E(p) = u p u*.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :param candidate: Projection to use as witness (must lie in M_E)
    :return: Report dict
    """
    tol = tol or ch.tol
    domain = mult_domain(ch, tol)
    if domain.dimension <= 1:
        return {'composed_irreducible': True, 'witness': None}

    if candidate is not None:
        p = np.asarray(candidate, dtype=complex)
        if not domain.contains(p, tol):
            raise PreconditionError("candidate projection is not in the multiplicative domain",
                                    residual_name='domain', residual=domain.residual(p))
    else:
        p = _obstruction_witness(ch, domain, tol)
    image = ch(p)
    src, src_perp = _range_basis(p)
    dst, dst_perp = _range_basis(image)
    if src.shape[1] != dst.shape[1]:
        raise ConsistencyError("image of a domain projection changed rank",
                               {'rank': src.shape[1], 'image_rank': dst.shape[1]})
    u = dst @ src.conj().T + dst_perp @ src_perp.conj().T
    return {
        'composed_irreducible': False,
        'witness': p,
        'image': image,
        'unitary': u,
        'rank': int(src.shape[1]),
        'image_residual': domain.residual(image),
        'projection_residual': hs_norm(image @ image - image),
        'conjugation_residual': hs_norm(u @ p @ u.conj().T - image),
    }


def is_irreducible_operator(a: CMatrix, tol: Tolerance) -> bool:
    """
    True when only scalars commute with a and a*.

    :param a: Square matrix
    :param tol: Tolerances
    :return: Verdict
    """
    return commutant([np.asarray(a, dtype=complex)], tol).dimension == 1


def _generic_element(cols: np.ndarray, dim: int, rng: np.random.Generator) -> np.ndarray:
    coeffs = rng.standard_normal(cols.shape[1]) + 1j * rng.standard_normal(cols.shape[1])
    return (cols @ coeffs).reshape((dim, dim), order='F')


def boundary_checks(ch: KrausChannel, tol: Optional[Tolerance] = None,
                    rng: Optional[np.random.Generator] = None) -> dict:
    """
    Boundary-type statements for a unital CP map.

    (i) an irreducible fixed point forces E = id; (ii) an irreducible
    peripheral eigenvector forces the peripheral eigenvectors to span M_d;
    (iii) an irreducible element of M_E forces E to be an automorphism.
    Generic elements of each subspace are tested, since a subspace holding
    one irreducible operator has irreducible generic elements.

    :param ch: Unital CP map
    :param tol: Tolerances
    :param rng: Random generator
    :return: Report dict, one entry per clause
    """
    tol = tol or ch.tol
    rng = rng if rng is not None else np.random.default_rng(getattr(config, 'DEFAULT_SEED', 1234))
    if not ch.flags.unital:
        raise PreconditionError("boundary checks need a unital map", residual_name='unital',
                                residual=ch.flags.unital_residual)
    d = ch.dim
    s = superop(ch)
    eye = np.eye(d * d)

    def clause(hypothesis: bool, conclusion: bool) -> dict:
        if not hypothesis:
            return {'hypothesis': False, 'conclusion': None, 'status': 'not applicable'}
        return {'hypothesis': True, 'conclusion': conclusion,
                'status': 'verified' if conclusion else 'failed'}

    fixed = fixed_point_algebra(s, tol, check_closure=False)
    hyp = fixed.dimension > 0 and is_irreducible_operator(_generic_element(fixed.vectors, d, rng), tol)
    report = {'fixed_point': clause(hyp, float(np.linalg.norm(s.matrix - eye)) <= tol.residual_eps)}

    try:
        spec = peripheral_eigenspace(s, tol)
        hyp = any(is_irreducible_operator(_generic_element(r, d, rng), tol) for r in spec.right)
        span = orthonormal_columns(np.hstack(spec.right), tol).shape[1] if spec.right else 0
        report['peripheral_span'] = clause(hyp, span == d * d)
    except NumericError as e:
        report['peripheral_span'] = {'hypothesis': None, 'conclusion': None, 'status': f'error: {e}'}

    domain = mult_domain_ucp(ch, tol)
    hyp = is_irreducible_operator(_generic_element(domain.vectors, d, rng), tol)
    unitary = float(np.linalg.norm(s.matrix.conj().T @ s.matrix - eye)) <= tol.residual_eps
    report['automorphism'] = clause(hyp, unitary and domain.dimension == d * d)
    return report


def strict_positivity_test(ch: KrausChannel, tol: Optional[Tolerance] = None,
                           rng: Optional[np.random.Generator] = None, samples: int = 8) -> bool:
    """
    Secondary irreducibility diagnostic: (id + E)^(d-1) maps rank-one projections to invertibles.

    :param ch: Unital CP map
    :param tol: Tolerances
    :param rng: Random generator for the extra rank-one projections
    :param samples: Number of random rank-one projections
    :return: True when every tested image is positive definite
    """
    tol = tol or ch.tol
    rng = rng if rng is not None else np.random.default_rng(getattr(config, 'DEFAULT_SEED', 1234))
    d = ch.dim
    s = superop(ch)
    t = np.linalg.matrix_power(np.eye(d * d) + s.matrix, max(d - 1, 0))
    vectors = [np.eye(d)[:, i] for i in range(d)]
    for _ in range(samples):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        vectors.append(v / np.linalg.norm(v))
    for v in vectors:
        image = (t @ np.outer(v, v.conj()).reshape(-1, order='F')).reshape((d, d), order='F')
        values = la.eigvalsh(0.5 * (image + image.conj().T))
        if values[0] <= tol.rank_eps * max(values[-1], 1.0):
            return False
    return True


def adjoint_composition_primitivity(ch: KrausChannel, tol: Optional[Tolerance] = None) -> dict:
    """
    E* o E irreducible implies E primitive; for normal E, E primitive implies E* o E primitive.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :return: Report dict
    """
    tol = tol or ch.tol
    composed = compose(adjoint(ch), ch)
    composed_irreducible = is_irreducible(composed, tol).irreducible
    primitive = is_primitive(ch, tol)
    normal = is_normal(ch, tol)
    if composed_irreducible and not primitive:
        raise ConsistencyError("E* o E is irreducible but E is not primitive")
    composed_primitive = is_primitive(composed, tol) if normal and primitive else None
    if composed_primitive is False:
        raise ConsistencyError("normal primitive channel with non-primitive E* o E")
    return {'composed_irreducible': composed_irreducible, 'primitive': primitive,
            'normal': normal, 'composed_primitive': composed_primitive}


def commutator_residual(alg: OperatorSubspace) -> float:
    """
    Largest ||ab - ba|| over basis pairs (0 for commutative algebras).

    :param alg: Subspace
    :return: Residual
    """
    basis = np.asarray(alg.basis)
    if alg.dimension < 2:
        return 0.0
    ab = np.einsum('aij,bjk->abik', basis, basis)
    return float(np.max(np.linalg.norm(ab - ab.transpose(1, 0, 2, 3), axis=(2, 3))))


def spectral_radius(ch: KrausChannel) -> float:
    return float(np.max(np.abs(la.eigvals(superop(ch).matrix))))
