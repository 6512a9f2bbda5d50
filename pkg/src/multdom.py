"""
Multiplicative domains of unital channels.

The chain M_E >= M_{E^2} >= ..., the multiplicative index kappa, the
stabilizing algebra M_{E^inf}, decay on its orthogonal complement,
automorphism verification and the peripheral spectral projection.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la

import config
from .channel import KrausChannel, Superoperator, adjoint, compose, superop
from .errors import (ERROR_NOT_UNITAL_TP, ConsistencyError, NumericError, PreconditionError,
                     ShapeError)
from .linalg import (CMatrix, OperatorSubspace, Tolerance, cluster_values, eig, from_vectors,
                     hs_norm, null_space, unvec, vec)
from .staralg import (commutant, fixed_point_algebra, generated_algebra, intersect, is_contained,
                      subspace_distance, subspace_equal, wedderburn)


def require_unital_tp(ch: KrausChannel) -> None:
    """
    Reject channels that are not unital and trace preserving.

    :param ch: Channel
    """
    if ch.is_unital_tp:
        return
    name = 'tp' if not ch.flags.tp else 'unital'
    residual = ch.flags.tp_residual if name == 'tp' else ch.flags.unital_residual
    raise PreconditionError(ERROR_NOT_UNITAL_TP.format(tp=ch.flags.tp_residual,
                                                       unital=ch.flags.unital_residual),
                            residual_name=name, residual=residual)


def _domain_from_superop(s: np.ndarray, dim: int, tol: Tolerance) -> OperatorSubspace:
    """M_{E^n} as the fixed points of (S^n)^dagger S^n."""
    return fixed_point_algebra(Superoperator(dim, s.conj().T @ s), tol)


def _preimage_within(base: OperatorSubspace, s: np.ndarray, target: OperatorSubspace,
                     tol: Tolerance) -> OperatorSubspace:
    """
    {a in base : S vec(a) in target}.

    :param base: Subspace searched
    :param s: d^2 x d^2 matrix
    :param target: Subspace the image must land in
    :param tol: Tolerances
    :return: OperatorSubspace
    """
    d = base.dim_ambient
    if base.dimension == 0:
        return base
    v = base.vectors
    eye = np.eye(d * d)
    notes: List[str] = []
    coeffs = null_space((eye - target.projector) @ s @ v, tol, notes, scale=max(1.0, la.norm(s, 2)))
    if coeffs.shape[1] == 0:
        return from_vectors(np.zeros((d * d, 0), dtype=complex), d, notes)
    cols = la.orth(v @ coeffs)
    return from_vectors(cols, d, notes)


def mult_domain(ch: KrausChannel, tol: Optional[Tolerance] = None) -> OperatorSubspace:
    """
    Multiplicative domain M_E of a unital channel.

    Computed as the fixed points of E* o E and cross-checked against the
    commutant of the Kraus products {a_i* a_j}.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances (defaults to the channel's)
    :return: OperatorSubspace
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    s = superop(ch).matrix
    domain = _domain_from_superop(s, ch.dim, tol)

    a = ch.kraus
    products = np.einsum('iba,jbc->ijac', a.conj(), a).reshape(-1, ch.dim, ch.dim)
    via_commutant = commutant(list(products), tol)
    if not subspace_equal(domain, via_commutant, tol):
        raise NumericError("multiplicative domain disagrees with the Kraus commutant",
                           {'fixed_point_dim': domain.dimension,
                            'commutant_dim': via_commutant.dimension,
                            'distance': subspace_distance(domain, via_commutant)})
    return domain.with_warnings(via_commutant.warnings)


@dataclass(frozen=True, eq=False)
class MultChainResult:
    """
    The chain M_{E^1} >= ... >= M_{E^(kappa+1)}.

    :param chain: Subspaces M_{E^n} for n = 1 .. kappa + 1
    :param kappa: Multiplicative index
    :param stabilized: M_{E^inf} = M_{E^kappa}
    :param dims: Dimensions of every chain entry (last one repeats the stable value)
    :param recursive_dims: Dimensions from the recursive construction
    :param normal: S commutes with its adjoint
    :param warnings: Numerical notes
    """

    chain: Tuple[OperatorSubspace, ...]
    kappa: int
    stabilized: OperatorSubspace
    dims: Tuple[int, ...]
    recursive_dims: Tuple[int, ...]
    normal: bool
    warnings: Tuple[str, ...] = field(default=())

    @property
    def chain_dims(self) -> List[int]:
        """Dimensions of M_{E^1} .. M_{E^kappa}."""
        return list(self.dims[:self.kappa])

    def to_dict(self) -> dict:
        return {
            'kappa': self.kappa,
            'chain_dims': self.chain_dims,
            'stabilized_dim': self.stabilized.dimension,
            'normal': self.normal,
        }


def mult_chain(ch: KrausChannel, max_n: Optional[int] = None,
               tol: Optional[Tolerance] = None) -> MultChainResult:
    """
    Compute M_{E^n} from ker((S^n)^dagger S^n - I) until two consecutive terms agree.

    Each term is also rebuilt as {a in M_{E^(n-1)} : E(a) in M_{E^(n-1)}}
    and the two constructions must agree.

    :param ch: Unital trace preserving channel
    :param max_n: Largest n tried before giving up (default d^2)
    :param tol: Tolerances
    :return: MultChainResult
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    d = ch.dim
    max_n = max_n or getattr(config, 'MAX_CHAIN_LENGTH', None) or d * d
    if max_n < 1:
        raise ValueError("max_n must be >= 1")

    s = superop(ch)
    normal = s.normality_residual() <= tol.residual_eps
    first = mult_domain(ch, tol)
    chain = [first]
    recursive_dims = [first.dimension]
    notes = list(first.warnings)
    power = s.matrix
    kappa = None

    for n in range(2, max_n + 2):
        power = s.matrix @ power
        current = _domain_from_superop(power, d, tol)
        previous = chain[-1]
        notes.extend(current.warnings)

        recursive = _preimage_within(previous, s.matrix, previous, tol)
        recursive_dims.append(recursive.dimension)
        if not subspace_equal(current, recursive, tol):
            raise ConsistencyError(f"M_E^{n} disagrees with its recursive construction",
                                   {'n': n, 'direct_dim': current.dimension,
                                    'recursive_dim': recursive.dimension})
        chain.append(current)

        if current.dimension > previous.dimension:
            raise NumericError("multiplicative chain is not decreasing",
                               {'n': n, 'dims': [c.dimension for c in chain]})
        if current.dimension == previous.dimension:
            if not subspace_equal(current, previous, tol):
                raise NumericError("consecutive chain terms have equal dimension but different spans",
                                   {'n': n, 'distance': subspace_distance(current, previous)})
            kappa = n - 1
            break

    if kappa is None:
        raise NumericError("multiplicative chain did not stabilize",
                           {'max_n': max_n, 'dims': [c.dimension for c in chain]})
    if d > 1 and kappa >= d * d:
        raise ConsistencyError("multiplicative index reached d^2", {'kappa': kappa, 'dim': d})
    if normal and kappa != 1:
        raise ConsistencyError("normal channel with multiplicative index above 1", {'kappa': kappa})
    if config.DEBUG:
        print(f"🔍 Chain dims {[c.dimension for c in chain]} -> kappa = {kappa}")

    return MultChainResult(chain=tuple(chain), kappa=kappa, stabilized=chain[kappa - 1],
                           dims=tuple(c.dimension for c in chain),
                           recursive_dims=tuple(recursive_dims), normal=normal,
                           warnings=tuple(dict.fromkeys(notes)))


@dataclass(frozen=True, eq=False)
class PeripheralSpectrum:
    """
    Eigenvalues of modulus one with their right and left eigenspaces.

    :param dim: d
    :param values: Cluster representatives, one per distinct eigenvalue
    :param right: Orthonormal right eigenvectors per value (d^2 x k columns)
    :param left: Orthonormal left eigenvectors per value (d^2 x k columns)
    :param warnings: Borderline eigenvalues and rank notes
    """

    dim: int
    values: Tuple[complex, ...]
    right: Tuple[np.ndarray, ...]
    left: Tuple[np.ndarray, ...]
    warnings: Tuple[str, ...] = field(default=())

    @property
    def multiplicities(self) -> List[int]:
        return [r.shape[1] for r in self.right]

    def eigenvectors(self) -> List[CMatrix]:
        return [unvec(col, self.dim) for r in self.right for col in r.T]

    def eigenpairs(self) -> List[Tuple[complex, CMatrix]]:
        return [(lam, unvec(col, self.dim)) for lam, r in zip(self.values, self.right) for col in r.T]


def _eigenspace(m: np.ndarray, mu: complex, spread: float, tol: Tolerance,
                notes: List[str]) -> np.ndarray:
    """
    Kernel of m - mu I, counting singular values below the cluster spread.
    """
    shifted = m - mu * np.eye(m.shape[0])
    _, s, vh = la.svd(shifted, lapack_driver='gesvd')
    cutoff = max(tol.rank_eps * max(s[0], 1.0), 2.0 * spread)
    rank = int(np.sum(s > cutoff))
    factor = getattr(config, 'GAP_WARNING_FACTOR', 10)
    near = s[(s > cutoff / factor) & (s < cutoff * factor)]
    if near.size:
        notes.append(f"borderline eigenspace rank at {mu:.6g} (singular value {near[0]:.2e}, cutoff {cutoff:.2e})")
    return vh[rank:].conj().T


def peripheral_eigenspace(s: Superoperator, tol: Tolerance) -> PeripheralSpectrum:
    """
    Peripheral eigenvalues |lambda| >= 1 - eig_eps with their eigenspaces.

    :param s: Superoperator
    :param tol: Tolerances
    :return: PeripheralSpectrum
    """
    values, _ = eig(s.matrix, tol)
    moduli = np.abs(values)
    notes: List[str] = []
    factor = getattr(config, 'BORDERLINE_EIG_FACTOR', 100)
    borderline = values[(moduli > 1 - factor * tol.eig_eps) & (moduli < 1 - tol.eig_eps)]
    for lam in borderline:
        notes.append(f"borderline peripheral eigenvalue {lam:.10g} (|lambda| = {abs(lam):.12f})")

    peripheral = values[moduli >= 1 - tol.eig_eps]
    clusters = cluster_values(peripheral, tol.cluster_eps)
    clusters.sort(key=lambda c: np.angle(np.mean(peripheral[c])) % (2 * np.pi))

    reps, rights, lefts = [], [], []
    for c in clusters:
        mu = complex(np.mean(peripheral[c]))
        spread = float(np.max(np.abs(peripheral[c] - mu)))
        r = _eigenspace(s.matrix, mu, spread, tol, notes)
        left = _eigenspace(s.matrix.conj().T, np.conj(mu), spread, tol, notes)
        if r.shape[1] < len(c) or left.shape[1] < len(c):
            raise NumericError("defective peripheral eigenvalue; input is probably not unital and "
                               "trace preserving",
                               {'eigenvalue': mu, 'algebraic': len(c), 'geometric': r.shape[1]})
        reps.append(mu)
        rights.append(r)
        lefts.append(left)

    if config.DEBUG:
        for note in notes:
            print(f"⚠️  {note}")
    return PeripheralSpectrum(s.dim, tuple(reps), tuple(rights), tuple(lefts), tuple(notes))


def spectral_projection(spec: PeripheralSpectrum, tol: Tolerance) -> Superoperator:
    """
    P = R (L^dagger R)^(-1) L^dagger onto the peripheral eigenspaces.

    :param spec: PeripheralSpectrum
    :param tol: Tolerances
    :return: Idempotent Superoperator
    """
    n = spec.dim * spec.dim
    if not spec.values:
        return Superoperator(spec.dim, np.zeros((n, n), dtype=complex))
    r = np.hstack(spec.right)
    lt = np.hstack(spec.left).conj().T
    try:
        p = r @ la.solve(lt @ r, lt)
    except la.LinAlgError as e:
        raise NumericError(f"peripheral left/right eigenvectors are not biorthogonal: {e}") from e
    idem = float(np.linalg.norm(p @ p - p))
    if idem > tol.residual_eps * max(1.0, float(np.linalg.norm(p))):
        raise NumericError("peripheral projection is not idempotent", {'residual': idem})
    return Superoperator(spec.dim, p)


def peripheral_projection(ch: KrausChannel, tol: Optional[Tolerance] = None) -> Superoperator:
    """
    Spectral projection of E onto its peripheral eigenspaces.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :return: Superoperator P with P^2 = P
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    return spectral_projection(peripheral_eigenspace(superop(ch), tol), tol)


def stabilizing_algebra(ch: KrausChannel, tol: Optional[Tolerance] = None,
                        chain: Optional[MultChainResult] = None) -> OperatorSubspace:
    """
    M_{E^inf}, checked against the algebra generated by peripheral eigenvectors.

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :param chain: Precomputed chain (computed when omitted)
    :return: OperatorSubspace
    """
    tol = tol or ch.tol
    chain = chain or mult_chain(ch, tol=tol)
    spec = peripheral_eigenspace(superop(ch), tol)
    generated = generated_algebra(spec.eigenvectors(), tol, unital=True, dim=ch.dim)
    if not subspace_equal(chain.stabilized, generated, tol):
        raise ConsistencyError("stabilizing algebra differs from the algebra of peripheral eigenvectors",
                               {'chain_dim': chain.stabilized.dimension,
                                'peripheral_dim': generated.dimension})
    return chain.stabilized.with_warnings(spec.warnings)


@dataclass(frozen=True)
class AutomorphismReport:
    """
    Residuals of the automorphism checks on a subalgebra.

    :param residuals: Check name -> worst residual
    :param threshold: Pass threshold
    """

    residuals: Dict[str, float]
    threshold: float

    @property
    def failed_checks(self) -> List[str]:
        return [name for name, r in self.residuals.items() if r > self.threshold]

    @property
    def passed(self) -> bool:
        return not self.failed_checks

    def to_dict(self) -> dict:
        return {'passed': self.passed, 'failed': self.failed_checks, 'residuals': dict(self.residuals)}


def verify_automorphism(ch: KrausChannel, alg: OperatorSubspace,
                        tol: Optional[Tolerance] = None) -> AutomorphismReport:
    """
    Check that E restricted to alg is a *-automorphism with inverse E*.

    Checks: invariance, inverse (both orders), multiplicativity and
    unitarity of the restricted superoperator.

    :param ch: Channel
    :param alg: Subalgebra (normally the stabilizing algebra)
    :param tol: Tolerances
    :return: AutomorphismReport
    """
    tol = tol or ch.tol
    dual = adjoint(ch)
    basis = list(alg.basis)
    images = [ch(b) for b in basis]

    invariance = max((alg.residual(x) for x in images), default=0.0)
    inverse = max((max(hs_norm(dual(x) - b), hs_norm(ch(dual(b)) - b)) for b, x in zip(basis, images)),
                  default=0.0)
    mult = 0.0
    for a, ea in zip(basis, images):
        for b, eb in zip(basis, images):
            mult = max(mult, hs_norm(ch(a @ b) - ea @ eb))
    v = alg.vectors
    restricted = v.conj().T @ superop(ch).matrix @ v
    unitary = float(np.linalg.norm(restricted.conj().T @ restricted - np.eye(alg.dimension))) \
        if alg.dimension else 0.0

    return AutomorphismReport({'invariance': invariance, 'inverse': inverse,
                               'multiplicativity': mult, 'unitary': unitary},
                              tol.residual_eps)


@dataclass(frozen=True)
class DecayResult:
    """
    HS norms of E^n(x) for x in the complement of the stabilizing algebra.

    :param norms: ||E^n(x)|| for n = 0 .. n_stop
    :param converged: Target reached before the cap
    :param monotone: Non-increasing within residual_eps
    :param spectral_gap: 1 - largest non-peripheral modulus
    """

    norms: Tuple[float, ...]
    converged: bool
    monotone: bool
    spectral_gap: float

    @property
    def n_stop(self) -> int:
        return len(self.norms) - 1


def complement_decay(ch: KrausChannel, x: CMatrix, n_max: Optional[int] = None,
                     tol: Optional[Tolerance] = None, project: bool = True,
                     target: Optional[float] = None,
                     stabilized: Optional[OperatorSubspace] = None) -> DecayResult:
    """
    Iterate E on x until ||E^n(x)|| drops below the target.

    :param ch: Unital trace preserving channel
    :param x: d x d matrix
    :param n_max: Iteration cap (config.DECAY_CAP)
    :param tol: Tolerances
    :param project: Remove the stabilizing-algebra component of x first
    :param target: Stopping norm (config.DECAY_TARGET)
    :param stabilized: Precomputed stabilizing algebra
    :return: DecayResult
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    n_max = n_max or getattr(config, 'DECAY_CAP', 2000)
    target = target or getattr(config, 'DECAY_TARGET', 1e-6)
    s = superop(ch)
    x = np.asarray(x, dtype=complex)
    if x.shape != (ch.dim, ch.dim):
        raise ShapeError(f"x must be {ch.dim}x{ch.dim}, got {x.shape}")
    if project:
        alg = stabilized if stabilized is not None else stabilizing_algebra(ch, tol)
        x = x - alg.project(x)

    moduli = np.sort(np.abs(eig(s.matrix, tol)[0]))[::-1]
    inner = moduli[moduli < 1 - tol.eig_eps]
    gap = float(1 - inner[0]) if inner.size else 1.0

    v = vec(x)
    norms = [float(np.linalg.norm(v))]
    while norms[-1] >= target and len(norms) <= n_max:
        v = s.matrix @ v
        norms.append(float(np.linalg.norm(v)))
    slack = tol.residual_eps * max(1.0, norms[0])
    monotone = all(b <= a + slack for a, b in zip(norms, norms[1:]))
    return DecayResult(tuple(norms), norms[-1] < target, monotone, gap)


def choi_effros_product(p: Superoperator, a: CMatrix, b: CMatrix, tol: Tolerance) -> CMatrix:
    """
    a . b = P(ab) on the range of the peripheral projection.

    :param p: Idempotent superoperator
    :param a: Element of range(P)
    :param b: Element of range(P)
    :param tol: Tolerances
    :return: P(ab)
    """
    for name, x in (('a', a), ('b', b)):
        x = np.asarray(x, dtype=complex)
        if hs_norm(p.apply(x) - x) > tol.residual_eps * max(1.0, hs_norm(x)):
            raise PreconditionError(f"{name} is outside the range of the projection",
                                    residual_name='range', residual=hs_norm(p.apply(x) - x))
    return p.apply(np.asarray(a) @ np.asarray(b))


def partial_isometry_generators(alg: OperatorSubspace, tol: Tolerance,
                                rng: Optional[np.random.Generator] = None) -> List[CMatrix]:
    """
    Matrix units of a *-algebra; each is a partial isometry and together they generate it.

    :param alg: *-algebra
    :param tol: Tolerances
    :param rng: Random generator for the decomposition
    :return: List of partial isometries
    """
    structure = wedderburn(alg, tol, rng)
    units = structure.matrix_units()
    for v in units:
        for proj in (v @ v.conj().T, v.conj().T @ v):
            if hs_norm(proj @ proj - proj) > tol.residual_eps * max(1.0, hs_norm(proj)):
                raise ConsistencyError("matrix unit is not a partial isometry",
                                       {'residual': hs_norm(proj @ proj - proj)})
    generated = generated_algebra(units, tol, unital=False, dim=alg.dim_ambient)
    if not subspace_equal(generated, alg, tol):
        raise ConsistencyError("partial isometries do not generate the algebra",
                               {'algebra_dim': alg.dimension, 'generated_dim': generated.dimension})
    return units


def peripheral_kraus_relation(ch: KrausChannel, tol: Optional[Tolerance] = None) -> dict:
    """
    max_j ||a_j u - lambda u a_j|| for every peripheral pair (lambda, u).

    :param ch: Unital trace preserving channel
    :param tol: Tolerances
    :return: Report dict
    """
    tol = tol or ch.tol
    require_unital_tp(ch)
    spec = peripheral_eigenspace(superop(ch), tol)
    rows = []
    for lam, u in spec.eigenpairs():
        residual = max(hs_norm(a @ u - lam * u @ a) for a in ch.kraus)
        rows.append({'eigenvalue': [lam.real, lam.imag], 'residual': residual})
    worst = max((r['residual'] for r in rows), default=0.0)
    return {'pairs': rows, 'max_residual': worst, 'passed': worst <= tol.residual_eps}


def _require_commuting(phi: KrausChannel, psi: KrausChannel, tol: Tolerance) -> None:
    sp, sq = superop(phi).matrix, superop(psi).matrix
    residual = float(np.linalg.norm(sp @ sq - sq @ sp))
    if residual > tol.residual_eps:
        raise PreconditionError("channels do not commute", residual_name='commutator', residual=residual)


def composed_stabilizing_check(phi: KrausChannel, psi: KrausChannel,
                               tol: Optional[Tolerance] = None) -> dict:
    """
    Compare M_{(phi o psi)^inf} with {a in M_{psi^inf} : psi^k(a) in M_{phi^inf} for all k}.

    :param phi: Unital trace preserving channel
    :param psi: Unital trace preserving channel commuting with phi
    :param tol: Tolerances
    :return: Report dict
    """
    tol = tol or phi.tol
    require_unital_tp(phi)
    require_unital_tp(psi)
    _require_commuting(phi, psi, tol)

    m_phi = stabilizing_algebra(phi, tol)
    m_psi = stabilizing_algebra(psi, tol)
    left = stabilizing_algebra(compose(phi, psi), tol)

    s_psi = superop(psi).matrix
    base = intersect(m_psi, m_phi, tol)
    current = base
    for _ in range(phi.dim * phi.dim):
        narrowed = _preimage_within(base, s_psi, current, tol)
        if narrowed.dimension == current.dimension:
            break
        current = narrowed

    both = intersect(m_phi, m_psi, tol)
    return {
        'composition_dim': left.dimension,
        'iterated_dim': current.dimension,
        'equal': subspace_equal(left, current, tol),
        'contained_in_intersection': is_contained(left, both, tol),
    }


def composition_domain_check(phi: KrausChannel, psi: KrausChannel,
                             tol: Optional[Tolerance] = None) -> dict:
    """
    Compare M_{phi o psi} with {a in M_psi : psi(a) in M_phi}.

    :param phi: Unital trace preserving channel
    :param psi: Unital trace preserving channel
    :param tol: Tolerances
    :return: Report dict
    """
    tol = tol or phi.tol
    m_phi = mult_domain(phi, tol)
    m_psi = mult_domain(psi, tol)
    left = mult_domain(compose(phi, psi), tol)
    right = _preimage_within(m_psi, superop(psi).matrix, m_phi, tol)
    return {'composition_dim': left.dimension, 'preimage_dim': right.dimension,
            'equal': subspace_equal(left, right, tol)}


def _spectral_projections(h: np.ndarray, tol: Tolerance) -> List[np.ndarray]:
    values, vectors = la.eigh(0.5 * (h + h.conj().T))
    projections = []
    for c in cluster_values(values, tol.cluster_eps):
        q = vectors[:, c]
        projections.append(q @ q.conj().T)
    return projections


def membership_checks(ch: KrausChannel, alg: OperatorSubspace, tol: Optional[Tolerance] = None,
                      rng: Optional[np.random.Generator] = None, samples: int = 4) -> dict:
    """
    Projection and unitary membership tests against M_E.

    p in M_E iff E(p) is a projection; u in M_E iff E(u) is unitary. Test
    elements are spectral projections and exponentials of random
    self-adjoint elements of alg.

    :param ch: Unital trace preserving channel
    :param alg: *-algebra supplying test elements
    :param tol: Tolerances
    :param rng: Random generator
    :param samples: Number of random self-adjoint elements
    :return: Report dict
    """
    tol = tol or ch.tol
    rng = rng if rng is not None else np.random.default_rng(getattr(config, 'DEFAULT_SEED', 1234))
    domain = mult_domain(ch, tol)
    basis = np.asarray(alg.basis)
    mismatches = []
    checked = 0
    for _ in range(samples):
        coeffs = rng.standard_normal(alg.dimension) + 1j * rng.standard_normal(alg.dimension)
        h = np.einsum('k,kij->ij', coeffs, basis)
        h = 0.5 * (h + h.conj().T)
        for p in _spectral_projections(h, tol):
            ep = ch(p)
            by_image = hs_norm(ep @ ep - ep) <= tol.residual_eps
            if by_image != domain.contains(p, tol):
                mismatches.append('projection')
            checked += 1
        u = la.expm(1j * h)
        eu = ch(u)
        by_image = hs_norm(eu.conj().T @ eu - np.eye(ch.dim)) <= tol.residual_eps
        if by_image != domain.contains(u, tol):
            mismatches.append('unitary')
        checked += 1
    return {'checked': checked, 'mismatches': len(mismatches), 'passed': not mismatches}


def kappa_bound_diagnostic(result: MultChainResult, dim: int) -> dict:
    """
    Record d^2 - d + 1 (largest proper unital subalgebra) against dim M_E.

    :param result: Chain result
    :param dim: d
    :return: Report dict
    """
    bound = dim * dim - dim + 1
    first = result.dims[0]
    proper = first < dim * dim
    return {'bound': bound, 'first_dim': first, 'proper': proper,
            'within_bound': (first <= bound) if proper else None,
            'kappa_below_d2': result.kappa < max(dim * dim, 2)}


def is_normal(ch: KrausChannel, tol: Optional[Tolerance] = None) -> bool:
    tol = tol or ch.tol
    return superop(ch).normality_residual() <= tol.residual_eps


def chain_members(result: MultChainResult) -> Sequence[OperatorSubspace]:
    return result.chain[:result.kappa]
