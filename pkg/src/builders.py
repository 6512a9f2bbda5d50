"""
Channel constructors.

Every named family used by the analyses and the reproduction suite, plus
seeded random generators for the property suites. ChannelSpec is the
JSON-facing description consumed by `gen`.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy.linalg import fractional_matrix_power
from scipy.stats import unitary_group

from .channel import KrausChannel
from .errors import ChannelParseError, PreconditionError
from .linalg import CMatrix, Tolerance, as_cmatrix
from .ucp import counterexample_phi


PAULI = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
    'H': np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
}


def _tol(tol: Optional[Tolerance]) -> Tolerance:
    return tol or Tolerance.from_config()


def check_probabilities(probs: Sequence[float], count: int, tol: Tolerance) -> np.ndarray:
    """
    Validate a probability vector.

    :param probs: Values
    :param count: Required length
    :param tol: Tolerances
    :return: Probabilities as float array
    """
    p = np.asarray(probs, dtype=float)
    if p.shape != (count,):
        raise PreconditionError(f"expected {count} probabilities, got {p.size}", residual_name='probabilities')
    if np.any(p < 0):
        raise PreconditionError("probabilities must be nonnegative", residual_name='probabilities',
                                residual=float(p.min()))
    if abs(p.sum() - 1) > tol.residual_eps:
        raise PreconditionError(f"probabilities sum to {p.sum():.12g}, not 1", residual_name='probabilities',
                                residual=float(abs(p.sum() - 1)))
    return p


def identity_channel(d: int, tol: Optional[Tolerance] = None) -> KrausChannel:
    return KrausChannel.from_kraus([np.eye(d, dtype=complex)], _tol(tol))


def unitary_channel(u: CMatrix, tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    x -> u x u*.

    :param u: Unitary matrix
    :param tol: Tolerances
    :return: Single-Kraus channel
    """
    tol = _tol(tol)
    u = as_cmatrix(u)
    residual = float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))
    if residual > tol.residual_eps:
        raise PreconditionError("matrix is not unitary", residual_name='unitary', residual=residual)
    return KrausChannel.from_kraus([u], tol)


def haar_unitary(d: int, seed: Optional[int] = None) -> np.ndarray:
    """
    Seeded Haar random unitary.

    :param d: Dimension
    :param seed: Seed (None = fresh entropy)
    :return: d x d unitary
    """
    if d == 1:
        return np.ones((1, 1), dtype=complex)
    return np.asarray(unitary_group.rvs(d, random_state=np.random.default_rng(seed)), dtype=complex)


def pauli_channel(probs: Sequence[float], tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    Qubit Pauli channel with probabilities (pI, pX, pY, pZ).

    :param probs: Four probabilities
    :param tol: Tolerances
    :return: KrausChannel
    """
    tol = _tol(tol)
    p = check_probabilities(probs, 4, tol)
    ops = [np.sqrt(pk) * PAULI[name] for pk, name in zip(p, 'IXYZ') if pk > 0]
    return KrausChannel.from_kraus(ops, tol)


def shift_matrix(d: int) -> np.ndarray:
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock_matrix(d: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def weyl_unitaries(d: int) -> np.ndarray:
    """
    W_jk = shift^j clock^k, stacked with index j * d + k.

    :param d: Dimension
    :return: Array (d^2, d, d)
    """
    x, z = shift_matrix(d), clock_matrix(d)
    return np.array([np.linalg.matrix_power(x, j) @ np.linalg.matrix_power(z, k)
                     for j in range(d) for k in range(d)])


def weyl_channel(d: int, probs: Sequence[float], tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    Mixture of discrete Weyl unitaries.

    :param d: Dimension
    :param probs: d^2 probabilities, index j * d + k
    :param tol: Tolerances
    :return: KrausChannel
    """
    tol = _tol(tol)
    p = check_probabilities(probs, d * d, tol)
    ops = [np.sqrt(pk) * w for pk, w in zip(p, weyl_unitaries(d)) if pk > 0]
    return KrausChannel.from_kraus(ops, tol)


def fourier_example(d: int, tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    s_k = f_k e_k* with f_k the k-th Fourier vector; E^2 is completely depolarizing.

    :param d: Dimension >= 2
    :param tol: Tolerances
    :return: KrausChannel with d rank-one Kraus operators
    """
    if d < 2:
        raise PreconditionError("fourier_example needs d >= 2", residual_name='dim', residual=float(d))
    omega = np.exp(2j * np.pi / d)
    idx = np.arange(d)
    fourier = omega ** np.outer(idx, idx) / np.sqrt(d)  # column k is f_k
    ops = [np.outer(fourier[:, k], np.eye(d)[k]) for k in range(d)]
    return KrausChannel.from_kraus(ops, _tol(tol))


def kappa3_example(tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    Channel on M_3 with chain dims [3, 2, 1].

    :param tol: Tolerances
    :return: KrausChannel
    """
    r = 1 / np.sqrt(2)
    s1 = r * np.array([[0, 0, 1], [0, 0, 1], [0, 0, 0]], dtype=complex)
    s2 = r * np.array([[0, 1, 0], [0, -1, 0], [0, 0, 0]], dtype=complex)
    s3 = np.array([[0, 0, 0], [0, 0, 0], [1, 0, 0]], dtype=complex)
    return KrausChannel.from_kraus([s1, s2, s3], _tol(tol))


def projective_channel(tol: Optional[Tolerance] = None) -> KrausChannel:
    """x -> p x p + q x q with p = diag(1, 0), q = diag(0, 1)."""
    return path_channel(0.0, tol)


def path_channel(t: float, tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    Continuous path of unital qubit channels starting at the projective channel.

    :param t: Parameter in [0, 1]
    :param tol: Tolerances
    :return: KrausChannel {p(t), q(t)}
    """
    if not 0.0 <= t <= 1.0:
        raise PreconditionError(f"path parameter t={t} outside [0, 1]", residual_name='t', residual=float(t))
    c = np.sqrt((1 + t) ** 2 + t ** 2)
    p = np.array([[1 + t, 0], [t, 0]], dtype=complex) / c
    q = np.array([[0, -t], [0, 1 + t]], dtype=complex) / c
    return KrausChannel.from_kraus([p, q], _tol(tol))


def random_unitary_mixture(d: int, k: int, seed: Optional[int] = None,
                           tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    Seeded mixture of k Haar unitaries with Dirichlet weights.

    :param d: Dimension
    :param k: Number of unitaries (>= 1)
    :param seed: Seed
    :param tol: Tolerances
    :return: Unital trace preserving KrausChannel
    """
    if k < 1:
        raise PreconditionError("random_unitary_mixture needs k >= 1", residual_name='k', residual=float(k))
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(k)) if k > 1 else np.ones(1)
    ops = [np.sqrt(w) * np.asarray(unitary_group.rvs(d, random_state=rng), dtype=complex) if d > 1
           else np.sqrt(w) * np.ones((1, 1), dtype=complex) for w in weights]
    return KrausChannel.from_kraus(ops, _tol(tol))


def random_unital_cp(d: int, k: int, seed: Optional[int] = None,
                     tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    Unital CP map k_i = S^(-1/2) A_i with S = sum A_i A_i* (generically not TP).

    :param d: Dimension
    :param k: Number of Kraus operators
    :param seed: Seed
    :param tol: Tolerances
    :return: KrausChannel
    """
    rng = np.random.default_rng(seed)
    mats = rng.standard_normal((k, d, d)) + 1j * rng.standard_normal((k, d, d))
    s = np.einsum('kij,klj->il', mats, mats.conj())
    root = fractional_matrix_power(0.5 * (s + s.conj().T), -0.5)
    return KrausChannel.from_kraus([root @ a for a in mats], _tol(tol))


def depolarizing_channel(d: int, p: float, tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    (1 - p) x + p tr(x) 1/d.

    :param d: Dimension
    :param p: Depolarizing weight in [0, 1]
    :param tol: Tolerances
    :return: KrausChannel
    """
    if not 0.0 <= p <= 1.0:
        raise PreconditionError(f"depolarizing weight p={p} outside [0, 1]", residual_name='p', residual=float(p))
    ops = [np.sqrt(1 - p) * np.eye(d, dtype=complex)] if p < 1 else []
    eye = np.eye(d)
    ops.extend(np.sqrt(p / d) * np.outer(eye[i], eye[j]) for i in range(d) for j in range(d))
    return KrausChannel.from_kraus(ops, _tol(tol))


def cyclic_shift_channel(d: int, tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    Kraus operators shift clock^k / sqrt(d): dephase, then shift cyclically.

    Irreducible with peripheral group the d-th roots of unity.

    :param d: Dimension
    :param tol: Tolerances
    :return: KrausChannel
    """
    x, z = shift_matrix(d), clock_matrix(d)
    ops = [x @ np.linalg.matrix_power(z, k) / np.sqrt(d) for k in range(d)]
    return KrausChannel.from_kraus(ops, _tol(tol))


FAMILIES = (
    'identity', 'unitary', 'pauli', 'weyl', 'fourier', 'kappa3', 'projective', 'path_t',
    'random_unitary_mixture', 'random_unital_cp', 'depolarizing', 'shift', 'counterexample', 'custom',
)


@dataclass(frozen=True)
class ChannelSpec:
    """
    Family name plus family-specific parameters.

    :param family: One of FAMILIES
    :param params: Parameters, e.g. {'dim': 3} or {'t': 0.5}
    """

    family: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ChannelParseError(f"unknown channel family '{self.family}'", field='family')

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ChannelSpec':
        if not isinstance(data, dict) or 'family' not in data:
            raise ChannelParseError("channel spec must be an object with a 'family' key", field='family')
        params = data.get('params', {})
        if not isinstance(params, dict):
            raise ChannelParseError("'params' must be an object", field='params')
        return cls(str(data['family']), dict(params))

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family, 'params': dict(self.params)}


def _param(spec: ChannelSpec, name: str, default: Any = None) -> Any:
    if name not in spec.params:
        if default is None:
            raise ChannelParseError(f"family '{spec.family}' needs parameter '{name}'", field=f'params.{name}')
        return default
    return spec.params[name]


def _unitary_from_param(value: Any, spec: ChannelSpec) -> np.ndarray:
    if isinstance(value, str):
        if value in PAULI:
            return PAULI[value]
        if value == 'haar':
            return haar_unitary(int(_param(spec, 'dim')), spec.params.get('seed'))
        raise ChannelParseError(f"unknown unitary '{value}'", field='params.u')
    from .wire import decode_matrix  # pylint: disable=import-outside-toplevel
    return decode_matrix(value, field='params.u')


def build_channel(spec: ChannelSpec, tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    Construct the channel a spec describes.

    :param spec: ChannelSpec
    :param tol: Tolerances
    :return: KrausChannel
    """
    tol = _tol(tol)
    family = spec.family
    if family == 'identity':
        return identity_channel(int(_param(spec, 'dim')), tol)
    if family == 'unitary':
        return unitary_channel(_unitary_from_param(_param(spec, 'u'), spec), tol)
    if family == 'pauli':
        return pauli_channel(_param(spec, 'probs'), tol)
    if family == 'weyl':
        d = int(_param(spec, 'dim'))
        probs = spec.params.get('probs')
        if probs is None or probs == 'uniform':
            probs = np.full(d * d, 1 / d ** 2) if probs == 'uniform' else \
                np.random.default_rng(spec.params.get('seed')).dirichlet(np.ones(d * d))
        return weyl_channel(d, probs, tol)
    if family == 'fourier':
        return fourier_example(int(_param(spec, 'dim')), tol)
    if family == 'kappa3':
        return kappa3_example(tol)
    if family == 'projective':
        return projective_channel(tol)
    if family == 'path_t':
        return path_channel(float(_param(spec, 't')), tol)
    if family == 'random_unitary_mixture':
        return random_unitary_mixture(int(_param(spec, 'dim')), int(_param(spec, 'k')),
                                      spec.params.get('seed'), tol)
    if family == 'random_unital_cp':
        return random_unital_cp(int(_param(spec, 'dim')), int(_param(spec, 'k')),
                                spec.params.get('seed'), tol)
    if family == 'depolarizing':
        return depolarizing_channel(int(_param(spec, 'dim')), float(_param(spec, 'p')), tol)
    if family == 'shift':
        return cyclic_shift_channel(int(_param(spec, 'dim')), tol)
    if family == 'counterexample':
        return counterexample_phi(tol)
    # custom
    from .wire import decode_channel  # pylint: disable=import-outside-toplevel
    return decode_channel({'dim': _param(spec, 'dim'), 'kraus': _param(spec, 'kraus')}, tol)
