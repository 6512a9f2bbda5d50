"""
Reproduction suite for the documented example channels.

Every row recomputes a structural fact about a named channel and compares
it with the known value.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from . import builders
from .channel import adjoint, compose, superop
from .errors import PreconditionError
from .linalg import OperatorSubspace, Tolerance, hs_norm, orthonormalize
from .multdom import mult_chain, stabilizing_algebra
from .qec import ucc_codes, ucs_vs_uns, uns_codes
from .spectral import cyclic_group_check, is_irreducible, is_primitive, peripheral_eigenpairs
from .staralg import fixed_point_algebra, subspace_distance, subspace_equal
from .ucp import mult_domain_ucp

SEED = 20240601

# (expected, computed, passed); checks append numerical notes to the list they get
RowResult = Tuple[Any, Any, bool]
Notes = List[str]


@dataclass(frozen=True)
class ReproductionRow:
    """
    :param name: Row identifier (used by --only)
    :param description: What is checked
    :param expected: Known value
    :param computed: Recomputed value
    :param passed: Match within tolerance
    :param warnings: Borderline notes raised while recomputing
    """

    name: str
    description: str
    expected: Any
    computed: Any
    passed: bool
    warnings: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {'name': self.name, 'description': self.description, 'expected': self.expected,
                'computed': self.computed, 'passed': self.passed, 'warnings': list(self.warnings)}


def _diagonals(d: int, tol: Tolerance) -> OperatorSubspace:
    return orthonormalize([np.diag(np.eye(d)[i]) for i in range(d)], tol, d)


def fourier_chain(tol: Tolerance, notes: Notes) -> RowResult:
    ch = builders.fourier_example(3, tol)
    chain = mult_chain(ch, tol=tol)
    notes.extend(chain.warnings)
    computed = {'dims': chain.chain_dims, 'kappa': chain.kappa,
                'diagonal_domain': subspace_equal(chain.chain[0], _diagonals(3, tol), tol)}
    expected = {'dims': [3, 1], 'kappa': 2, 'diagonal_domain': True}
    return expected, computed, computed == expected


def fourier_depolarizes(tol: Tolerance, notes: Notes) -> RowResult:
    ch = builders.fourier_example(3, tol)
    rng = np.random.default_rng(seed=SEED)
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    residual = hs_norm(ch(ch(x)) - np.trace(x) * np.eye(3) / 3)
    primitive = is_primitive(ch, tol)
    return {'residual_max': 1e-9, 'primitive': True}, {'residual': residual, 'primitive': primitive}, \
        residual <= 1e-9 and primitive


def kappa3_chain(tol: Tolerance, notes: Notes) -> RowResult:
    ch = builders.kappa3_example(tol)
    chain = mult_chain(ch, tol=tol)
    notes.extend(chain.warnings)
    second = orthonormalize([np.diag([0, 1, 1]), np.diag([1, 0, 0])], tol, 3)
    distance = max(subspace_distance(chain.chain[1], second), subspace_distance(second, chain.chain[1]))
    computed = {'dims': chain.chain_dims, 'kappa': chain.kappa, 'second_term_distance': distance}
    passed = computed['dims'] == [3, 2, 1] and chain.kappa == 3 and chain.chain[1].dimension == 2 \
        and distance <= 1e-8
    return {'dims': [3, 2, 1], 'kappa': 3, 'second_term_distance_max': 1e-8}, computed, passed


def kappa3_image(tol: Tolerance, notes: Notes) -> RowResult:
    ch = builders.kappa3_example(tol)
    expected = 0.5 * np.array([[1, 1, 0], [1, 1, 0], [0, 0, 0]], dtype=complex)
    err = float(np.max(np.abs(ch(np.diag([0, 0, 1]).astype(complex)) - expected)))
    return {'entrywise_max': 1e-12}, {'entrywise': err}, err <= 1e-12


def unitary_full_domain(tol: Tolerance, notes: Notes) -> RowResult:
    rows = []
    for i, d in enumerate((2, 3, 4, 2, 3)):
        ch = builders.unitary_channel(builders.haar_unitary(d, SEED + i), tol)
        chain = mult_chain(ch, tol=tol)
        notes.extend(chain.warnings)
        rows.append((chain.kappa, stabilizing_algebra(ch, tol, chain=chain).dimension == d * d))
    computed = {'kappas': [k for k, _ in rows], 'full': all(f for _, f in rows)}
    return {'kappas': [1] * 5, 'full': True}, computed, computed == {'kappas': [1] * 5, 'full': True}


def pauli_weyl_normal(tol: Tolerance, notes: Notes) -> RowResult:
    rng = np.random.default_rng(seed=SEED)
    channels = [builders.pauli_channel(rng.dirichlet(np.ones(4)), tol) for _ in range(10)]
    for i in range(10):
        d = 2 + i % 2
        channels.append(builders.weyl_channel(d, rng.dirichlet(np.ones(d * d)), tol))
    channels.append(builders.pauli_channel([0.4, 0.3, 0.2, 0.1], tol))
    normality = max(superop(ch).normality_residual() for ch in channels)
    chains = [mult_chain(ch, tol=tol) for ch in channels]
    for chain in chains:
        notes.extend(chain.warnings)
    kappas = sorted({chain.kappa for chain in chains})
    computed = {'normality_max': normality, 'kappas': kappas}
    return {'normality_max': 1e-9, 'kappas': [1]}, computed, normality <= 1e-9 and kappas == [1]


def path_family(tol: Tolerance, notes: Notes) -> RowResult:
    base = mult_chain(builders.projective_channel(tol), tol=tol).kappa
    fixed_dims, diagonal, kappas = [], True, []
    for t in (0.1, 0.5, 1.0):
        ch = builders.path_channel(t, tol)
        fixed = fixed_point_algebra(superop(compose(adjoint(ch), ch)), tol)
        notes.extend(fixed.warnings)
        fixed_dims.append(fixed.dimension)
        diagonal = diagonal and subspace_equal(fixed, _diagonals(2, tol), tol)
        chain = mult_chain(ch, tol=tol)
        notes.extend(chain.warnings)
        kappas.append(chain.kappa)
    computed = {'kappa_t0': base, 'fixed_dims': fixed_dims, 'diagonal': diagonal, 'kappas': kappas}
    passed = base == 1 and fixed_dims == [2, 2, 2] and diagonal and all(k >= 2 for k in kappas)
    return {'kappa_t0': 1, 'fixed_dims': [2, 2, 2], 'diagonal': True, 'kappas': '>= 2'}, computed, passed


def counterexample_domain(tol: Tolerance, notes: Notes) -> RowResult:
    phi = builders.counterexample_phi(tol)
    a = np.diag([1, 1, 0]).astype(complex)
    domain = mult_domain_ucp(phi, tol)
    notes.extend(domain.warnings)
    member = domain.contains(a, tol)
    k3 = phi.kraus[2]
    commutator = float(np.linalg.norm(a @ k3 - k3 @ a))
    return {'member': True, 'commutator_min': 0.1}, {'member': member, 'commutator': commutator}, \
        member and commutator >= 0.1


def projective_codes(tol: Tolerance, notes: Notes) -> RowResult:
    ucc = ucc_codes(builders.projective_channel(tol), tol)
    notes.extend(ucc.algebra.warnings)
    blocks = sorted(ucc.structure.blocks)
    computed = [list(b) for b in blocks]
    return [[1, 1], [1, 1]], computed, computed == [[1, 1], [1, 1]]


def kappa3_codes(tol: Tolerance, notes: Notes) -> RowResult:
    ch = builders.kappa3_example(tol)
    ucc, uns = ucc_codes(ch, tol), uns_codes(ch, tol)
    notes.extend(ucc.algebra.warnings + uns.algebra.warnings)
    verdict = ucs_vs_uns(ch, tol)
    e33 = np.diag([0, 0, 1]).astype(complex)
    witness = any(hs_norm(p - e33) <= 1e-8 for p in verdict['candidates'])
    computed = {'ucc_dim': ucc.algebra.dimension, 'uns_dim': uns.algebra.dimension,
                'uns_verified': uns.verified, 'witness_e33': witness}
    expected = {'ucc_dim': 3, 'uns_dim': 1, 'uns_verified': True, 'witness_e33': True}
    return expected, computed, computed == expected


def shift_cyclic(tol: Tolerance, notes: Notes) -> RowResult:
    ch = builders.cyclic_shift_channel(3, tol)
    irreducible = is_irreducible(ch, tol).irreducible
    report = cyclic_group_check(peripheral_eigenpairs(ch, tol), tol)
    computed = {'irreducible': irreducible, 'order': report['order'], 'cyclic': report['passed']}
    expected = {'irreducible': True, 'order': 3, 'cyclic': True}
    return expected, computed, computed == expected


def weak_depolarizing(tol: Tolerance, notes: Notes) -> RowResult:
    # 1 - 0.98^2 ~ 0.04 is the smallest nonzero singular value of S*S - 1
    ch = builders.depolarizing_channel(2, 0.02, tol)
    chain = mult_chain(ch, tol=tol)
    notes.extend(chain.warnings)
    computed = {'domain_dim': chain.chain_dims[0], 'kappa': chain.kappa}
    expected = {'domain_dim': 1, 'kappa': 1}
    return expected, computed, computed == expected


ROWS: Dict[str, Tuple[str, Callable[[Tolerance, Notes], RowResult]]] = {
    'fourier_chain': ("fourier(3): M_E diagonal, chain [3, 1], kappa 2", fourier_chain),
    'fourier_depolarizes': ("fourier(3): E^2 completely depolarizing, primitive", fourier_depolarizes),
    'kappa3_chain': ("kappa3: chain [3, 2, 1], second term span", kappa3_chain),
    'kappa3_image': ("kappa3: E(diag(0, 0, 1)) entrywise", kappa3_image),
    'unitary': ("5 Haar unitary channels: kappa 1, full stabilizing algebra", unitary_full_domain),
    'pauli_weyl': ("Pauli and Weyl mixtures: normal, kappa 1", pauli_weyl_normal),
    'path': ("path family: kappa(t=0) = 1, diagonal F_{E*E}, kappa >= 2", path_family),
    'counterexample': ("unital non-TP map: diag(1, 1, 0) multiplicative, not commuting", counterexample_domain),
    'projective_codes': ("projective channel: UCC blocks [(1, 1), (1, 1)]", projective_codes),
    'kappa3_codes': ("kappa3: UCC dim 3, UNS trivial, witness diag(0, 0, 1)", kappa3_codes),
    'shift': ("cyclic shift(3): irreducible, peripheral group of order 3", shift_cyclic),
    'weak_depolarizing': ("depolarizing(2, 0.02): M_E trivial, kappa 1", weak_depolarizing),
}


def run_suite(tol: Optional[Tolerance] = None, only: Optional[str] = None) -> List[ReproductionRow]:
    """
    Run all rows, or one row when `only` is given.

    Errors raised inside a row make that row fail instead of stopping the suite.
    Notes collected before the error are kept.

    :param tol: Tolerances
    :param only: Row name
    :return: List of ReproductionRow
    """
    tol = tol or Tolerance.from_config()
    if only is not None and only not in ROWS:
        raise PreconditionError(f"unknown reproduction row '{only}' (choose from {', '.join(ROWS)})",
                                residual_name='only')
    names = [only] if only else list(ROWS)
    rows = []
    for name in names:
        description, check = ROWS[name]
        notes: Notes = []
        try:
            expected, computed, passed = check(tol, notes)
        except Exception as e:  # pylint: disable=broad-except
            expected, computed, passed = '-', f"{type(e).__name__}: {e}", False
        rows.append(ReproductionRow(name, description, expected, computed, bool(passed),
                                    tuple(dict.fromkeys(notes))))
    return rows


def _short(value: Any) -> str:
    if isinstance(value, dict):
        return ", ".join(f"{k}={_short(v)}" for k, v in value.items())
    if isinstance(value, float):
        return f"{value:.3g}"
    return str(value)


def format_table(rows: List[ReproductionRow]) -> str:
    lines = ["=" * 60, "🔍 REPRODUCTION SUITE", "=" * 60]
    for row in rows:
        mark = "✅ PASS" if row.passed else "❌ FAIL"
        lines.append(f"{mark}  {row.name}: {row.description}")
        lines.append(f"        expected: {_short(row.expected)}")
        lines.append(f"        computed: {_short(row.computed)}")
        for note in row.warnings:
            lines.append(f"        ⚠️  {note}")
    passed = sum(r.passed for r in rows)
    lines.append("=" * 60)
    lines.append(f"📊 {passed}/{len(rows)} rows passed")
    flagged = sum(bool(r.warnings) for r in rows)
    if flagged:
        lines.append(f"⚠️  {flagged} rows with borderline notes")
    return "\n".join(lines)
