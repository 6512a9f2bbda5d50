"""
Test the code structures read off the multiplicative algebras
"""
import dataclasses

import numpy as np
import pytest

from src import builders, qec
from src.channel import KrausChannel, adjoint
from src.errors import ConsistencyError, PreconditionError, ShapeError
from src.qec import NS, UCC, UNS, noiseless_algebra, ns_codes, ucc_codes, ucs_vs_uns, uns_codes, \
    unital_recovery_check
from src.staralg import subspace_equal
from src.ucp import counterexample_phi


def _protected_qubit(tol):
    """Depolarize the second qubit of two, leave the first alone."""
    paulis = [builders.PAULI[name] for name in 'IXYZ']
    return KrausChannel.from_kraus([np.kron(np.eye(2), p) / 2 for p in paulis], tol)


def test_projective_codes(tol):
    ch = builders.projective_channel(tol)

    ucc = ucc_codes(ch, tol)

    assert ucc.kind == UCC
    assert sorted(ucc.structure.blocks) == [(1, 1), (1, 1)]
    assert ucc.nontrivial_codes == []
    assert ucc.to_dict()['nontrivial'] == 0
    assert 'verified' not in ucc.to_dict()


def test_protected_qubit_codes(tol):
    ch = _protected_qubit(tol)

    for structure in (ucc_codes(ch, tol), uns_codes(ch, tol), ns_codes(ch, tol)):
        assert structure.structure.blocks == ((2, 2),)
        (code,) = structure.nontrivial_codes
        assert (code.protected_dim, code.gauge_dim) == (2, 2)
        assert code.isometry.shape == (4, 4)
        np.testing.assert_allclose(code.isometry.conj().T @ code.isometry, np.eye(4), atol=1e-10)
        assert code.to_dict() == {'block': 0, 'n': 2, 'm': 2, 'nontrivial': True}


def test_protected_qubit_logical_operators_survive(tol):
    ch = _protected_qubit(tol)
    logical = np.kron(builders.PAULI['X'], np.eye(2))

    np.testing.assert_allclose(ch(logical), logical, atol=1e-12)


def test_kappa3_codes(tol):
    ch = builders.kappa3_example(tol)

    ucc = ucc_codes(ch, tol)
    uns = uns_codes(ch, tol)
    ns = ns_codes(ch, tol)

    assert ucc.algebra.dimension == 3
    assert sorted(ucc.structure.blocks) == [(1, 1)] * 3
    assert uns.kind == UNS
    assert uns.algebra.dimension == 1
    assert uns.structure.blocks == ((1, 3),)
    assert uns.verified is True
    assert uns.to_dict()['verified'] is True
    assert ns.kind == NS
    assert ns.algebra.dimension == 1


def test_noiseless_algebra_matches_stabilizing_algebra(tol):
    for ch in (builders.kappa3_example(tol), builders.fourier_example(3, tol),
               builders.cyclic_shift_channel(3, tol)):
        assert subspace_equal(noiseless_algebra(ch, tol), uns_codes(ch, tol).algebra, tol)


def test_codes_need_unital_tp(tol):
    phi = counterexample_phi(tol)
    for make in (ucc_codes, uns_codes, ns_codes):
        with pytest.raises(PreconditionError):
            make(phi, tol)


def test_ucs_vs_uns_kappa_one(tol):
    verdict = ucs_vs_uns(builders.pauli_channel([0.5, 0.0, 0.0, 0.5], tol), tol)

    assert verdict['kappa'] == 1
    assert verdict['equal']
    assert verdict['witness'] is None
    assert verdict['ucc_dim'] == verdict['uns_dim'] == 2


def test_ucs_vs_uns_kappa3_witness(tol):
    verdict = ucs_vs_uns(builders.kappa3_example(tol), tol)

    assert verdict['kappa'] == 3
    assert not verdict['equal']
    assert verdict['uns_in_ucc']
    assert verdict['witness_in_ucc']
    assert verdict['witness_idempotent']
    assert verdict['witness_residual'] == pytest.approx(np.sqrt(0.5))
    candidates = sorted(int(np.argmax(np.diag(p).real)) for p in verdict['candidates'])
    assert candidates == [1, 2]


def test_ucs_vs_uns_rejects_chain_without_witness(tol, monkeypatch):
    ch = builders.kappa3_example(tol)
    real = qec.mult_chain(ch, tol=tol)
    flat = dataclasses.replace(real, chain=(real.chain[0],) * len(real.chain))
    monkeypatch.setattr(qec, 'mult_chain', lambda *_, **__: flat)

    with pytest.raises(ConsistencyError) as info:
        ucs_vs_uns(ch, tol)
    assert info.value.diagnostics['kappa'] == 3
    assert info.value.diagnostics['max_residual'] <= tol.residual_eps

def test_ucs_vs_uns_fourier(tol):
    verdict = ucs_vs_uns(builders.fourier_example(3, tol), tol)

    assert verdict['kappa'] == 2
    assert (verdict['ucc_dim'], verdict['uns_dim']) == (3, 1)
    assert len(verdict['candidates']) == 3


def test_unital_recovery_check_with_adjoint(tol):
    ch = builders.kappa3_example(tol)

    report = unital_recovery_check(ch, adjoint(ch), tol)

    assert report['recovery_is_adjoint']
    assert report['contained']
    assert report['equal']
    assert report['fixed_dim'] == report['domain_dim'] == 3


def test_unital_recovery_check_other_recovery(tol):
    ch = builders.fourier_example(3, tol)

    report = unital_recovery_check(ch, builders.identity_channel(3, tol), tol)

    assert not report['recovery_is_adjoint']
    assert 'equal' not in report
    assert report['contained']
    assert report['fixed_dim'] == 1


def test_unital_recovery_check_dimension_mismatch(tol):
    with pytest.raises(ShapeError):
        unital_recovery_check(builders.projective_channel(tol), builders.identity_channel(3, tol), tol)
