"""
Test peripheral spectra, irreducibility and primitivity
"""
import numpy as np
import pytest

from src import builders
from src.errors import PreconditionError
from src.linalg import full_subspace, orthonormalize
from src.spectral import (adjoint_composition_primitivity, boundary_checks, commutator_residual,
                          compose_primitivity, cyclic_group_check, is_irreducible, is_irreducible_operator,
                          is_primitive, one_plus_e_primitivity, peripheral_eigenpairs,
                          projection_unitary_obstruction, spectral_radius, strict_positivity_test)


def test_shift_peripheral_group(tol):
    ch = builders.cyclic_shift_channel(3, tol)

    pd = peripheral_eigenpairs(ch, tol)

    assert pd.group_order == 3
    assert len(pd.eigenvalues) == 3
    assert pd.max_residual < 1e-9
    roots = np.exp(2j * np.pi * np.arange(3) / 3)
    for lam in pd.eigenvalues:
        assert np.min(np.abs(roots - lam)) < 1e-8
    # eigen-operators are multiples of clock powers
    for u in pd.eigenvectors:
        np.testing.assert_allclose(u.conj().T @ u, np.eye(3) / 3, atol=1e-9)

    check = cyclic_group_check(pd, tol)
    assert check['order'] == 3
    assert check['cyclic']
    assert check['passed']
    assert [k for _, k in pd.distinct(tol.cluster_eps)] == [1, 1, 1]


def test_peripheral_to_dict(tol):
    data = peripheral_eigenpairs(builders.cyclic_shift_channel(2, tol), tol).to_dict(tol.cluster_eps)

    assert data['group_order'] == 2
    assert [e['multiplicity'] for e in data['eigenvalues']] == [1, 1]
    assert data['eigenvalues'][0]['value'] == pytest.approx([1.0, 0.0])


@pytest.mark.parametrize("builder", [
    lambda tol: builders.depolarizing_channel(2, 0.3, tol),
    lambda tol: builders.depolarizing_channel(4, 0.9, tol),
    lambda tol: builders.fourier_example(3, tol),
    lambda tol: builders.pauli_channel([0.4, 0.3, 0.2, 0.1], tol),
])
def test_primitive_channels(tol, builder):
    ch = builder(tol)

    assert is_irreducible(ch, tol)
    assert is_primitive(ch, tol)


def test_projective_channel_is_reducible(tol):
    ch = builders.projective_channel(tol)

    verdict = is_irreducible(ch, tol)

    assert not verdict
    assert verdict.fixed_dim == 2
    p = verdict.witness
    np.testing.assert_allclose(p @ p, p, atol=1e-10)
    np.testing.assert_allclose(ch(p), p, atol=1e-10)
    assert np.trace(p).real == pytest.approx(1.0)
    assert not is_primitive(ch, tol)


def test_shift_is_irreducible_not_primitive(tol):
    ch = builders.cyclic_shift_channel(3, tol)

    assert is_irreducible(ch, tol).fixed_dim == 1
    assert not is_primitive(ch, tol)


def test_x_conjugation_peripheral_data(tol):
    pd = peripheral_eigenpairs(builders.unitary_channel(builders.PAULI['X'], tol), tol)

    assert pd.group_order == 2
    assert sorted(k for _, k in pd.distinct(tol.cluster_eps)) == [2, 2]
    with pytest.raises(PreconditionError):
        cyclic_group_check(pd, tol)


def test_compose_primitivity(tol):
    depolarizing = builders.depolarizing_channel(2, 0.5, tol)
    dephasing = builders.pauli_channel([0.7, 0.0, 0.0, 0.3], tol)

    verdicts = compose_primitivity(depolarizing, dephasing, tol)

    assert verdicts == {'phi': True, 'psi': False, 'composition': True}


def test_compose_primitivity_needs_commuting_channels(tol):
    hadamard = builders.unitary_channel(builders.PAULI['H'], tol)
    flip = builders.pauli_channel([0.6, 0.4, 0.0, 0.0], tol)

    with pytest.raises(PreconditionError):
        compose_primitivity(hadamard, flip, tol)


def test_one_plus_e_primitivity(tol):
    assert one_plus_e_primitivity(builders.cyclic_shift_channel(3, tol), tol) == (True, True)
    assert one_plus_e_primitivity(builders.projective_channel(tol), tol) == (False, False)
    assert one_plus_e_primitivity(builders.fourier_example(3, tol), tol) == (True, True)


def test_projection_unitary_obstruction(tol):
    report = projection_unitary_obstruction(builders.cyclic_shift_channel(3, tol), tol)

    assert not report['composed_irreducible']
    assert report['rank'] == 1
    assert report['projection_residual'] < 1e-9
    assert report['conjugation_residual'] < 1e-9
    u = report['unitary']
    np.testing.assert_allclose(u.conj().T @ u, np.eye(3), atol=1e-9)


def test_obstruction_witness_for_kappa3(tol):
    report = projection_unitary_obstruction(builders.kappa3_example(tol), tol)

    np.testing.assert_allclose(report['witness'], np.diag([0, 0, 1]), atol=1e-9)
    expected = 0.5 * np.array([[1, 1, 0], [1, 1, 0], [0, 0, 0]])
    np.testing.assert_allclose(report['image'], expected, atol=1e-9)
    assert report['rank'] == 1
    assert report['image_residual'] == pytest.approx(np.sqrt(0.5))
    assert report['conjugation_residual'] < 1e-9


def test_obstruction_witness_for_fourier(tol):
    report = projection_unitary_obstruction(builders.fourier_example(3, tol), tol)

    np.testing.assert_allclose(report['witness'], np.diag([1, 0, 0]), atol=1e-9)
    assert report['rank'] == 1
    assert np.linalg.matrix_rank(report['image'], tol=1e-9) == 1
    assert report['projection_residual'] < 1e-9
    np.testing.assert_allclose(report['image'], np.full((3, 3), 1 / 3), atol=1e-9)


def test_projection_unitary_obstruction_trivial_domain(tol):
    report = projection_unitary_obstruction(builders.depolarizing_channel(2, 0.5, tol), tol)

    assert report == {'composed_irreducible': True, 'witness': None}


def test_projection_unitary_obstruction_candidate(tol):
    ch = builders.projective_channel(tol)

    report = projection_unitary_obstruction(ch, tol, candidate=np.diag([0.0, 1.0]))
    assert report['conjugation_residual'] < 1e-9

    with pytest.raises(PreconditionError):
        projection_unitary_obstruction(ch, tol, candidate=0.5 * np.ones((2, 2)))


def test_is_irreducible_operator(tol):
    jordan = np.diag(np.ones(2), k=1)

    assert is_irreducible_operator(jordan, tol)
    assert not is_irreducible_operator(np.diag([1.0, 2.0, 3.0]), tol)
    assert not is_irreducible_operator(builders.shift_matrix(3), tol)


def test_boundary_checks_identity(tol):
    report = boundary_checks(builders.identity_channel(2, tol), tol)

    assert report['fixed_point']['status'] == 'verified'
    assert report['peripheral_span']['status'] == 'verified'
    assert report['automorphism']['status'] == 'verified'


def test_boundary_checks_unitary(tol):
    report = boundary_checks(builders.unitary_channel(builders.haar_unitary(3, 17), tol), tol)

    assert report['fixed_point']['status'] == 'not applicable'
    assert report['automorphism']['status'] == 'verified'


def test_boundary_checks_depolarizing(tol):
    report = boundary_checks(builders.depolarizing_channel(2, 0.5, tol), tol)

    assert report['fixed_point']['hypothesis'] is False
    assert report['automorphism']['hypothesis'] is False


def test_boundary_checks_needs_unital_map(tol):
    from src.channel import KrausChannel

    with pytest.raises(PreconditionError):
        boundary_checks(KrausChannel.from_kraus([np.diag([1.0, 0.0])], tol), tol)


def test_strict_positivity(tol, rng):
    assert strict_positivity_test(builders.depolarizing_channel(3, 0.5, tol), tol, rng)
    assert strict_positivity_test(builders.cyclic_shift_channel(3, tol), tol, rng)
    assert not strict_positivity_test(builders.projective_channel(tol), tol, rng)


def test_adjoint_composition_primitivity(tol):
    depolarizing = adjoint_composition_primitivity(builders.depolarizing_channel(2, 0.5, tol), tol)
    shift = adjoint_composition_primitivity(builders.cyclic_shift_channel(3, tol), tol)

    assert depolarizing == {'composed_irreducible': True, 'primitive': True, 'normal': True,
                            'composed_primitive': True}
    assert not shift['composed_irreducible']
    assert not shift['primitive']
    assert shift['composed_primitive'] is None


def test_commutator_residual(tol):
    diag = orthonormalize([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])], tol)

    assert commutator_residual(diag) < 1e-12
    assert commutator_residual(full_subspace(2)) > 0.5


@pytest.mark.parametrize("builder", [
    lambda tol: builders.fourier_example(3, tol),
    lambda tol: builders.kappa3_example(tol),
    lambda tol: builders.random_unitary_mixture(4, 3, 2, tol),
])
def test_spectral_radius_of_channels(tol, builder):
    assert spectral_radius(builder(tol)) == pytest.approx(1.0)
