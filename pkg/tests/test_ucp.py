"""
Test the unital completely positive layer
"""
import numpy as np
import pytest

from src import builders
from src.errors import PreconditionError
from src.multdom import mult_domain
from src.staralg import subspace_equal
from src.ucp import (averaging_intersection_check, counterexample_phi, density_perturbation, density_report,
                     mult_domain_ucp, schwarz_defect, stinespring)
from tests.populations import random_matrix


def test_counterexample_is_unital_not_trace_preserving(tol):
    phi = counterexample_phi(tol)

    assert phi.flags.unital
    assert not phi.flags.tp
    x = np.arange(9.0).reshape(3, 3)
    np.testing.assert_allclose(phi(x), np.diag([0.0, 4.0, 2.0]), atol=1e-12)


def test_counterexample_domain(tol):
    phi = counterexample_phi(tol)
    p = np.diag([1.0, 1.0, 0.0])

    domain = mult_domain_ucp(phi, tol)

    assert domain.contains(p, tol)
    assert domain.contains(np.eye(3), tol)
    assert not domain.contains(np.diag([1.0, 0.0, 0.0]), tol)
    np.testing.assert_allclose(phi(p), np.eye(3), atol=1e-12)


def test_counterexample_rejected_by_channel_analysis(tol):
    with pytest.raises(PreconditionError):
        mult_domain(counterexample_phi(tol), tol)


def test_schwarz_defect_is_positive(tol, rng):
    phi = counterexample_phi(tol)
    for _ in range(5):
        defect = schwarz_defect(phi, random_matrix(rng, 3))
        np.testing.assert_allclose(defect, defect.conj().T, atol=1e-10)
        assert np.linalg.eigvalsh(defect).min() > -1e-10


def test_stinespring_residuals(tol):
    for ch in (counterexample_phi(tol), builders.kappa3_example(tol), builders.random_unital_cp(3, 2, 4, tol)):
        data = stinespring(ch, tol)
        assert data.reconstruction_residual < 1e-9
        np.testing.assert_allclose(data.p_min @ data.p_min, data.p_min, atol=1e-9)
        assert data.min_basis.shape[1] <= ch.n_kraus * ch.dim

    # V* V = Phi(1) for the stacked adjoint Kraus operators
    assert stinespring(counterexample_phi(tol), tol).isometry_residual < 1e-9


@pytest.mark.parametrize("builder", [
    lambda tol: builders.fourier_example(3, tol),
    lambda tol: builders.kappa3_example(tol),
    lambda tol: builders.projective_channel(tol),
    lambda tol: builders.cyclic_shift_channel(3, tol),
    lambda tol: builders.random_unitary_mixture(3, 2, 21, tol),
])
def test_ucp_domain_agrees_with_channel_domain(tol, builder):
    ch = builder(tol)

    assert subspace_equal(mult_domain_ucp(ch, tol), mult_domain(ch, tol), tol)


def test_ucp_domain_needs_unital_map(tol):
    from src.channel import KrausChannel

    with pytest.raises(PreconditionError) as info:
        mult_domain_ucp(KrausChannel.from_kraus([np.diag([1.0, 0.0])], tol), tol)
    assert info.value.residual_name == 'unital'


def test_density_perturbation(tol):
    phi = builders.random_unital_cp(3, 2, 8, tol)

    perturbed = density_perturbation(phi, 4)

    assert perturbed.flags.unital
    assert perturbed.n_kraus == phi.n_kraus + 9
    x = np.arange(9.0).reshape(3, 3)
    np.testing.assert_allclose(perturbed(x), 0.75 * phi(x) + 0.25 * np.trace(x) / 3 * np.eye(3), atol=1e-10)
    # strictly positive: rank-one inputs map to invertibles
    rho = np.zeros((3, 3))
    rho[0, 0] = 1.0
    assert np.linalg.eigvalsh(perturbed(rho)).min() > 0


def test_density_perturbation_rejects_small_n(tol):
    with pytest.raises(PreconditionError):
        density_perturbation(builders.projective_channel(tol), 1)


def test_density_perturbation_on_scalars(tol):
    phi = builders.identity_channel(1, tol)

    perturbed = density_perturbation(phi, 3)

    np.testing.assert_allclose(perturbed(np.ones((1, 1))), np.ones((1, 1)))


def test_density_distance_decreases(tol):
    phi = builders.random_unital_cp(2, 3, 12, tol)

    distances = [density_report(phi, n)['superop_distance'] for n in (2, 4, 8, 16, 32)]

    assert all(b < a for a, b in zip(distances, distances[1:]))
    assert density_report(phi, 8)['cb_bound'] == pytest.approx(0.25)


def test_averaging_intersection(tol):
    x = builders.unitary_channel(builders.PAULI['X'], tol)
    z = builders.unitary_channel(builders.PAULI['Z'], tol)

    report = averaging_intersection_check(x, z, tol)

    assert report['equal']
    assert report['left_dim'] == 2
    assert report['right_dim'] == 2


def test_averaging_intersection_ucp(tol):
    phi = counterexample_phi(tol)
    psi = builders.identity_channel(3, tol)

    report = averaging_intersection_check(phi, psi, tol)

    assert report['equal'], report
