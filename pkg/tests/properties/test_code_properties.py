"""
Code structures, recoveries and density perturbations over seeded populations
"""
import numpy as np
import pytest

from src import builders
from src.channel import adjoint
from src.qec import ucc_codes, ucs_vs_uns, uns_codes, unital_recovery_check
from src.staralg import is_contained
from src.ucp import density_perturbation, density_report
from tests.populations import unital_population


def _recovery(ch, j, tol):
    if j % 2 == 0:
        return adjoint(ch)
    if j % 4 == 1:
        return builders.depolarizing_channel(ch.dim, 0.5, tol)
    return builders.random_unitary_mixture(ch.dim, 2, 300 + j, tol)


def test_recovery_fixed_points_lie_in_domain(tol):
    for j, ch in enumerate(unital_population(20, seed=13)):
        report = unital_recovery_check(ch, _recovery(ch, j, tol), tol)

        assert report['contained'], (j, report)
        if j % 2 == 0:
            assert report['recovery_is_adjoint']
            assert report['equal'], (j, report)


def test_noiseless_codes_are_correctable(tol):
    for j, ch in enumerate(unital_population(20, seed=17)):
        ucc, uns = ucc_codes(ch, tol), uns_codes(ch, tol)

        assert is_contained(uns.algebra, ucc.algebra, tol), j
        assert uns.verified, j
        verdict = ucs_vs_uns(ch, tol)
        assert verdict['equal'] == (ucc.algebra.dimension == uns.algebra.dimension), j


@pytest.mark.parametrize("n", [2, 8, 32])
def test_density_perturbation_is_strictly_positive(tol, n):
    for seed in range(10):
        d = 2 + seed % 3
        phi = builders.random_unital_cp(d, 2 + seed % 2, 500 + seed, tol)
        perturbed = density_perturbation(phi, n)
        v = np.zeros(d)
        v[seed % d] = 1.0

        assert perturbed.flags.unital, seed
        floor = np.linalg.eigvalsh(perturbed(np.outer(v, v))).min()
        assert floor >= 1 / (n * d) - 1e-12, seed


def test_density_distance_scales_with_n(tol):
    for seed in range(10):
        phi = builders.random_unital_cp(3, 2, 700 + seed, tol)

        scaled = [n * density_report(phi, n)['superop_distance'] for n in (2, 8, 32)]

        np.testing.assert_allclose(scaled, scaled[0], rtol=1e-9)
