"""
Peripheral spectrum, irreducibility and primitivity over seeded populations
"""
import numpy as np
import pytest

from src.channel import adjoint, compose
from src.multdom import stabilizing_algebra
from src.spectral import (adjoint_composition_primitivity, commutator_residual, cyclic_group_check,
                          is_irreducible, one_plus_e_primitivity, peripheral_eigenpairs,
                          strict_positivity_test)
from tests.populations import irreducibility_population, unital_population


@pytest.fixture(scope='module')
def population():
    return irreducibility_population()


def test_adjoint_composition_has_only_eigenvalue_one_on_the_circle(tol):
    for i, ch in enumerate(unital_population(20, seed=11)):
        pd = peripheral_eigenpairs(compose(adjoint(ch), ch), tol)

        values = [mu for mu, _ in pd.distinct(tol.cluster_eps)]
        assert len(values) == 1, i
        assert abs(values[0] - 1) < tol.cluster_eps, i


def test_adjoint_composition_primitivity(population, tol):
    for i, ch in enumerate(population):
        report = adjoint_composition_primitivity(ch, tol)

        if report['composed_irreducible']:
            assert report['primitive'], i


def test_one_plus_e_matches_irreducibility(population, tol):
    verdicts = [one_plus_e_primitivity(ch, tol) for ch in population]

    assert all(irr == prim for irr, prim in verdicts)
    assert {irr for irr, _ in verdicts} == {True, False}


def test_irreducible_channels_have_cyclic_peripheral_group(population, tol):
    checked = 0
    for i, ch in enumerate(population):
        if not is_irreducible(ch, tol):
            continue
        checked += 1
        report = cyclic_group_check(peripheral_eigenpairs(ch, tol), tol)

        assert report['passed'], (i, report)
        assert commutator_residual(stabilizing_algebra(ch, tol)) <= tol.residual_eps, i
    assert checked >= 5


def test_reducible_channels_fix_a_projection(population, tol):
    for i, ch in enumerate(population):
        verdict = is_irreducible(ch, tol)
        if verdict:
            continue
        p = verdict.witness

        np.testing.assert_allclose(p @ p, p, atol=1e-8, err_msg=str(i))
        np.testing.assert_allclose(ch(p), p, atol=1e-8, err_msg=str(i))
        assert 0 < np.trace(p).real < ch.dim - 0.5, i


def test_irreducible_channels_improve_positivity(population, tol):
    for i, ch in enumerate(population):
        if is_irreducible(ch, tol):
            assert strict_positivity_test(ch, tol), i
