import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from jacobinv import (
    FIXTURES,
    InvalidSystem,
    JacobiMatrix,
    MassSpringSystem,
    NotRealizable,
    jacobi_to_system,
    perturbation_from,
    perturbation_to_physical,
    system_to_jacobi,
)

J_A = FIXTURES["A"].J


def test_unit_chain_gives_fixture_matrix():
    assert system_to_jacobi(MassSpringSystem([1, 1], [1, 1, 1])) == J_A
    assert system_to_jacobi(MassSpringSystem([2, 2], [2, 2, 2])) == J_A


def test_free_right_end():
    assert system_to_jacobi(MassSpringSystem([1], [1, 0])) == JacobiMatrix([1.0], [])


def test_inverse_conversion():
    assert jacobi_to_system(J_A, 1.0) == MassSpringSystem([1, 1], [1, 1, 1])
    assert jacobi_to_system(JacobiMatrix([1.0], []), 1.0) == MassSpringSystem([1], [1, 0])


def test_unrealizable_left_spring():
    with pytest.raises(NotRealizable) as err:
        jacobi_to_system(J_A, 3.0)
    assert err.value.index == 1


def test_free_left_end():
    S = jacobi_to_system(J_A, 0.0)
    assert S.gammas[0] == 0.0
    np.testing.assert_allclose(system_to_jacobi(S).a, J_A.a)


@pytest.mark.parametrize(
    "masses, gammas",
    [([1, -1], [1, 1, 1]), ([1, 1], [1, 0, 1]), ([1, 1], [1, 1]), ([1], [0, 0]), ([1], [-1, 2])],
)
def test_invalid_systems(masses, gammas):
    with pytest.raises(InvalidSystem):
        system_to_jacobi(MassSpringSystem(masses, gammas))


@pytest.mark.parametrize(
    "theta_sq, K, mass, gamma",
    [(0.5, 0.0, 2.0, 0.0), (0.5, -1.0, 2.0, -1.0), (0.25, 1.0, 4.0, 3.0)],
)
def test_physical_perturbation(theta_sq, K, mass, gamma):
    p = perturbation_from(theta_sq, K, 0)
    m_t, g = perturbation_to_physical(p, 1.0)
    assert m_t == pytest.approx(mass)
    assert g == pytest.approx(gamma, abs=1e-15)
    assert K * (m_t - 1.0) == pytest.approx(g, abs=1e-12)


@st.composite
def chains(draw):
    N = draw(st.integers(1, 10))
    m = draw(st.lists(st.floats(0.1, 10.0), min_size=N, max_size=N))
    g = draw(st.lists(st.floats(0.1, 10.0), min_size=N + 1, max_size=N + 1))
    return MassSpringSystem(m, g)


@given(chains())
def test_matrix_matches_stiffness_oracle(S):
    J = system_to_jacobi(S)
    a, b = oracles.stiffness_to_jacobi(S.masses, S.gammas)
    np.testing.assert_allclose(J.a, a, rtol=1e-13)
    np.testing.assert_allclose(J.b, b, rtol=1e-13)


@given(chains())
def test_round_trip_recovers_normalized_chain(S):
    back = jacobi_to_system(system_to_jacobi(S), S.gammas[0] / S.masses[0])
    np.testing.assert_allclose(back.masses, np.array(S.masses) / S.masses[0], rtol=1e-10)
    np.testing.assert_allclose(back.gammas, np.array(S.gammas) / S.masses[0], rtol=1e-10, atol=1e-10)
