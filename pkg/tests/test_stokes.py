import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matrix_oracle import MatrixModes
from polsqueeze.errors import DomainError
from polsqueeze.fock import apply_poly, basis_state, inner, random_state, vacuum
from polsqueeze.polarization import (
    E1, PoincareVector, PolarizationAngles, basis_change_matrix, jones_from_angles,
    poincare_from_angles, polarized_number_state, rotate_basis,
)
from polsqueeze.stokes import (
    STOKES, component_moments, measure_protocol, perp_bound, so3_from_mode_unitary,
    stokes_means, stokes_second_moments, uncertainty_products,
)

LEVI = {(1, 2): 3, (2, 3): 1, (3, 1): 2}


def n_state(n, theta, phi=0.0):
    return polarized_number_state(n, jones_from_angles(PolarizationAngles(theta, phi)))


def direction_at(m, cos_nm, rng):
    """Unit vector with ``n . m = cos_nm``."""
    m = m.as_array()
    t = rng.standard_normal(3)
    t -= (t @ m) * m
    t /= np.linalg.norm(t)
    return PoincareVector.from_vector(cos_nm * m + math.sqrt(1 - cos_nm**2) * t)


def test_means_examples():
    assert stokes_means(vacuum()) == (0, 0, 0, 0)
    assert stokes_means(basis_state(1, 0)) == pytest.approx((1, 1, 0, 0))
    assert stokes_means(n_state(8, math.pi / 3)) == pytest.approx((8, 4, 4 * math.sqrt(3), 0), abs=1e-12)


@pytest.mark.parametrize("n", [1, 3, 8])
def test_single_mode_variances(n):
    v = stokes_second_moments(basis_state(n, 0)).variances
    assert v == pytest.approx([0, n, n], abs=1e-12)


def test_second_moments_match_dense_oracle():
    rng = np.random.default_rng(21)
    d = MatrixModes(8)
    for _ in range(10):
        s = random_state(rng, 7)
        v = d.vector(s)
        mom = stokes_second_moments(s)
        for j in range(1, 4):
            for k in range(1, 4):
                dense = 0.5 * d.expect(v, d.stokes[j] @ d.stokes[k] + d.stokes[k] @ d.stokes[j]).real
                assert mom.second[j - 1, k - 1] == pytest.approx(dense, abs=1e-12)
        assert mom.mean0_sq == pytest.approx(d.expect(v, d.S0 @ d.S0).real, abs=1e-12)


def test_sum_rule_and_commutators_on_random_states():
    rng = np.random.default_rng(7)
    for _ in range(100):
        s = random_state(rng, int(rng.integers(0, 13)))
        mom = stokes_second_moments(s)
        assert abs(mom.sum_rule_residual()) < 1e-9
        for (j, k), l in LEVI.items():
            comm = STOKES[j] * STOKES[k] - STOKES[k] * STOKES[j]
            lhs = inner(s, apply_poly(s, comm))
            assert abs(lhs - 2j * mom.mean[l - 1]) < 1e-10
        for _, prod, bound in uncertainty_products(mom):
            assert prod >= bound - 1e-8


@pytest.mark.parametrize("cos_nm, variance", [
    (1.0, 0.0), (1 / math.sqrt(2), 4.0), (0.0, 8.0),
])
def test_component_variance_examples(cos_nm, variance):
    s = n_state(8, 1.0, 0.7)
    m = poincare_from_angles(PolarizationAngles(1.0, 0.7))
    n = m if cos_nm == 1.0 else direction_at(m, cos_nm, np.random.default_rng(0))
    mean, var = component_moments(s, n)
    assert mean == pytest.approx(8 * cos_nm, abs=1e-10)
    assert var == pytest.approx(variance, abs=1e-10)


@pytest.mark.parametrize("cos_nm, bound", [
    (0.0, 8.0), (1.0, 0.0), (1 / math.sqrt(2), 8 / math.sqrt(2)),
])
def test_perp_bound_examples(cos_nm, bound):
    s = n_state(8, 1.0, 0.7)
    m = poincare_from_angles(PolarizationAngles(1.0, 0.7))
    n = m if cos_nm == 1.0 else direction_at(m, cos_nm, np.random.default_rng(1))
    assert perp_bound(s, n) == pytest.approx(bound, abs=1e-10)


def test_non_unit_direction_rejected():
    with pytest.raises(DomainError):
        component_moments(vacuum(), [1.0, 1e-4, 0.0])
    with pytest.raises(DomainError):
        perp_bound(vacuum(), [0.0, 0.0, 2.0])


def test_number_state_closed_forms_1000_draws():
    rng = np.random.default_rng(2024)
    cache = {}
    for _ in range(1000):
        n = int(rng.integers(0, 13))
        theta, phi = float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi))
        key = (n, round(theta, 1), round(phi, 1))
        if key not in cache:
            angles = PolarizationAngles(theta, phi)
            cache[key] = (stokes_second_moments(n_state(n, theta, phi)), poincare_from_angles(angles))
        mom, m = cache[key]
        d = PoincareVector.from_vector(rng.standard_normal(3))
        mean, var = mom.component(d)
        nm = d.dot(m)
        assert mean == pytest.approx(n * nm, abs=1e-10)
        assert var == pytest.approx(n * (1 - nm**2), abs=1e-10)


@pytest.mark.parametrize("seed", range(8))
def test_rotation_covariance(seed):
    rng = np.random.default_rng(seed)
    s = random_state(rng, 6)
    angles0 = PolarizationAngles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
    r = so3_from_mode_unitary(basis_change_matrix(angles0))
    assert r @ poincare_from_angles(angles0).as_array() == pytest.approx(E1.as_array(), abs=1e-12)
    before, after = np.array(stokes_means(s)), np.array(stokes_means(rotate_basis(s, angles0)))
    assert after[0] == pytest.approx(before[0], abs=1e-10)
    assert after[1:] == pytest.approx(r @ before[1:], abs=1e-10)


def test_protocol_examples():
    res = measure_protocol(basis_state(5, 0), PolarizationAngles(0, 0))
    assert res.distribution == {5: pytest.approx(1.0)}
    res = measure_protocol(n_state(1, math.pi / 2), PolarizationAngles(math.pi / 2, 0))
    assert res.distribution[1] == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(theta0=st.floats(0, math.pi), phi0=st.floats(0, 2 * math.pi))
def test_protocol_matches_component_moments_for_n8(theta0, phi0):
    s = n_state(8, 1.1, 0.3)
    angles0 = PolarizationAngles(theta0, phi0)
    res = measure_protocol(s, angles0)
    mean, var = component_moments(s, poincare_from_angles(angles0))
    assert res.mean == pytest.approx(mean, abs=1e-10)
    assert res.variance == pytest.approx(var, abs=1e-10)
    assert sum(res.distribution.values()) == pytest.approx(1.0, abs=1e-12)
