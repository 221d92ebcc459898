import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polsqueeze.criteria import (
    chirkin, factor_from_moments, full_report, general, general_factor, heersink, luis,
    maximizing_perp, stringency_chain,
)
from polsqueeze.errors import DomainError
from polsqueeze.fock import basis_state, random_state, vacuum
from polsqueeze.polarization import (
    AXES, E1, E2, PoincareVector, PolarizationAngles, coherent_state, jones_from_angles,
    poincare_from_angles, polarized_number_state,
)
from polsqueeze.stokes import stokes_second_moments

ANGLES = PolarizationAngles(1.0, 0.7)
M = poincare_from_angles(ANGLES)
N8 = polarized_number_state(8, jones_from_angles(ANGLES))


def tilted(cos_nm, seed=0):
    """``(n, n_perp_in_plane)`` with ``n . m = cos_nm``."""
    m = M.as_array()
    t = np.random.default_rng(seed).standard_normal(3)
    t -= (t @ m) * m
    t /= np.linalg.norm(t)
    sn = math.sqrt(1 - cos_nm**2)
    n = cos_nm * m + sn * t
    perp = sn * m - cos_nm * t
    return PoincareVector.from_vector(n), PoincareVector.from_vector(perp), t


@pytest.fixture(scope="module")
def coherent11():
    return stokes_second_moments(coherent_state(1, 1))


def test_chirkin_coherent_is_equality(coherent11):
    v = chirkin(coherent11, 1)
    assert v.lhs == pytest.approx(2.0, abs=1e-8)
    assert v.rhs == pytest.approx(2.0, abs=1e-8)
    assert not v.satisfied


def test_chirkin_single_mode():
    assert chirkin(basis_state(5, 0), 1).satisfied
    assert not chirkin(basis_state(5, 0), 2).satisfied


def test_chirkin_rejects_bad_index():
    with pytest.raises(DomainError):
        chirkin(vacuum(), 4)


def test_heersink_examples():
    a, b = heersink(basis_state(5, 0), 2)
    assert {a.inputs["l"], b.inputs["l"]} == {1, 3}
    via_s1 = a if a.inputs["l"] == 1 else b
    assert via_s1.lhs == pytest.approx(5) and via_s1.rhs == pytest.approx(5)
    assert not via_s1.satisfied
    assert not any(v.satisfied for j in (1, 2, 3) for v in heersink(vacuum(), j))


def test_luis_examples():
    v = luis(N8, M, tilted(0.0)[2])
    assert v.rhs == pytest.approx(0.0, abs=1e-12) and not v.satisfied
    n, perp, t = tilted(1 / math.sqrt(2))
    v = luis(N8, n, perp)
    assert v.rhs == pytest.approx(8 / math.sqrt(2), abs=1e-10)
    assert v.lhs == pytest.approx(4.0, abs=1e-10)
    assert v.satisfied
    ortho = PoincareVector.from_vector(np.cross(n.as_array(), perp.as_array()))
    v = luis(N8, n, ortho)
    assert v.rhs == pytest.approx(0.0, abs=1e-10) and not v.satisfied
    with pytest.raises(DomainError):
        luis(N8, n, n)


def test_general_factor_examples():
    n, _, t = tilted(1 / math.sqrt(2))
    f = general_factor(N8, n)
    assert f.factor == pytest.approx(1 / math.sqrt(2), abs=1e-10)
    assert f.squeezed
    assert f.degree == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-10)
    f = general_factor(N8, PoincareVector.from_vector(t))
    assert f.factor == pytest.approx(1.0, abs=1e-10) and not f.squeezed
    f = general_factor(N8, M)
    assert f.variance == pytest.approx(0.0, abs=1e-10)
    assert f.bound == 0.0
    assert f.undefined and not f.squeezed and math.isnan(f.factor)
    assert not general(N8, M).satisfied


def test_zero_bound_with_variance_is_infinite():
    # |1,0>: along e1 the perpendicular mean is zero, but the variance is not
    mom = stokes_second_moments(basis_state(1, 0))
    f = factor_from_moments(mom, E2)
    assert f.factor == pytest.approx(1.0)
    f = factor_from_moments(stokes_second_moments(random_state(np.random.default_rng(4), 0)), E1)
    assert f.undefined
    f = factor_from_moments(stokes_second_moments(coherent_state(0.0, 1.0)), E1)
    assert f.is_infinite and not f.squeezed


def test_stringency_examples():
    n, perp, _ = tilted(1 / math.sqrt(2))
    chain = stringency_chain(N8, n, perp)
    assert [v for _, v in chain.entries] == pytest.approx([4.0, 8 / math.sqrt(2), 8.0], abs=1e-10)
    assert chain.ordered is True
    chain = stringency_chain(vacuum(), E1, E2)
    assert chain.degenerate
    assert [v for _, v in chain.entries][1:] == [0.0, 0.0]
    chain = stringency_chain(coherent_state(2, 0), E2, E1)
    assert [v for _, v in chain.entries] == pytest.approx([4.0, 4.0, 4.0], abs=1e-8)


def test_full_report_n8_all_squeezed():
    rng = np.random.default_rng(99)
    dirs = []
    while len(dirs) < 1000:
        d = PoincareVector.from_vector(rng.standard_normal(3))
        if 0.05 < abs(d.dot(M)) < 0.95:
            dirs.append(d)
    rep = full_report(N8, dirs)
    assert rep.n_squeezed == 1000 and rep.squeezed_fraction == 1.0
    for r in rep.rows:
        assert r.factor.factor == pytest.approx(math.sqrt(1 - r.factor.direction.dot(M) ** 2), abs=1e-10)


def test_full_report_vacuum_and_coherent():
    rng = np.random.default_rng(5)
    dirs = [PoincareVector.from_vector(rng.standard_normal(3)) for _ in range(20)]
    rep = full_report(vacuum(), dirs)
    assert rep.is_vacuum and rep.n_squeezed == 0
    rep = full_report(coherent_state(1, 1), list(AXES))
    assert not any(v.satisfied for v in rep.axis_chirkin.values())


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_factor_invariant_under_direction_flip(seed):
    rng = np.random.default_rng(seed)
    mom = stokes_second_moments(random_state(rng, 4))
    n = PoincareVector.from_vector(rng.standard_normal(3))
    a, b = factor_from_moments(mom, n), factor_from_moments(mom, -n)
    assert a.variance == pytest.approx(b.variance, abs=1e-12)
    assert a.bound == pytest.approx(b.bound, abs=1e-12)
    if math.isfinite(a.factor):
        assert a.factor == pytest.approx(b.factor, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_implication_chain(seed):
    """Luis with the maximizing perpendicular is the general criterion; it implies
    the weaker Chirkin-style bound whenever the chain is ordered."""
    rng = np.random.default_rng(seed)
    n_ph = int(rng.integers(1, 9))
    s = polarized_number_state(n_ph, jones_from_angles(
        PolarizationAngles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))))
    mom = stokes_second_moments(s)
    n = PoincareVector.from_vector(rng.standard_normal(3))
    perp = maximizing_perp(mom, n)
    if perp is None:
        return
    g = general(mom, n)
    lv = luis(mom, n, perp)
    assert lv.rhs == pytest.approx(g.rhs, abs=1e-10)
    chain = stringency_chain(mom, n, perp)
    vals = [v for _, v in chain.entries]
    assert chain.ordered
    if g.satisfied:
        assert lv.satisfied
        assert g.lhs < vals[2]
    if g.lhs < vals[0]:
        assert g.satisfied
