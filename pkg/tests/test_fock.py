import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polsqueeze.errors import CutoffTooSmall, DegenerateState, DomainError
from polsqueeze.fock import (
    AX, AXD, AY, AYD,
    OperatorPolynomial, OperatorWord, TwoModeFockState,
    apply_poly, apply_word, basis_state, expectation, expectation_poly,
    inner, make_state, random_state, truncate, vacuum,
)

LADDERS = (AX, AY, AXD, AYD)


def test_make_state_vacuum():
    s = make_state([((0, 0), 1)])
    assert s.amplitudes == {(0, 0): 1}
    assert s.norm() == pytest.approx(1.0, abs=1e-12)


def test_make_state_345():
    s = make_state([((1, 0), 3), ((0, 1), 4)])
    assert s[(1, 0)] == pytest.approx(0.6, abs=1e-15)
    assert s[(0, 1)] == pytest.approx(0.8, abs=1e-15)


def test_make_state_symmetric_pair():
    s = make_state([((2, 0), 1), ((0, 2), -1)])
    assert s[(2, 0)] == pytest.approx(1 / math.sqrt(2))
    assert s[(0, 2)] == pytest.approx(-1 / math.sqrt(2))
    assert s.cutoff == 2


def test_make_state_errors():
    with pytest.raises(DegenerateState):
        make_state([((0, 0), 0), ((1, 0), 0)])
    with pytest.raises(DegenerateState):
        make_state([])
    with pytest.raises(DomainError):
        make_state([((-1, 0), 1)])


def test_repeated_kets_are_summed():
    s = make_state([((1, 0), 1), ((1, 0), 1), ((0, 1), 2)])
    assert s[(1, 0)] == pytest.approx(s[(0, 1)])


def test_prune_threshold():
    s = TwoModeFockState({(0, 0): 1.0, (1, 0): 1e-17})
    assert (1, 0) not in s.amplitudes


@pytest.mark.parametrize("ket, word, expected", [
    ((1, 0), OperatorWord(AX), {(0, 0): 1.0}),
    ((0, 2), OperatorWord(AYD), {(0, 3): math.sqrt(3)}),
    ((1, 1), OperatorWord(AXD, AY), {(2, 0): math.sqrt(2)}),
])
def test_apply_word_examples(ket, word, expected):
    out = apply_word(basis_state(*ket), word)
    assert set(out.amplitudes) == set(expected)
    for k, v in expected.items():
        assert out[k] == pytest.approx(v, abs=1e-15)


def test_annihilating_vacuum_gives_zero_vector():
    out = apply_word(vacuum(), OperatorWord(AX))
    assert out.is_zero
    assert out.norm() == 0.0
    with pytest.raises(DegenerateState):
        out.normalized()


def test_cutoff_grows_with_creation_count():
    out = apply_word(basis_state(2, 1), OperatorWord(AXD, AYD, AX))
    assert out.cutoff == 5
    assert out.total_photon_numbers() == {4}


def test_inner_examples():
    assert inner(vacuum(), vacuum()) == pytest.approx(1.0)
    assert inner(basis_state(1, 0), basis_state(0, 1)) == 0
    sup = make_state([((1, 0), 1), ((0, 1), 1)])
    assert inner(sup, basis_state(1, 0)) == pytest.approx(1 / math.sqrt(2))


def test_inner_is_conjugate_linear_in_first_argument():
    a = make_state([((1, 0), 1), ((0, 1), 1j)])
    b = basis_state(0, 1)
    assert inner(a, b) == pytest.approx(-1j / math.sqrt(2))
    assert inner(b, a) == pytest.approx(1j / math.sqrt(2))


def test_expectation_examples():
    assert expectation(basis_state(2, 3), OperatorWord(AXD, AX)) == pytest.approx(2)
    sup = make_state([((1, 0), 1), ((0, 1), 1)])
    assert expectation(sup, OperatorWord(AXD, AY)) == pytest.approx(0.5, abs=1e-15)
    rng = np.random.default_rng(3)
    fixed_n = make_state(((k, 5 - k), complex(*rng.standard_normal(2))) for k in range(6))
    assert expectation(fixed_n, OperatorWord(AXD, AYD)) == 0


def test_truncate_examples():
    s, tail = truncate(vacuum(), 0, 1e-12)
    assert tail == 0 and s[(0, 0)] == pytest.approx(1)
    with pytest.raises(CutoffTooSmall) as err:
        truncate(make_state([((1, 0), 0.6), ((5, 5), 0.8)]), 4, 1e-12)
    assert err.value.tail_norm == pytest.approx(0.64)
    tiny = math.sqrt(1e-15)
    s, tail = truncate(make_state([((1, 0), math.sqrt(1 - 1e-15)), ((9, 0), tiny)]), 4, 1e-12)
    assert tail == pytest.approx(1e-15, rel=1e-6)
    assert s.norm() == pytest.approx(1.0, abs=1e-15)
    assert s.cutoff == 4 and (9, 0) not in s.amplitudes


def test_random_state_covers_cutoff():
    s = random_state(np.random.default_rng(0), 4)
    assert len(s) == 15 and s.cutoff == 4
    assert s.norm() == pytest.approx(1.0, abs=1e-12)


def test_number_expectation_real_on_random_states():
    rng = np.random.default_rng(11)
    nop = OperatorPolynomial.of(AXD, AX) + OperatorPolynomial.of(AYD, AY)
    for _ in range(100):
        s = random_state(rng, int(rng.integers(0, 13)))
        assert abs(expectation_poly(s, nop).imag) < 1e-12


words = st.lists(st.sampled_from(LADDERS), min_size=0, max_size=5).map(lambda f: OperatorWord(*f))


@settings(max_examples=60, deadline=None)
@given(word=words, seed=st.integers(0, 2**32 - 1))
def test_hermiticity_of_reversed_conjugated_word(word, seed):
    s = random_state(np.random.default_rng(seed), 6)
    assert expectation(s, word) == pytest.approx(expectation(s, word.dagger()).conjugate(), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(word=words, seed=st.integers(0, 2**32 - 1),
       alpha=st.complex_numbers(max_magnitude=3), beta=st.complex_numbers(max_magnitude=3))
def test_apply_word_is_linear(word, seed, alpha, beta):
    rng = np.random.default_rng(seed)
    a, b = random_state(rng, 5), random_state(rng, 7)
    lhs = apply_word(alpha * a + beta * b, word)
    rhs = alpha * apply_word(a, word) + beta * apply_word(b, word)
    for k in set(lhs.amplitudes) | set(rhs.amplitudes):
        assert abs(lhs[k] - rhs[k]) < 1e-12


def test_canonical_commutator():
    rng = np.random.default_rng(5)
    s = random_state(rng, 8)
    comm = OperatorPolynomial.of(AX, AXD) - OperatorPolynomial.of(AXD, AX)
    out = apply_poly(s, comm)
    for k, v in s:
        assert out[k] == pytest.approx(v, abs=1e-12)
    cross = OperatorPolynomial.of(AX, AYD) - OperatorPolynomial.of(AYD, AX)
    assert apply_poly(s, cross).norm() < 1e-14


def test_polynomial_dagger_and_products():
    p = OperatorPolynomial.of(AXD, AY, coeff=2j) + OperatorPolynomial.of(AX)
    d = p.dagger()
    assert d.terms[OperatorWord(AYD, AX)] == -2j
    assert d.terms[OperatorWord(AXD)] == 1
    assert len(p * p) == 4
