import itertools

import pytest
from hypothesis import given, strategies as st

from permstab.lamplighter import (IDENTITY, FiniteLamplighterElement, LamplighterElement,
                                  evaluate_word_W, evaluate_word_Wm, format_lamplighter,
                                  is_identity_W, multiply, parse_lamplighter, project_finite)
from permstab.words import FreeWord, ball
from tests.strategies import words

a = LamplighterElement.a
b = LamplighterElement.b

elements = st.builds(
    LamplighterElement.make,
    st.dictionaries(st.integers(-6, 6), st.integers(0, 2), max_size=5),
    st.integers(-5, 5),
)


def test_lamp_has_order_three():
    assert multiply(multiply(b(0), b(0)), b(0)).is_identity()


def test_conjugation_shifts_lamps():
    assert a() * b(0) * a(-1) == b(1)
    for n in range(-3, 4):
        for m in range(-3, 4):
            assert a(n) * b(m) * a(-n) == b(m + n)


def test_commutator_value():
    u = evaluate_word_W(FreeWord.parse("abAB"))
    assert u.lamps() == {1: 1, 0: 2}
    assert u.shift == 0
    for m in (2, 3):
        assert project_finite(u, m) == evaluate_word_Wm(FreeWord.parse("abAB"), m)


def test_word_images():
    assert evaluate_word_W(FreeWord()).is_identity()
    assert is_identity_W(evaluate_word_W(FreeWord.parse("bbb")))
    assert not is_identity_W(evaluate_word_W(FreeWord.parse("abAB")))
    for k in (1, 2, -3):
        w = FreeWord.gen(1, k) * FreeWord.gen(2) * FreeWord.gen(1, -k) * FreeWord.gen(2, -1)
        u = evaluate_word_W(w)
        assert not u.is_identity() and len(u.support()) == 2


def test_canonical_form():
    assert LamplighterElement.make({0: 3, 1: 0}) == IDENTITY
    assert IDENTITY.is_identity()


@given(elements, elements, elements)
def test_associative(u, v, w):
    assert (u * v) * w == u * (v * w)


def test_associative_thousand_random_triples():
    import random
    rng = random.Random(1)

    def rand():
        return LamplighterElement.make({rng.randint(-5, 5): rng.randint(1, 2) for _ in range(rng.randint(0, 4))},
                                       rng.randint(-4, 4))
    for _ in range(1000):
        u, v, w = rand(), rand(), rand()
        assert (u * v) * w == u * (v * w)


@given(elements)
def test_inverse(u):
    assert (u * u.inverse()).is_identity()
    assert (u.inverse() * u).is_identity()


@given(elements)
def test_format_round_trip(u):
    assert parse_lamplighter(format_lamplighter(u)) == u


def test_format_example():
    assert format_lamplighter(a(2) * b(1)) == "a^2 · b_1^1"
    assert format_lamplighter(IDENTITY) == "a^0"


def test_parse_rejects_unsorted():
    with pytest.raises(ValueError):
        parse_lamplighter("a^0 · b_2^1 b_1^1")


# -- finite quotients ------------------------------------------------------------

def test_project_examples():
    for m in (1, 2, 3):
        assert project_finite(IDENTITY, m).is_identity()
        assert project_finite(b(2 * m + 1), m) == FiniteLamplighterElement.b(m, 0)
        assert project_finite(a(2 * m + 1), m).is_identity()


def test_project_needs_positive_m():
    with pytest.raises(ValueError):
        project_finite(IDENTITY, 0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_project_commutes_with_evaluation(m):
    for w in ball(6):
        assert project_finite(evaluate_word_W(w), m) == evaluate_word_Wm(w, m)


@given(elements, elements, st.integers(1, 4))
def test_project_is_homomorphism(u, v, m):
    assert project_finite(u * v, m) == project_finite(u, m) * project_finite(v, m)


@pytest.mark.parametrize("m", [1, 2])
def test_short_lamp_words_survive_projection(m):
    # words in the lamp letters b_i (|i| <= m) of length <= 2m+1
    lamps = [(i, e) for i in range(-m, m + 1) for e in (1, 2)]
    for k in range(2 * m + 2):
        for combo in itertools.product(lamps, repeat=k):
            u = IDENTITY
            for i, e in combo:
                u = u * b(i, e)
            assert u.is_identity() == project_finite(u, m).is_identity()


def test_finite_shift_convention():
    # conjugation by a moves lamp i to i + 1, wrapping inside -m..m
    m = 2
    A = FiniteLamplighterElement.a(m)
    for i in range(-m, m + 1):
        j = (i + 1 + m) % (2 * m + 1) - m
        assert A * FiniteLamplighterElement.b(m, i) * A.inverse() == FiniteLamplighterElement.b(m, j)


@given(words(8))
def test_finite_word_inverse(w):
    u = evaluate_word_Wm(w, 2)
    assert (u * evaluate_word_Wm(w.inverse(), 2)).is_identity()
