import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from permstab.perm import (CapExceeded, NotClosed, Permutation, PermGroup, alt_conjugator_count,
                           alternating_elements, closure_enumerate, compose, contains, format_perm,
                           group_order, hamming_distance, parse_perm, regular_representation,
                           support_size)
from tests.strategies import perms

SYM3 = [Permutation._raw(p) for p in itertools.permutations(range(3))]


def table_product(s, t):
    """Independent composition on dicts: apply t, then s."""
    ms = {i + 1: s.img[i] + 1 for i in range(s.degree)}
    mt = {i + 1: t.img[i] + 1 for i in range(t.degree)}
    return tuple(ms[mt[w]] for w in range(1, s.degree + 1))


# -- compose ---------------------------------------------------------------------

def test_compose_identity():
    t = parse_perm("(1 2)", 3)
    assert compose(Permutation.identity(3), t) == t


def test_compose_involution():
    t = parse_perm("(1 2)", 3)
    assert compose(t, t).is_identity()


def test_compose_frozen_value():
    # (1 2 3) after (1 2): 1 -> 2 -> 3, 2 -> 1 -> 2, 3 -> 3 -> 1
    assert format_perm(parse_perm("(1 2 3)") * parse_perm("(1 2)", 3)) == "(1 3)"


def test_compose_matches_sym3_table():
    for s in SYM3:
        for t in SYM3:
            assert tuple(v + 1 for v in (s * t).img) == table_product(s, t)


def test_compose_degree_mismatch():
    with pytest.raises(ValueError):
        compose(Permutation.identity(3), Permutation.identity(4))


# -- hamming distance ------------------------------------------------------------

def test_hamming_values():
    e5 = Permutation.identity(5)
    assert hamming_distance(e5, e5) == 0
    assert hamming_distance(parse_perm("(1 2)", 5), e5) == Fraction(2, 5)
    assert isinstance(hamming_distance(e5, e5), Fraction)


def test_hamming_degree_mismatch():
    with pytest.raises(ValueError):
        hamming_distance(Permutation.identity(2), Permutation.identity(3))


def test_hamming_bi_invariance_sym4():
    S4 = [Permutation._raw(p) for p in itertools.permutations(range(4))]
    for r, s, t in itertools.product(S4, repeat=3):
        assert hamming_distance(r * s, r * t) == hamming_distance(s, t)


@given(perms(7), perms(7), perms(7))
def test_hamming_metric_properties(a, b, c):
    assert hamming_distance(a, c) <= hamming_distance(a, b) + hamming_distance(b, c)
    assert hamming_distance(a, b) == hamming_distance(b, a)
    assert (hamming_distance(a, b) == 0) == (a == b)
    assert hamming_distance(a, b) == Fraction(support_size(a.inverse() * b), 7)


# -- support ---------------------------------------------------------------------

def test_support_size():
    assert support_size(Permutation.identity(4)) == 0
    assert support_size(parse_perm("(1 2 3)")) == 3
    assert support_size(parse_perm("(1 2)(3 4 5)", 7)) == 5


# -- text format -----------------------------------------------------------------

def test_parse_image_line_and_cycles_agree():
    assert parse_perm("2 1 3") == parse_perm("(1 2)", 3)
    assert parse_perm("(1 2 3)(4 5)").degree == 5


def test_parse_rejects_non_bijection():
    with pytest.raises(ValueError):
        parse_perm("1 1 2")


@given(perms(9))
def test_format_round_trip(p):
    assert parse_perm(format_perm(p)) == p


# -- groups ----------------------------------------------------------------------

def test_group_order_examples():
    assert group_order(PermGroup([parse_perm("(1 2 3 4 5)"), parse_perm("(1 2 3)", 5)])) == 60
    assert group_order(PermGroup([parse_perm("(1 2)")])) == 2


def test_group_order_d7_r2_against_closure():
    gens = [parse_perm("(1 2 3 4 5 6 7)"), parse_perm("(1 3 5)", 7)]
    closure = closure_enumerate(gens, Permutation.__mul__, 10_000, Permutation.identity(7))
    assert len(closure) == 2520 == math.factorial(7) // 2
    assert group_order(PermGroup(gens)) == 2520


@pytest.mark.parametrize("gens", [
    ["(1 2 3 4)", "(1 2)"],
    ["(1 2 3)(4 5 6)", "(1 4)"],
    ["(1 2)(3 4)", "(1 3)(2 4)"],
    ["(1 2 3 4 5 6)", "(2 6)(3 5)"],
    ["(1 2 3 4 5 6 7 8)", "(1 5)"],
])
def test_group_order_agrees_with_closure(gens):
    ps = [parse_perm(g) for g in gens]
    n = max(p.degree for p in ps)
    ps = [parse_perm(g, n) for g in gens]
    closure = closure_enumerate(ps, Permutation.__mul__, 5000, Permutation.identity(n))
    assert group_order(PermGroup(ps)) == len(closure)


def test_contains():
    gens = [parse_perm("(1 2 3 4 5)"), parse_perm("(1 2 3)", 5)]
    G = PermGroup(gens)
    assert all(contains(G, g) for g in gens)
    assert not contains(G, parse_perm("(1 2)", 5))
    w = Permutation.identity(5)
    for i in range(10):
        w = w * gens[i % 2] * gens[(i * 7) % 2]
    assert contains(G, w)


def test_contains_degree_mismatch():
    with pytest.raises(ValueError):
        PermGroup([parse_perm("(1 2 3)")]).contains(Permutation.identity(4))


@given(st.lists(perms(6), min_size=1, max_size=3))
def test_contains_matches_closure(gens):
    closure = set(closure_enumerate(gens, Permutation.__mul__, 1000, Permutation.identity(6)))
    G = PermGroup(gens)
    assert G.order() == len(closure)
    for p in itertools.islice(itertools.permutations(range(6)), 0, 720, 37):
        q = Permutation._raw(p)
        assert G.contains(q) == (q in closure)


# -- closure ---------------------------------------------------------------------

def test_closure_examples():
    e = Permutation.identity(3)
    assert closure_enumerate([e], Permutation.__mul__, 10) == [e]
    assert len(closure_enumerate([parse_perm("(1 2 3)")], Permutation.__mul__, 10)) == 3
    gens = [parse_perm("(1 2 3 4 5)"), parse_perm("(1 2 3)", 5)]
    assert len(closure_enumerate(gens, Permutation.__mul__, 100)) == 60
    with pytest.raises(CapExceeded):
        closure_enumerate(gens, Permutation.__mul__, 50)


def test_closure_cap_must_be_positive():
    with pytest.raises(ValueError):
        closure_enumerate([Permutation.identity(2)], Permutation.__mul__, 0)


# -- regular representation ------------------------------------------------------

def test_regular_trivial_group():
    e = Permutation.identity(2)
    reg = regular_representation([e], Permutation.__mul__)
    assert reg[e] == Permutation.identity(1)


def test_regular_c3():
    c = parse_perm("(1 2 3)")
    elems = closure_enumerate([c], Permutation.__mul__, 10)
    reg = regular_representation(elems, Permutation.__mul__)
    assert reg[c].cycle_type() == (3,)
    assert hamming_distance(reg[c], Permutation.identity(3)) == 1


def test_regular_sym3_fixed_point_free_and_faithful():
    reg = regular_representation(SYM3, Permutation.__mul__)
    e = Permutation.identity(3)
    for g in SYM3:
        assert support_size(reg[g]) == (0 if g == e else 6)
        for h in SYM3:
            assert reg[g * h] == reg[g] * reg[h]


def test_regular_rejects_non_group():
    with pytest.raises(NotClosed):
        regular_representation([Permutation.identity(3), parse_perm("(1 2 3)")], Permutation.__mul__)


# -- conjugator counting ---------------------------------------------------------

@pytest.mark.parametrize("degree", [4, 5])
def test_alt_conjugator_count_brute_force(degree):
    A = alternating_elements(degree)
    assert len(A) == math.factorial(degree) // 2
    for x in A[::3]:
        for y in A[::5]:
            assert alt_conjugator_count(x, y) == sum(1 for h in A if h * x * h.inverse() == y)
