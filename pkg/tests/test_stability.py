import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from permstab.checks import naive_global_defect, regular_tuple, padded_instance
from permstab.perm import Permutation, hamming_distance, parse_perm, regular_representation
from permstab.stability import (PermTuple, TestVerdict, global_defect, is_almost_solution, is_solution,
                                local_defect, pad_block_solution, sample_and_substitute, sample_count,
                                sofic_check, stability_cost)
from permstab.words import FreeWord, RelationSet
from tests.strategies import perms, words

COMM = RelationSet(["abAB"])


def tup(x, y, n):
    return PermTuple(parse_perm(x, n), parse_perm(y, n))


# -- almost-solutions ------------------------------------------------------------

def test_genuine_solution_is_almost_solution():
    rho = tup("(1 2 3)", "(1 3 2)", 3)
    assert is_almost_solution(rho, Fraction(1, 1000), COMM)


def test_empty_relations():
    rho = tup("(1 2)", "(2 3)", 4)
    assert is_almost_solution(rho, Fraction(1, 100), RelationSet())


def test_strict_boundary():
    rho = tup("(1 2)", "()", 4)
    assert not is_almost_solution(rho, Fraction(1, 2), RelationSet(["a"]))
    assert is_almost_solution(rho, Fraction(51, 100), RelationSet(["a"]))


def test_delta_range():
    with pytest.raises(ValueError):
        is_almost_solution(tup("()", "()", 2), Fraction(0), COMM)


# -- tester ----------------------------------------------------------------------

def test_sample_count_formula():
    assert sample_count(4, Fraction(1, 3), Fraction(99, 100)) == math.ceil(math.log(400) * 3)
    assert sample_count(0, Fraction(1, 3), Fraction(99, 100)) == 0


def test_solution_always_passes():
    rho = tup("(1 2 3)", "(1 3 2)", 5)
    for seed in range(50):
        assert sample_and_substitute(rho, COMM, Fraction(1, 10), seed=seed).passed


def test_fixed_point_free_fails_first_sample():
    rho = tup("(1 2 3 4 5)", "()", 5)
    v = sample_and_substitute(rho, RelationSet(["a"]), Fraction(1, 2), seed=3)
    assert not v.passed and v.queries == 1 and v.replay(rho)


def test_deterministic_given_seed():
    _, padded, E = padded_instance(Fraction(1, 8))
    runs = [sample_and_substitute(padded.tuple, E, Fraction(1, 8), seed=11).to_json() for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]


def test_costs_reported():
    rho = tup("(1 2 3)", "(1 3 2)", 3)
    E = RelationSet(["abAB", "aaa"])
    v = sample_and_substitute(rho, E, Fraction(1, 2), seed=0)
    n = v.samples_per_relation
    assert v.queries == 2 * n and v.weighted_cost == 4 * n + 3 * n


@given(perms(6), perms(6), st.lists(st.sampled_from(["abAB", "aa", "bbb", "abab", "aB"]), min_size=1, max_size=3),
       st.integers(0, 10 ** 6))
def test_witness_replays(x, y, rels, seed):
    rho = PermTuple(x, y)
    v = sample_and_substitute(rho, RelationSet(rels), Fraction(1, 4), seed=seed)
    if not v.passed:
        assert v.replay(rho)
        r, point = v.witness
        assert rho.image(r)(point) != point
    else:
        assert v.witness is None


def test_rejection_rate_on_padded_instance():
    delta = Fraction(1, 8)
    _, padded, E = padded_instance(delta)
    dstar = padded.violation
    n = sample_count(len(E), delta, Fraction(99, 100))
    rejects = sum(not sample_and_substitute(padded.tuple, E, delta, seed=s).passed for s in range(1000))
    expect = 1 - (1 - float(dstar)) ** n
    assert rejects / 1000 >= expect - 3 * math.sqrt(expect * (1 - expect) / 1000)


def test_verdict_json():
    v = TestVerdict("fail", (FreeWord.parse("ab"), 3), 5, 7, 1, 2)
    assert v.to_json()["witness"] == {"relation": "ab", "point": 3}


# -- local defect ----------------------------------------------------------------

def test_local_defect_examples():
    assert local_defect(tup("(1 2 3)", "(1 3 2)", 3), COMM) == 0
    assert local_defect(tup("(1 2)", "()", 4), RelationSet(["a"])) == Fraction(1, 2)


@given(perms(5), perms(5), st.fractions(Fraction(1, 100), 1))
def test_local_defect_bound(x, y, delta):
    rho = PermTuple(x, y)
    R = RelationSet(["abAB", "aa", "abab"])
    if is_almost_solution(rho, delta, R):
        assert local_defect(rho, R) < len(R) * delta


# -- global defect ---------------------------------------------------------------

def second_enumerator(rho, R):
    """Plain tuple arithmetic, unrelated to the library's solution table."""
    N = rho.degree
    best = None
    for a in itertools.permutations(range(N)):
        ai = tuple(sorted(range(N), key=a.__getitem__))
        for b in itertools.permutations(range(N)):
            bi = tuple(sorted(range(N), key=b.__getitem__))
            # [a, b] = a b a^-1 b^-1 with right factor first
            comm = tuple(a[b[ai[bi[i]]]] for i in range(N))
            if comm != tuple(range(N)):
                continue
            v = sum(p != q for p, q in zip(rho.sigma_x.img, a)) + sum(p != q for p, q in zip(rho.sigma_y.img, b))
            if best is None or v < best:
                best = v
    return Fraction(best, N)


def test_global_defect_of_solution():
    rho = tup("(1 2 3)", "(1 3 2)", 3)
    res = global_defect(rho, COMM)
    assert res.value == 0 and res.minimizer == rho


def test_global_defect_sym3_frozen():
    rho = tup("(1 2 3)", "(1 2)", 3)
    res = global_defect(rho, COMM)
    assert res.value == Fraction(2, 3) == second_enumerator(rho, COMM)
    # lexicographically least minimizer
    assert res.minimizer == tup("(1 2)", "(1 2)", 3)
    assert is_solution(res.minimizer, COMM)


def test_global_defect_cap():
    rho = PermTuple(Permutation.identity(7), Permutation.identity(7))
    with pytest.raises(ValueError):
        global_defect(rho, COMM)


@pytest.mark.parametrize("N", [4, 5])
def test_two_enumerators_agree(N):
    rng = random.Random(N)
    pool = [Permutation._raw(p) for p in itertools.permutations(range(N))]
    for _ in range(10):
        rho = PermTuple(rng.choice(pool), rng.choice(pool))
        assert global_defect(rho, COMM).value == second_enumerator(rho, COMM)


def test_naive_enumerator_agrees_on_other_relations():
    R = RelationSet(["aa", "bbb", "abab"])
    rng = random.Random(2)
    pool = [Permutation._raw(p) for p in itertools.permutations(range(4))]
    for _ in range(10):
        rho = PermTuple(rng.choice(pool), rng.choice(pool))
        assert global_defect(rho, R).value == naive_global_defect(rho, R)


def test_adding_relations_never_decreases():
    rng = random.Random(3)
    pool = [Permutation._raw(p) for p in itertools.permutations(range(4))]
    for _ in range(20):
        rho = PermTuple(rng.choice(pool), rng.choice(pool))
        small = global_defect(rho, RelationSet(["abAB"])).value
        big = global_defect(rho, RelationSet(["abAB", "aa"])).value
        assert big >= small


def test_zero_iff_solution_small_degrees():
    for N in range(1, 5):
        pool = [Permutation._raw(p) for p in itertools.permutations(range(N))]
        for a in pool:
            for b in pool:
                rho = PermTuple(a, b)
                assert (global_defect(rho, COMM).value == 0) == is_solution(rho, COMM)


def test_upper_bound_by_explicit_solution():
    rng = random.Random(4)
    pool = [Permutation._raw(p) for p in itertools.permutations(range(4))]
    for _ in range(30):
        rho = PermTuple(rng.choice(pool), rng.choice(pool))
        a = rng.choice(pool)
        phi = PermTuple(a, a ** 2)  # commuting pair
        bound = hamming_distance(rho.sigma_x, phi.sigma_x) + hamming_distance(rho.sigma_y, phi.sigma_y)
        assert global_defect(rho, COMM).value <= bound


def test_closeness_both_directions():
    # G_R(rho) <= y gives a solution within y; a y-close solution (per generator) forces G_R <= 2y
    pool = [Permutation._raw(p) for p in itertools.permutations(range(3))]
    sols = [PermTuple(a, b) for a in pool for b in pool if a * b == b * a]
    for a in pool:
        for b in pool:
            rho = PermTuple(a, b)
            g = global_defect(rho, COMM)
            dist = hamming_distance(a, g.minimizer.sigma_x) + hamming_distance(b, g.minimizer.sigma_y)
            assert dist == g.value
            for phi in sols:
                y = max(hamming_distance(a, phi.sigma_x), hamming_distance(b, phi.sigma_y))
                assert g.value <= 2 * y


# -- padding ---------------------------------------------------------------------

def test_pad_example():
    psi = regular_tuple(parse_perm("(1 2)", 3), parse_perm("(1 2 3)"))
    res = pad_block_solution(psi, "abAB", Fraction(1, 2))
    assert psi.degree == 6 and res.r == 7 and res.ratio == Fraction(6, 13)


@given(st.fractions(Fraction(1, 200), Fraction(199, 200)), st.sampled_from([2, 3, 5, 8]))
def test_pad_interval(delta, k):
    psi = regular_tuple(Permutation.from_cycles([range(1, k + 1)], k), Permutation.identity(k))
    res = pad_block_solution(psi, "a", delta)
    assert delta / 2 < res.ratio < delta
    assert res.violation == res.ratio > delta / 2
    assert res.tuple.sigma_x.img[:k] == psi.sigma_x.img
    assert all(res.tuple.sigma_x.img[i] == i for i in range(k, k + res.r))
    E = RelationSet(["a" * k, "b", "a"])
    assert is_almost_solution(res.tuple, delta, E)


def test_pad_requires_free_action():
    psi = tup("(1 2)", "()", 3)
    with pytest.raises(ValueError):
        pad_block_solution(psi, "a", Fraction(1, 2))


# -- cost ------------------------------------------------------------------------

def test_stability_cost():
    assert stability_cost(RelationSet(), Fraction(1, 3)) == 0
    assert stability_cost(COMM, Fraction(1, 8)) == 32


@given(st.lists(words(6), max_size=4), st.fractions(Fraction(1, 100), 1))
def test_cost_at_least_norm(ws, delta):
    E = RelationSet(ws)
    assert stability_cost(E, delta) >= E.norm()


# -- sofic check -----------------------------------------------------------------

def sym3_regular():
    elems = [Permutation._raw(p) for p in itertools.permutations(range(3))]
    reg = regular_representation(elems, Permutation.__mul__)
    labels = {g: str(i) for i, g in enumerate(elems)}
    phi = {labels[g]: reg[g] for g in elems}
    table = {(labels[g], labels[h]): labels[g * h] for g in elems for h in elems}
    return phi, table, labels[elems[0]]


def test_regular_representation_is_sofic():
    phi, table, e = sym3_regular()
    for eps in (Fraction(1, 1000), Fraction(1, 2), Fraction(1)):
        assert sofic_check(table, phi, eps, identity=e).ok


def test_identity_image_violates_freeness():
    phi, table, e = sym3_regular()
    g = next(k for k in phi if k != e)
    phi[g] = Permutation.identity(6)
    report = sofic_check({}, phi, Fraction(1, 2), identity=e)
    assert ("ii", g, Fraction(0)) in report.violations


def test_perturbed_image_violations_bounded():
    # big regular action (C_40), one image perturbed by a transposition
    n = 40
    c = Permutation.from_cycles([range(1, n + 1)], n)
    elems = [c ** k for k in range(n)]
    reg = regular_representation(elems, Permutation.__mul__)
    phi = {k: reg[elems[k]] for k in range(n)}
    phi[1] = phi[1] * Permutation.from_cycles([(1, 2)], n)
    table = {(i, j): (i + j) % n for i in range(n) for j in range(n)}
    eps = Fraction(1, 20)  # phi(1) now fixes one point, still > 1 - eps away from id
    report = sofic_check(table, phi, eps, identity=0)
    assert report.violations
    for v in report.violations:
        assert v[0] == "i"
        assert v[3] <= 2 * Fraction(2, n)
        assert 1 in (v[1], v[2], table[v[1], v[2]])
    expected = [(i, j) for (i, j), k in table.items()
                if hamming_distance(phi[k], phi[i] * phi[j]) >= eps]
    assert sorted((v[1], v[2]) for v in report.violations) == sorted(expected)


def test_sofic_identity_condition():
    phi, table, e = sym3_regular()
    phi[e] = Permutation.from_cycles([(1, 2)], 6)
    assert ("iii", e) in sofic_check({}, phi, Fraction(1, 2), identity=e).violations


def test_sofic_malformed_table():
    phi, _, e = sym3_regular()
    with pytest.raises(ValueError):
        sofic_check({("0", "x"): "0"}, phi, Fraction(1, 2))
