import itertools

from hypothesis import given, strategies as st

from permstab.perm import Permutation, format_perm, parse_perm
from permstab.words import (FreeWord, RelationSet, ball, ball_size, commutator, evaluate, reduce,
                            set_norm)
from tests.strategies import words


def ev(w, x, y):
    return evaluate(w, [x, y], Permutation.__mul__, Permutation.inverse, Permutation.identity(x.degree))


def test_reduce_examples():
    assert len(reduce([1, -1])) == 0
    assert str(reduce("abBa")) == "aa"
    assert str(FreeWord.parse("")) == "e"


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=20))
def test_reduce_idempotent_and_reduced(letters):
    w = reduce(letters)
    assert all(a != -b for a, b in zip(w.letters, w.letters[1:]))
    assert reduce(w.letters) == w


def test_evaluate_examples():
    x, y = parse_perm("(1 2 3)"), parse_perm("(1 2)", 3)
    assert ev(FreeWord(), x, y).is_identity()
    assert ev(FreeWord.parse("a"), parse_perm("(1 2)"), parse_perm("(1 2)")) == parse_perm("(1 2)")
    # frozen oracle: x y x^-1 y^-1 in Sym(3), right factor first
    assert format_perm(ev(FreeWord.parse("abAB"), x, y)) == "(1 3 2)"


def test_evaluate_commutator_against_table():
    sym3 = [Permutation._raw(p) for p in itertools.permutations(range(3))]

    def mul(s, t):
        return Permutation._raw(tuple(s.img[t.img[i]] for i in range(3)))

    inv = {s: next(t for t in sym3 if mul(s, t).is_identity()) for s in sym3}
    for x in sym3:
        for y in sym3:
            expect = mul(mul(mul(x, y), inv[x]), inv[y])
            assert ev(commutator(FreeWord.gen(1), FreeWord.gen(2)), x, y) == expect


@given(words(4), words(4), st.permutations(range(4)), st.permutations(range(4)))
def test_evaluate_is_homomorphism(u, v, px, py):
    x, y = Permutation._raw(tuple(px)), Permutation._raw(tuple(py))
    assert ev(u * v, x, y) == ev(u, x, y) * ev(v, x, y)
    assert ev(u.inverse(), x, y) == ev(u, x, y).inverse()


def test_ball_sizes():
    assert [len(list(ball(l))) for l in range(3)] == [1, 5, 17]
    for l in range(9):
        ws = list(ball(l))
        assert len(ws) == len(set(ws)) == ball_size(l) == 1 + sum(4 * 3 ** (i - 1) for i in range(1, l + 1))


def test_ball_two_against_generate_and_dedupe():
    brute = {reduce(p) for k in range(3) for p in itertools.product([1, -1, 2, -2], repeat=k)}
    assert brute == set(ball(2))


def test_ball_length_lex_order():
    ws = list(ball(3))
    assert ws == sorted(ws)


def test_set_norm():
    assert set_norm(RelationSet()) == 0
    assert set_norm(RelationSet(["abAB"])) == 4
    assert set_norm(RelationSet(["aaa", "abAB"])) == 7


def test_relation_file_format():
    text = "# comment\naaa\n\nabAB  # commutator\naaa\n"
    E = RelationSet.parse(text)
    assert [str(w) for w in E] == ["aaa", "abAB"]
    assert RelationSet.parse(E.dumps()).words == E.words


@given(words(10))
def test_text_round_trip(w):
    assert FreeWord.parse(str(w)) == w


@given(words(6), words(6))
def test_group_laws(u, v):
    assert (u * v).inverse() == v.inverse() * u.inverse()
    assert len(u * u.inverse()) == 0
    assert u.conjugate(v) == v * u * v.inverse()
