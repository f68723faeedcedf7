"""Almost-solutions, the Sample-and-Substitute tester, defects and padding.

A tuple ``rho`` assigns a permutation of ``{1..N}`` to each of ``x`` and ``y``.
Distances are exact rationals.  The tester draws points with Python's
``random.Random`` (Mersenne Twister), seeded per call, so verdicts replay
bit for bit.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Hashable, Mapping, Sequence

from .perm import Permutation, hamming_distance, parse_perm
from .words import FreeWord, RelationSet, evaluate

DEFAULT_CONFIDENCE = Fraction(99, 100)
GLOBAL_CAP = 6


@dataclass(frozen=True)
class PermTuple:
    sigma_x: Permutation
    sigma_y: Permutation

    def __post_init__(self):
        if self.sigma_x.degree != self.sigma_y.degree:
            raise ValueError("sigma_x and sigma_y must have the same degree")

    @property
    def degree(self) -> int:
        return self.sigma_x.degree

    def image(self, w: FreeWord) -> Permutation:
        return evaluate(w, [self.sigma_x, self.sigma_y], Permutation.__mul__, Permutation.inverse,
                        Permutation.identity(self.degree))

    def act(self, w: FreeWord, point: int) -> int:
        """``rho(w)`` applied to one point by following the letters right to left."""
        gens = {1: self.sigma_x.img, 2: self.sigma_y.img}
        invs = {1: self.sigma_x.inverse().img, 2: self.sigma_y.inverse().img}
        p = point - 1
        for k in reversed(w.letters):
            p = gens[k][p] if k > 0 else invs[-k][p]
        return p + 1

    @classmethod
    def parse(cls, text: str) -> "PermTuple":
        """Two non-empty lines: ``x`` then ``y``."""
        lines = [ln for ln in (t.split("#", 1)[0].strip() for t in text.splitlines()) if ln]
        if len(lines) != 2:
            raise ValueError("a permutation tuple file needs exactly two permutation lines")
        x = parse_perm(lines[0])
        y = parse_perm(lines[1])
        n = max(x.degree, y.degree)
        return cls(parse_perm(lines[0], n), parse_perm(lines[1], n))

    def dumps(self) -> str:
        from .perm import format_perm
        return f"{format_perm(self.sigma_x)}\n{format_perm(self.sigma_y)}\n"


def _relations(E: RelationSet | Sequence[FreeWord | str]) -> RelationSet:
    return E if isinstance(E, RelationSet) else RelationSet(E)


def defect(rho: PermTuple, r: FreeWord) -> Fraction:
    """``d(rho(r), id)``."""
    return hamming_distance(rho.image(r), Permutation.identity(rho.degree))


def is_almost_solution(rho: PermTuple, delta: Fraction, E) -> bool:
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    return all(defect(rho, r) < delta for r in _relations(E))


def is_solution(rho: PermTuple, R) -> bool:
    return all(rho.image(r).is_identity() for r in _relations(R))


def sample_count(num_relations: int, delta: Fraction, confidence: Fraction) -> int:
    """``ceil(ln(|E| / (1 - confidence)) / delta)``: with this many points per
    relation, a relation moving at least a ``delta`` fraction slips through
    with probability at most ``(1 - confidence) / |E|``."""
    if num_relations == 0:
        return 0
    return max(1, math.ceil(math.log(num_relations / (1 - float(confidence))) / float(delta)))


@dataclass
class TestVerdict:
    __test__ = False  # not a pytest class

    outcome: str
    witness: tuple[FreeWord, int] | None
    samples_per_relation: int
    seed: int
    queries: int = 0
    weighted_cost: int = 0

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"

    def replay(self, rho: PermTuple) -> bool:
        """Whether the witness relation really moves the witness point."""
        if self.witness is None:
            return False
        r, point = self.witness
        return rho.act(r, point) != point

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "witness": None if self.witness is None else {"relation": str(self.witness[0]),
                                                          "point": self.witness[1]},
            "samples_per_relation": self.samples_per_relation,
            "seed": self.seed,
            "queries": self.queries,
            "weighted_cost": self.weighted_cost,
        }


def sample_and_substitute(rho: PermTuple, E, delta: Fraction, confidence: Fraction = DEFAULT_CONFIDENCE,
                          seed: int = 0) -> TestVerdict:
    """Sample points with replacement and reject on the first moved one.

    ``queries`` counts point evaluations; ``weighted_cost`` charges ``|r|`` for
    each evaluation of ``r``.
    """
    E = _relations(E)
    delta, confidence = Fraction(delta), Fraction(confidence)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    if not 0 < confidence < 1:
        raise ValueError("confidence must lie in (0, 1)")
    if rho.degree < 1:
        raise ValueError("empty point set")
    n = sample_count(len(E), delta, confidence)
    rng = random.Random(seed)
    queries = cost = 0
    for r in E:
        for _ in range(n):
            point = rng.randrange(rho.degree) + 1
            queries += 1
            cost += len(r)
            if rho.act(r, point) != point:
                return TestVerdict("fail", (r, point), n, seed, queries, cost)
    return TestVerdict("pass", None, n, seed, queries, cost)


def local_defect(rho: PermTuple, R) -> Fraction:
    return sum((defect(rho, r) for r in _relations(R)), Fraction(0))


@dataclass
class GlobalDefect:
    value: Fraction
    minimizer: PermTuple


class _SolutionTable:
    """All solutions of ``R`` in ``Sym(N)^2``, in lexicographic image order."""

    def __init__(self, R: tuple[FreeWord, ...], N: int):
        self.N = N
        self.perms = [tuple(p) for p in itertools.permutations(range(N))]
        self.index = {p: i for i, p in enumerate(self.perms)}
        self.solutions: list[tuple[int, int]] = []
        self._rows: dict[int, list[int]] = {}
        ident = tuple(range(N))
        inverse = [self.index[tuple(sorted(range(N), key=p.__getitem__))] for p in self.perms]
        for i, x in enumerate(self.perms):
            xi = self.perms[inverse[i]]
            for j, y in enumerate(self.perms):
                yi = self.perms[inverse[j]]
                table = {1: x, -1: xi, 2: y, -2: yi}
                if all(_eval_images(r, table, ident) == ident for r in R):
                    self.solutions.append((i, j))
        self.members = set(self.solutions)

    def row(self, i: int) -> list[int]:
        """Number of points where permutation ``i`` differs from each permutation."""
        if i not in self._rows:
            p = self.perms[i]
            self._rows[i] = [sum(a != b for a, b in zip(p, q)) for q in self.perms]
        return self._rows[i]


def _eval_images(r: FreeWord, table: Mapping[int, tuple[int, ...]], ident: tuple[int, ...]) -> tuple[int, ...]:
    out = ident
    for k in r.letters:
        g = table[k]
        out = tuple(out[g[p]] for p in range(len(ident)))  # out o g: apply g first
    return out


@lru_cache(maxsize=16)
def _solution_table(R: tuple[FreeWord, ...], N: int) -> _SolutionTable:
    return _SolutionTable(R, N)


def global_defect(rho: PermTuple, R, cap_degree: int = GLOBAL_CAP) -> GlobalDefect:
    """Exact ``min d(rho(x), phi(x)) + d(rho(y), phi(y))`` over solutions ``phi``.

    Ties go to the lexicographically least ``(phi(x), phi(y))`` image pair.
    The solution set of ``(R, N)`` is enumerated once and cached.
    """
    N = rho.degree
    if N > cap_degree:
        raise ValueError(f"degree {N} exceeds brute-force cap {cap_degree}")
    table = _solution_table(tuple(_relations(R)), N)
    i = table.index[rho.sigma_x.img]
    j = table.index[rho.sigma_y.img]
    if (i, j) in table.members:
        return GlobalDefect(Fraction(0), rho)
    rx, ry = table.row(i), table.row(j)
    best, arg = None, None
    for a, b in table.solutions:
        v = rx[a] + ry[b]
        if best is None or v < best:
            best, arg = v, (a, b)
    if arg is None:
        raise ValueError("R has no solution of this degree")
    a, b = arg
    phi = PermTuple(Permutation._raw(table.perms[a]), Permutation._raw(table.perms[b]))
    return GlobalDefect(Fraction(best, N), phi)


@dataclass
class PaddedSolution:
    tuple: PermTuple
    omega: int
    q: int
    r: int
    violation: Fraction  # d(Psi(w1), id) = q|Omega| / (q|Omega| + r)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.q * self.omega, self.q * self.omega + self.r)


def pad_block_solution(psi: PermTuple, w1: FreeWord | str, delta: Fraction) -> PaddedSolution:
    """One copy of ``psi`` plus ``r`` fixed points, with ``|Omega|/(|Omega|+r)`` in ``(delta/2, delta)``."""
    if isinstance(w1, str):
        w1 = FreeWord.parse(w1)
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if defect(psi, w1) != 1:
        raise ValueError("psi(w1) must move every point")
    n = psi.degree
    q = 1
    r = 0
    while Fraction(n, n + r) >= delta:
        r += 1
    ratio = Fraction(n, n + r)
    assert delta / 2 < ratio < delta, "padding interval missed"
    size = q * n + r

    def pad(p: Permutation) -> Permutation:
        return Permutation._raw(p.img + tuple(range(n, size)))

    out = PermTuple(pad(psi.sigma_x), pad(psi.sigma_y))
    return PaddedSolution(out, n, q, r, defect(out, w1))


def stability_cost(E, delta: Fraction) -> Fraction:
    """``||E|| / delta`` for one certificate pair."""
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    return Fraction(_relations(E).norm()) / delta


@dataclass
class SoficReport:
    ok: bool
    violations: list[tuple] = field(default_factory=list)


def sofic_check(table: Mapping[tuple[Hashable, Hashable], Hashable], phi: Mapping[Hashable, Permutation],
                epsilon: Fraction, identity: Hashable | None = None) -> SoficReport:
    """Check the three conditions of an ``(A, epsilon)``-almost representation.

    ``table`` maps ``(g, h)`` to ``gh`` for the products that stay in ``A``;
    ``A`` is the key set of ``phi``.  Violations are ``("i", g, h, distance)``,
    ``("ii", g, distance)`` and ``("iii", e)``.
    """
    epsilon = Fraction(epsilon)
    degrees = {p.degree for p in phi.values()}
    if len(degrees) > 1:
        raise ValueError("all images must act on the same set")
    for (g, h), gh in table.items():
        if g not in phi or h not in phi or gh not in phi:
            raise ValueError(f"table entry ({g!r}, {h!r}) -> {gh!r} leaves A")
    if identity is not None and identity not in phi:
        raise ValueError("identity label not in A")
    N = degrees.pop() if degrees else 1
    ident = Permutation.identity(N)
    out = []
    for (g, h), gh in table.items():
        dist = hamming_distance(phi[gh], phi[g] * phi[h])
        if not dist < epsilon:
            out.append(("i", g, h, dist))
    for g, p in phi.items():
        if g == identity:
            continue
        dist = hamming_distance(p, ident)
        if not dist > 1 - epsilon:
            out.append(("ii", g, dist))
    if identity is not None and not phi[identity].is_identity():
        out.append(("iii", identity))
    return SoficReport(not out, out)
