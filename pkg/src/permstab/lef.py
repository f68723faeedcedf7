"""Local embeddings of word balls of ``G(d, r)`` into finite groups.

Two pieces: projecting the ball of radius ``l`` onto coordinates
``1..4l+1``, and replacing coordinate ``4l+1`` by the pair
``abar = (1 2 ... 12l+3)``, ``bbar = (1 4l+2 8l+3)`` in ``Alt(12l+3)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .lamplighter import evaluate_word_W
from .neumann import NeumannGroup
from .perm import Permutation, format_perm
from .words import FreeWord, ball, evaluate


class EmbeddingError(ValueError):
    pass


@dataclass
class EmbeddingTable:
    words: list[FreeWord]
    images: list[tuple[Permutation, ...]]
    distinct_elements: int

    def as_dict(self) -> dict[FreeWord, tuple[Permutation, ...]]:
        return dict(zip(self.words, self.images))

    def to_json(self) -> dict:
        return {str(w): [format_perm(p) for p in img] for w, img in zip(self.words, self.images)}


def _check_injective(group: NeumannGroup, words: Sequence[FreeWord], images: Sequence[tuple]) -> int:
    """Images agree exactly when the words agree in ``G``; returns the number of distinct elements."""
    first: dict[tuple, FreeWord] = {}
    for w, img in zip(words, images):
        if img in first:
            if not group.element(first[img]).equals(group.element(w)):
                raise EmbeddingError(f"{first[img]} and {w} differ in G but share an image; "
                                     "(d, r) violates the hypotheses r(n), d(n)-2r(n) >= n")
        else:
            first[img] = w
    reps = list(first.values())
    for i, u in enumerate(reps):
        for v in reps[i + 1:]:
            if group.element(u).equals(group.element(v)):
                raise EmbeddingError(f"{u} and {v} are equal in G but have different images")
    return len(first)


def check_partial_homomorphism(table: EmbeddingTable) -> list[tuple[FreeWord, FreeWord]]:
    """Pairs ``(u, v)`` with ``uv`` in the ball whose images do not multiply; empty on success."""
    lookup = table.as_dict()
    bad = []
    for u in table.words:
        for v in table.words:
            uv = u * v
            if uv in lookup:
                prod = tuple(x * y for x, y in zip(lookup[u], lookup[v]))
                if prod != lookup[uv]:
                    bad.append((u, v))
    return bad


def projection_embedding(group: NeumannGroup, l: int) -> EmbeddingTable:
    """``w -> (pi_1(w), ..., pi_{4l+1}(w))`` on the ball of radius ``l``."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    coords = range(1, 4 * l + 2)
    group.spec.ensure(4 * l + 1)
    words = list(ball(l))
    images = [tuple(group.element(w).coordinate(n) for n in coords) for w in words]
    distinct = _check_injective(group, words, images)
    return EmbeddingTable(words, images, distinct)


def substitute_generators(l: int) -> tuple[Permutation, Permutation]:
    if l < 1:
        raise ValueError("the substitution needs l >= 1")
    d = 12 * l + 3
    return (Permutation.from_cycles([range(1, d + 1)], d),
            Permutation.from_cycles([(1, 4 * l + 2, 8 * l + 3)], d))


def substitute_embedding(group: NeumannGroup, l: int) -> EmbeddingTable:
    """``pi_{4l+1}(w) -> w(abar, bbar)`` on the ball of radius ``l``.

    Checks that equal images at coordinate ``4l+1`` give equal substituted
    images and vice versa.
    """
    abar, bbar = substitute_generators(l)
    n = 4 * l + 1
    if not group.spec.clears(n, 2 * l):
        raise EmbeddingError(f"coordinate {n} does not satisfy r, d-2r >= {4 * l + 1}")
    words = list(ball(l))
    ident = Permutation.identity(abar.degree)
    images = [(evaluate(w, [abar, bbar], Permutation.__mul__, Permutation.inverse, ident),) for w in words]
    coord = [group.element(w).coordinate(n) for w in words]
    seen: dict[Permutation, Permutation] = {}
    back: dict[Permutation, Permutation] = {}
    for w, c, (s,) in zip(words, coord, images):
        if seen.setdefault(c, s) != s:
            raise EmbeddingError(f"substitution is not well defined at {w}")
        if back.setdefault(s, c) != c:
            raise EmbeddingError(f"substitution is not injective at {w}")
    return EmbeddingTable(words, images, len(seen))


def three_way_agreement(group: NeumannGroup, l: int) -> list[FreeWord]:
    """Words of length ``<= 2l`` where triviality at coordinate ``4l+1``, under
    the substitution, and in ``W`` do not all agree.  Empty on success."""
    abar, bbar = substitute_generators(l)
    ident = Permutation.identity(abar.degree)
    n = 4 * l + 1
    bad = []
    for w in ball(2 * l):
        a = group.element(w).coordinate(n).is_identity()
        b = evaluate(w, [abar, bbar], Permutation.__mul__, Permutation.inverse, ident).is_identity()
        c = evaluate_word_W(w).is_identity()
        if not a == b == c:
            bad.append(w)
    return bad


def factorial_bound(l: int) -> int:
    """``((15 l)!)^(4l+1)``, the order of ``Sym(15l)^(4l+1)``."""
    return math.factorial(15 * l) ** (4 * l + 1)


def _log10_factorial_half(d: int) -> float:
    return (math.lgamma(d + 1) - math.log(2)) / math.log(10)


@dataclass
class LefCertificate:
    l: int
    target_degrees: list[int]
    target_order: int
    log10_target_order: float
    log10_factorial_bound: float
    implied_constant: float | None  # log|Q| / (l^2 log l), comparable to the C in exp(C l^2 log l)
    projection: EmbeddingTable
    substitution: EmbeddingTable | None
    partial_homomorphism_failures: int

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "target_degrees": self.target_degrees,
            "target_order": str(self.target_order),
            "log10_target_order": self.log10_target_order,
            "log10_factorial_bound": self.log10_factorial_bound,
            "implied_constant": self.implied_constant,
            "distinct_elements": self.projection.distinct_elements,
            "partial_homomorphism_failures": self.partial_homomorphism_failures,
            "projection": self.projection.to_json(),
            "substitution": None if self.substitution is None else self.substitution.to_json(),
        }


def lef_certificate(group: NeumannGroup, l: int) -> LefCertificate:
    """Local embedding of the ball of radius ``l`` into a product of alternating groups.

    Each coordinate ``n <= 4l+1`` is sent to ``Alt(12l+3)`` by substitution if
    it clears ``r, d-2r >= 4l+1``, otherwise kept as ``Alt(d(n))``.  The order
    of that product is reported next to ``((15l)!)^(4l+1)``; no minimality is
    claimed.
    """
    proj = projection_embedding(group, l)
    sub = substitute_embedding(group, l) if l >= 1 else None
    degrees = []
    for n in range(1, 4 * l + 2):
        if l >= 1 and group.spec.clears(n, 2 * l):
            degrees.append(12 * l + 3)
        else:
            degrees.append(group.spec.d(n))
    order = math.prod(math.factorial(d) // 2 for d in degrees)
    log_order = sum(_log10_factorial_half(d) for d in degrees)
    implied = None
    if l >= 2:
        implied = log_order * math.log(10) / (l * l * math.log(l))
    log_bound = (4 * l + 1) * math.lgamma(15 * l + 1) / math.log(10)
    failures = len(check_partial_homomorphism(proj))
    if failures:
        raise EmbeddingError("projection table is not a partial homomorphism")
    return LefCertificate(l, degrees, order, log_order, log_bound, implied, proj, sub, failures)
