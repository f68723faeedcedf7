"""Permutations of {1..N}, the normalised Hamming metric, and stabilizer chains.

Products follow the convention ``(s * t)(w) = s(t(w))``: the right factor acts
first.  Points are 1-based in every text format and in ``__call__``; the image
table ``img`` is 0-based.
"""

from __future__ import annotations

import math
import re
from collections import deque
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence, TypeVar

T = TypeVar("T", bound=Hashable)


class CapExceeded(RuntimeError):
    """Raised when an exhaustive enumeration grows past its cap."""


class NotClosed(ValueError):
    """Raised when a supposed group is not closed under its multiplication."""


class Permutation:
    __slots__ = ("img", "_hash")

    def __init__(self, img: Sequence[int]):
        img = tuple(img)
        if not img:
            raise ValueError("degree must be at least 1")
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation of 0..{len(img) - 1}: {img!r}")
        self.img = img
        self._hash = None

    @classmethod
    def _raw(cls, img: tuple) -> "Permutation":
        p = object.__new__(cls)
        p.img = img
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise ValueError("degree must be at least 1")
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "Permutation":
        """Build from a 1-based image line: ``images[i-1]`` is the image of ``i``."""
        return cls(i - 1 for i in images)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Product of 1-based cycles, each ``(c1 c2 ... ck)`` sending c1 -> c2 -> ... -> c1.

        Cycles are multiplied left to right under the right-acts-first convention,
        so for disjoint cycles the order is irrelevant.
        """
        out = cls.identity(degree)
        for cyc in cycles:
            cyc = [c - 1 for c in cyc]
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"repeated point in cycle {cyc!r}")
            if any(not 0 <= c < degree for c in cyc):
                raise ValueError(f"cycle point outside 1..{degree}")
            img = list(range(degree))
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
            out = out * cls._raw(tuple(img))
        return out

    @property
    def degree(self) -> int:
        return len(self.img)

    def __call__(self, point: int) -> int:
        return self.img[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        s = self.img
        t = other.img
        if len(s) != len(t):
            raise ValueError(f"degree mismatch: {len(s)} vs {len(t)}")
        return Permutation._raw(tuple([s[i] for i in t]))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.img)
        for i, j in enumerate(self.img):
            inv[j] = i
        return Permutation._raw(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = Permutation.identity(self.degree)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.img))

    def cycles(self, singletons: bool = False) -> list[tuple[int, ...]]:
        """1-based disjoint cycles, each starting at its smallest point."""
        seen = [False] * len(self.img)
        out = []
        for start in range(len(self.img)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.img[start]
            while j != start:
                seen[j] = True
                cyc.append(j)
                j = self.img[j]
            if len(cyc) > 1 or singletons:
                out.append(tuple(c + 1 for c in cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles(singletons=True)), reverse=True))

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.img == other.img

    def __lt__(self, other: "Permutation") -> bool:
        return self.img < other.img

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.img)
        return self._hash

    def __str__(self) -> str:
        return format_perm(self)

    def __repr__(self) -> str:
        return f"Permutation({format_perm(self)!r}, degree={self.degree})"


def compose(s: Permutation, t: Permutation) -> Permutation:
    """``compose(s, t)(w) = s(t(w))``."""
    return s * t


def hamming_distance(s: Permutation, t: Permutation) -> Fraction:
    """Normalised Hamming distance: fraction of points where ``s`` and ``t`` differ."""
    if s.degree != t.degree:
        raise ValueError(f"degree mismatch: {s.degree} vs {t.degree}")
    return Fraction(sum(a != b for a, b in zip(s.img, t.img)), s.degree)


def support_size(s: Permutation) -> int:
    return sum(i != j for i, j in enumerate(s.img))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_perm(text: str, degree: int | None = None) -> Permutation:
    """Parse cycle form ``"(1 2 3)(4 5)"`` or image-line form ``"2 1 3"``.

    Without ``degree``, cycle form takes the largest point mentioned (singleton
    cycles included) as the degree.
    """
    text = text.strip()
    if text.startswith("("):
        rest = _CYCLE_RE.sub("", text).strip()
        if rest:
            raise ValueError(f"could not parse permutation {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(text):
            pts = [int(tok) for tok in re.split(r"[\s,]+", body.strip()) if tok]
            if pts:
                cycles.append(pts)
        largest = max((max(c) for c in cycles), default=1)
        if degree is None:
            degree = largest
        if largest > degree:
            raise ValueError(f"point {largest} exceeds degree {degree}")
        return Permutation.from_cycles(cycles, degree)
    images = [int(tok) for tok in text.split()]
    if degree is not None and len(images) != degree:
        raise ValueError(f"expected {degree} images, got {len(images)}")
    return Permutation.from_images(images)


def format_perm(p: Permutation, with_degree: bool = True) -> str:
    """Cycle form.  When the last point is fixed it is written as a singleton
    cycle ``(N)`` so that the text determines the degree."""
    cycles = p.cycles()
    if with_degree and p.img[-1] == p.degree - 1:
        cycles.append((p.degree,))
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def alternating_elements(degree: int) -> list[Permutation]:
    """All even permutations of the given degree, in lexicographic image order."""
    from itertools import permutations

    out = []
    for img in permutations(range(degree)):
        inversions = sum(img[i] > img[j] for i in range(degree) for j in range(i + 1, degree))
        if inversions % 2 == 0:
            out.append(Permutation._raw(img))
    return out


class PermGroup:
    """Group generated by permutations of a common degree.

    The stabilizer chain is built on first use by deterministic Schreier-Sims and
    cached.  Build it (``order()``) before sharing the group between threads.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generating set")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise ValueError(f"generator of degree {g.degree} in a group of degree {degree}")
        self.degree = degree
        self.generators = gens
        self._base: list[int] | None = None
        self._strong: list[list[Permutation]] = []
        # transversal[i][p] = (u, u^-1) with u mapping base[i] to p
        self._transversal: list[dict[int, tuple[Permutation, Permutation]]] = []
        self._tested: list[set[tuple[int, int]]] = []

    def _extend_orbit(self, i: int, new_gen: Permutation | None = None) -> None:
        table = self._transversal[i]
        gens = self._strong[i]
        if not table:
            b = self._base[i]
            ident = Permutation.identity(self.degree)
            table[b] = (ident, ident)
            queue = deque([b])
        else:
            # only the new generator needs applying to the old points
            queue = deque()
            for p in list(table):
                q = new_gen.img[p]
                if q not in table:
                    u = new_gen * table[p][0]
                    table[q] = (u, u.inverse())
                    queue.append(q)
        while queue:
            p = queue.popleft()
            u = table[p][0]
            for s in gens:
                q = s.img[p]
                if q not in table:
                    v = s * u
                    table[q] = (v, v.inverse())
                    queue.append(q)

    def _sift(self, h: Permutation, start: int) -> tuple[Permutation, int]:
        for i in range(start, len(self._base)):
            q = h.img[self._base[i]]
            entry = self._transversal[i].get(q)
            if entry is None:
                return h, i
            h = entry[1] * h
        return h, len(self._base)

    def _add_level(self, g: Permutation) -> None:
        moved = next(i for i, j in enumerate(g.img) if i != j)
        self._base.append(moved)
        self._strong.append([])
        self._transversal.append({})
        self._tested.append(set())

    def _build(self) -> None:
        if self._base is not None:
            return
        self._base = []
        self._tested: list[set[tuple[int, int]]] = []
        gens = [g for g in self.generators if not g.is_identity()]
        for g in gens:
            if all(g.img[b] == b for b in self._base):
                self._add_level(g)
        for g in gens:
            for i in range(len(self._base)):
                self._strong[i].append(g)
                if g.img[self._base[i]] != self._base[i]:
                    break
        for i in range(len(self._base)):
            self._extend_orbit(i)
        # Sims' algorithm: level i is complete once every Schreier generator
        # sifts through levels i+1.. to the identity.  A pair that sifted once
        # keeps sifting, since the deeper groups only grow.
        i = len(self._base) - 1
        while i >= 0:
            jump = self._process_level(i)
            i = i - 1 if jump is None else jump

    def _process_level(self, i: int) -> int | None:
        table = self._transversal[i]
        tested = self._tested[i]
        strong = self._strong[i]
        for p in list(table):
            u = table[p][0]
            for k, s in enumerate(strong):
                if (p, k) in tested:
                    continue
                tested.add((p, k))
                h = table[s.img[p]][1] * (s * u)
                if h.is_identity():
                    continue
                h, j = self._sift(h, i + 1)
                if h.is_identity():
                    continue
                if j == len(self._base):
                    self._add_level(h)
                for level in range(i + 1, j + 1):
                    self._strong[level].append(h)
                    self._extend_orbit(level, h)
                return j
        return None

    @property
    def base(self) -> list[int]:
        """1-based base points of the stabilizer chain."""
        self._build()
        return [b + 1 for b in self._base]

    def order(self) -> int:
        self._build()
        out = 1
        for table in self._transversal:
            out *= len(table)
        return out

    def contains(self, s: Permutation) -> bool:
        if s.degree != self.degree:
            raise ValueError(f"degree mismatch: {s.degree} vs {self.degree}")
        self._build()
        h, _ = self._sift(s, 0)
        return h.is_identity()

    __contains__ = contains


def group_order(g: PermGroup) -> int:
    return g.order()


def contains(g: PermGroup, s: Permutation) -> bool:
    return g.contains(s)


def closure_enumerate(
    generators: Sequence[T],
    mul: Callable[[T, T], T],
    cap: int,
    identity: T | None = None,
) -> list[T]:
    """Breadth-first closure of ``generators`` under ``mul``.

    Starts from ``identity`` when given; otherwise from the generators (which
    for a finite group reaches the identity anyway).  Raises ``CapExceeded``
    as soon as more than ``cap`` elements are found.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    start = [identity] if identity is not None else list(dict.fromkeys(generators))
    seen = set(start)
    out = list(start)
    if len(out) > cap:
        raise CapExceeded(f"closure has more than {cap} elements")
    queue = deque(out)
    while queue:
        x = queue.popleft()
        for g in generators:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                out.append(y)
                if len(out) > cap:
                    raise CapExceeded(f"closure has more than {cap} elements")
                queue.append(y)
    return out


def regular_representation(elements: Sequence[T], mul: Callable[[T, T], T]) -> dict[T, Permutation]:
    """Left regular representation ``g -> (e_i -> g e_i)`` on the listed elements.

    Point ``i+1`` of the returned permutations stands for ``elements[i]``.
    """
    index = {e: i for i, e in enumerate(elements)}
    if len(index) != len(elements):
        raise ValueError("duplicate elements")
    out = {}
    for g in elements:
        img = []
        for e in elements:
            k = index.get(mul(g, e))
            if k is None:
                raise NotClosed(f"product of {g!r} and {e!r} not among the elements")
            img.append(k)
        if len(set(img)) != len(img):
            raise NotClosed(f"left multiplication by {g!r} is not injective")
        out[g] = Permutation._raw(tuple(img))
    return out


def centralizer_order(s: Permutation) -> int:
    """Order of the centralizer of ``s`` in the full symmetric group."""
    counts: dict[int, int] = {}
    for length in s.cycle_type():
        counts[length] = counts.get(length, 0) + 1
    out = 1
    for length, c in counts.items():
        out *= length ** c * math.factorial(c)
    return out


def alt_conjugator_count(x: Permutation, y: Permutation) -> int:
    """Number of even ``h`` with ``h x h^-1 = y``, for even ``x`` and ``y``."""
    tx, ty = x.cycle_type(), y.cycle_type()
    if tx != ty:
        return 0
    z = centralizer_order(x)
    if any(length % 2 == 0 for length in tx) or len(set(tx)) < len(tx):
        # the centralizer holds an odd permutation, so the class does not split
        return z // 2
    # class splits: the conjugator matching cycles in sorted order is unique up
    # to the (even) centralizer, so its parity decides
    cx = sorted(x.cycles(singletons=True), key=len)
    cy = sorted(y.cycles(singletons=True), key=len)
    img = [0] * x.degree
    for a, b in zip(cx, cy):
        for p, q in zip(a, b):
            img[p - 1] = q - 1
    return z if Permutation._raw(tuple(img)).is_even() else 0
