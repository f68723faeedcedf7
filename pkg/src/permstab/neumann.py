"""Generalized B.H. Neumann groups G(d, r) inside prod_n Alt(d(n)).

An element is named by a word in ``alpha`` (letter ``a``) and ``beta``
(letter ``b``).  Its coordinates ``pi_n`` and its lamplighter image ``tau``
are computed on demand.  For a word of length ``l`` every coordinate
``n >= threshold(l)`` is trivial exactly when ``tau`` is, so finitely many
coordinates plus ``tau`` decide the word problem.

Enumerations work with :class:`Projected` images ``(pi_start, ..., pi_{stop-1}, tau)``.
That map is a homomorphism; it is faithful on ``G_n L_m <alpha>`` once
``start <= n`` and ``stop >= max(n, threshold(m))``.  Choosing ``start = n``
instead quotients out ``G_n`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lamplighter import (IDENTITY as W_IDENTITY, FiniteLamplighterElement,
                          LamplighterElement, evaluate_word_W, project_finite)
from .perm import (CapExceeded, Permutation, alt_conjugator_count,
                   closure_enumerate)
from .seqgen import SequenceSpec
from .words import FreeWord, commutator, evaluate

DEFAULT_CAP = 200_000

ALPHA = FreeWord.gen(1)
BETA = FreeWord.gen(2)


class NotInKernel(ValueError):
    pass


class NotInLInfinity(ValueError):
    pass


@dataclass(frozen=True)
class Projected:
    """Image of an element under ``pi_start x ... x pi_{stop-1} x tau``."""

    start: int
    coords: tuple[Permutation, ...]
    tail: LamplighterElement

    @property
    def stop(self) -> int:
        return self.start + len(self.coords)

    def __mul__(self, other: "Projected") -> "Projected":
        return Projected(self.start, tuple([x * y for x, y in zip(self.coords, other.coords)]),
                         self.tail * other.tail)

    def inverse(self) -> "Projected":
        return Projected(self.start, tuple(x.inverse() for x in self.coords), self.tail.inverse())

    def is_identity(self) -> bool:
        return self.tail.is_identity() and all(c.is_identity() for c in self.coords)

    def coordinate(self, n: int) -> Permutation:
        return self.coords[n - self.start]

    def restrict(self, start: int) -> "Projected":
        """Drop the coordinates below ``start``."""
        return Projected(start, self.coords[start - self.start:], self.tail)


@dataclass(frozen=True)
class FiniteQuotientElement:
    """Element of ``P_n = Alt(d(1)) x ... x Alt(d(n-1)) x W_m``."""

    coords: tuple[Permutation, ...]
    tail: FiniteLamplighterElement

    def __mul__(self, other: "FiniteQuotientElement") -> "FiniteQuotientElement":
        return FiniteQuotientElement(tuple([x * y for x, y in zip(self.coords, other.coords)]),
                                     self.tail * other.tail)

    def inverse(self) -> "FiniteQuotientElement":
        return FiniteQuotientElement(tuple(x.inverse() for x in self.coords), self.tail.inverse())

    def is_identity(self) -> bool:
        return self.tail.is_identity() and all(c.is_identity() for c in self.coords)


def l_level(w: FreeWord) -> int | None:
    """Least ``m`` with ``w`` in ``L_m``, read off the word; None if ``w`` is not in ``L_inf``.

    ``w = alpha^k1 beta^e1 alpha^k2 ...`` with zero alpha-exponent sum is the
    product of the ``alpha^s beta^e alpha^-s`` over the prefix sums ``s``.
    """
    s = 0
    level = 0
    for k in w.letters:
        if abs(k) == 1:
            s += k
        else:
            level = max(level, abs(s))
    return level if s == 0 else None


def lm_generator_words(m: int) -> list[FreeWord]:
    """``alpha^j beta alpha^-j`` for ``-m <= j <= m``."""
    return [BETA.conjugate(ALPHA ** j) for j in range(-m, m + 1)]


class NeumannGroup:
    """``G(d, r)`` for a sequence spec meeting the standing assumptions."""

    def __init__(self, spec: SequenceSpec):
        spec.check_standing()
        self.spec = spec
        self._gens: dict[int, tuple[Permutation, Permutation]] = {}
        self._lm_cache: dict[tuple[int, int, int], list[Projected]] = {}

    # -- generators and elements -------------------------------------------------

    def generator_images(self, n: int) -> tuple[Permutation, Permutation]:
        if n not in self._gens:
            d, r = self.spec.d(n), self.spec.r(n)
            alpha = Permutation.from_cycles([range(1, d + 1)], d)
            beta = Permutation.from_cycles([(1, 1 + r, 1 + 2 * r)], d)
            self._gens[n] = (alpha, beta)
        return self._gens[n]

    def element(self, word: "FreeWord | str | NeumannElement") -> "NeumannElement":
        if isinstance(word, NeumannElement):
            return word
        if isinstance(word, str):
            word = FreeWord.parse(word)
        return NeumannElement(self, word)

    @property
    def alpha(self) -> "NeumannElement":
        return self.element(ALPHA)

    @property
    def beta(self) -> "NeumannElement":
        return self.element(BETA)

    def x(self, m: int) -> "NeumannElement":
        """``[alpha^r(m) beta alpha^-r(m), beta]``: nontrivial at ``m``, trivial beyond."""
        return self.element(commutator(BETA.conjugate(ALPHA ** self.spec.r(m)), BETA))

    def threshold(self, l: int) -> int:
        return self.spec.threshold(l)

    def project(self, word: FreeWord, start: int, stop: int) -> Projected:
        """Image of a word under ``pi_start x ... x pi_{stop-1} x tau``."""
        a = Projected(start, tuple(self.generator_images(n)[0] for n in range(start, stop)),
                      LamplighterElement.a())
        b = Projected(start, tuple(self.generator_images(n)[1] for n in range(start, stop)),
                      LamplighterElement.b(0))
        ident = self.projected_identity(start, stop)
        return evaluate(word, [a, b], Projected.__mul__, Projected.inverse, ident)

    def projected_identity(self, start: int, stop: int) -> Projected:
        return Projected(start, tuple(Permutation.identity(self.spec.d(n)) for n in range(start, stop)),
                         W_IDENTITY)

    # -- finite subgroups ---------------------------------------------------------

    def lm_elements(self, m: int, cap: int = DEFAULT_CAP, start: int = 1,
                    stop: int | None = None) -> list[Projected]:
        """All of ``L_m`` as projected images.

        The default ``stop = threshold(m)`` is the canonical finite form: it is
        faithful on ``L_m``.  With ``start > 1`` the result is ``L_m`` modulo
        ``G_start`` (faithful as a set of cosets when ``stop >= threshold(m)``).
        """
        if stop is None:
            stop = max(start, self.threshold(m))
        key = (m, start, stop)
        if key not in self._lm_cache:
            gens = [self.project(w, start, stop) for w in lm_generator_words(m)]
            self._lm_cache[key] = closure_enumerate(gens, Projected.__mul__, cap,
                                                    self.projected_identity(start, stop))
        elements = self._lm_cache[key]
        if len(elements) > cap:
            raise CapExceeded(f"|L_{m}| = {len(elements)} exceeds cap {cap}")
        return elements

    def alt_elements(self, n: int, cap: int = DEFAULT_CAP) -> list[Permutation]:
        """``pi_n(G) = <alpha_n, beta_n>``, which is Alt(d(n)) for prime d(n)."""
        a, b = self.generator_images(n)
        return closure_enumerate([a, b], Permutation.__mul__, cap, Permutation.identity(a.degree))

    def gn_order(self, n: int) -> int:
        """``|G_n| = prod_{k<n} d(k)!/2``."""
        return math.prod(math.factorial(self.spec.d(k)) // 2 for k in range(1, n))

    def gn_elements(self, n: int, cap: int = DEFAULT_CAP) -> list[tuple[Permutation, ...]]:
        if self.gn_order(n) > cap:
            raise CapExceeded(f"|G_{n}| = {self.gn_order(n)} exceeds cap {cap}")
        out: list[tuple[Permutation, ...]] = [()]
        for k in range(1, n):
            out = [g + (x,) for g in out for x in self.alt_elements(k, cap)]
        return out

    def folner_stop(self, n: int, m: int) -> int:
        return max(n, self.threshold(m))

    def folner_set(self, n: int, m: int, cap: int = DEFAULT_CAP, reduced: bool = False) -> list[Projected]:
        """``F_n = {g l alpha^j : g in G_n, l in L_m, |j| <= m}``.

        ``reduced=True`` returns ``F_n`` modulo ``G_n`` (images from coordinate
        ``n`` on), which has ``|F_n| / |G_n|`` elements.
        """
        stop = self.folner_stop(n, m)
        start = n if reduced else 1
        lm = self.lm_elements(m, cap, start=n, stop=stop)
        alpha = self.project(ALPHA, start, stop)
        powers = [self.projected_identity(start, stop)]
        for _ in range(m):
            powers.append(powers[-1] * alpha)
        ainv = alpha.inverse()
        neg = [self.projected_identity(start, stop)]
        for _ in range(m):
            neg.append(neg[-1] * ainv)
        shifts = neg[:0:-1] + powers
        gn = [()] if reduced else self.gn_elements(n, cap)
        size = len(gn) * len(lm) * len(shifts)
        if size > cap:
            raise CapExceeded(f"|F_{n}| = {size} exceeds cap {cap}")
        out = []
        for g in gn:
            for l in lm:
                base = Projected(start, g + l.coords, l.tail)
                for s in shifts:
                    out.append(base * s)
        return out

    def folner_ratio(self, n: int, m: int, generator: FreeWord | str, cap: int = DEFAULT_CAP,
                     reduced: bool = True) -> Fraction:
        """``|F_n t - F_n| / |F_n|`` for a generator ``t`` (a, A, b or B)."""
        t = FreeWord.parse(generator) if isinstance(generator, str) else generator
        if len(t) != 1:
            raise ValueError("generator must be a single letter")
        elements = self.folner_set(n, m, cap, reduced=reduced)
        members = set(elements)
        if len(members) != len(elements):
            raise AssertionError("Folner set has repeated elements")
        tt = self.project(t, elements[0].start, elements[0].stop)
        outside = sum(1 for f in elements if f * tt not in members)
        return Fraction(outside, len(elements))

    # -- finite quotients ---------------------------------------------------------

    def phi(self, x: Projected, n: int, m: int) -> FiniteQuotientElement:
        """``phi_n = pi_1 x ... x pi_{n-1} x (rho_m o tau)`` on a projected image."""
        if x.start != 1 or x.stop < n:
            raise ValueError("projected image must cover coordinates 1..n-1")
        return FiniteQuotientElement(x.coords[:n - 1], project_finite(x.tail, m))

    def finite_quotient(self, g: "NeumannElement | FreeWord | str", n: int, m: int) -> FiniteQuotientElement:
        g = self.element(g)
        return FiniteQuotientElement(tuple(g.coordinate(k) for k in range(1, n)),
                                     project_finite(g.tau(), m))

    def quotient_order(self, n: int, m: int) -> int:
        """``|P_n| = |G_n| (2m+1) 3^(2m+1)``."""
        return self.gn_order(n) * (2 * m + 1) * 3 ** (2 * m + 1)

    # -- conjugation densities ----------------------------------------------------

    def _level(self, g: "NeumannElement") -> int:
        level = l_level(g.word)
        if level is None:
            raise NotInLInfinity(f"{g.word} is not in L_inf (alpha-exponent sum is nonzero)")
        return level

    def conjugation_density(self, g: "NeumannElement | FreeWord | str", n: int, m: int,
                            cap: int = DEFAULT_CAP) -> Fraction:
        """``|E_n(g)| / |F_n|`` with ``E_n(g) = {f in F_n : f g f^-1 in G_n L_m}``.

        ``E_n(g)`` is a union of left ``G_n``-cosets, so the count runs over
        ``F_n`` modulo ``G_n``.
        """
        g = self.element(g)
        level = self._level(g)
        stop = max(n, self.threshold(level + m))
        lm = self.lm_elements(m, cap, start=n, stop=stop)
        members = set(lm)
        gp = self.project(g.word, n, stop)
        alpha = self.project(ALPHA, n, stop)
        good = 0
        for j in range(-m, m + 1):
            aj = _power(alpha, j)
            conj = aj * gp * aj.inverse()
            for c in lm:
                if c * conj * c.inverse() in members:
                    good += 1
        return Fraction(good, len(lm) * (2 * m + 1))

    def cosofic_approximant(self, H_generators: Sequence["NeumannElement | str"], n: int, m: int,
                            tests: Iterable["NeumannElement | str"] = (),
                            cap: int = DEFAULT_CAP) -> "CosoficApproximant":
        """``K_n = (H cap G_n L_m) N_n`` with ``N_n = ker phi_n``, and the densities
        ``p_n(g) = |{f in F_n : f g f^-1 in H sym-diff K_n}| / |F_n|``.

        ``H = <H_generators>`` must lie in ``L_inf``.  Each ``f = h c alpha^j``
        with ``h in G_n``; the count over ``h`` is done class-wise per
        coordinate (number of even conjugators between two permutations), so
        ``G_n`` itself is never enumerated.
        """
        hs = [self.element(h) for h in H_generators]
        gs = [self.element(g) for g in tests]
        h_level = max((self._level(h) for h in hs), default=0)
        g_level = max((l_level(g.word) or 0 for g in gs), default=0)
        g_level = max(g_level, max((_tail_level(g.word) for g in gs), default=0))
        stop = max(n, self.threshold(max(h_level, m, g_level + m)))
        ident = self.projected_identity(1, stop)
        H = closure_enumerate([self.project(h.word, 1, stop) for h in hs], Projected.__mul__, cap, ident)
        lm_mod = self.lm_elements(m, cap, start=n, stop=stop)
        lm_keys = set(lm_mod)
        h_in_gl = [y for y in H if y.restrict(n) in lm_keys]
        image = frozenset(self.phi(y, n, m) for y in h_in_gl)

        by_tail: dict[Projected, list[Projected]] = {}
        for y in H:
            by_tail.setdefault(y.restrict(n), []).append(y)
        image_by_w: dict[FiniteLamplighterElement, list[FiniteQuotientElement]] = {}
        for t in image:
            image_by_w.setdefault(t.tail, []).append(t)
        in_k = {y for y in H if self.phi(y, n, m) in image}

        densities = {}
        reps = [Projected(1, tuple(Permutation.identity(self.spec.d(k)) for k in range(1, n)) + c.coords,
                          c.tail) for c in lm_mod]
        alpha = self.project(ALPHA, 1, stop)
        total = self.gn_order(n) * len(reps) * (2 * m + 1)
        for g in gs:
            gp = self.project(g.word, 1, stop)
            count = 0
            for j in range(-m, m + 1):
                aj = _power(alpha, j)
                inner = aj * gp * aj.inverse()
                for c in reps:
                    x = c * inner * c.inverse()
                    for y in by_tail.get(x.restrict(n), ()):
                        k = _conjugators(x.coords[:n - 1], y.coords[:n - 1])
                        count += k if y not in in_k else -k
                    for t in image_by_w.get(project_finite(x.tail, m), ()):
                        count += _conjugators(x.coords[:n - 1], t.coords)
            densities[str(g.word)] = Fraction(count, total)
        return CosoficApproximant(n=n, m=m, image=image, densities=densities,
                                  subgroup_order=len(H))


@dataclass
class CosoficApproximant:
    n: int
    m: int
    image: frozenset  # phi_n(H cap G_n L_m); K_n is its preimage
    densities: dict[str, Fraction]
    subgroup_order: int

    def contains(self, group: NeumannGroup, x: Projected) -> bool:
        """Membership of a projected element in ``K_n``."""
        return group.phi(x, self.n, self.m) in self.image


def _power(x: Projected, k: int) -> Projected:
    base = x if k >= 0 else x.inverse()
    out = Projected(x.start, tuple(Permutation.identity(c.degree) for c in x.coords), W_IDENTITY)
    for _ in range(abs(k)):
        out = out * base
    return out


def _tail_level(w: FreeWord) -> int:
    """Largest prefix alpha-exponent at a beta letter, for words outside ``L_inf`` too."""
    s = 0
    level = 0
    for k in w.letters:
        if abs(k) == 1:
            s += k
        else:
            level = max(level, abs(s))
    return max(level, abs(s))


def _conjugators(xs: Sequence[Permutation], ys: Sequence[Permutation]) -> int:
    out = 1
    for x, y in zip(xs, ys):
        out *= alt_conjugator_count(x, y)
        if not out:
            return 0
    return out


@dataclass(eq=False)
class NeumannElement:
    """An element of ``G(d, r)`` named by a reduced word; images are memoized."""

    group: NeumannGroup
    word: FreeWord
    _coords: dict[int, Permutation] = field(default_factory=dict, repr=False)
    _tau: LamplighterElement | None = field(default=None, repr=False)

    def coordinate(self, n: int) -> Permutation:
        if n not in self._coords:
            a, b = self.group.generator_images(n)
            self._coords[n] = evaluate(self.word, [a, b], Permutation.__mul__, Permutation.inverse,
                                       Permutation.identity(a.degree))
        return self._coords[n]

    def tau(self) -> LamplighterElement:
        if self._tau is None:
            self._tau = evaluate_word_W(self.word)
        return self._tau

    def __mul__(self, other: "NeumannElement") -> "NeumannElement":
        return NeumannElement(self.group, self.word * other.word)

    def inverse(self) -> "NeumannElement":
        return NeumannElement(self.group, self.word.inverse())

    def __pow__(self, k: int) -> "NeumannElement":
        return NeumannElement(self.group, self.word ** k)

    def threshold(self) -> int:
        return self.group.threshold(len(self.word))

    def witness(self) -> int | None:
        """First coordinate where the element is nontrivial, or None for the identity."""
        thr = self.threshold()
        for n in range(1, thr):
            if not self.coordinate(n).is_identity():
                return n
        if self.tau().is_identity():
            return None
        return thr

    def is_identity(self) -> bool:
        return self.witness() is None

    def equals(self, other: "NeumannElement") -> bool:
        return (self * other.inverse()).is_identity()

    def kernel_support(self) -> list[tuple[int, Permutation]]:
        """Nontrivial coordinates of an element of ``ker tau``; all lie below the threshold."""
        if not self.tau().is_identity():
            raise NotInKernel(f"tau({self.word}) = {self.tau()} is not trivial")
        out = []
        for n in range(1, self.threshold()):
            c = self.coordinate(n)
            if not c.is_identity():
                out.append((n, c))
        return out

    def __str__(self) -> str:
        return str(self.word)


def coordinate(g: NeumannElement, n: int) -> Permutation:
    return g.coordinate(n)


def tau(g: NeumannElement) -> LamplighterElement:
    return g.tau()
