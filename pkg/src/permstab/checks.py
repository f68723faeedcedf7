"""The finite verification suite: each check returns a :class:`CheckResult`.

Checks that depend on a sequence spec take a :class:`NeumannGroup`; they
report ``skip`` when the sequence cannot host the instance (too few coordinates,
enumeration above the cap) instead of failing.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .lamplighter import evaluate_word_W
from .lef import lef_certificate, three_way_agreement
from .neumann import NeumannGroup
from .perm import (CapExceeded, Permutation, PermGroup, closure_enumerate, hamming_distance,
                   regular_representation, support_size)
from .seqgen import GrowthTarget, generate, p, q, verify_sequence
from .stability import (PermTuple, global_defect, is_almost_solution, is_solution,
                        pad_block_solution, sample_and_substitute, stability_cost)
from .words import FreeWord, RelationSet, ball

CAP = 100_000


@dataclass
class CheckResult:
    key: str
    title: str
    status: str  # pass | fail | skip
    detail: str
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        return {"key": self.key, "title": self.title, "status": self.status,
                "detail": self.detail, "seconds": round(self.seconds, 3)}


class Skip(Exception):
    pass


def _run(key: str, title: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    t = time.perf_counter()
    try:
        ok, detail = fn()
        status = "pass" if ok else "fail"
    except (Skip, CapExceeded) as exc:
        status, detail = "skip", str(exc)
    return CheckResult(key, title, status, detail, time.perf_counter() - t)


# -- 1 ---------------------------------------------------------------------------

def check_metric() -> CheckResult:
    def body():
        perms = [Permutation._raw(p) for p in itertools.permutations(range(4))]
        n = 0
        bad = 0
        for a in perms:
            for b in perms:
                dab = hamming_distance(a, b)
                if (dab == 0) != (a == b):
                    bad += 1
                for c in perms:
                    n += 1
                    if hamming_distance(c * a, c * b) != dab or hamming_distance(a * c, b * c) != dab:
                        bad += 1
                    if hamming_distance(a, c) > dab + hamming_distance(b, c):
                        bad += 1
        return bad == 0, f"{n} triples, {bad} violations"
    return _run("metric", "Hamming metric is a bi-invariant metric on Sym(4)", body)


# -- 2 ---------------------------------------------------------------------------

def check_generation(group: NeumannGroup, max_degree: int = 37) -> CheckResult:
    def body():
        spec = group.spec
        done = []
        for n in range(1, spec.horizon + 1):
            d = spec.d(n)
            if d > max_degree:
                continue
            order = PermGroup(group.generator_images(n)).order()
            done.append((d, order == math.factorial(d) // 2))
        if not done:
            raise Skip(f"no coordinate with d(n) <= {max_degree}")
        bad = [d for d, ok in done if not ok]
        return not bad, f"degrees {[d for d, _ in done]}; failures {bad}"
    return _run("generation", "<alpha_n, beta_n> = Alt(d(n))", body)


# -- 3 ---------------------------------------------------------------------------

def check_local_word_problem(group: NeumannGroup, l: int = 4) -> CheckResult:
    def body():
        spec = group.spec
        coords = [n for n in range(1, spec.horizon + 1) if spec.clears(n, l)]
        if not coords:
            raise Skip(f"no coordinate clears r, d-2r >= {2 * l + 1}")
        words = list(ball(l))
        bad = 0
        for w in words:
            in_w = evaluate_word_W(w).is_identity()
            g = group.element(w)
            bad += sum(g.coordinate(n).is_identity() != in_w for n in coords)
        return bad == 0, f"{len(words)} words x coordinates {coords}, {bad} mismatches"
    return _run("local-word-problem", "short words: trivial in Alt(d(n)) iff trivial in W", body)


# -- 4 ---------------------------------------------------------------------------

def check_lm_structure(group: NeumannGroup, m_max: int = 2, cap: int = CAP) -> CheckResult:
    def body():
        spec = group.spec
        stop = spec.horizon + 1
        parts = []
        bad = 0
        for m in range(m_max + 1):
            elements = group.lm_elements(m, cap, start=1, stop=stop)
            qualifying = [n for n in range(1, stop) if spec.clears(n, m)]
            for x in elements:
                trivial_tail = x.tail.is_identity()
                for n in range(1, stop):
                    c = x.coordinate(n)
                    if support_size(c) > 6 * m + 3:
                        bad += 1
                    if n in qualifying and c.is_identity() != trivial_tail:
                        bad += 1
            parts.append(f"|L_{m}| = {len(elements)}")
        return bad == 0, ", ".join(parts) + f"; {bad} violations"
    return _run("lm-structure", "L_m: tau(l) = e iff pi_n(l) = e, supp(pi_n(l)) <= 6m+3", body)


# -- 5 ---------------------------------------------------------------------------

def pi1_orders(group: NeumannGroup, m_max: int) -> list[int]:
    """``|pi_1(L_m)|`` for ``m = 0..m_max``."""
    a, b = group.generator_images(1)
    out = []
    for m in range(m_max + 1):
        gens = [a ** j * b * a ** -j for j in range(-m, m + 1)]
        out.append(PermGroup(gens, a.degree).order())
    return out


def check_pi1_growth(group: NeumannGroup, max_degree: int = 13) -> CheckResult:
    def body():
        d = group.spec.d(1)
        if d > max_degree:
            raise Skip(f"d(1) = {d} is above {max_degree}")
        bound = math.ceil(d * math.log(d) / math.log(2))
        orders = pi1_orders(group, bound)
        full = math.factorial(d) // 2
        monotone = all(x <= y for x, y in zip(orders, orders[1:]))
        reached = full in orders
        first = orders.index(full) if reached else None
        return monotone and reached, f"orders {orders}; Alt({d}) first reached at m = {first} <= {bound}"
    return _run("pi1-growth", "|pi_1(L_m)| grows to |Alt(d(1))| by m = ceil(d log d / log 2)", body)


# -- 6 ---------------------------------------------------------------------------

def check_folner(group: NeumannGroup, params=((1, 2), (2, 1)), cap: int = CAP) -> CheckResult:
    def body():
        bad = []
        parts = []
        for n, m in params:
            ra = group.folner_ratio(n, m, "a", cap)
            rb = group.folner_ratio(n, m, "b", cap)
            parts.append(f"(n={n}, m={m}): a -> {ra}, b -> {rb}")
            if ra != Fraction(1, 2 * m + 1) or rb != 0:
                bad.append((n, m))
        return not bad, "; ".join(parts)
    return _run("folner", "F_n boundary ratios: 1/(2m+1) for alpha, 0 for beta", body)


# -- 7 ---------------------------------------------------------------------------

def check_future_hom(group: NeumannGroup, n: int = 2, m: int = 1, cap: int = CAP) -> CheckResult:
    def body():
        if n < group.threshold(m):
            raise Skip(f"needs n >= threshold({m}) = {group.threshold(m)}")
        F = group.folner_set(n, m, cap)
        image = {group.phi(f, n, m) for f in F}
        order = group.quotient_order(n, m)
        ok = len(image) == len(F) == order
        return ok, f"|F_{n}| = {len(F)}, |phi(F_{n})| = {len(image)}, |P_{n}| = {order}"
    return _run("future-hom", "phi_n restricted to F_n is a bijection onto P_n", body)


# -- 8 ---------------------------------------------------------------------------

def check_conjugation(group: NeumannGroup, g: str = "aBA", H: tuple[str, ...] = ("b",),
                      ns: tuple[int, ...] = (1, 2, 3), cap: int = CAP) -> CheckResult:
    def body():
        from .neumann import l_level
        m = l_level(FreeWord.parse(g))
        parts = []
        ok = True
        densities = []
        for n in ns:
            mn = n  # m_n = n
            dens = group.conjugation_density(g, n, mn, cap)
            bound = Fraction(2 * (mn - m) + 1, 2 * mn + 1)
            ok &= dens >= bound
            pn = group.cosofic_approximant(list(H), n, mn, tests=[g], cap=cap).densities[g]
            densities.append(pn)
            parts.append(f"n={n}: |E|/|F| = {dens} >= {bound}, p_n = {pn}")
        ok &= all(x >= y for x, y in zip(densities, densities[1:])) and densities[-1] == 0
        return ok, "; ".join(parts)
    return _run("conjugation", "conjugation density bound and p_n(g) decreasing to 0", body)


# -- 9, 10 -------------------------------------------------------------------------

def regular_tuple(x: Permutation, y: Permutation) -> PermTuple:
    """The left regular representation of ``<x, y>`` as a tuple on ``|<x, y>|`` points."""
    elements = closure_enumerate([x, y], Permutation.__mul__, CAP, Permutation.identity(x.degree))
    reg = regular_representation(elements, Permutation.__mul__)
    return PermTuple(reg[x], reg[y])


def padded_instance(delta: Fraction = Fraction(1, 3)):
    """Sym(3) acting regularly, padded so that ``[x, y]`` moves a fraction in (delta/2, delta)."""
    psi = regular_tuple(Permutation.from_cycles([(1, 2)], 3), Permutation.from_cycles([(1, 2, 3)], 3))
    w1 = FreeWord.parse("abAB")
    padded = pad_block_solution(psi, w1, delta)
    E = RelationSet(["aa", "bbb", "abab", "abAB"])
    return psi, padded, E


def check_tester(trials: int = 1000, delta: Fraction = Fraction(1, 3),
                 confidence: Fraction = Fraction(99, 100)) -> CheckResult:
    def body():
        psi, padded, E = padded_instance(delta)
        rho = padded.tuple
        dstar = padded.violation
        passes = 0
        replay_bad = 0
        n = None
        for seed in range(trials):
            v = sample_and_substitute(rho, E, delta, confidence, seed)
            n = v.samples_per_relation
            if v.passed:
                passes += 1
            elif not v.replay(rho):
                replay_bad += 1
        pbound = (1 - float(dstar)) ** n
        limit = pbound + 3 * math.sqrt(pbound / trials)
        rate = passes / trials
        E0 = RelationSet(["aa", "bbb", "abab"])
        genuine = sum(sample_and_substitute(psi, E0, delta, confidence, s).passed for s in range(trials))
        ok = rate <= limit and genuine == trials and replay_bad == 0
        return ok, (f"d* = {dstar}, n = {n}, pass rate {rate:.4f} <= {limit:.4f}; "
                    f"genuine {genuine}/{trials}; {replay_bad} bad witnesses")
    return _run("tester", "Sample-and-Substitute rejection statistics", body)


def padding_cases() -> list[tuple[Fraction, PermTuple, FreeWord]]:
    def cyclic(k):
        return regular_tuple(Permutation.from_cycles([range(1, k + 1)], k), Permutation.identity(k))
    sym3 = regular_tuple(Permutation.from_cycles([(1, 2)], 3), Permutation.from_cycles([(1, 2, 3)], 3))
    alt4 = regular_tuple(Permutation.from_cycles([(1, 2, 3)], 4), Permutation.from_cycles([(1, 2), (3, 4)], 4))
    x, comm = FreeWord.parse("a"), FreeWord.parse("abAB")
    F = Fraction
    return [
        (F(1, 3), cyclic(3), x), (F(1, 8), cyclic(5), x), (F(1, 50), sym3, comm),
        (F(1, 2), sym3, comm), (F(2, 3), cyclic(2), x), (F(3, 4), alt4, comm),
        (F(1, 10), alt4, x), (F(9, 10), cyclic(7), x), (F(1, 7), cyclic(4), x),
        (F(99, 100), sym3, x),
    ]


def check_padding() -> CheckResult:
    def body():
        bad = []
        for delta, psi, w1 in padding_cases():
            res = pad_block_solution(psi, w1, delta)
            n = psi.degree
            ok = (delta / 2 < res.ratio < delta and res.violation == res.ratio and res.violation > delta / 2
                  and res.tuple.sigma_x.img[:n] == psi.sigma_x.img
                  and res.tuple.sigma_y.img[:n] == psi.sigma_y.img)
            if not ok:
                bad.append((delta, n))
        return not bad, f"{len(padding_cases())} cases, failures {bad}"
    return _run("padding", "block padding puts d(Psi(w1), id) in (delta/2, delta)", body)


# -- 11 ----------------------------------------------------------------------------

def naive_global_defect(rho: PermTuple, R: RelationSet) -> Fraction:
    """Minimum distance to a solution, by a plain scan of ``Sym(N)^2``."""
    N = rho.degree
    perms = [Permutation._raw(p) for p in itertools.permutations(range(N))]
    best = None
    for a in perms:
        for b in perms:
            if is_solution(PermTuple(a, b), R):
                v = hamming_distance(rho.sigma_x, a) + hamming_distance(rho.sigma_y, b)
                if best is None or v < best:
                    best = v
    return best


def check_defects(samples: int = 50, seed: int = 0) -> CheckResult:
    def body():
        R = RelationSet(["abAB"])
        bad = 0
        pairs_scanned = {}
        for N in range(1, 5):
            perms = [Permutation._raw(p) for p in itertools.permutations(range(N))]
            tuples = [PermTuple(a, b) for a in perms for b in perms]
            feasible = [is_solution(phi, R) for phi in tuples]
            dist = {(s, t): sum(x != y for x, y in zip(s.img, t.img)) for s in perms for t in perms}
            for rho, sol in zip(tuples, feasible):
                got = global_defect(rho, R).value
                if (got == 0) != sol:
                    bad += 1
                # every (rho, phi) pair once: the minimum over feasible phi must match
                best = min(dist[rho.sigma_x, phi.sigma_x] + dist[rho.sigma_y, phi.sigma_y]
                           for phi, ok in zip(tuples, feasible) if ok)
                pairs_scanned[N] = pairs_scanned.get(N, 0) + len(tuples)
                if Fraction(best, N) != got:
                    bad += 1
        rng = random.Random(seed)
        perms5 = [Permutation._raw(p) for p in itertools.permutations(range(5))]
        disagree = 0
        solutions = [(a, b) for a in perms5 for b in perms5 if (a * b) == (b * a)]
        for _ in range(samples):
            rho = PermTuple(rng.choice(perms5), rng.choice(perms5))
            ref = min(hamming_distance(rho.sigma_x, a) + hamming_distance(rho.sigma_y, b) for a, b in solutions)
            if global_defect(rho, R).value != ref:
                disagree += 1
        return bad == 0 and disagree == 0, (f"(rho, phi) pairs scanned per N: {pairs_scanned}, {bad} mismatches; "
                                            f"{samples} samples at N = 5, {disagree} disagreements")
    return _run("defects", "global defect is 0 exactly on solutions; enumerators agree", body)


# -- 12 ----------------------------------------------------------------------------

def check_seqgen(N: int = 12, C: int = 79) -> CheckResult:
    def body():
        spec = generate(GrowthTarget("one", C), N)
        rep = verify_sequence(spec, N)
        ok = (rep.theorem_grade and not rep.pair_violations and rep.pair_checks == 2 * N * (N - 1)
              and q(1) == 9 and p(1) == 108)
        return ok, (f"d = {[spec.d(n) for n in range(1, N + 1)]}, r = {[spec.r(n) for n in range(1, N + 1)]}, "
                    f"{rep.pair_checks} congruence checks, {len(rep.pair_violations)} violations")
    return _run("seqgen", "generated (d, r) meets primality, bounds, (a) and (b)", body)


# -- 13 ----------------------------------------------------------------------------

def check_lef(group: NeumannGroup, ls: tuple[int, ...] = (1, 2)) -> CheckResult:
    def body():
        spec = group.spec
        if spec.horizon < 4 * max(ls) + 1 and spec.target is None:
            raise Skip(f"needs coordinates up to {4 * max(ls) + 1}")
        parts = []
        ok = True
        for l in ls:
            cert = lef_certificate(group, l)
            agree = three_way_agreement(group, l)
            ok &= not agree and cert.substitution is not None
            parts.append(f"l={l}: {len(cert.projection.words)} words, "
                         f"{cert.projection.distinct_elements} elements, three-way mismatches {len(agree)}")
        psi = regular_tuple(Permutation.from_cycles([(1, 2)], 3), Permutation.from_cycles([(1, 2, 3)], 3))
        elements = closure_enumerate([psi.sigma_x, psi.sigma_y], Permutation.__mul__, CAP,
                                     Permutation.identity(psi.degree))
        reg = regular_representation(elements, Permutation.__mul__)
        ident = elements[0]
        dist_ok = all(hamming_distance(reg[g], Permutation.identity(len(elements))) == 1
                      for g in elements if g != ident)
        ok &= dist_ok
        parts.append(f"regular images at distance 1: {dist_ok}")
        return ok, "; ".join(parts)
    return _run("lef", "local embeddings: projection and substitution", body)


# -- 14 ----------------------------------------------------------------------------

def check_free_no_cost(trials: int = 100, seed: int = 0) -> CheckResult:
    def body():
        rng = random.Random(seed)
        E = RelationSet()
        passes = 0
        for s in range(trials):
            N = rng.randint(1, 8)
            pts = list(range(N))
            rng.shuffle(pts)
            a = Permutation._raw(tuple(pts))
            rng.shuffle(pts)
            rho = PermTuple(a, Permutation._raw(tuple(pts)))
            passes += sample_and_substitute(rho, E, Fraction(1, 10), seed=s).passed
            passes -= not is_almost_solution(rho, Fraction(1, 10), E)
        cost = stability_cost(E, Fraction(1, 10))
        return passes == trials and cost == 0, f"{passes}/{trials} passed, cost {cost}"
    return _run("free-no-cost", "empty relation set: every input passes at cost 0", body)


def run_suite(group: NeumannGroup) -> list[CheckResult]:
    return [
        check_metric(),
        check_generation(group),
        check_local_word_problem(group),
        check_lm_structure(group),
        check_pi1_growth(group),
        check_folner(group),
        check_future_hom(group),
        check_conjugation(group),
        check_tester(),
        check_padding(),
        check_defects(),
        check_seqgen(),
        check_lef(group),
        check_free_no_cost(),
    ]
