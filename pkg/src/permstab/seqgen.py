"""The (d, r) sequences defining G(d, r): storage, generation and verification.

Generation follows the recursive recipe for arbitrarily fast residual
finiteness growth: with ``q(n) = 9n^2`` and ``p(n) = 4(q(n) + 17n) + 4``,
``d(n)`` is the least prime with ``d(n) >= max(d(n-1)+1, C n^2, F(p(n+1)))``
and ``r(n)`` is the least integer with ``q(n) < r(n) < q(n) + 17n``,
``3 r(n) < d(n)`` and no forbidden congruence
``r(l) = +-r(m), +-2r(m) mod d(m)`` against any earlier index, in either role.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .primes import LIMIT, PrimalityRangeError, is_prime, next_prime

MIN_C = 31
DEFAULT_C = 79


class HorizonError(RuntimeError):
    """An index beyond what the sequence can materialize or certify."""


class GenerationError(RuntimeError):
    pass


def q(n: int) -> int:
    return 9 * n * n


def p(n: int) -> int:
    return 4 * (q(n) + 17 * n) + 4


def _named_growth(name: str) -> Callable[[int], int]:
    def overflow(x: int) -> int:
        raise OverflowError(f"F({x}) exceeds 64 bits")

    if name in ("one", "const"):
        return lambda x: 1
    if name == "linear":
        return lambda x: x
    if name.startswith("poly:"):
        k = int(name.split(":", 1)[1])
        return lambda x: x ** k if x.bit_length() * k <= 64 else overflow(x)
    if name == "exp":
        return lambda x: 1 << x if x < 64 else overflow(x)
    if name == "tower":
        def tower(x: int) -> int:
            v = 1
            for _ in range(x):
                if v >= 64:
                    overflow(x)
                v = 1 << v
            return v
        return tower
    raise ValueError(f"unknown growth function {name!r}")


@dataclass
class GrowthTarget:
    """A nondecreasing growth target ``F`` and the explicit constant ``C``.

    ``F`` is a built-in name (``one``, ``linear``, ``poly:k``, ``exp``,
    ``tower``) or a step table of ``[x, value]`` breakpoints, ``F(x)`` being
    the value at the last breakpoint ``<= x`` (1 before the first).
    """

    F: str | list[list[int]] = "one"
    C: int = DEFAULT_C
    _fn: Callable[[int], int] = field(init=False, repr=False)

    def __post_init__(self):
        if self.C < MIN_C:
            # below this the r-interval can miss 3r < d already at n = 1
            raise ValueError(f"C must be at least {MIN_C}")
        if isinstance(self.F, str):
            self._fn = _named_growth(self.F)
        else:
            table = sorted((int(x), int(v)) for x, v in self.F)
            values = [v for _, v in table]
            if values != sorted(values):
                raise ValueError("growth table is not nondecreasing")

            def step(x: int) -> int:
                out = 1
                for bx, v in table:
                    if bx > x:
                        break
                    out = v
                return out

            self._fn = step

    def __call__(self, x: int) -> int:
        return self._fn(x)

    def to_json(self) -> dict:
        return {"F": self.F, "C": self.C}


class SequenceSpec:
    """The sequences ``d`` and ``r`` (1-based), possibly extendable on demand.

    Explicit specs are fixed lists; ``tail="monotone"`` declares that beyond
    the listed terms ``r`` and ``d - 2r`` never decrease, which is what lets the
    word problem certify thresholds.  Generated specs extend themselves and
    certify their tail from the generation bounds.
    """

    def __init__(self, d: Sequence[int], r: Sequence[int], tail: str | None = None,
                 target: GrowthTarget | None = None):
        if len(d) != len(r):
            raise ValueError("d and r must have the same length")
        if tail not in (None, "monotone"):
            raise ValueError(f"unknown tail declaration {tail!r}")
        self._d = [int(x) for x in d]
        self._r = [int(x) for x in r]
        self.tail = tail
        self.target = target
        if tail == "monotone":
            gaps = [a - 2 * b for a, b in zip(self._d, self._r)]
            if any(y < x for x, y in zip(gaps, gaps[1:])) or any(
                    y <= x for x, y in zip(self._r, self._r[1:])):
                raise ValueError("tail declared monotone but r or d - 2r decreases")

    @classmethod
    def explicit(cls, d: Sequence[int], r: Sequence[int], tail: str | None = "monotone") -> "SequenceSpec":
        return cls(d, r, tail=tail)

    @property
    def horizon(self) -> int:
        return len(self._d)

    def ensure(self, n: int) -> None:
        if n <= self.horizon:
            return
        if self.target is None:
            raise HorizonError(f"index {n} beyond the explicit horizon {self.horizon}")
        _extend(self._d, self._r, self.target, n)

    def d(self, n: int) -> int:
        if n < 1:
            raise IndexError("indices start at 1")
        self.ensure(n)
        return self._d[n - 1]

    def r(self, n: int) -> int:
        if n < 1:
            raise IndexError("indices start at 1")
        self.ensure(n)
        return self._r[n - 1]

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self._d, self._r))

    def clears(self, n: int, l: int) -> bool:
        """Whether ``r(n)`` and ``d(n) - 2r(n)`` are both at least ``2l + 1``."""
        need = 2 * l + 1
        r = self.r(n)
        return r >= need and self.d(n) - 2 * r >= need

    def _tail_bound(self, n: int) -> int:
        # generated terms have r > 9n^2 and d - 2r >= (d + 2)/3 >= (C n^2 + 2)/3
        return min(q(n) + 1, -(-(self.target.C * n * n + 2) // 3))

    def threshold(self, l: int) -> int:
        """Least ``N`` with ``r(n), d(n) - 2r(n) >= 2l + 1`` for every ``n >= N``."""
        if l < 0:
            raise ValueError("l must be nonnegative")
        need = 2 * l + 1
        if self.target is not None:
            last = 1
            while self._tail_bound(last) < need:
                last += 1
            # every n >= last is certified by the bound; scan the rest
            bad = [n for n in range(1, last) if not self.clears(n, l)]
            return max(bad) + 1 if bad else 1
        if self.tail != "monotone":
            raise HorizonError("threshold needs a certified tail: declare tail='monotone'")
        if not self.clears(self.horizon, l):
            raise HorizonError(
                f"horizon insufficient: no index up to {self.horizon} has r, d - 2r >= {need}")
        bad = [n for n in range(1, self.horizon + 1) if not self.clears(n, l)]
        return max(bad) + 1 if bad else 1

    def check_standing(self, upto: int | None = None) -> None:
        """Raise ValueError unless the materialized terms meet the standing assumptions."""
        upto = self.horizon if upto is None else upto
        problems = [e for e in _standing_entries(self, upto) if not e["ok"]]
        if problems:
            raise ValueError(f"sequence violates standing assumptions: {problems[0]}")

    def to_json(self) -> dict:
        if self.target is not None:
            return {"generated": {**self.target.to_json(), "N": self.horizon},
                    "terms": {"d": self._d, "r": self._r}}
        out: dict = {"explicit": {"d": self._d, "r": self._r}}
        if self.tail:
            out["tail"] = self.tail
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SequenceSpec":
        if "explicit" in data:
            ex = data["explicit"]
            return cls(ex["d"], ex["r"], tail=data.get("tail"))
        if "generated" in data:
            g = data["generated"]
            spec = generate(GrowthTarget(g.get("F", "one"), g.get("C", DEFAULT_C)), g.get("N", 1))
            terms = data.get("terms")
            if terms and (terms["d"] != spec._d[:len(terms["d"])] or
                          terms["r"] != spec._r[:len(terms["r"])]):
                raise ValueError("stored terms disagree with regeneration")
            return spec
        raise ValueError("sequence file needs an 'explicit' or 'generated' section")

    @classmethod
    def load(cls, path: str | Path) -> "SequenceSpec":
        return cls.from_json(json.loads(Path(path).read_text()))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    def __repr__(self) -> str:
        return f"SequenceSpec(d={self._d}, r={self._r}, tail={self.tail!r})"


def _forbidden(r_l: int, r_m: int, d_m: int) -> bool:
    return (r_l - r_m) % d_m == 0 or (r_l + r_m) % d_m == 0 or \
        (r_l - 2 * r_m) % d_m == 0 or (r_l + 2 * r_m) % d_m == 0


def _extend(d: list[int], r: list[int], target: GrowthTarget, upto: int) -> None:
    while len(d) < upto:
        n = len(d) + 1
        try:
            fval = target(p(n + 1))
        except OverflowError as exc:
            raise GenerationError(f"index {n}: {exc}") from None
        except Exception as exc:
            raise GenerationError(f"index {n}: F not callable at p(n+1) = {p(n + 1)}: {exc}") from None
        lower = max(d[-1] + 1 if d else 0, target.C * n * n, fval)
        if lower >= LIMIT:
            raise GenerationError(f"index {n}: d(n) lower bound {lower} exceeds 64 bits")
        try:
            dn = next_prime(lower)
        except PrimalityRangeError as exc:
            raise GenerationError(f"index {n}: {exc}") from None
        rn = None
        for cand in range(q(n) + 1, q(n) + 17 * n):
            if 3 * cand >= dn:
                break
            if any(_forbidden(cand, rm, dm) or _forbidden(rm, cand, dn) for dm, rm in zip(d, r)):
                continue
            rn = cand
            break
        if rn is None:
            raise GenerationError(f"index {n}: no admissible r(n) in ({q(n)}, {q(n) + 17 * n})")
        d.append(dn)
        r.append(rn)


def generate(target: GrowthTarget, N: int) -> SequenceSpec:
    if N < 1:
        raise ValueError("N must be at least 1")
    d: list[int] = []
    r: list[int] = []
    _extend(d, r, target, N)
    spec = SequenceSpec(d, r, target=target)
    return spec


def _standing_entries(spec: SequenceSpec, N: int) -> list[dict]:
    out = []
    for n in range(1, N + 1):
        dn, rn = spec.d(n), spec.r(n)
        try:
            prime = is_prime(dn)
        except PrimalityRangeError:
            prime = None
        checks = {
            "prime": prime,
            "odd_ge_5": dn >= 5 and dn % 2 == 1,
            "d_nondecreasing": n == 1 or dn >= spec.d(n - 1),
            "r_increasing": n == 1 or rn > spec.r(n - 1),
            "r_positive": rn >= 1,
            "three_r_le_d": 3 * rn <= dn,
            "d_ge_2r_plus_1": dn >= 2 * rn + 1,
        }
        out.append({"n": n, "d": dn, "r": rn, **checks, "ok": all(v is True for v in checks.values())})
    return out


@dataclass
class SequenceReport:
    entries: list[dict]
    pair_violations: list[dict]
    pair_checks: int
    toy_grade: bool
    theorem_grade: bool

    def lines(self) -> list[str]:
        out = [json.dumps(e) for e in self.entries]
        out += [json.dumps({"violation": v}) for v in self.pair_violations]
        out.append(json.dumps({"summary": {"toy_grade": self.toy_grade,
                                           "theorem_grade": self.theorem_grade,
                                           "pair_checks": self.pair_checks,
                                           "pair_violations": len(self.pair_violations)}}))
        return out


def verify_sequence(spec: SequenceSpec, N: int, target: GrowthTarget | None = None) -> SequenceReport:
    """Re-derive every condition on the first ``N`` terms from scratch.

    ``toy_grade`` covers the standing assumptions (prime, odd >= 5, d
    nondecreasing, r strictly increasing, 3r <= d, d >= 2r+1).  ``theorem_grade``
    adds the interval condition (a), all congruence conditions (b) and, when a
    growth target is known, the lower bounds on ``d(n)``.
    """
    if N > spec.horizon and spec.target is None:
        raise HorizonError(f"N = {N} exceeds the horizon {spec.horizon}")
    target = target or spec.target
    entries = _standing_entries(spec, N)
    for e in entries:
        n, dn, rn = e["n"], e["d"], e["r"]
        e["interval_a"] = q(n) < rn < q(n) + 17 * n
        e["r_lt_d_over_3"] = 3 * rn < dn
        if target is not None:
            try:
                fval = target(p(n + 1))
            except OverflowError:
                fval = math.inf
            prev = entries[n - 2]["d"] if n > 1 else 0
            e["d_lower_bound"] = dn >= max(prev + 1, target.C * n * n, fval)
    violations = []
    checks = 0
    for l in range(1, N + 1):
        for m in range(1, N + 1):
            if l == m:
                continue
            rl, rm, dm = spec.r(l), spec.r(m), spec.d(m)
            for k in (1, 2):
                checks += 1
                if (rl - k * rm) % dm == 0 or (rl + k * rm) % dm == 0:
                    violations.append({"l": l, "m": m, "k": k,
                                       "detail": f"r({l}) = +-{k} r({m}) mod d({m})"})
    toy = all(e["ok"] for e in entries)
    theorem = toy and not violations and all(
        e["interval_a"] and e["r_lt_d_over_3"] and e.get("d_lower_bound", True) for e in entries)
    return SequenceReport(entries, violations, checks, toy, theorem)
