"""The lamplighter group C3 wr Z and its finite quotients C3 wr Z/(2m+1).

An element is a pair ``(config, shift)`` standing for ``(prod_i b_i^config[i]) * a^shift``,
so that ``(f, k)(g, l) = (f + g(. - k), k + l)`` and ``a^n b_m a^-n = b_{m+n}``.
Lamp exponents live in {0, 1, 2}; zero lamps are never stored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .words import FreeWord, evaluate


@dataclass(frozen=True)
class LamplighterElement:
    config: tuple[tuple[int, int], ...] = ()
    shift: int = 0

    @classmethod
    def make(cls, config: Mapping[int, int] | None = None, shift: int = 0) -> "LamplighterElement":
        items = sorted((i, e % 3) for i, e in (config or {}).items())
        return cls(tuple((i, e) for i, e in items if e), shift)

    @classmethod
    def a(cls, power: int = 1) -> "LamplighterElement":
        return cls((), power)

    @classmethod
    def b(cls, index: int = 0, power: int = 1) -> "LamplighterElement":
        return cls.make({index: power})

    def lamps(self) -> dict[int, int]:
        return dict(self.config)

    def __mul__(self, other: "LamplighterElement") -> "LamplighterElement":
        if not other.config:
            return LamplighterElement(self.config, self.shift + other.shift)
        out = dict(self.config)
        k = self.shift
        for i, e in other.config:
            v = (out.get(i + k, 0) + e) % 3
            if v:
                out[i + k] = v
            else:
                out.pop(i + k, None)
        return LamplighterElement(tuple(sorted(out.items())), k + other.shift)

    def inverse(self) -> "LamplighterElement":
        k = self.shift
        return LamplighterElement(tuple((i - k, (-e) % 3) for i, e in self.config), -k)

    def is_identity(self) -> bool:
        return not self.config and self.shift == 0

    def in_base(self) -> bool:
        """Whether the element lies in the lamp subgroup (shift zero)."""
        return self.shift == 0

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.config)

    def __str__(self) -> str:
        return format_lamplighter(self)


IDENTITY = LamplighterElement()


def multiply(u: LamplighterElement, v: LamplighterElement) -> LamplighterElement:
    return u * v


def evaluate_word_W(w: FreeWord) -> LamplighterElement:
    """Image of ``w`` under x -> a, y -> b_0."""
    return evaluate(w, [LamplighterElement.a(), LamplighterElement.b(0)],
                    LamplighterElement.__mul__, LamplighterElement.inverse, IDENTITY)


def is_identity_W(u: LamplighterElement) -> bool:
    return u.is_identity()


def format_lamplighter(u: LamplighterElement) -> str:
    """``a^k · b_i^e ...``: the element as ``a^k`` times lamps in ascending order.

    Since ``u = lamps * a^k = a^k * (lamps shifted by -k)``, the printed lamp
    indices are the stored ones minus the shift.
    """
    k = u.shift
    terms = [f"b_{i - k}^{e}" for i, e in u.config]
    if not terms:
        return f"a^{k}"
    return f"a^{k} · " + " ".join(terms)


_TERM_RE = re.compile(r"b_(-?\d+)\^([12])")


def parse_lamplighter(text: str) -> LamplighterElement:
    text = text.strip()
    head, _, tail = text.partition("·")
    m = re.fullmatch(r"\s*a\^(-?\d+)\s*", head)
    if not m:
        raise ValueError(f"could not parse lamplighter element {text!r}")
    k = int(m.group(1))
    config: dict[int, int] = {}
    prev = None
    for tok in tail.split():
        t = _TERM_RE.fullmatch(tok)
        if not t:
            raise ValueError(f"bad lamp term {tok!r}")
        i, e = int(t.group(1)), int(t.group(2))
        if prev is not None and i <= prev:
            raise ValueError("lamp indices must be strictly ascending")
        prev = i
        config[i + k] = e
    if "·" in text and not config:
        raise ValueError("empty lamp product after '·'")
    return LamplighterElement.make(config, k)


@dataclass(frozen=True)
class FiniteLamplighterElement:
    """Element of C3 wr Z/(2m+1); lamp ``i`` for ``-m <= i <= m`` is ``config[i + m]``.

    The shift is stored as its residue in ``-m..m``.
    """

    m: int
    config: tuple[int, ...]
    shift: int = 0

    @classmethod
    def identity(cls, m: int) -> "FiniteLamplighterElement":
        return cls(m, (0,) * (2 * m + 1), 0)

    @classmethod
    def a(cls, m: int, power: int = 1) -> "FiniteLamplighterElement":
        return cls(m, (0,) * (2 * m + 1), _window(power, m))

    @classmethod
    def b(cls, m: int, index: int = 0, power: int = 1) -> "FiniteLamplighterElement":
        cfg = [0] * (2 * m + 1)
        cfg[_window(index, m) + m] = power % 3
        return cls(m, tuple(cfg), 0)

    def __mul__(self, other: "FiniteLamplighterElement") -> "FiniteLamplighterElement":
        if other.m != self.m:
            raise ValueError("modulus mismatch")
        m = self.m
        size = 2 * m + 1
        out = list(self.config)
        k = self.shift
        for idx, e in enumerate(other.config):
            if e:
                j = (idx + k) % size
                out[j] = (out[j] + e) % 3
        return FiniteLamplighterElement(m, tuple(out), _window(k + other.shift, m))

    def inverse(self) -> "FiniteLamplighterElement":
        m = self.m
        size = 2 * m + 1
        out = [0] * size
        for idx, e in enumerate(self.config):
            if e:
                out[(idx - self.shift) % size] = (-e) % 3
        return FiniteLamplighterElement(m, tuple(out), _window(-self.shift, m))

    def is_identity(self) -> bool:
        return self.shift == 0 and not any(self.config)

    def in_base(self) -> bool:
        return self.shift == 0


def _window(i: int, m: int) -> int:
    """Residue of ``i`` modulo ``2m+1`` in the window ``-m..m``."""
    return (i + m) % (2 * m + 1) - m


def project_finite(u: LamplighterElement, m: int) -> FiniteLamplighterElement:
    """The quotient map W -> W_m sending a to a_(m) and b_0 to b_(m),0."""
    if m < 1:
        raise ValueError("m must be at least 1")
    cfg = [0] * (2 * m + 1)
    for i, e in u.config:
        j = _window(i, m) + m
        cfg[j] = (cfg[j] + e) % 3
    return FiniteLamplighterElement(m, tuple(cfg), _window(u.shift, m))


def evaluate_word_Wm(w: FreeWord, m: int) -> FiniteLamplighterElement:
    """Image of ``w`` under x -> a_(m), y -> b_(m),0."""
    return evaluate(w, [FiniteLamplighterElement.a(m), FiniteLamplighterElement.b(m, 0)],
                    FiniteLamplighterElement.__mul__, FiniteLamplighterElement.inverse,
                    FiniteLamplighterElement.identity(m))
