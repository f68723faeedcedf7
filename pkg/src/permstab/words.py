"""Reduced words in a free group, ball enumeration, and relation sets.

Letters are nonzero ints: ``k`` is the k-th basis element and ``-k`` its inverse.
Text uses ``a, b, c, ...`` for the basis and upper case for inverses, so in
rank 2 ``a`` is x and ``b`` is y.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping, Sequence, TypeVar

G = TypeVar("G")


def _letter_char(k: int) -> str:
    c = chr(ord("a") + abs(k) - 1)
    return c if k > 0 else c.upper()


def _char_letter(c: str) -> int:
    if not c.isalpha() or not c.isascii():
        raise ValueError(f"bad word letter {c!r}")
    k = ord(c.lower()) - ord("a") + 1
    return k if c.islower() else -k


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for k in letters:
        if k == 0:
            raise ValueError("0 is not a letter")
        if stack and stack[-1] == -k:
            stack.pop()
        else:
            stack.append(k)
    return tuple(stack)


class FreeWord:
    """A freely reduced word; immutable and hashable."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        self.letters = _reduce(letters)

    @classmethod
    def parse(cls, text: str) -> "FreeWord":
        text = text.strip()
        if text in ("", "e", "1"):
            return cls()
        return cls(_char_letter(c) for c in text if not c.isspace())

    @classmethod
    def gen(cls, k: int, power: int = 1) -> "FreeWord":
        return cls([k if power > 0 else -k] * abs(power))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def __pow__(self, n: int) -> "FreeWord":
        base = self if n >= 0 else self.inverse()
        return FreeWord(base.letters * abs(n))

    def inverse(self) -> "FreeWord":
        return FreeWord(-k for k in reversed(self.letters))

    def conjugate(self, by: "FreeWord") -> "FreeWord":
        """``by * self * by^-1``."""
        return by * self * by.inverse()

    def exponent_sum(self, k: int) -> int:
        return sum(1 if x == k else -1 if x == -k else 0 for x in self.letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __lt__(self, other: "FreeWord") -> bool:
        return _sort_key(self) < _sort_key(other)

    def __str__(self) -> str:
        return "".join(map(_letter_char, self.letters)) or "e"

    def __repr__(self) -> str:
        return f"FreeWord({str(self)!r})"


def commutator(u: FreeWord, v: FreeWord) -> FreeWord:
    """``[u, v] = u v u^-1 v^-1``."""
    return u * v * u.inverse() * v.inverse()


def reduce(letters: Iterable[int] | str) -> FreeWord:
    if isinstance(letters, str):
        return FreeWord.parse(letters)
    return FreeWord(letters)


def evaluate(
    w: FreeWord,
    assign: Mapping[int, G] | Sequence[G],
    mul: Callable[[G, G], G],
    inv: Callable[[G], G],
    identity: G,
) -> G:
    """Image of ``w`` under the homomorphism sending basis element k to ``assign[k]``.

    A sequence ``assign`` is read 1-based: ``assign[0]`` is the image of letter 1.
    """
    if isinstance(assign, Mapping):
        images = dict(assign)
    else:
        images = {k + 1: g for k, g in enumerate(assign)}
    inverses: dict[int, G] = {}
    out = identity
    for k in w.letters:
        if k > 0:
            g = images[k]
        else:
            if k not in inverses:
                inverses[k] = inv(images[-k])
            g = inverses[k]
        out = mul(out, g)
    return out


def _sort_key(w: FreeWord) -> tuple:
    # length-lex with the letter order a < A < b < B < ...
    return (len(w), tuple(2 * abs(k) + (k < 0) for k in w.letters))


def ball(radius: int, rank: int = 2) -> Iterator[FreeWord]:
    """All reduced words of length at most ``radius``, in length-lex order."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    alphabet = []
    for k in range(1, rank + 1):
        alphabet += [k, -k]
    layer = [()]
    yield FreeWord()
    for _ in range(radius):
        nxt = []
        for letters in layer:
            for k in alphabet:
                if letters and letters[-1] == -k:
                    continue
                nxt.append(letters + (k,))
        for letters in nxt:
            w = object.__new__(FreeWord)
            w.letters = letters
            yield w
        layer = nxt


def ball_size(radius: int, rank: int = 2) -> int:
    """``1 + sum_{i=1..radius} 2k (2k-1)^(i-1)`` for rank k."""
    return 1 + sum(2 * rank * (2 * rank - 1) ** (i - 1) for i in range(1, radius + 1))


class RelationSet:
    """A finite set of words; exact duplicates are dropped, order is kept."""

    def __init__(self, words: Iterable[FreeWord | str] = ()):
        ws = [FreeWord.parse(w) if isinstance(w, str) else w for w in words]
        self.words: tuple[FreeWord, ...] = tuple(dict.fromkeys(ws))

    @classmethod
    def parse(cls, text: str) -> "RelationSet":
        words = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                words.append(FreeWord.parse(line))
        return cls(words)

    @classmethod
    def load(cls, path: str | Path) -> "RelationSet":
        return cls.parse(Path(path).read_text())

    def dumps(self) -> str:
        return "".join(f"{w}\n" for w in self.words)

    def norm(self) -> int:
        return sum(len(w) for w in self.words)

    def __iter__(self) -> Iterator[FreeWord]:
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __repr__(self) -> str:
        return f"RelationSet({[str(w) for w in self.words]!r})"


def set_norm(E: RelationSet | Iterable[FreeWord]) -> int:
    """``||E|| = sum of |r| over r in E``."""
    if isinstance(E, RelationSet):
        return E.norm()
    return sum(len(w) for w in E)
