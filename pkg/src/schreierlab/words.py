"""
Reduced words in the free group F_n.

Letters are stored internally as integer codes: generator ``i`` (1-based)
has code ``2*(i-1)`` and its inverse ``2*(i-1) + 1``. The code order is
the fixed letter order a_1 < a_1^-1 < a_2 < a_2^-1 < ... used for every
tie-break in the package, and ``code ^ 1`` is the inverse letter.

Text syntax: lowercase ``a..z`` are generators 1..26, uppercase are their
inverses, so ``"bAb"`` is b a^-1 b.
"""

from __future__ import annotations

import string
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import ValidationError

MAX_RANK = 26


def inverse_code(code: int) -> int:
    return code ^ 1


class Letter(NamedTuple):
    generator_index: int
    inverted: bool = False

    @property
    def code(self) -> int:
        return 2 * (self.generator_index - 1) + int(self.inverted)

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        return cls(code // 2 + 1, bool(code & 1))

    def inverse(self) -> "Letter":
        return Letter(self.generator_index, not self.inverted)

    def __str__(self):
        ch = string.ascii_lowercase[self.generator_index - 1]
        return ch.upper() if self.inverted else ch


def _check_codes(codes: Sequence[int], rank: int) -> None:
    if not 1 <= rank <= MAX_RANK:
        raise ValidationError(f"rank must be in [1, {MAX_RANK}], got {rank}")
    for c in codes:
        if not 0 <= c < 2 * rank:
            raise ValidationError(
                f"generator index {c // 2 + 1} out of range for rank {rank}")


def _free_reduce(codes: Iterable[int]) -> tuple:
    stack = []
    for c in codes:
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


class ReducedWord:
    """An immutable freely reduced word of a fixed rank."""

    __slots__ = ("codes", "rank")

    def __init__(self, codes: Iterable[int], rank: int):
        codes = tuple(codes)
        _check_codes(codes, rank)
        for x, y in zip(codes, codes[1:]):
            if y == x ^ 1:
                raise ValidationError("word is not freely reduced; use reduce()")
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "rank", rank)

    def __setattr__(self, name, value):
        raise AttributeError("ReducedWord is immutable")

    @classmethod
    def _trusted(cls, codes: tuple, rank: int) -> "ReducedWord":
        w = object.__new__(cls)
        object.__setattr__(w, "codes", codes)
        object.__setattr__(w, "rank", rank)
        return w

    @classmethod
    def identity(cls, rank: int) -> "ReducedWord":
        _check_codes((), rank)
        return cls._trusted((), rank)

    @classmethod
    def parse(cls, text: str, rank: int) -> "ReducedWord":
        """Parse the letter syntax and freely reduce."""
        codes = []
        for pos, ch in enumerate(text.strip()):
            if ch in string.ascii_lowercase:
                c = 2 * string.ascii_lowercase.index(ch)
            elif ch in string.ascii_uppercase:
                c = 2 * string.ascii_uppercase.index(ch) + 1
            else:
                raise ValidationError(f"invalid character {ch!r} at position {pos}")
            if c >= 2 * rank:
                raise ValidationError(
                    f"letter {ch!r} at position {pos} exceeds rank {rank}")
            codes.append(c)
        _check_codes((), rank)
        return cls._trusted(_free_reduce(codes), rank)

    @property
    def letters(self) -> tuple:
        return tuple(Letter.from_code(c) for c in self.codes)

    def __len__(self):
        return len(self.codes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.codes)

    def __eq__(self, other):
        if not isinstance(other, ReducedWord):
            return NotImplemented
        return self.rank == other.rank and self.codes == other.codes

    def __hash__(self):
        return hash((self.rank, self.codes))

    def __lt__(self, other: "ReducedWord") -> bool:
        return shortlex_key(self) < shortlex_key(other)

    def __str__(self):
        return "".join(str(Letter.from_code(c)) for c in self.codes) or "e"

    def __repr__(self):
        return f"ReducedWord({str(self)!r}, rank={self.rank})"

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return concat(self, other)

    def inverse(self) -> "ReducedWord":
        return ReducedWord._trusted(tuple(c ^ 1 for c in reversed(self.codes)), self.rank)

    __invert__ = inverse


def reduce(letters: Sequence, rank: int) -> ReducedWord:
    """Freely reduce a sequence of :class:`Letter` (or integer codes)."""
    codes = [x.code if isinstance(x, Letter) else int(x) for x in letters]
    _check_codes(codes, rank)
    return ReducedWord._trusted(_free_reduce(codes), rank)


def word(text: str, rank: int) -> ReducedWord:
    return ReducedWord.parse(text, rank)


def concat(w1: ReducedWord, w2: ReducedWord) -> ReducedWord:
    if w1.rank != w2.rank:
        raise ValidationError(f"rank mismatch: {w1.rank} != {w2.rank}")
    a, b = w1.codes, w2.codes
    k = 0
    while k < len(a) and k < len(b) and a[-1 - k] == b[k] ^ 1:
        k += 1
    return ReducedWord._trusted(a[:len(a) - k] + b[k:], w1.rank)


def sphere_size(n: int, r: int) -> int:
    """Number of reduced words of length exactly r: 2n(2n-1)^(r-1)."""
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    if r == 0:
        return 1
    return 2 * n * (2 * n - 1) ** (r - 1)


def ball_size(n: int, r: int) -> int:
    return sum(sphere_size(n, i) for i in range(r + 1))


def cylinder_measure(n: int, g: ReducedWord) -> Fraction:
    """Uniform boundary measure of the cylinder of infinite words starting with g."""
    return Fraction(1, sphere_size(n, len(g)))


def shortlex_key(w: ReducedWord):
    return (len(w.codes), w.codes)


def iter_sphere(n: int, r: int) -> Iterator[ReducedWord]:
    """Reduced words of length exactly r, in lexicographic letter order."""
    if r == 0:
        yield ReducedWord._trusted((), n)
        return
    codes = [0] * r

    def rec(i):
        for c in range(2 * n):
            if i and c == codes[i - 1] ^ 1:
                continue
            codes[i] = c
            if i == r - 1:
                yield ReducedWord._trusted(tuple(codes), n)
            else:
                yield from rec(i + 1)

    yield from rec(0)


def shortlex_enumerate(n: int, r_max: int) -> list:
    """All reduced words of length <= r_max in shortlex order."""
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    out = []
    for r in range(r_max + 1):
        out.extend(iter_sphere(n, r))
    return out
