"""Configurations, sectors and their enumeration on the periodic lattice.

A configuration (species word) is a plain tuple of ints in ``1..N+1``; a
sector is the composition of particle counts per species.  Only basic sectors
(every species present) are admitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterator, Sequence

Word = tuple  # tuple[int, ...], letters in 1..N+1

DEFAULT_MAX_LENGTH = 12


class SectorError(ValueError):
    """Raised for malformed or non-basic sectors."""


class CapExceeded(ValueError):
    """Raised when a request exceeds a configured resource cap."""


@dataclass(frozen=True)
class Sector:
    """Particle counts ``(m_1, ..., m_{N+1})`` of a basic sector."""

    counts: tuple

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if not counts:
            raise SectorError("a sector needs at least one species")
        if any(c <= 0 for c in counts):
            raise SectorError(f"sector {counts} is not basic (every count must be positive)")

    @classmethod
    def parse(cls, text: str) -> Sector:
        try:
            return cls(tuple(int(t) for t in text.split(",")))
        except ValueError as exc:
            if isinstance(exc, SectorError):
                raise
            raise SectorError(f"malformed sector {text!r}") from None

    @property
    def length(self) -> int:
        return sum(self.counts)

    @property
    def nspecies(self) -> int:
        """N, so the alphabet is ``1..N+1``."""
        return len(self.counts) - 1

    @property
    def alphabet(self) -> int:
        return len(self.counts)

    def size(self) -> int:
        """Number of configurations (a multinomial coefficient)."""
        out = factorial(self.length)
        for c in self.counts:
            out //= factorial(c)
        return out

    def merge_last(self) -> Sector:
        return merge_last(self)

    def sorted_word(self) -> Word:
        return tuple(s for s, c in enumerate(self.counts, start=1) for _ in range(c))

    def __str__(self):
        return ",".join(map(str, self.counts))


def check_length(sector: Sector, max_length: int = DEFAULT_MAX_LENGTH) -> None:
    if sector.length > max_length:
        raise CapExceeded(f"L={sector.length} exceeds the configured cap {max_length}")


def merge_last(m: Sector) -> Sector:
    """Identify species N+1 with species N: ``(.., m_N, m_{N+1}) -> (.., m_N + m_{N+1})``."""
    if len(m.counts) < 2:
        raise SectorError("merge_last needs at least two parts")
    return Sector(m.counts[:-2] + (m.counts[-2] + m.counts[-1],))


def sector_of(word: Sequence[int], alphabet: int | None = None) -> tuple:
    """Letter histogram of ``word``; may contain zeros, so it is returned as a plain tuple.

    Wrap it in :class:`Sector` to assert the word lies in a basic sector.
    """
    n = alphabet if alphabet is not None else max(word)
    counts = [0] * n
    for s in word:
        if not 1 <= s <= n:
            raise ValueError(f"letter {s} outside alphabet 1..{n}")
        counts[s - 1] += 1
    return tuple(counts)


def is_basic(word: Sequence[int], alphabet: int) -> bool:
    return all(sector_of(word, alphabet))


def enumerate_sector(m: Sector) -> list:
    """All arrangements of the multiset ``m``, in increasing lexicographic order."""
    return list(iter_sector(m))


def iter_sector(m: Sector) -> Iterator[Word]:
    remaining = list(m.counts)
    n = len(remaining)
    L = m.length
    word = [0] * L

    def rec(pos):
        if pos == L:
            yield tuple(word)
            return
        for s in range(n):
            if remaining[s]:
                remaining[s] -= 1
                word[pos] = s + 1
                yield from rec(pos + 1)
                remaining[s] += 1

    yield from rec(0)


def rotate(word: Sequence[int], s: int) -> Word:
    """Cyclic left shift by ``s``."""
    word = tuple(word)
    if not word:
        return word
    s %= len(word)
    return word[s:] + word[:s]


def basic_sectors(nspecies: int, length: int) -> Iterator[Sector]:
    """Every basic sector with ``nspecies + 1`` parts summing to ``length``."""
    parts = nspecies + 1

    def rec(k, left):
        if k == 1:
            yield (left,)
            return
        for first in range(1, left - k + 2):
            for rest in rec(k - 1, left - first):
                yield (first,) + rest

    if length < parts:
        return
    for c in rec(parts, length):
        yield Sector(c)


def format_word(word: Sequence[int]) -> str:
    """Digit string when every letter is a single digit, otherwise comma separated."""
    if all(1 <= s <= 9 for s in word):
        return "".join(map(str, word))
    return ",".join(map(str, word))


def parse_word(text: str, alphabet: int | None = None) -> Word:
    text = text.strip()
    try:
        if "," in text:
            word = tuple(int(t) for t in text.split(","))
        else:
            word = tuple(int(ch) for ch in text)
    except ValueError:
        raise ValueError(f"malformed word {text!r}") from None
    if len(word) < 2:
        raise ValueError("a configuration needs at least two sites")
    top = alphabet if alphabet is not None else max(word)
    if any(not 1 <= s <= top for s in word):
        raise ValueError(f"word {text!r} has letters outside 1..{top}")
    return word


@dataclass(frozen=True)
class Arrow:
    """An arrow of value ``value`` from lower site ``lower`` to upper site ``upper`` (1-based).

    ``wraps`` is set when the target lies to the right of the source, so the
    arrow travels leftwards across the periodic boundary.
    """

    lower: int
    upper: int
    value: int

    @property
    def wraps(self) -> bool:
        return self.upper > self.lower

    def crosses(self, line: int, length: int) -> bool:
        """Whether the arrow crosses the vertical line between sites ``line-1`` and ``line``."""
        if self.upper <= self.lower:
            return self.upper < line <= self.lower
        return line <= self.lower or line > self.upper

    def to_json(self) -> dict:
        return {"from": self.lower, "to": self.upper, "value": self.value, "wraps": self.wraps}
