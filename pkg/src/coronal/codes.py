"""Coronal codes: parsing, canonical form, angle sums and downgrading.

A code ``c:p0p1...p(m-1)`` records the label of a central disc and the
cyclic sequence of labels of its petals. Two codes are the same when the
centers agree and one petal word is a rotation and/or reflection of the
other. Codes are stored with the lexicographically least such word.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_ALPHABET = 36
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
_CODE_RE = re.compile(r"^([0-9a-zA-Z]):([0-9a-zA-Z]*)$")


class CodeFormatError(ValueError):
    """Raised for malformed code text or out-of-range symbols."""


def canonical_word(petals: Sequence[int]) -> tuple[int, ...]:
    """Least word among all rotations of ``petals`` and of its reversal."""
    word = tuple(int(p) for p in petals)
    m = len(word)
    if m == 0:
        raise ValueError("petal word must be non-empty")
    rev = word[::-1]
    return min(
        min(word[i:] + word[:i] for i in range(m)),
        min(rev[i:] + rev[:i] for i in range(m)),
    )


@dataclass(frozen=True, order=True)
class CoronalCode:
    center: int
    petals: tuple[int, ...]
    display: str = field(default="", compare=False, repr=False)

    def __post_init__(self):
        if not self.petals:
            raise ValueError("petal word must be non-empty")

    def __len__(self) -> int:
        return len(self.petals)

    def __str__(self) -> str:
        return format_code(self)

    @property
    def petal_set(self) -> frozenset[int]:
        return frozenset(self.petals)

    @property
    def symbols(self) -> frozenset[int]:
        return self.petal_set | {self.center}

    @property
    def max_symbol(self) -> int:
        return max(self.center, *self.petals)

    def sort_key(self):
        return (len(self.petals), self.petals, self.center)


def canonicalize(center: int, petals: Sequence[int], display: str = "") -> CoronalCode:
    center = int(center)
    if center < 0 or any(int(p) < 0 for p in petals):
        raise ValueError("symbols must be non-negative")
    return CoronalCode(center, canonical_word(petals), display)


def _digit(ch: str) -> int:
    return _DIGITS.index(ch.lower())


def parse_code(text: str, alphabet_size: int) -> CoronalCode:
    """Parse ``"c:p0p1..."`` with base-36 digits, e.g. ``parse_code("0:22121", 3)``."""
    if not 1 <= alphabet_size <= MAX_ALPHABET:
        raise CodeFormatError(f"alphabet size must be in 1..{MAX_ALPHABET}")
    text = text.strip()
    m = _CODE_RE.match(text)
    if m is None:
        raise CodeFormatError(f"malformed code {text!r}")
    if not m.group(2):
        raise CodeFormatError(f"empty petal word in {text!r}")
    center = _digit(m.group(1))
    petals = [_digit(ch) for ch in m.group(2)]
    bad = [s for s in [center, *petals] if s >= alphabet_size]
    if bad:
        raise CodeFormatError(
            f"symbol {_DIGITS[bad[0]]} out of range for alphabet size {alphabet_size}"
        )
    return canonicalize(center, petals, display=text)


def format_code(x: CoronalCode) -> str:
    return _DIGITS[x.center] + ":" + "".join(_DIGITS[p] for p in x.petals)


@dataclass(frozen=True, order=True)
class AngleSymbol:
    """Angle at ``vertex`` between two tangent petals; the petal pair is
    unordered so ``a <= b`` after construction."""

    vertex: int
    a: int
    b: int

    def __post_init__(self):
        if self.a > self.b:
            lo, hi = self.b, self.a
            object.__setattr__(self, "a", lo)
            object.__setattr__(self, "b", hi)

    def __str__(self) -> str:
        return f"{self.vertex}_{self.a}^{self.b}"


@dataclass(frozen=True)
class AngleSum:
    terms: tuple[tuple[AngleSymbol, int], ...]

    @classmethod
    def from_counter(cls, counts: Counter) -> "AngleSum":
        return cls(tuple(sorted(counts.items())))

    def as_dict(self) -> dict[AngleSymbol, int]:
        return dict(self.terms)

    @property
    def total(self) -> int:
        return sum(k for _, k in self.terms)

    def arrays(self):
        """Term arrays ``(vertex, a, b, weight)`` in the kernel layout."""
        v = np.array([s.vertex for s, _ in self.terms], dtype=np.int64)
        a = np.array([s.a for s, _ in self.terms], dtype=np.int64)
        b = np.array([s.b for s, _ in self.terms], dtype=np.int64)
        w = np.array([k for _, k in self.terms], dtype=np.float64)
        return v, a, b, w

    def __str__(self) -> str:
        return " + ".join(f"{k}*{s}" if k > 1 else str(s) for s, k in self.terms)


def angle_sum(x: CoronalCode) -> AngleSum:
    p = x.petals
    m = len(p)
    counts = Counter(AngleSymbol(x.center, p[i], p[(i + 1) % m]) for i in range(m))
    return AngleSum.from_counter(counts)


def downgrade(x: CoronalCode, k: int) -> CoronalCode:
    """Replace every symbol larger than ``k`` by ``k``."""
    return canonicalize(min(x.center, k), [min(p, k) for p in x.petals])


def read_code_file(path, alphabet_size: int) -> list[CoronalCode]:
    """One code per line; blank lines and ``#`` comments are ignored."""
    return list(iter_code_lines(Path(path).read_text(encoding="utf-8").splitlines(),
                                alphabet_size))


def iter_code_lines(lines: Iterable[str], alphabet_size: int) -> Iterator[CoronalCode]:
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            yield parse_code(line, alphabet_size)


def write_code_file(path, codes: Iterable[CoronalCode]) -> None:
    text = "".join(format_code(x) + "\n" for x in codes)
    Path(path).write_text(text, encoding="utf-8")
