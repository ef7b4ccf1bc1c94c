"""Enumeration of canonical codes and the two-size candidate universe."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .codes import CoronalCode, canonical_word, format_code
from .sets import CodeSet, EssentialWitness, is_fundamental, search_essential_witness
from .solver import DegenerateCodeError, TightSystem, residual, solve_center0_binary

PI2_MAX_LEN = 6


@dataclass(frozen=True)
class CandidateRadius:
    code: CoronalCode
    r: float
    residual: float

    def csv_row(self) -> str:
        return f"{format_code(self.code)},{self.r!r},{self.residual!r}"


def bracelets(n: int, m: int) -> Iterator[tuple[int, ...]]:
    """Canonical petal words of length ``m`` over ``n`` symbols, in
    lexicographic order."""
    for word in itertools.product(range(n), repeat=m):
        # a canonical word is a necklace, so it starts with its minimum symbol
        if word[0] != min(word):
            continue
        if canonical_word(word) == word:
            yield word


def enum_codes(n: int, center: int, max_len: int, min_len: int = 1) -> Iterator[CoronalCode]:
    """One code per equivalence class, ordered by length then petal word.

    ``min_len`` restarts the stream at a given length.
    """
    if n < 1 or max_len < 1:
        raise ValueError("n and max_len must be at least 1")
    if not 0 <= center < n:
        raise ValueError(f"center {center} outside 0..{n - 1}")
    for m in range(max(1, min_len), max_len + 1):
        for word in bracelets(n, m):
            yield CoronalCode(center, word)


def pi2_candidates(max_len: int = PI2_MAX_LEN, dedup: float = 1e-9) -> list[CandidateRadius]:
    """Tight small-center radii of every binary center-0 code up to ``max_len``
    petals, sorted by radius."""
    found: list[CandidateRadius] = []
    for x in enum_codes(2, 0, max_len):
        try:
            r = solve_center0_binary(x)
        except DegenerateCodeError:
            continue
        if r is None:
            continue
        if any(abs(c.r - r) <= dedup for c in found):
            continue
        res = float(abs(residual(TightSystem(CodeSet(2, [x])), [r, 1.0])[0]))
        found.append(CandidateRadius(x, r, res))
    return sorted(found, key=lambda c: c.r)


def enum_essential2(
    max_subset: int = 3, max_len: int = PI2_MAX_LEN
) -> list[tuple[CodeSet, EssentialWitness]]:
    """Witnessed 2-essential sets among subsets of up to ``max_subset``
    center-0 binary codes. Only a lower bound on the true family."""
    universe = list(enum_codes(2, 0, max_len))
    out = []
    for size in range(1, max_subset + 1):
        for subset in itertools.combinations(universe, size):
            C = CodeSet(2, subset)
            if not is_fundamental(C):
                continue
            w = search_essential_witness(C, grid=61, use_solver=False)
            if w is not None:
                out.append((C, w))
    return out

