"""Sets of coronal codes: fundamentality, essential witnesses, shrinking,
the ratio inequality between under- and over-realizers, and the length
bound used for finiteness of essential sets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .codes import CoronalCode, angle_sum, downgrade, format_code, read_code_file
from .realize import Realizer, RealizerLike, as_array

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-9


class NotACompactPackingCodeSet(ValueError):
    pass


class WitnessError(ValueError):
    """A witness realizer violates monotonicity or positivity."""


class PreconditionError(ValueError):
    pass


class CodeSet:
    """Immutable set of canonical codes over the alphabet ``0..n-1``."""

    def __init__(self, n: int, codes: Iterable[CoronalCode] = ()):
        if n < 1:
            raise ValueError("alphabet size must be at least 1")
        codes = frozenset(codes)
        for x in codes:
            if x.max_symbol >= n:
                raise ValueError(f"{format_code(x)} uses a symbol outside 0..{n - 1}")
        self.n = n
        self.codes = codes

    @classmethod
    def read(cls, path, n: int) -> "CodeSet":
        return cls(n, read_code_file(path, n))

    def __len__(self):
        return len(self.codes)

    def __iter__(self):
        return iter(sorted(self.codes, key=CoronalCode.sort_key))

    def __contains__(self, x):
        return x in self.codes

    def __eq__(self, other):
        return isinstance(other, CodeSet) and (self.n, self.codes) == (other.n, other.codes)

    def __hash__(self):
        return hash((self.n, self.codes))

    def __repr__(self):
        return f"CodeSet(n={self.n}, {{{', '.join(map(format_code, self))}}})"

    @property
    def centers(self) -> frozenset[int]:
        return frozenset(x.center for x in self.codes)

    def term_arrays(self):
        """Kernel term layout ``(row, vertex, a, b, weight)``, one row per code
        in iteration order."""
        rows, vs, As, Bs, ws = [], [], [], [], []
        for i, x in enumerate(self):
            for sym, k in angle_sum(x).terms:
                rows.append(i)
                vs.append(sym.vertex)
                As.append(sym.a)
                Bs.append(sym.b)
                ws.append(k)
        as_int = lambda v: np.array(v, dtype=np.int64)
        return as_int(rows), as_int(vs), as_int(As), as_int(Bs), np.array(ws, dtype=np.float64)

    @cached_property
    def _terms(self):
        return self.term_arrays()

    def angle_sums(self, rho: RealizerLike) -> np.ndarray:
        return kernels.system_values(*self._terms, as_array(rho), len(self))

    def angle_sums_batch(self, rhos) -> np.ndarray:
        return kernels.system_values_batch(*self._terms, rhos, len(self))

    @cached_property
    def fundamental(self) -> bool:
        return is_fundamental(self)


def is_fundamental(C: CodeSet) -> bool:
    # For a non-empty K of centers, some D with centers(D) = K has petals
    # escaping K iff a single code centered in K has a petal outside K:
    # take D = every code centered in K, which covers K and only adds petals.
    n = C.n
    if n < 2 or len(C) == 0:
        return False
    top = list(range(n - 1))
    if C.centers != frozenset(top):
        return False
    by_center = {c: frozenset().union(*(x.petal_set for x in C.codes if x.center == c))
                 for c in top}
    for size in range(1, n):
        for K in itertools.combinations(top, size):
            K = frozenset(K)
            if not any(by_center[c] - K for c in K):
                return False
    return True


def extract_fundamental(packing_codes: CodeSet) -> CodeSet:
    """Codes centered below the largest symbol; these must form a
    fundamental set when they come from a compact packing."""
    n = packing_codes.n
    if n < 2:
        raise NotACompactPackingCodeSet("need at least two disc sizes")
    C = CodeSet(n, (x for x in packing_codes.codes if x.center <= n - 2))
    if not is_fundamental(C):
        raise NotACompactPackingCodeSet(f"not-a-compact-packing-code-set: {C!r}")
    return C


@dataclass(frozen=True)
class EssentialWitness:
    rho: Realizer
    sigma: Realizer
    slack: float

    @classmethod
    def of(cls, C: CodeSet, rho: RealizerLike, sigma: RealizerLike) -> "EssentialWitness":
        rho, sigma = Realizer(rho), Realizer(sigma)
        return cls(rho, sigma, witness_slack(C, rho, sigma))


def witness_slack(C: CodeSet, rho: RealizerLike, sigma: RealizerLike) -> float:
    lo = C.angle_sums(rho)
    hi = C.angle_sums(sigma)
    return float(min(np.min(TWO_PI - lo), np.min(hi - TWO_PI)))


def _check_monotone(C: CodeSet, r: Realizer, name: str):
    if r.n != C.n:
        raise WitnessError(f"{name} has {r.n} values, expected {C.n}")
    if not r.is_monotone():
        raise WitnessError(f"{name} is not monotone: {r.values.tolist()}")


def check_essential_witness(C: CodeSet, w: EssentialWitness, tol: float = DEFAULT_TOL) -> bool:
    _check_monotone(C, w.rho, "rho")
    _check_monotone(C, w.sigma, "sigma")
    return is_fundamental(C) and witness_slack(C, w.rho, w.sigma) >= -tol


def _monotone_grid(k: int, points: int, lo: float) -> np.ndarray:
    axis = np.geomspace(lo, 1.0, points)
    combos = np.array(list(itertools.combinations_with_replacement(axis, k)))
    return np.hstack([combos, np.ones((len(combos), 1))])


def _descend(objective, start: np.ndarray, lo: float, tol: float, sweeps: int = 60):
    """Multiplicative coordinate descent over monotone normalized radii."""
    x = start.copy()
    best = objective(x)
    factor = 2.0
    k = x.size - 1
    for _ in range(sweeps):
        if best <= tol or factor < 1 + 1e-9:
            break
        improved = False
        for i in range(k):
            for f in (factor, 1.0 / factor):
                y = x.copy()
                upper = y[i + 1]
                lower = y[i - 1] if i > 0 else lo
                y[i] = min(upper, max(lower, y[i] * f))
                val = objective(y)
                if val < best:
                    x, best, improved = y, val, True
        if not improved:
            factor = math.sqrt(factor)
    return x, best


def search_essential_witness(
    C: CodeSet,
    grid: int = 41,
    floor: float = 1e-6,
    tol: float = DEFAULT_TOL,
    use_solver: bool = True,
) -> Optional[EssentialWitness]:
    """Look for monotone normalized ``rho`` and ``sigma`` with every angle sum
    at most 2*pi under ``rho`` and at least 2*pi under ``sigma``.

    Radii are searched in ``[floor, 1]``. ``None`` means the search failed;
    it does not prove the set is not essential.
    """
    if not is_fundamental(C):
        raise PreconditionError(f"{C!r} is not fundamental")
    k = C.n - 1
    cands = _monotone_grid(k, grid, floor)
    if use_solver:
        from .solver import SolverConfig, TightSystem, solve_tight

        sol = solve_tight(TightSystem(C), SolverConfig()).solution
        if sol is not None and sol.is_monotone():
            cands = np.vstack([sol.values, cands])
    vals = C.angle_sums_batch(cands)
    over = np.max(vals, axis=1) - TWO_PI
    under = TWO_PI - np.min(vals, axis=1)

    def rho_obj(x):
        return float(np.max(C.angle_sums(x)) - TWO_PI)

    def sigma_obj(x):
        return float(TWO_PI - np.min(C.angle_sums(x)))

    rho, r_best = _descend(rho_obj, cands[np.argmin(over)], floor, tol)
    if r_best > tol:
        return None
    sigma, s_best = _descend(sigma_obj, cands[np.argmin(under)], floor, tol)
    if s_best > tol:
        return None
    return EssentialWitness.of(C, rho, sigma)


def shrink_essential(C: CodeSet, m: int) -> CodeSet:
    """Keep codes centered at most ``m-2`` and downgrade them at ``m-1``;
    the result lives over the alphabet ``0..m-1``."""
    if not 2 <= m <= C.n - 1:
        raise ValueError(f"m must be in 2..{C.n - 1}, got {m}")
    return CodeSet(m, (downgrade(x, m - 1) for x in C.codes if x.center <= m - 2))


def shrink_witness(w: EssentialWitness, m: int, C_shrunk: CodeSet) -> EssentialWitness:
    """Witness for ``shrink_essential(C, m)``: ``rho`` restricted to the first
    ``m`` symbols, ``sigma`` restricted with its top value put at ``m-1``."""
    rho = w.rho.values[:m]
    sigma = np.append(w.sigma.values[: m - 1], w.sigma.values[-1])
    return EssentialWitness.of(C_shrunk, rho, sigma)


def bootstrap_ratio_check(
    C: CodeSet, rho: RealizerLike, sigma: RealizerLike, tol: float = DEFAULT_TOL
) -> bool:
    """``sigma(n-2)/sigma(n-1) <= rho(n-2)/rho(n-1)`` for an under-realizer
    ``rho`` and over-realizer ``sigma`` of a fundamental set."""
    if not is_fundamental(C):
        raise PreconditionError(f"{C!r} is not fundamental")
    rho, sigma = as_array(rho), as_array(sigma)
    n = C.n
    if rho.size != n or sigma.size != n or np.any(rho <= 0) or np.any(sigma <= 0):
        raise PreconditionError("realizers must have n positive values")
    if np.any(C.angle_sums(rho) > TWO_PI + tol):
        raise PreconditionError("some angle sum exceeds 2*pi under rho")
    if np.any(C.angle_sums(sigma) < TWO_PI - tol):
        raise PreconditionError("some angle sum is below 2*pi under sigma")
    return bool(sigma[n - 2] / sigma[n - 1] <= rho[n - 2] / rho[n - 1] + tol)


def length_bound(n: int, kappa0: float) -> int:
    """Largest number of petals around a disc of symbol ``n-2`` when every
    angle is at least the one between two petals of relative size ``kappa0``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 < kappa0 <= 1:
        raise ValueError("kappa0 must lie in (0, 1]")
    if n == 2 and kappa0 != 1:
        raise ValueError("for n = 2 the vertex and petal symbol coincide; kappa0 must be 1")
    k = kappa0
    angle = math.acos(((1 + k) ** 2 + (1 + k) ** 2 - (2 * k) ** 2) / (2 * (1 + k) ** 2))
    # 2*pi / acos(1/2) lands just under 6 in floating point
    return math.floor(TWO_PI / angle + 1e-9)
