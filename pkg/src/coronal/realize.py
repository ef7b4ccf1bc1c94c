"""Numeric evaluation of angle symbols and angle sums at a realizer.

A realizer assigns a positive radius to every symbol ``0..n-1``. The angle
``c_b^a`` is the angle at the center of disc ``c`` in a triple of mutually
tangent discs ``a``, ``b``, ``c``; by the law of cosines its cosine is
``1 - 2ab / ((c+a)(c+b))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import kernels
from .codes import AngleSum, AngleSymbol, CoronalCode, angle_sum

__all__ = [
    "AngleSymbol",
    "Realizer",
    "as_array",
    "eval_angle",
    "partial_angle",
    "eval_angle_sum",
    "grad_angle_sum",
]

CLAMP_GUARD = 1e-12


class Realizer:
    """Positive radii indexed by symbol."""

    __slots__ = ("values",)

    def __init__(self, values: Sequence[float]):
        arr = np.array(values, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise ValueError("realizer needs at least one symbol")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise ValueError(f"realizer values must be finite and positive: {arr}")
        arr.setflags(write=False)
        self.values = arr

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return self.values.size

    def __getitem__(self, s):
        return float(self.values[s])

    def __repr__(self):
        return f"Realizer({self.values.tolist()})"

    def __eq__(self, other):
        return isinstance(other, Realizer) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def normalized(self) -> bool:
        return self.values[-1] == 1.0

    def normalize(self) -> "Realizer":
        return Realizer(self.values / self.values[-1])

    def is_monotone(self, strict: bool = False) -> bool:
        d = np.diff(self.values)
        return bool(np.all(d > 0) if strict else np.all(d >= 0))

    def scaled(self, lam: float) -> "Realizer":
        return Realizer(self.values * lam)

    def to_text(self) -> str:
        return "".join(f"{s} {v!r}\n" for s, v in enumerate(self.values.tolist()))

    @classmethod
    def from_text(cls, text: str) -> "Realizer":
        """Parse ``symbol value`` pairs, one per line (``#`` comments allowed)."""
        pairs = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            sym, val = line.split()
            pairs[int(sym)] = float(val)
        if sorted(pairs) != list(range(len(pairs))):
            raise ValueError("realizer file must list symbols 0..n-1 exactly once")
        return cls([pairs[s] for s in range(len(pairs))])


RealizerLike = Union[Realizer, Sequence[float], np.ndarray]


def as_array(rho: RealizerLike) -> np.ndarray:
    arr = np.ascontiguousarray(rho, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("realizer must be one-dimensional")
    return arr


def eval_angle(a: AngleSymbol, rho: RealizerLike) -> float:
    r = as_array(rho)
    c, p, q = r[a.vertex], r[a.a], r[a.b]
    arg = ((c + p) ** 2 + (c + q) ** 2 - (p + q) ** 2) / (2 * (c + p) * (c + q))
    if abs(arg) > 1 + CLAMP_GUARD:
        raise ArithmeticError(f"arccos argument {arg!r} out of range for {a}")
    return math.acos(min(1.0, max(-1.0, arg)))


def partial_angle(a: AngleSymbol, wrt: int, rho: RealizerLike) -> float:
    """Partial derivative of the realized angle ``a`` with respect to the
    radius of symbol ``wrt``.

    Dispatches on which of vertex and petals coincide *as symbols*; a symbol
    occupying several slots is differentiated through all of them at once.
    """
    r = as_array(rho)
    c_sym, p_sym, q_sym = a.vertex, a.a, a.b
    if wrt not in (c_sym, p_sym, q_sym):
        return 0.0
    c = r[c_sym]
    if wrt == c_sym:
        if p_sym == c_sym and q_sym == c_sym:
            return 0.0
        if p_sym == c_sym or q_sym == c_sym:
            o = r[q_sym] if p_sym == c_sym else r[p_sym]
            return -o / ((c + o) * math.sqrt(o * o + 2 * o * c))
        p, q = r[p_sym], r[q_sym]
        return -(p + q + 2 * c) * math.sqrt(p * q) / (
            (c * c + p * q + p * c + q * c) * math.sqrt(c) * math.sqrt(p + q + c)
        )
    w = r[wrt]
    if p_sym == q_sym:
        return 2 * math.sqrt(c) / ((c + w) * math.sqrt(2 * w + c))
    other = q_sym if p_sym == wrt else p_sym
    if other == c_sym:
        return c / ((c + w) * math.sqrt(w * w + 2 * w * c))
    o = r[other]
    return math.sqrt(o * c) / ((c + w) * math.sqrt(w) * math.sqrt(w + o + c))


def _as_sum(s: Union[AngleSum, CoronalCode]) -> AngleSum:
    return angle_sum(s) if isinstance(s, CoronalCode) else s


def eval_angle_sum(s: Union[AngleSum, CoronalCode], rho: RealizerLike) -> float:
    s = _as_sum(s)
    v, a, b, w = s.arrays()
    ang = kernels.angles(v, a, b, as_array(rho))
    return float(np.dot(w, ang))


def grad_angle_sum(s: Union[AngleSum, CoronalCode], rho: RealizerLike) -> np.ndarray:
    s = _as_sum(s)
    v, a, b, w = s.arrays()
    row = np.zeros(v.shape[0], dtype=np.int64)
    _, jac = kernels.system_jacobian(row, v, a, b, w, as_array(rho), 1)
    return jac[0]
