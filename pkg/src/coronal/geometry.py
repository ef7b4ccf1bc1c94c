"""Finite disc patches and the coronas found in them.

Patches are finite, so the caller marks which discs are *interior*, i.e.
must be surrounded by a complete corona. Discs are labeled canonically:
equal radii share a label and labels increase with radius.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .codes import AngleSymbol, CoronalCode, canonicalize, format_code
from .realize import RealizerLike, as_array, eval_angle
from .sets import CodeSet, NotACompactPackingCodeSet, extract_fundamental
from .solver import SolverConfig, TightSystem, solve_tight

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-7
RADIUS_RTOL = 1e-7


class PackingError(ValueError):
    pass


class OverlapError(PackingError):
    def __init__(self, i: int, j: int, depth: float):
        super().__init__(f"discs {i} and {j} overlap by {depth:.3g}")
        self.pair = (i, j)
        self.depth = depth


class InsufficientPatchError(PackingError):
    pass


@dataclass(frozen=True)
class Disc:
    x: float
    y: float
    r: float
    interior: bool = False

    def __post_init__(self):
        if not (self.r > 0 and math.isfinite(self.r)):
            raise PackingError(f"radius must be positive, got {self.r}")


def cluster_radii(radii: Sequence[float], rtol: float = RADIUS_RTOL):
    """Group radii whose consecutive relative gaps are within ``rtol``.

    Returns per-disc labels and the mean radius of each class.
    """
    radii = np.asarray(radii, dtype=np.float64)
    if radii.size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    order = np.argsort(radii, kind="stable")
    labels = np.empty(radii.size, dtype=np.int64)
    label = 0
    prev = radii[order[0]]
    for idx in order:
        if radii[idx] - prev > rtol * prev:
            label += 1
        labels[idx] = label
        prev = radii[idx]
    means = np.array([radii[labels == k].mean() for k in range(label + 1)])
    return labels, means


class Packing:
    def __init__(self, discs: Sequence[Disc], overlap_tol: float = DEFAULT_TOL,
                 radius_rtol: float = RADIUS_RTOL):
        self.discs = list(discs)
        self.xy = np.array([[d.x, d.y] for d in self.discs], dtype=np.float64).reshape(-1, 2)
        self.r = np.array([d.r for d in self.discs], dtype=np.float64)
        self.interior = np.array([d.interior for d in self.discs], dtype=bool)
        self.labels, self.class_radii = cluster_radii(self.r, radius_rtol)
        self._check_overlaps(overlap_tol)

    def __len__(self):
        return len(self.discs)

    @property
    def n(self) -> int:
        return int(self.class_radii.size)

    def canonical_realizer(self) -> np.ndarray:
        """Measured class radii scaled so the largest is 1."""
        return self.class_radii / self.class_radii[-1]

    def distances(self) -> np.ndarray:
        diff = self.xy[:, None, :] - self.xy[None, :, :]
        return np.hypot(diff[..., 0], diff[..., 1])

    def _check_overlaps(self, tol: float):
        if len(self) < 2:
            return
        depth = (self.r[:, None] + self.r[None, :]) - self.distances()
        np.fill_diagonal(depth, -np.inf)
        i, j = np.unravel_index(np.argmax(depth), depth.shape)
        if depth[i, j] > tol:
            raise OverlapError(int(min(i, j)), int(max(i, j)), float(depth[i, j]))

    def to_json(self) -> dict:
        return {"discs": [{"x": d.x, "y": d.y, "r": d.r, "interior": d.interior}
                          for d in self.discs]}


def load_packing(path) -> Packing:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        discs = [Disc(float(d["x"]), float(d["y"]), float(d["r"]), bool(d.get("interior", False)))
                 for d in data["discs"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PackingError):
            raise
        raise PackingError(f"malformed packing file {path}: {exc}") from exc
    return Packing(discs)


def save_packing(p: Packing, path) -> None:
    Path(path).write_text(json.dumps(p.to_json(), indent=1), encoding="utf-8")


def tangency_graph(p: Packing, tol: float = DEFAULT_TOL) -> list[list[int]]:
    if len(p) == 0:
        return []
    gap = np.abs(p.distances() - (p.r[:, None] + p.r[None, :]))
    np.fill_diagonal(gap, np.inf)
    return [np.flatnonzero(row <= tol).tolist() for row in gap]


@dataclass(frozen=True)
class GeoCorona:
    center: int
    petals: tuple[int, ...]

    def code(self, p: Packing) -> CoronalCode:
        return canonicalize(int(p.labels[self.center]), [int(p.labels[i]) for i in self.petals])


@dataclass
class CoronaReport:
    center: int
    petals: list
    corona: Optional[GeoCorona]
    gaps: list = field(default_factory=list)
    angle_total: float = 0.0
    reason: str = ""

    def to_dict(self, p: Packing) -> dict:
        d = {"disc": self.center, "label": int(p.labels[self.center]),
             "petals": self.petals, "valid": self.corona is not None,
             "angle_total": self.angle_total}
        if self.corona is not None:
            d["code"] = format_code(self.corona.code(p))
        if self.gaps:
            d["gaps"] = self.gaps
        if self.reason:
            d["reason"] = self.reason
        return d


def inspect_corona(p: Packing, i: int, tol: float = DEFAULT_TOL,
                   graph: Optional[list[list[int]]] = None) -> CoronaReport:
    graph = tangency_graph(p, tol) if graph is None else graph
    nbrs = graph[i]
    if len(nbrs) < 3:
        return CoronaReport(i, list(nbrs), None, reason=f"only {len(nbrs)} tangent neighbours")
    rel = p.xy[nbrs] - p.xy[i]
    order = np.argsort(np.arctan2(rel[:, 1], rel[:, 0]))
    petals = [nbrs[k] for k in order]
    unit = rel[order] / np.linalg.norm(rel[order], axis=1)[:, None]
    m = len(petals)
    total = 0.0
    gaps = []
    for k in range(m):
        a, b = petals[k], petals[(k + 1) % m]
        total += math.acos(max(-1.0, min(1.0, float(unit[k] @ unit[(k + 1) % m]))))
        if b not in graph[a]:
            gaps.append([a, b])
    report = CoronaReport(i, petals, None, gaps, total)
    if gaps:
        report.reason = "consecutive petals not tangent"
    elif abs(total - TWO_PI) > tol:
        report.reason = "angles do not close to 2*pi"
    else:
        report.corona = GeoCorona(i, tuple(petals))
    return report


def extract_corona(p: Packing, i: int, tol: float = DEFAULT_TOL) -> Optional[GeoCorona]:
    return inspect_corona(p, i, tol).corona


def codes_of_packing(p: Packing, tol: float = DEFAULT_TOL) -> CodeSet:
    """Codes of all valid coronas around interior discs."""
    covered = set(p.labels[p.interior].tolist())
    missing = [k for k in range(p.n) if k not in covered]
    if missing:
        raise InsufficientPatchError(f"insufficient patch: no interior disc with label {missing[0]}")
    graph = tangency_graph(p, tol)
    codes = []
    for i in np.flatnonzero(p.interior):
        c = inspect_corona(p, int(i), tol, graph).corona
        if c is not None:
            codes.append(c.code(p))
    return CodeSet(p.n, codes)


def place_corona(x: CoronalCode, rho: RealizerLike):
    """Lay out the petals of ``x`` around a center disc at the origin.

    Petal ``k`` sits at the cumulative realized angle of the preceding
    petal pairs. Returns ``(discs, gap)`` where ``discs`` holds
    ``(x, y, r, symbol)`` for the center followed by the petals, and ``gap``
    is ``2*pi`` minus the realized angle sum (zero when tight).
    """
    r = as_array(rho)
    c = x.center
    out = [(0.0, 0.0, float(r[c]), c)]
    theta = 0.0
    m = len(x.petals)
    for k, s in enumerate(x.petals):
        d = r[c] + r[s]
        out.append((d * math.cos(theta), d * math.sin(theta), float(r[s]), s))
        theta += eval_angle(AngleSymbol(c, s, x.petals[(k + 1) % m]), r)
    return out, TWO_PI - theta


@dataclass
class PatchReport:
    ok: bool
    n: int
    coronas: list = field(default_factory=list)
    codes: list = field(default_factory=list)
    angle_residuals: dict = field(default_factory=dict)
    measured: list = field(default_factory=list)
    reconstructed: Optional[list] = None
    errors: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "n": self.n,
            "errors": self.errors,
            "codes": self.codes,
            "angle_residuals": self.angle_residuals,
            "measured": self.measured,
            "reconstructed": self.reconstructed,
            "coronas": self.coronas,
        }


def verify_compact_patch(p: Packing, tol: float = DEFAULT_TOL, recon_tol: float = 1e-6,
                         config: SolverConfig = SolverConfig()) -> PatchReport:
    """Check interior coronas, tight angle sums at the measured radii, and
    that solving the fundamental subset of codes gives back the radii."""
    rep = PatchReport(ok=False, n=p.n, measured=p.canonical_realizer().tolist() if p.n else [])
    graph = tangency_graph(p, tol)
    codes = []
    for i in np.flatnonzero(p.interior):
        cr = inspect_corona(p, int(i), tol, graph)
        rep.coronas.append(cr.to_dict(p))
        if cr.corona is None:
            rep.errors.append(f"disc {int(i)}: {cr.reason}")
        else:
            codes.append(cr.corona.code(p))
    covered = set(p.labels[p.interior].tolist())
    missing = [k for k in range(p.n) if k not in covered]
    if missing:
        rep.errors.append(f"insufficient patch: no interior disc with label {missing[0]}")
    if rep.errors:
        return rep

    C = CodeSet(p.n, codes)
    rep.codes = [format_code(x) for x in C]
    rho = p.canonical_realizer()
    for x, val in zip(C, C.angle_sums(rho)):
        res = float(val - TWO_PI)
        rep.angle_residuals[format_code(x)] = res
        if abs(res) > tol:
            rep.errors.append(f"{format_code(x)}: angle sum off by {res:.3g}")

    if p.n >= 2 and not rep.errors:
        try:
            F = extract_fundamental(C)
        except NotACompactPackingCodeSet as exc:
            rep.errors.append(str(exc))
            return rep
        sol = solve_tight(TightSystem(F), config).solution
        if sol is None:
            rep.errors.append("reconstruction: no unique monotone tight realizer found")
        else:
            rep.reconstructed = sol.values.tolist()
            err = float(np.max(np.abs(sol.values - rho)))
            if err > recon_tol:
                rep.errors.append(f"reconstruction differs from measured radii by {err:.3g}")
    rep.ok = not rep.errors
    return rep
