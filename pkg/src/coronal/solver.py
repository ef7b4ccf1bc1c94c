"""Finding realizers at which every code of a set closes up to exactly 2*pi.

Two routes are provided. :func:`solve_center0_binary` bisects on the center
radius of a single two-size code with the small disc at the center; the
angle sum of such a code strictly decreases as the center grows.
:func:`solve_tight` runs damped Newton (Gauss-Newton for non-square
systems) on log-radii from a grid of starting points and clusters what
converges.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import kernels
from .codes import CoronalCode, angle_sum
from .realize import Realizer, RealizerLike, as_array, eval_angle_sum
from .sets import CodeSet

TWO_PI = 2.0 * math.pi
MIN_DAMPING = 2.0 ** -10


class DegenerateCodeError(ValueError):
    """Angle sum does not depend on the unknown radius at all."""


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    max_iter: int = 100
    grid: int = 9
    grid_lo: float = 0.02
    grid_hi: float = 1.0
    cluster_dist: float = 1e-8
    # radii below this are limits of degenerate coronas, not solutions
    min_radius: float = 1e-9
    seed: Optional[int] = None
    jitter: float = 0.0
    jobs: int = 1


@dataclass(frozen=True)
class TightSystem:
    codes: CodeSet

    def __post_init__(self):
        if len(self.codes) == 0:
            raise ValueError("a tight system needs at least one code")

    @property
    def n(self) -> int:
        return self.codes.n

    @cached_property
    def terms(self):
        return self.codes.term_arrays()

    def values(self, rho: RealizerLike) -> np.ndarray:
        return kernels.system_values(*self.terms, as_array(rho), len(self.codes))

    def jacobian(self, rho: RealizerLike):
        return kernels.system_jacobian(*self.terms, as_array(rho), len(self.codes))


@dataclass
class SolveReport:
    solution: Optional[Realizer]
    residual_inf: float
    starts_tried: int
    distinct_solutions_found: int
    clusters: list = field(default_factory=list)
    converged_starts: int = 0
    ambiguous: bool = False

    def to_dict(self) -> dict:
        return {
            "solution": None if self.solution is None else self.solution.values.tolist(),
            "residual_inf": self.residual_inf,
            "starts_tried": self.starts_tried,
            "converged_starts": self.converged_starts,
            "distinct_solutions_found": self.distinct_solutions_found,
            "ambiguous": self.ambiguous,
            "clusters": [c.values.tolist() for c in self.clusters],
        }


def residual(system: TightSystem, rho: RealizerLike) -> np.ndarray:
    return system.values(rho) - TWO_PI


def solve_center0_binary(x: CoronalCode, eps: float = 1e-9, tol: float = 1e-12) -> Optional[float]:
    """Small-center radius ``r`` in ``(0, 1)`` tightly realizing ``x`` with the
    large symbol fixed at 1, or ``None`` if there is none."""
    if x.center != 0 or not x.symbols <= {0, 1}:
        raise ValueError(f"{x} is not a center-0 code over {{0, 1}}")
    s = angle_sum(x)
    if 1 not in x.petal_set:
        if len(x) == 6:
            raise DegenerateCodeError(f"{x}: degenerate-constant, every radius is tight")
        return None

    def f(r):
        return eval_angle_sum(s, [r, 1.0]) - TWO_PI

    f_hi = f(1.0)
    if f_hi >= -tol:
        return None
    lo, hi = eps, 1.0
    if f(lo) < 0:
        return None
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) <= tol or mid in (lo, hi):
            break
        if fm > 0:
            lo = mid
        else:
            hi = mid
    return mid


def _start_points(k: int, config: SolverConfig) -> np.ndarray:
    axis = np.geomspace(config.grid_lo, config.grid_hi, config.grid)
    pts = np.array(list(itertools.product(axis, repeat=k)), dtype=np.float64)
    if config.jitter > 0:
        rng = np.random.default_rng(config.seed)
        pts = pts * np.exp(config.jitter * rng.standard_normal(pts.shape))
    return pts


def _newton(system: TightSystem, r0: np.ndarray, config: SolverConfig):
    """Damped Newton on log-radii of symbols ``0..n-2``; returns the
    normalized radii and residual, or ``None`` if the start is abandoned."""
    k = system.n - 1
    u = np.log(r0)
    rho = np.ones(system.n)
    rho[:k] = np.exp(u)
    vals, jac = system.jacobian(rho)
    F = vals - TWO_PI
    norm = math.sqrt(F @ F)
    for _ in range(config.max_iter):
        if np.max(np.abs(F)) <= config.tol * 1e-3:
            break
        Ju = jac[:, :k] * rho[:k]
        step, _, rank, _ = np.linalg.lstsq(Ju, -F, rcond=None)
        if rank < min(Ju.shape):
            return None
        smax = np.max(np.abs(step))
        if smax > 2.0:
            step *= 2.0 / smax
        lam = 1.0
        # a start that needs tiny steps is stalling near a non-root minimum
        while lam >= MIN_DAMPING:
            u_new = np.minimum(np.maximum(u + lam * step, -40.0), 40.0)
            rho_new = np.ones(system.n)
            rho_new[:k] = np.exp(u_new)
            vals_new, jac_new = system.jacobian(rho_new)
            F_new = vals_new - TWO_PI
            norm_new = math.sqrt(F_new @ F_new)
            if norm_new < (1 - 1e-4 * lam) * norm:
                break
            lam *= 0.5
        else:
            break
        u, rho, F, jac, norm = u_new, rho_new, F_new, jac_new, norm_new
    res = float(np.max(np.abs(F)))
    if res > config.tol or rho.min() < config.min_radius:
        return None
    return rho, res


def solve_tight(system: TightSystem, config: SolverConfig = SolverConfig()) -> SolveReport:
    n = system.n
    if n == 1:
        rho = np.ones(1)
        res = float(np.max(np.abs(residual(system, rho))))
        sol = Realizer(rho) if res <= config.tol else None
        return SolveReport(sol, res, 1, int(sol is not None),
                           [sol] if sol else [], int(sol is not None))
    starts = _start_points(n - 1, config)
    if config.jobs > 1:
        with ThreadPoolExecutor(config.jobs) as ex:
            results = list(ex.map(lambda r: _newton(system, r, config), starts))
    else:
        results = [_newton(system, r, config) for r in starts]

    converged = [r for r in results if r is not None]
    clusters: list[tuple[np.ndarray, float]] = []
    for rho, res in converged:
        for j, (c, cres) in enumerate(clusters):
            if np.max(np.abs(rho - c)) <= config.cluster_dist:
                if res < cres:
                    clusters[j] = (rho, res)
                break
        else:
            clusters.append((rho, res))

    # sizes closer than the clustering distance are not distinct sizes
    monotone = [(c, res) for c, res in clusters if np.all(np.diff(c) > config.cluster_dist)]
    solution, ambiguous = None, False
    if len(monotone) == 1:
        solution = Realizer(monotone[0][0])
        best = monotone[0][1]
    else:
        ambiguous = len(monotone) > 1
        best = min((res for _, res in clusters), default=math.inf)
    return SolveReport(
        solution=solution,
        residual_inf=float(best),
        starts_tried=len(starts),
        distinct_solutions_found=len(clusters),
        clusters=[Realizer(c) for c, _ in clusters],
        converged_starts=len(converged),
        ambiguous=ambiguous,
    )
