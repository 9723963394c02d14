"""
Periodic orbit search by Newton iteration on the torus displacement
x -> F^T(x) - x, reduced to the centred fundamental domain (the nearest
integer translation is absorbed at every step).
"""
import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from pressure_lab.config import (
    DEDUP_DISTANCE,
    DET_TOLERANCE,
    MAX_SEEDS,
    MINIMAL_PERIOD_TOLERANCE,
    NEWTON_DAMPED_RETRIES,
    NEWTON_MAX_ITER,
    NEWTON_TOLERANCE,
    RESIDUAL_TOLERANCE,
    THREADS,
)
from pressure_lab.models import OrbitCatalog, PeriodicOrbit
from pressure_lab.orbits.spectrum import build_orbit
from pressure_lab.systems.dynamics import iterate, torus_distance
from pressure_lab.systems.maps import LinearTorusMap, TorusMap, wrap
from pressure_lab.utils.parallel import chunked, map_ordered

logger = logging.getLogger(__name__)

SEED_CHUNK = 4096


def _centred(delta: np.ndarray, side: float) -> np.ndarray:
    return delta - side * np.rint(delta / side)


def _displacement(system: TorusMap, points: np.ndarray, period: int) -> Tuple[np.ndarray, np.ndarray]:
    """Centred F^T(x) - x and D_x F^T - I for a batch of points."""
    d = system.dimension
    current = points
    product = np.broadcast_to(np.eye(d), (points.shape[0], d, d)).copy()
    for _ in range(period):
        product = system.jacobian_at(current) @ product
        current = wrap(system.lift(current), system.side)
    return _centred(current - points, system.side), product - np.eye(d)


def _newton(system: TorusMap, seeds: np.ndarray, period: int, damping: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Damped Newton from every seed. Returns the final points and a mask of
    converged seeds; seeds hitting a singular system are left unconverged.
    """
    x = wrap(seeds.copy(), system.side)
    active = np.ones(x.shape[0], dtype=bool)
    converged = np.zeros(x.shape[0], dtype=bool)
    for _ in range(NEWTON_MAX_ITER):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        g, dg = _displacement(system, x[idx], period)
        residual = np.linalg.norm(g, axis=1)
        done = residual <= NEWTON_TOLERANCE
        converged[idx[done]] = True
        active[idx[done]] = False
        idx, g, dg = idx[~done], g[~done], dg[~done]
        if idx.size == 0:
            break
        singular = np.abs(np.linalg.det(dg)) < DET_TOLERANCE
        active[idx[singular]] = False
        idx, g, dg = idx[~singular], g[~singular], dg[~singular]
        if idx.size == 0:
            break
        step = np.linalg.solve(dg, g[..., None])[..., 0]
        x[idx] = wrap(x[idx] - damping * step, system.side)
    # a final pass accepts seeds that stalled just above the Newton tolerance
    pending = np.flatnonzero(~converged)
    if pending.size:
        g, _ = _displacement(system, x[pending], period)
        converged[pending[np.linalg.norm(g, axis=1) <= RESIDUAL_TOLERANCE]] = True
    return x, converged


def _solve_chunk(args: Tuple[TorusMap, np.ndarray, int]) -> Tuple[np.ndarray, int]:
    system, seeds, period = args
    found: List[np.ndarray] = []
    remaining = seeds
    for attempt in range(NEWTON_DAMPED_RETRIES + 1):
        x, ok = _newton(system, remaining, period, damping=0.5**attempt)
        found.append(x[ok])
        remaining = remaining[~ok]
        if remaining.shape[0] == 0:
            break
    points = np.vstack(found) if found else np.empty((0, system.dimension))
    return points, int(remaining.shape[0])


def seed_grid(system: TorusMap, grid_density: int, seed: int) -> np.ndarray:
    """Uniform grid_density^d seed lattice shifted by one seeded random offset."""
    rng = np.random.default_rng(seed)
    spacing = system.side / grid_density
    offset = rng.uniform(0.0, spacing, size=system.dimension)
    axes = [np.arange(grid_density) * spacing + offset[i] for i in range(system.dimension)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return wrap(np.stack([m.ravel() for m in mesh], axis=1), system.side)


def canonical_points(system: TorusMap, point: np.ndarray, period: int) -> np.ndarray:
    """Orbit points rotated so the lexicographically smallest comes first."""
    pts = np.empty((period, system.dimension))
    current = wrap(np.atleast_2d(point), system.side)
    for i in range(period):
        pts[i] = current[0]
        current = wrap(system.lift(current), system.side)
    start = int(np.lexsort(pts.T[::-1])[0])
    return np.roll(pts, -start, axis=0)


def is_minimal_period(system: TorusMap, point: np.ndarray, period: int) -> bool:
    p = np.atleast_2d(point)
    for t in range(1, period):
        if period % t == 0:
            if float(torus_distance(iterate(system, p, t)[0], p[0], system.side)) < MINIMAL_PERIOD_TOLERANCE:
                return False
    return True


def orbit_distance(a: np.ndarray, b: np.ndarray, side: float) -> float:
    """Pointwise torus distance between two orbits of the same period under the best cyclic shift."""
    best = math.inf
    for s in range(a.shape[0]):
        best = min(best, float(np.max(torus_distance(np.roll(a, -s, axis=0), b, side))))
    return best


def _deduplicate(system: TorusMap, points: np.ndarray, period: int) -> List[np.ndarray]:
    if points.shape[0] == 0:
        return []
    keys = np.round(points / (DEDUP_DISTANCE * system.side), 0)
    _, first = np.unique(keys, axis=0, return_index=True)
    candidates = points[np.sort(first)]

    reps: Dict[Tuple[float, ...], np.ndarray] = {}
    for p in candidates:
        if not is_minimal_period(system, p, period):
            continue
        orbit_pts = canonical_points(system, p, period)
        key = tuple(np.round(orbit_pts[0] / (DEDUP_DISTANCE * system.side)).tolist())
        reps.setdefault(key, orbit_pts)

    kept: List[np.ndarray] = []
    stacked = np.empty((0, period, system.dimension))
    for orbit_pts in reps.values():
        if stacked.shape[0]:
            dists = np.full(stacked.shape[0], np.inf)
            for s in range(period):
                shifted = np.roll(orbit_pts, -s, axis=0)
                dists = np.minimum(dists, np.max(torus_distance(stacked, shifted[None], system.side), axis=1))
            if np.min(dists) < DEDUP_DISTANCE:
                continue
        kept.append(orbit_pts)
        stacked = np.concatenate([stacked, orbit_pts[None]], axis=0)
    return kept


def linear_point_counts(system: LinearTorusMap, max_n: int) -> Dict[int, int]:
    """|det(A^n - I)|: the number of points with f^n x = x (skipped where it vanishes)."""
    counts: Dict[int, int] = {}
    a = np.array(system.matrix, dtype=np.int64)
    power = np.eye(system.dimension, dtype=np.int64)
    for n in range(1, max_n + 1):
        power = power @ a
        value = abs(round(float(np.linalg.det((power - np.eye(system.dimension, dtype=np.int64)).astype(float)))))
        if value:
            counts[n] = value
    return counts


def find_periodic_orbits(
    system: TorusMap,
    max_period: int,
    grid_density: int,
    seed: int,
    threads: int = THREADS,
    max_seeds: int = MAX_SEEDS,
) -> OrbitCatalog:
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    if grid_density < 2:
        raise ValueError("grid_density must be >= 2")

    seeds = seed_grid(system, grid_density, seed)
    warnings: List[str] = []
    exhaustive = True
    truncated = False
    if seeds.shape[0] > max_seeds:
        rng = np.random.default_rng(seed + 1)
        seeds = seeds[np.sort(rng.choice(seeds.shape[0], size=max_seeds, replace=False))]
        msg = f"seed grid truncated to {max_seeds} of {grid_density ** system.dimension} seeds"
        logger.warning(msg)
        warnings.append(msg)
        exhaustive = False
        truncated = True

    spacing = system.side / grid_density
    lipschitz = system.lipschitz()
    orbits: List[Tuple[int, np.ndarray]] = []
    discarded = 0
    for period in range(1, max_period + 1):
        results = map_ordered(_solve_chunk, [(system, c, period) for c in chunked(seeds, SEED_CHUNK)], threads)
        converged = np.vstack([r[0] for r in results])
        failed = sum(r[1] for r in results)
        discarded += failed
        if failed:
            logger.warning(f"period {period}: discarded {failed} Newton seeds (singular or non-convergent)")
        # the seed lattice resolves every orbit only if the displacement map cannot fold a grid cell
        if spacing * math.sqrt(system.dimension) * (lipschitz**period + 1.0) > system.side / 2.0:
            exhaustive = False
        for orbit_pts in _deduplicate(system, converged, period):
            orbits.append((period, orbit_pts))
        logger.debug(f"period {period}: {len(converged)} converged seeds")

    orbits.sort(key=lambda item: (item[0], tuple(item[1][0].tolist())))
    records: List[PeriodicOrbit] = []
    index: Dict[int, int] = {}
    for period, orbit_pts in orbits:
        i = index.get(period, 0)
        record = build_orbit(system, orbit_pts[0], period, orbit_id=f"T{period}-{i}")
        if record.residual > RESIDUAL_TOLERANCE:
            logger.warning(f"dropping orbit at {orbit_pts[0].tolist()} (period {period}): residual {record.residual:.2e}")
            discarded += 1
            continue
        index[period] = i + 1
        records.append(record)

    count_check: Optional[Dict[int, Tuple[int, int]]] = None
    if isinstance(system, LinearTorusMap):
        count_check = {}
        expected = linear_point_counts(system, max_period)
        for n, value in expected.items():
            found = sum(r.period for r in records if n % r.period == 0)
            count_check[n] = (found, value)
            if found != value:
                msg = f"count check failed for n={n}: found {found} points, expected {value}"
                logger.warning(msg)
                warnings.append(msg)
        exhaustive = bool(expected) and all(f == e for f, e in count_check.values()) and len(warnings) == 0

    logger.info(f"found {len(records)} periodic orbits up to period {max_period} for {system.label}")
    return OrbitCatalog(
        system=system,
        max_period=max_period,
        grid_density=grid_density,
        seed=seed,
        newton_iterations=NEWTON_MAX_ITER,
        orbits=tuple(records),
        exhaustive=exhaustive,
        count_check=count_check,
        discarded_seeds=discarded,
        warnings=tuple(warnings),
        truncated=truncated,
    )
