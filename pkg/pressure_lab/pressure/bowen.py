"""
Spanning-set estimator of P(f, phi) from the Bowen metric d_n.

The torus is split into a base grid of cells; a seeded sample of cells is
covered by d_n-balls of radius epsilon and the cover is scaled back up to
the whole torus. Inside a cell the candidate centres form a lattice aligned
with the singular directions of the cocycle at the cell centre, spaced so
that neighbouring lattice points stay within epsilon along the whole orbit
segment. Centres are chosen greedily (most newly covered points, ties to the
smallest S_n phi), which gives an upper bound on Q_n(f, phi, epsilon)
restricted to the lattice. The headline value is the median successive
difference log Q_{n+1} - log Q_n.
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from pressure_lab.config import BOWEN_CELL_BUDGET, BOWEN_COVER_CAP, BOWEN_SPACING_FACTOR, THREADS
from pressure_lab.models import PressureEstimate
from pressure_lab.systems.dynamics import birkhoff_sums, orbit_batch, torus_distance
from pressure_lab.systems.maps import TorusMap, wrap
from pressure_lab.systems.potentials import PotentialBase
from pressure_lab.utils.parallel import map_ordered

logger = logging.getLogger(__name__)

# lattice points farther than this many steps along a direction are never inside one d_n-ball
NEIGHBOUR_REACH = math.ceil(1.0 / BOWEN_SPACING_FACTOR) + 1


def _segment_cocycles(system: TorusMap, centre: np.ndarray, n: int) -> np.ndarray:
    """D f^i at the centre for i = 0..n-1 as an (n, d, d) stack."""
    d = system.dimension
    out = np.empty((n, d, d))
    product = np.eye(d)
    current = centre[None]
    for i in range(n):
        out[i] = product
        product = system.jacobian_at(current)[0] @ product
        current = wrap(system.lift(current), system.side)
    return out


def cell_lattice(system: TorusMap, centre: np.ndarray, cell_side: float, n: int, epsilon: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lattice points inside the cell around `centre` and their integer lattice
    coordinates. Spacing along singular direction u_k is
    spacing_factor * epsilon / max_i ||D f^i u_k||.
    """
    cocycles = _segment_cocycles(system, centre, n)
    _, _, vt = np.linalg.svd(cocycles[-1])
    directions = vt
    growth = np.max(np.linalg.norm(cocycles @ directions.T, axis=1), axis=0)
    spacing = BOWEN_SPACING_FACTOR * epsilon / growth
    reach = np.floor(cell_side * math.sqrt(system.dimension) / 2.0 / spacing).astype(int)
    axes = [np.arange(-r, r + 1) for r in reach]
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=1)
    points = centre + (coords * spacing) @ directions
    inside = np.all(np.abs(points - centre) <= cell_side / 2.0, axis=1)
    return wrap(points[inside], system.side), coords[inside]


def _neighbours(trajectories: np.ndarray, coords: np.ndarray, epsilon: float, side: float) -> List[np.ndarray]:
    """For each lattice point, the indices of lattice points within d_n distance epsilon (itself included)."""
    count, d = coords.shape
    low = coords.min(axis=0)
    shape = coords.max(axis=0) - low + 1
    index = np.full(tuple(shape), -1, dtype=int)
    index[tuple((coords - low).T)] = np.arange(count)

    pairs: List[Tuple[np.ndarray, np.ndarray]] = []
    window = np.arange(-NEIGHBOUR_REACH, NEIGHBOUR_REACH + 1)
    offsets = np.stack([m.ravel() for m in np.meshgrid(*([window] * d), indexing="ij")], axis=1)
    for offset in offsets:
        target = coords + offset - low
        valid = np.all((target >= 0) & (target < shape), axis=1)
        src = np.flatnonzero(valid)
        dst = index[tuple(target[valid].T)]
        keep = dst >= 0
        src, dst = src[keep], dst[keep]
        if src.size == 0:
            continue
        dist = np.max(torus_distance(trajectories[:, src], trajectories[:, dst], side), axis=0)
        close = dist < epsilon
        pairs.append((src[close], dst[close]))

    src = np.concatenate([p[0] for p in pairs]) if pairs else np.arange(count)
    dst = np.concatenate([p[1] for p in pairs]) if pairs else np.arange(count)
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    bounds = np.searchsorted(src, np.arange(count + 1))
    return [dst[bounds[i] : bounds[i + 1]] for i in range(count)]


def greedy_cover(neighbours: List[np.ndarray], weights: np.ndarray, cap: int) -> Optional[List[int]]:
    """
    Greedy spanning set: repeatedly take the candidate covering the most
    uncovered points, ties broken by the smallest weight. None past the cap.
    """
    counts = np.array([len(nb) for nb in neighbours])
    covered = np.zeros(len(neighbours), dtype=bool)
    chosen: List[int] = []
    while not covered.all():
        best = counts.max()
        tied = np.flatnonzero(counts == best)
        pick = int(tied[np.argmin(weights[tied])])
        chosen.append(pick)
        if len(chosen) > cap:
            return None
        fresh = neighbours[pick][~covered[neighbours[pick]]]
        covered[fresh] = True
        for q in fresh:
            counts[neighbours[q]] -= 1
    return chosen


def _cover_cell(
    system: TorusMap,
    potential: PotentialBase,
    centre: np.ndarray,
    cell_side: float,
    n: int,
    epsilon: float,
    cap: int,
) -> Optional[Tuple[float, int]]:
    points, coords = cell_lattice(system, centre, cell_side, n, epsilon)
    if points.shape[0] > 50 * cap:
        return None
    trajectories = orbit_batch(system, points, n)
    sums = birkhoff_sums(system, potential, points, n)
    chosen = greedy_cover(_neighbours(trajectories, coords, epsilon, system.side), sums, cap)
    if chosen is None:
        return None
    return float(logsumexp(sums[chosen])), len(chosen)


def sample_cells(system: TorusMap, cells_per_axis: int, cell_budget: int, seed: int) -> Tuple[np.ndarray, int]:
    """Centres of a seeded sample of base-grid cells, and the total number of cells."""
    total = cells_per_axis**system.dimension
    rng = np.random.default_rng(seed)
    picked = np.sort(rng.choice(total, size=min(cell_budget, total), replace=False))
    idx = np.stack(np.unravel_index(picked, (cells_per_axis,) * system.dimension), axis=1)
    return (idx + 0.5) * (system.side / cells_per_axis), total


def bowen_pressure(
    system: TorusMap,
    potential: PotentialBase,
    n_range: Tuple[int, int],
    epsilon: float,
    grid_density: Optional[int] = None,
    cell_budget: int = BOWEN_CELL_BUDGET,
    seed: int = 0,
    cover_cap: int = BOWEN_COVER_CAP,
    threads: int = THREADS,
) -> PressureEstimate:
    """
    epsilon is relative to the side of the fundamental domain; grid_density
    is the number of base cells per axis and must resolve epsilon / 2.
    """
    if not 0.0 < epsilon < 0.25:
        raise ValueError("epsilon must lie in (0, 0.25)")
    start, stop = n_range
    if not 1 <= start < stop:
        raise ValueError("n_range must satisfy 1 <= start < stop")
    cells_per_axis = grid_density or math.ceil(2.5 / epsilon)
    if 1.0 / cells_per_axis >= epsilon / 2.0:
        raise ValueError(f"grid_density {cells_per_axis} too coarse for epsilon {epsilon}: spacing must be < epsilon/2")

    eps = epsilon * system.side
    cell_side = system.side / cells_per_axis
    centres, total = sample_cells(system, cells_per_axis, cell_budget, seed)
    log_scale = math.log(total / centres.shape[0])

    log_q: List[Tuple[int, float]] = []
    flags: List[str] = []
    warnings: List[str] = []
    for n in range(start, stop + 1):
        covers = map_ordered(
            lambda c: _cover_cell(system, potential, c, cell_side, n, eps, cover_cap),
            list(centres),
            threads,
        )
        size = sum(c[1] for c in covers if c is not None)
        if any(c is None for c in covers) or size > cover_cap:
            msg = f"cover cardinality past cap {cover_cap} at n={n}; n range truncated to [{start}, {n - 1}]"
            logger.warning(msg)
            warnings.append(msg)
            flags.append("budget-exhausted")
            break
        value = float(logsumexp([c[0] for c in covers if c is not None])) + log_scale
        log_q.append((n, value))
        logger.debug(f"bowen n={n}: cover size {size}, log Q_n {value!r}")

    differences = [b[1] - a[1] for a, b in zip(log_q, log_q[1:])]
    if differences:
        headline = float(np.median(differences))
    elif log_q:
        headline = log_q[0][1] / log_q[0][0]
        flags.append("raw-rate")
    else:
        headline = float("nan")
        flags.append("no-data")
    return PressureEstimate(
        value=headline,
        method="bowen",
        bound_kind="heuristic",
        parameters={
            "n_range": [start, stop],
            "epsilon": epsilon,
            "grid_density": cells_per_axis,
            "cell_budget": int(centres.shape[0]),
            "seed": seed,
            "log_Q": [v for _, v in log_q],
            "differences": differences,
        },
        series=tuple((float(n), v / n) for n, v in log_q),
        flags=tuple(flags),
        warnings=tuple(warnings),
    )
