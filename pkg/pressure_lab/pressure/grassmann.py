"""
sigma_k(f, phi): per-n sup over k-planes of (1/n)(log|Jac(f^n, E)| + S_n phi)
and the pressure max_k sigma_k.

On surfaces k = 1 lines are parametrized by an angle in [0, pi): a coarse
basepoint x angle grid is scored in one batched pass, then the best cells
are refined (bounded scalar search on the angle, coordinate hill-climbing on
the basepoint). Other (d, k) fall back to seeded random orthonormal frames.
"""
import logging
import math
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from pressure_lab.config import (
    CONSERVATIVE_EXPONENT_TOLERANCE,
    GRASSMANN_ANGLES,
    GRASSMANN_BASEPOINTS,
    GRASSMANN_REFINE_CANDIDATES,
    GRASSMANN_REFINE_STEPS,
    THREADS,
)
from pressure_lab.models import Budgets, PressureEstimate, TangentFrame
from pressure_lab.systems.dynamics import (
    angle_frames,
    birkhoff_sums,
    jacobian_determinants,
    log_vector_growth,
    log_volume_growth,
)
from pressure_lab.systems.maps import TorusMap, wrap
from pressure_lab.systems.potentials import PotentialBase
from pressure_lab.utils.parallel import map_ordered

logger = logging.getLogger(__name__)


def basepoint_grid(system: TorusMap, per_axis: int, rng: np.random.Generator) -> np.ndarray:
    spacing = system.side / per_axis
    offset = rng.uniform(0.0, spacing, size=system.dimension)
    axes = [np.arange(per_axis) * spacing + offset[i] for i in range(system.dimension)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return wrap(np.stack([m.ravel() for m in mesh], axis=1), system.side)


def is_conservative(system: TorusMap, points: np.ndarray) -> bool:
    dets = jacobian_determinants(system, points)
    return bool(np.max(np.abs(np.abs(dets) - 1.0)) <= CONSERVATIVE_EXPONENT_TOLERANCE)


def _hill_climb(objective: Callable[[np.ndarray], np.ndarray], x: np.ndarray, step: float, steps: int, side: float) -> Tuple[np.ndarray, float]:
    """Coordinate search on the torus: move to the best improving neighbour, halve the step otherwise."""
    best = float(objective(x[None])[0])
    d = x.shape[0]
    moves = np.vstack([np.eye(d), -np.eye(d)])
    for _ in range(steps):
        neighbours = wrap(x[None] + step * moves, side)
        scores = objective(neighbours)
        i = int(np.argmax(scores))
        if scores[i] > best:
            best, x = float(scores[i]), neighbours[i]
        else:
            step /= 2.0
    return x, best


def _refine_angle(score: Callable[[float], float], theta: float, half_width: float, steps: int) -> Tuple[float, float]:
    if steps == 0:
        return theta, score(theta)
    result = minimize_scalar(
        lambda t: -score(t),
        bounds=(theta - half_width, theta + half_width),
        method="bounded",
        options={"maxiter": steps, "xatol": 1e-12},
    )
    # the bounded search may end worse than its starting cell on flat objectives
    best_theta, best = (float(result.x), float(-result.fun))
    start = score(theta)
    return (best_theta, best) if best >= start else (theta, start)


def _birkhoff_sup(
    system: TorusMap,
    potential: PotentialBase,
    n: int,
    points: np.ndarray,
    spacing: float,
    refine_steps: int,
) -> float:
    """sup_x S_n phi(x) / n over a basepoint grid with hill-climbing on the best cells."""

    def objective(x: np.ndarray) -> np.ndarray:
        return birkhoff_sums(system, potential, x, n) / n

    scores = objective(points)
    best = float(np.max(scores))
    for i in np.argsort(scores)[::-1][:GRASSMANN_REFINE_CANDIDATES]:
        _, value = _hill_climb(objective, points[i], spacing / 2.0, refine_steps, system.side)
        best = max(best, value)
    return best


def _line_sup(
    system: TorusMap,
    potential: PotentialBase,
    n: int,
    points: np.ndarray,
    angles: int,
    spacing: float,
    refine_steps: int,
) -> float:
    """d = 2, k = 1: sup over basepoints and angles of (log||D f^n v|| + S_n phi) / n."""
    thetas = np.arange(angles) * (math.pi / angles)
    frames = np.broadcast_to(angle_frames(thetas), (points.shape[0], 2, angles))
    growth = log_vector_growth(system, points, frames, n)
    sums = birkhoff_sums(system, potential, points, n)
    scores = (growth + sums[:, None]) / n
    best = float(np.max(scores))

    flat = np.argsort(scores, axis=None)[::-1][:GRASSMANN_REFINE_CANDIDATES]
    for i, j in zip(*np.unravel_index(flat, scores.shape)):
        x = points[i]

        def line_score(theta: float, x: np.ndarray = x) -> float:
            v = angle_frames(np.array([theta]))[None]
            return float((log_vector_growth(system, x[None], v, n)[0, 0] + birkhoff_sums(system, potential, x[None], n)[0]) / n)

        theta, value = _refine_angle(line_score, float(thetas[j]), math.pi / angles, refine_steps)

        def basepoint_score(xs: np.ndarray, theta: float = theta) -> np.ndarray:
            v = np.broadcast_to(angle_frames(np.array([theta])), (xs.shape[0], 2, 1))
            return (log_vector_growth(system, xs, v, n)[:, 0] + birkhoff_sums(system, potential, xs, n)) / n

        x, value = _hill_climb(basepoint_score, x, spacing / 2.0, refine_steps, system.side)
        theta, value = _refine_angle(lambda t: float(basepoint_score(x[None], t)[0]), theta, math.pi / angles, refine_steps)
        best = max(best, value)
    return best


def _frame_sup(
    system: TorusMap,
    potential: PotentialBase,
    n: int,
    k: int,
    points: np.ndarray,
    frames_per_point: int,
    rng: np.random.Generator,
) -> float:
    """General (d, k): random orthonormal k-frames at every basepoint."""
    d = system.dimension
    sums = birkhoff_sums(system, potential, points, n)
    best = -np.inf
    for _ in range(frames_per_point):
        gaussian = rng.standard_normal((points.shape[0], d, k))
        frames, _ = np.linalg.qr(gaussian)
        scores = (log_volume_growth(system, points, frames, n) + sums) / n
        best = max(best, float(np.max(scores)))
    return best


def sigma_k(
    system: TorusMap,
    potential: PotentialBase,
    k: int,
    n_list: List[int],
    sample_budget: int = GRASSMANN_ANGLES,
    seed: int = 0,
    basepoints: int = GRASSMANN_BASEPOINTS,
    refine_steps: int = GRASSMANN_REFINE_STEPS,
    threads: int = THREADS,
) -> PressureEstimate:
    """
    Headline value is the min over n of the per-n sup: each per-n sup bounds
    the limit from above, up to sampling error.
    """
    d = system.dimension
    if not 1 <= k <= d:
        raise ValueError(f"k must lie in 1..{d}")
    if not n_list or sorted(set(n_list)) != list(n_list) or n_list[0] < 1:
        raise ValueError("n_list must be strictly ascending positive integers")

    rng = np.random.default_rng(seed)
    points = basepoint_grid(system, basepoints, rng)
    spacing = system.side / basepoints
    flags: List[str] = []

    if k == d and is_conservative(system, points):
        mode = "volume-preserving"
    elif d == 2 and k == 1:
        mode = "angle-grid"
        flags.append("sampled-sup")
    else:
        mode = "random-frames"
        flags.append("sampled-sup")
    frame_seeds = rng.integers(0, 2**32, size=len(n_list))

    def per_n(item: Tuple[int, int]) -> float:
        n, frame_seed = item
        if mode == "volume-preserving":
            value = _birkhoff_sup(system, potential, n, points, spacing, refine_steps)
        elif mode == "angle-grid":
            value = _line_sup(system, potential, n, points, sample_budget, spacing, refine_steps)
        else:
            frames_per_point = max(1, sample_budget // points.shape[0])
            value = _frame_sup(system, potential, n, k, points, frames_per_point, np.random.default_rng(frame_seed))
        logger.debug(f"sigma_{k} n={n}: per-n sup {value!r}")
        return value

    values = map_ordered(per_n, list(zip(n_list, frame_seeds.tolist())), threads)
    series = tuple((float(n), float(v)) for n, v in zip(n_list, values))
    return PressureEstimate(
        value=float(min(values)),
        method="grassmann",
        bound_kind="upper",
        parameters={
            "k": k,
            "n_list": list(n_list),
            "sample_budget": sample_budget,
            "basepoints": basepoints,
            "refine_steps": refine_steps,
            "seed": seed,
            "mode": mode,
        },
        series=series,
        flags=tuple(flags),
    )


def birkhoff_sigma(
    system: TorusMap,
    potential: PotentialBase,
    n_list: List[int],
    seed: int = 0,
    basepoints: int = GRASSMANN_BASEPOINTS,
    refine_steps: int = GRASSMANN_REFINE_STEPS,
) -> float:
    """The k = 0 term: min over n of sup_x S_n phi(x) / n."""
    rng = np.random.default_rng(seed)
    points = basepoint_grid(system, basepoints, rng)
    spacing = system.side / basepoints
    return float(min(_birkhoff_sup(system, potential, n, points, spacing, refine_steps) for n in n_list))


def grassmann_pressure(
    system: TorusMap,
    potential: PotentialBase,
    budgets: Optional[Budgets] = None,
    seed: int = 0,
    threads: int = THREADS,
) -> PressureEstimate:
    """max over k = 1..d of sigma_k, with the arg-max k and the k = 0 diagnostic."""
    budgets = budgets or Budgets()
    per_k: Dict[int, PressureEstimate] = {}
    for k in range(1, system.dimension + 1):
        per_k[k] = sigma_k(
            system,
            potential,
            k,
            budgets.n_list,
            sample_budget=budgets.angles,
            seed=seed,
            basepoints=budgets.basepoints,
            refine_steps=budgets.refine_steps,
            threads=threads,
        )
    best_k = max(per_k, key=lambda k: per_k[k].value)
    k0 = birkhoff_sigma(system, potential, budgets.n_list, seed, budgets.basepoints, budgets.refine_steps)
    logger.info(f"grassmann pressure {per_k[best_k].value!r} at k={best_k} (k=0 diagnostic {k0!r})")
    return PressureEstimate(
        value=per_k[best_k].value,
        method="grassmann",
        bound_kind="upper",
        parameters={
            "n_list": list(budgets.n_list),
            "sigma": {str(k): e.value for k, e in per_k.items()},
            "k0_birkhoff_sup": k0,
            "seed": seed,
        },
        series=per_k[best_k].series,
        argmax=f"k={best_k}",
        flags=tuple(sorted({f for e in per_k.values() for f in e.flags})),
    )


def frame_score(system: TorusMap, potential: PotentialBase, frame: TangentFrame, n: int) -> float:
    """(1/n)(log|Jac(f^n, E)| + S_n phi) for one k-plane E given by an orthonormal frame."""
    if n < 1:
        raise ValueError("n must be >= 1")
    point = np.array(frame.basepoint, dtype=float)[None]
    growth = log_volume_growth(system, point, frame.columns()[None], n)[0]
    return float((growth + birkhoff_sums(system, potential, point, n)[0]) / n)
