"""
Orbits, derivative cocycles, Birkhoff sums and Bowen distances.

Single-point functions (`eval_map`, `cocycle`, `birkhoff_sum`, ...) are thin
wrappers around batched kernels that the estimators use directly.
"""
import logging
from typing import Tuple

import numpy as np

from pressure_lab.config import COCYCLE_HORIZON, OVERFLOW_GUARD, RENORMALIZE_THRESHOLD
from pressure_lab.errors import OverflowGuardError
from pressure_lab.systems.linalg import orthonormal_columns, spectral_norm
from pressure_lab.systems.maps import TorusMap, wrap
from pressure_lab.systems.potentials import PotentialBase

logger = logging.getLogger(__name__)


def _as_batch(point: np.ndarray) -> np.ndarray:
    return np.atleast_2d(np.asarray(point, dtype=float))


def eval_map(system: TorusMap, point: np.ndarray) -> np.ndarray:
    return wrap(system.lift(_as_batch(point)), system.side)[0]


def eval_inverse(system: TorusMap, point: np.ndarray) -> np.ndarray:
    return wrap(system.lift_inverse(_as_batch(point)), system.side)[0]


def jacobian(system: TorusMap, point: np.ndarray) -> np.ndarray:
    return system.jacobian_at(wrap(_as_batch(point), system.side))[0]


def iterate(system: TorusMap, points: np.ndarray, n: int) -> np.ndarray:
    """f^n on a batch of torus points (n may be negative)."""
    points = wrap(np.asarray(points, dtype=float), system.side)
    step = system.lift if n >= 0 else system.lift_inverse
    for _ in range(abs(n)):
        points = wrap(step(points), system.side)
    return points


def orbit(system: TorusMap, point: np.ndarray, n: int) -> np.ndarray:
    """The first n points x, f x, ..., f^{n-1} x as an (n, d) array."""
    points = np.empty((n, system.dimension))
    current = wrap(_as_batch(point), system.side)
    for i in range(n):
        points[i] = current[0]
        current = wrap(system.lift(current), system.side)
    return points


def orbit_batch(system: TorusMap, points: np.ndarray, n: int) -> np.ndarray:
    """(N, d) start points -> (n, N, d) trajectories, wrapped."""
    out = np.empty((n,) + points.shape)
    current = wrap(points, system.side)
    for i in range(n):
        out[i] = current
        current = wrap(system.lift(current), system.side)
    return out


def cocycle_batch(system: TorusMap, points: np.ndarray, n: int) -> np.ndarray:
    """
    D_x f^n for a batch of points: the ordered product of Jacobians along
    each orbit. Negative n uses the Jacobians of the inverse map; n = 0 is
    the identity.
    """
    if abs(n) > COCYCLE_HORIZON:
        raise ValueError(f"|n| = {abs(n)} exceeds the cocycle horizon {COCYCLE_HORIZON}")
    d = system.dimension
    points = wrap(np.asarray(points, dtype=float), system.side)
    product = np.broadcast_to(np.eye(d), (points.shape[0], d, d)).copy()
    forward = n >= 0
    for i in range(abs(n)):
        jac = system.jacobian_at(points) if forward else system.inverse_jacobian_at(points)
        product = jac @ product
        norm = float(np.max(np.abs(product))) if product.size else 0.0
        if not np.isfinite(norm) or norm > OVERFLOW_GUARD:
            raise OverflowGuardError(step=i + 1, norm=norm)
        points = wrap(system.lift(points) if forward else system.lift_inverse(points), system.side)
    return product


def cocycle(system: TorusMap, point: np.ndarray, n: int) -> np.ndarray:
    return cocycle_batch(system, _as_batch(point), n)[0]


def log_cocycle_norms(system: TorusMap, points: np.ndarray, n: int) -> np.ndarray:
    """
    log ||D_x f^n|| for a batch of points (n >= 0).

    A partial product is divided by its largest entry once that entry passes
    the renormalization threshold, and the removed magnitude is kept in log
    form, so the result stays finite where `cocycle_batch` hits the guard.
    """
    if n < 0 or n > COCYCLE_HORIZON:
        raise ValueError(f"n = {n} must lie in [0, {COCYCLE_HORIZON}]")
    d = system.dimension
    points = wrap(np.asarray(points, dtype=float), system.side)
    product = np.broadcast_to(np.eye(d), (points.shape[0], d, d)).copy()
    log_scale = np.zeros(points.shape[0])
    for _ in range(n):
        product = system.jacobian_at(points) @ product
        big = np.max(np.abs(product), axis=(-2, -1))
        grown = big > RENORMALIZE_THRESHOLD
        if np.any(grown):
            log_scale[grown] += np.log(big[grown])
            product[grown] /= big[grown][:, None, None]
        points = wrap(system.lift(points), system.side)
    return log_scale + np.log(spectral_norm(product))


def birkhoff_sums(system: TorusMap, potential: PotentialBase, points: np.ndarray, n: int) -> np.ndarray:
    """S_n phi for a batch of points."""
    if n < 1:
        raise ValueError("Birkhoff sums need n >= 1")
    current = wrap(np.asarray(points, dtype=float), system.side)
    total = np.zeros(current.shape[0])
    for _ in range(n):
        total += potential.evaluate(system, current)
        current = wrap(system.lift(current), system.side)
    return total


def birkhoff_sum(system: TorusMap, potential: PotentialBase, point: np.ndarray, n: int) -> float:
    return float(birkhoff_sums(system, potential, _as_batch(point), n)[0])


def torus_distance(x: np.ndarray, y: np.ndarray, side: float) -> np.ndarray:
    """Flat metric on R^d / (side Z)^d with wraparound minimization along the last axis."""
    delta = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    delta = np.mod(delta, side)
    delta = np.minimum(delta, side - delta)
    return np.sqrt(np.sum(delta * delta, axis=-1))


def bowen_distance(system: TorusMap, x: np.ndarray, y: np.ndarray, n: int) -> float:
    """d_n(x, y) = max over 0 <= i < n of d(f^i x, f^i y)."""
    if n < 1:
        raise ValueError("Bowen distance needs n >= 1")
    pair = wrap(np.vstack([_as_batch(x), _as_batch(y)]), system.side)
    worst = 0.0
    for _ in range(n):
        worst = max(worst, float(torus_distance(pair[0], pair[1], system.side)))
        pair = wrap(system.lift(pair), system.side)
    return worst


def log_vector_growth(system: TorusMap, points: np.ndarray, vectors: np.ndarray, n: int) -> np.ndarray:
    """
    log ||D_x f^n v|| for a batch of basepoints (N, d) and, per basepoint, a
    bundle of A tangent vectors given as columns of (N, d, A).

    Columns are rescaled whenever one exceeds the renormalization threshold,
    with the removed magnitude accumulated in log form.
    """
    current = wrap(np.asarray(points, dtype=float), system.side)
    columns = np.array(vectors, dtype=float)
    log_scale = np.zeros(columns.shape[0::2])
    for _ in range(n):
        columns = system.jacobian_at(current) @ columns
        norms = np.linalg.norm(columns, axis=1)
        if np.any(norms > RENORMALIZE_THRESHOLD):
            log_scale += np.log(norms)
            columns = columns / norms[:, None, :]
        current = wrap(system.lift(current), system.side)
    return log_scale + np.log(np.linalg.norm(columns, axis=1))


def log_volume_growth(system: TorusMap, points: np.ndarray, frames: np.ndarray, n: int) -> np.ndarray:
    """
    log |Jac(f^n, E)| for k-planes E spanned by orthonormal frames (N, d, k):
    the log Gram-volume of the pushed frame, with QR re-orthonormalization
    whenever a column norm passes the renormalization threshold.
    """
    current = wrap(np.asarray(points, dtype=float), system.side)
    frame = np.array(frames, dtype=float)
    log_volume = np.zeros(frame.shape[0])
    for _ in range(n):
        frame = system.jacobian_at(current) @ frame
        if np.any(np.linalg.norm(frame, axis=1) > RENORMALIZE_THRESHOLD):
            frame, log_diag = orthonormal_columns(frame)
            log_volume += log_diag.sum(axis=-1)
        current = wrap(system.lift(current), system.side)
    _, log_diag = orthonormal_columns(frame)
    return log_volume + log_diag.sum(axis=-1)


def lyapunov_spectrum(system: TorusMap, point: np.ndarray, n: int) -> np.ndarray:
    """
    Finite-time Lyapunov exponents along the orbit of `point`, ascending,
    from QR re-orthonormalization of the full tangent frame at every step.
    """
    if n < 1:
        raise ValueError("Lyapunov spectrum needs n >= 1")
    current = wrap(_as_batch(point), system.side)
    frame = np.eye(system.dimension)[None]
    sums = np.zeros(system.dimension)
    for _ in range(n):
        frame, log_diag = orthonormal_columns(system.jacobian_at(current) @ frame)
        sums += log_diag[0]
        current = wrap(system.lift(current), system.side)
    return np.sort(sums / n)


def angle_frames(angles: np.ndarray) -> np.ndarray:
    """Unit vectors (cos t, sin t) as columns: (A,) -> (2, A)."""
    return np.stack([np.cos(angles), np.sin(angles)], axis=0)


def jacobian_determinants(system: TorusMap, points: np.ndarray) -> np.ndarray:
    return np.linalg.det(system.jacobian_at(wrap(np.asarray(points, dtype=float), system.side)))


def inverse_roundtrip_error(system: TorusMap, points: np.ndarray) -> Tuple[float, float]:
    """Max torus distance of f^{-1}(f(x)) and f(f^{-1}(x)) from x over a batch."""
    points = wrap(np.asarray(points, dtype=float), system.side)
    there_back = wrap(system.lift_inverse(system.lift(points)), system.side)
    back_there = wrap(system.lift(system.lift_inverse(points)), system.side)
    return (
        float(np.max(torus_distance(there_back, points, system.side))),
        float(np.max(torus_distance(back_there, points, system.side))),
    )
