"""
Multipliers, eigenvalues, Lyapunov exponents and the periodic-orbit
pressure functional Delta_phi(f, p) = Delta(f, p) + (1/T) S_T phi(p).
"""
import logging
from typing import List, Sequence

import numpy as np

from pressure_lab.config import CLASSIFICATION_BAND, CONSERVATIVE_EXPONENT_TOLERANCE
from pressure_lab.models import OrbitClass, PeriodicOrbit
from pressure_lab.systems.dynamics import orbit as orbit_points
from pressure_lab.systems.dynamics import torus_distance
from pressure_lab.systems.linalg import eigenvalues
from pressure_lab.systems.maps import TorusMap, wrap
from pressure_lab.systems.potentials import PotentialBase

logger = logging.getLogger(__name__)


def _as_tuple_matrix(m: np.ndarray):
    return tuple(tuple(float(v) for v in row) for row in m)


def classify_eigenvalues(eigs: np.ndarray) -> OrbitClass:
    moduli = np.abs(eigs)
    if np.max(np.abs(moduli - 1.0)) > CLASSIFICATION_BAND:
        return OrbitClass.SADDLE
    if np.all(np.abs(eigs - 1.0) > CLASSIFICATION_BAND):
        return OrbitClass.ELLIPTIC
    return OrbitClass.PARABOLIC


def exponents_from_eigenvalues(eigs: np.ndarray, period: int) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.sort(np.log(np.abs(eigs)) / period)


def build_orbit(system: TorusMap, point: Sequence[float], period: int, orbit_id: str = "") -> PeriodicOrbit:
    """Assemble a PeriodicOrbit for a point already known to satisfy f^T(p) = p."""
    if period < 1:
        raise ValueError("period must be >= 1")
    pts = orbit_points(system, np.asarray(point, dtype=float), period)
    jacs = system.jacobian_at(pts)
    multiplier = np.eye(system.dimension)
    for jac in jacs:
        multiplier = jac @ multiplier
    closing = wrap(system.lift(pts[-1:]), system.side)[0]
    residual = float(torus_distance(closing, pts[0], system.side))
    eigs = eigenvalues(multiplier)
    return PeriodicOrbit(
        orbit_id=orbit_id,
        point=tuple(float(v) for v in pts[0]),
        period=period,
        points=tuple(tuple(float(v) for v in p) for p in pts),
        jacobians=tuple(_as_tuple_matrix(j) for j in jacs),
        multiplier=_as_tuple_matrix(multiplier),
        eigenvalues_real=tuple(float(e.real) for e in eigs),
        eigenvalues_imag=tuple(float(e.imag) for e in eigs),
        exponents=tuple(float(v) for v in exponents_from_eigenvalues(eigs, period)),
        classification=classify_eigenvalues(eigs),
        residual=residual,
    )


def orbit_from_multiplier(multiplier: np.ndarray, period: int = 1, orbit_id: str = "") -> PeriodicOrbit:
    """A detached orbit record built from a multiplier alone (no basepoint data)."""
    m = np.asarray(multiplier, dtype=float)
    eigs = eigenvalues(m)
    d = m.shape[0]
    return PeriodicOrbit(
        orbit_id=orbit_id,
        point=tuple(0.0 for _ in range(d)),
        period=period,
        points=tuple(tuple(0.0 for _ in range(d)) for _ in range(period)),
        jacobians=(_as_tuple_matrix(m),) if period == 1 else (),
        multiplier=_as_tuple_matrix(m),
        eigenvalues_real=tuple(float(e.real) for e in eigs),
        eigenvalues_imag=tuple(float(e.imag) for e in eigs),
        exponents=tuple(float(v) for v in exponents_from_eigenvalues(eigs, period)),
        classification=classify_eigenvalues(eigs),
        residual=0.0,
    )


def classify(orbit: PeriodicOrbit) -> OrbitClass:
    return classify_eigenvalues(orbit.eigenvalues)


def orbit_lyapunov(orbit: PeriodicOrbit) -> List[float]:
    return sorted(orbit.exponents)


def delta(orbit: PeriodicOrbit) -> float:
    """min(sum of positive exponents, sum of |negative exponents|)."""
    exps = np.array(orbit.exponents)
    positive = float(np.sum(exps[exps > 0.0]))
    negative = float(-np.sum(exps[exps < 0.0]))
    if abs(positive - negative) > CONSERVATIVE_EXPONENT_TOLERANCE:
        logger.debug(f"orbit {orbit.orbit_id}: exponent sums differ ({positive} vs {negative}), not conservative")
    return min(positive, negative)


def orbit_average(orbit: PeriodicOrbit, system: TorusMap, potential: PotentialBase) -> float:
    """(1/T) sum_{i<T} phi(f^i p)."""
    return float(np.mean(potential.evaluate(system, orbit.points_array)))


def delta_phi(orbit: PeriodicOrbit, system: TorusMap, potential: PotentialBase) -> float:
    return delta(orbit) + orbit_average(orbit, system, potential)


def inverse_orbit(orbit: PeriodicOrbit, system: TorusMap) -> PeriodicOrbit:
    """
    The same orbit viewed as an orbit of f^{-1}: reversed points, inverse
    multiplier, exponents negated exactly.
    """
    multiplier = np.linalg.inv(orbit.multiplier_array)
    eigs = eigenvalues(multiplier)
    pts = orbit.points_array[::-1]
    pts = np.roll(pts, 1, axis=0)
    return orbit.model_copy(
        update={
            "orbit_id": orbit.orbit_id + "^-1",
            "points": tuple(tuple(float(v) for v in p) for p in pts),
            "point": tuple(float(v) for v in pts[0]),
            "jacobians": tuple(_as_tuple_matrix(j) for j in system.inverse_jacobian_at(pts)),
            "multiplier": _as_tuple_matrix(multiplier),
            "eigenvalues_real": tuple(float(e.real) for e in eigs),
            "eigenvalues_imag": tuple(float(e.imag) for e in eigs),
            "exponents": tuple(-v for v in reversed(orbit.exponents)),
        }
    )


def orbit_sigma_k(orbit: PeriodicOrbit, system: TorusMap, potential: PotentialBase, k: int) -> float:
    """sigma_k(f, phi, mu_p): the k largest exponents plus the orbit average of phi."""
    if not 1 <= k <= len(orbit.exponents):
        raise ValueError(f"k must lie in 1..{len(orbit.exponents)}")
    top = sorted(orbit.exponents)[-k:]
    return float(sum(top)) + orbit_average(orbit, system, potential)


def elliptic_argument(orbit: PeriodicOrbit) -> float:
    """|arg| of the multiplier eigenvalues of an elliptic orbit, in [0, pi]."""
    return float(np.max(np.abs(np.angle(orbit.eigenvalues))))
