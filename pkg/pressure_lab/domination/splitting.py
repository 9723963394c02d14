"""
Finite-horizon N-domination checks over periodic orbits and the singular
value gap of the cocycle along finite segments.

Over a periodic orbit every invariant line field is an eigendirection of the
return map, so the only candidate splitting is the multiplier eigenbasis
transported along the orbit.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from pressure_lab.config import (
    CLASSIFICATION_BAND,
    DOMINATION_RATIO,
    EIGENVECTOR_ANGLE_TOLERANCE,
    MIN_DOMINATION_HORIZON,
)
from pressure_lab.errors import IndeterminateVerdictError
from pressure_lab.models import DominationReport, DominationVerdict, OrbitClass, PeriodicOrbit
from pressure_lab.systems.linalg import singular_values_2x2
from pressure_lab.systems.maps import TorusMap, wrap

logger = logging.getLogger(__name__)


def default_horizon(N: int) -> int:
    return max(4 * N, MIN_DOMINATION_HORIZON)


def _orbit_jacobians(orbit: PeriodicOrbit, system: Optional[TorusMap]) -> np.ndarray:
    if len(orbit.jacobians) == orbit.period:
        return orbit.jacobians_array
    if system is None:
        raise ValueError(f"orbit {orbit.orbit_id} carries no per-point Jacobians and no system was given")
    return system.jacobian_at(orbit.points_array)


def candidate_splitting(orbit: PeriodicOrbit) -> Tuple[Optional[np.ndarray], Optional[np.ndarray], str]:
    """
    (weak, strong) unit eigenvectors of the multiplier, or (None, None, reason)
    when no usable real splitting exists. Reasons starting with
    "indeterminate" mark parabolic or near-degenerate eigenbases.
    """
    if orbit.classification == OrbitClass.PARABOLIC:
        return None, None, "indeterminate: parabolic orbit"
    if np.max(np.abs(np.array(orbit.eigenvalues_imag))) > CLASSIFICATION_BAND:
        return None, None, "no invariant splitting (complex eigenvalues)"
    values, vectors = np.linalg.eig(orbit.multiplier_array)
    order = np.argsort(np.abs(values))
    weak = np.real(vectors[:, order[0]])
    strong = np.real(vectors[:, order[-1]])
    weak, strong = weak / np.linalg.norm(weak), strong / np.linalg.norm(strong)
    angle = float(np.arccos(min(1.0, abs(float(weak @ strong)))))
    if angle < EIGENVECTOR_ANGLE_TOLERANCE:
        return None, None, "indeterminate: eigenvectors nearly parallel"
    return weak, strong, ""


def ratio_record(jacobians: np.ndarray, weak: np.ndarray, strong: np.ndarray, horizon: int) -> np.ndarray:
    """
    r_n = max over orbit points of ||D f^n u|| / ||D f^n v|| for the
    transported unit eigenvectors u (weak) and v (strong), n = 1..horizon.
    """
    period = jacobians.shape[0]
    # transport the eigenvectors to every orbit point
    us, vs = np.empty((period, weak.size)), np.empty((period, strong.size))
    u, v = weak.copy(), strong.copy()
    for j in range(period):
        us[j], vs[j] = u / np.linalg.norm(u), v / np.linalg.norm(v)
        u, v = jacobians[j] @ u, jacobians[j] @ v

    log_u = np.zeros(period)
    log_v = np.zeros(period)
    ratios = np.empty(horizon)
    position = np.arange(period)
    for n in range(horizon):
        jac = jacobians[position % period]
        us = np.einsum("pij,pj->pi", jac, us)
        vs = np.einsum("pij,pj->pi", jac, vs)
        nu, nv = np.linalg.norm(us, axis=1), np.linalg.norm(vs, axis=1)
        log_u += np.log(nu)
        log_v += np.log(nv)
        us, vs = us / nu[:, None], vs / nv[:, None]
        position = position + 1
        ratios[n] = float(np.exp(np.max(log_u - log_v)))
    return ratios


def domination_report(
    orbit: PeriodicOrbit,
    N_values: Sequence[int],
    horizon: Optional[int] = None,
    system: Optional[TorusMap] = None,
) -> DominationReport:
    """Verdicts for several N against one shared horizon, so they are monotone in N."""
    if not N_values or min(N_values) < 1:
        raise ValueError("N values must be positive")
    horizon = horizon or default_horizon(max(N_values))
    if horizon < max(N_values):
        raise ValueError(f"horizon {horizon} is shorter than N={max(N_values)}")

    weak, strong, reason = candidate_splitting(orbit)
    tested = tuple(sorted(set(N_values)))
    if weak is None or strong is None:
        verdict = DominationVerdict.INDETERMINATE if reason.startswith("indeterminate") else DominationVerdict.NOT_DOMINATED
        return DominationReport(
            orbit_id=orbit.orbit_id,
            period=orbit.period,
            horizon=horizon,
            splitting_source="eigen",
            tested_n=tested,
            verdicts={N: verdict for N in tested},
            reason=reason,
        )

    ratios = ratio_record(_orbit_jacobians(orbit, system), weak, strong, horizon)
    verdicts = {}
    for N in tested:
        worst = float(np.max(ratios[N - 1 :]))
        verdicts[N] = DominationVerdict.DOMINATED if worst <= DOMINATION_RATIO else DominationVerdict.NOT_DOMINATED
    logger.debug(f"orbit {orbit.orbit_id}: domination verdicts {verdicts}")
    return DominationReport(
        orbit_id=orbit.orbit_id,
        period=orbit.period,
        horizon=horizon,
        splitting_source="eigen",
        tested_n=tested,
        ratios=tuple((n + 1, float(r)) for n, r in enumerate(ratios)),
        verdicts=verdicts,
        reason="" if any(v == DominationVerdict.DOMINATED for v in verdicts.values()) else "ratio above 1/2 within horizon",
    )


def n_domination_test(
    system: Optional[TorusMap],
    orbit: PeriodicOrbit,
    N: int,
    horizon: Optional[int] = None,
) -> Tuple[DominationVerdict, DominationReport]:
    report = domination_report(orbit, [N], horizon or default_horizon(N), system)
    return report.verdicts[N], report


def weakness_test(orbit: PeriodicOrbit, T: int, N: int, horizon: Optional[int] = None) -> bool:
    """T(p) >= T and the orbit carries no N-dominated splitting."""
    if orbit.period < T:
        return False
    verdict, report = n_domination_test(None, orbit, N, horizon)
    if verdict == DominationVerdict.INDETERMINATE:
        raise IndeterminateVerdictError(report.reason)
    return verdict == DominationVerdict.NOT_DOMINATED


def domination_gap(system: TorusMap, x: Sequence[float], n_max: int) -> List[float]:
    """g_n = s_2 / s_1 of D_x f^n for n = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    d = system.dimension
    current = wrap(np.atleast_2d(np.asarray(x, dtype=float)), system.side)
    product = np.eye(d)
    log_scale = 0.0
    log_det = 0.0
    gaps: List[float] = []
    for _ in range(n_max):
        jac = system.jacobian_at(current)[0]
        product = jac @ product
        norm = float(np.linalg.norm(product))
        product = product / norm
        log_scale += math.log(norm)
        if d == 2:
            # s2 = |det| / s1 with det accumulated step by step
            log_det += math.log(abs(float(np.linalg.det(jac))))
            s1, _ = singular_values_2x2(product)
            gaps.append(math.exp(log_det - 2.0 * (math.log(float(s1)) + log_scale)))
        else:
            s = np.linalg.svd(product, compute_uv=False)
            gaps.append(float(s[1] / s[0]))
        current = wrap(system.lift(current), system.side)
    return gaps
