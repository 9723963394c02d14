"""
The periodic pressure curve t -> P(f, t phi_m) over a catalog.

Each orbit contributes the affine function t -> Delta(f, p) + t * avg_p(phi_m),
so the curve is the upper envelope of finitely many lines: convex and
piecewise linear, with exact breakpoints and an exact zero crossing.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from pressure_lab.errors import EmptyCatalogError, NonPositiveDenominatorError, NoSaddleError
from pressure_lab.models import OrbitCatalog, TransitionReport
from pressure_lab.orbits.spectrum import delta, orbit_average
from pressure_lab.systems.maps import TorusMap
from pressure_lab.systems.potentials import GeometricPotential

logger = logging.getLogger(__name__)

Line = Tuple[float, float, str]


def affine_terms(catalog: OrbitCatalog, system: TorusMap, m: int) -> List[Line]:
    """(intercept Delta(f, p), slope avg_p(phi_m), orbit id) per catalog orbit."""
    if not catalog.orbits:
        raise EmptyCatalogError("pressure curve needs a non-empty catalog")
    phi = GeometricPotential(m=m)
    return [(delta(o), orbit_average(o, system, phi), o.orbit_id) for o in catalog.orbits]


def _envelope_at(lines: Sequence[Line], t: float) -> Tuple[float, str]:
    values = [a + t * b for a, b, _ in lines]
    i = int(np.argmax(values))
    return float(values[i]), lines[i][2]


def _transition(catalog: OrbitCatalog, system: TorusMap, m: int) -> Tuple[float, str]:
    saddles = catalog.saddles()
    if not saddles:
        raise NoSaddleError(f"no saddle orbit in the catalog of {catalog.system.label}")
    phi = GeometricPotential(m=m)
    best, best_id = -np.inf, ""
    for o in saddles:
        denominator = -orbit_average(o, system, phi)
        if denominator <= 0.0:
            raise NonPositiveDenominatorError(
                f"saddle {o.orbit_id} has -avg(phi_{m}) = {denominator!r} <= 0; ||Df^{m}|| <= 1 along a saddle"
            )
        ratio = o.positive_exponent / denominator
        if ratio > best:
            best, best_id = ratio, o.orbit_id
    return float(best), best_id


def transition_point(catalog: OrbitCatalog, system: TorusMap, m: int) -> float:
    """t0 = max over saddles of lambda^+ / (-avg phi_m)."""
    return _transition(catalog, system, m)[0]


def curve_breakpoints(catalog: OrbitCatalog, system: TorusMap, m: int) -> List[float]:
    """Kinks of the upper envelope on t >= 0, ascending."""
    lines = sorted(set((a, b) for a, b, _ in affine_terms(catalog, system, m)))
    # start on the top line at t = 0, ties to the steepest
    current = max(lines, key=lambda line: (line[0], line[1]))
    t = 0.0
    breakpoints: List[float] = []
    while True:
        a, b = current
        crossings = [((a - a2) / (b2 - b), (a2, b2)) for a2, b2 in lines if b2 > b]
        crossings = [(tc, line) for tc, line in crossings if tc > t]
        if not crossings:
            return breakpoints
        t_next = min(tc for tc, _ in crossings)
        current = max((line for tc, line in crossings if tc == t_next), key=lambda line: line[1])
        t = t_next
        breakpoints.append(float(t))


def zero_crossing(catalog: OrbitCatalog, system: TorusMap, m: int) -> Optional[float]:
    """Smallest t >= 0 with P(f, t phi_m) = 0 on the envelope, or None if it stays positive."""
    lines = affine_terms(catalog, system, m)
    if _envelope_at(lines, 0.0)[0] <= 0.0:
        return 0.0
    knots = [0.0] + curve_breakpoints(catalog, system, m)
    for i, start in enumerate(knots):
        end = knots[i + 1] if i + 1 < len(knots) else np.inf
        # the active line on (start, end) is the one on top just after start
        t_mid = start + (min(end - start, 1.0) / 2.0)
        a, b, _ = max(lines, key=lambda line: line[0] + t_mid * line[1])
        if b < 0.0:
            root = -a / b
            if start <= root <= end:
                return float(root)
    return None


def pressure_curve(catalog: OrbitCatalog, system: TorusMap, m: int, t_grid: Sequence[float]) -> TransitionReport:
    if any(t < 0 for t in t_grid) or list(t_grid) != sorted(t_grid):
        raise ValueError("t_grid must be ascending and non-negative")
    lines = affine_terms(catalog, system, m)
    values, argmax = [], []
    for t in t_grid:
        value, orbit_id = _envelope_at(lines, t)
        values.append(value)
        argmax.append(orbit_id)

    t0: Optional[float] = None
    t0_orbit: Optional[str] = None
    try:
        t0, t0_orbit = _transition(catalog, system, m)
    except NoSaddleError as e:
        logger.warning(f"no transition point: {e}")
    logger.info(f"pressure curve over {len(t_grid)} values of t, t0={t0!r}")
    return TransitionReport(
        m=m,
        t_grid=tuple(float(t) for t in t_grid),
        values=tuple(values),
        argmax_orbits=tuple(argmax),
        t0=t0,
        t0_orbit=t0_orbit,
        breakpoints=tuple(curve_breakpoints(catalog, system, m)),
        exhaustive=catalog.exhaustive,
    )
