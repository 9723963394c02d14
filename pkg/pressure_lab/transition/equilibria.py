import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from pressure_lab.config import CANDIDATE_TOLERANCE, VARIATION_GRID
from pressure_lab.models import (
    EllipticDiagnostic,
    HyperbolicityMargin,
    OrbitCatalog,
    OrbitClass,
    PeriodicOrbit,
    PressureEstimate,
)
from pressure_lab.orbits.spectrum import orbit_average
from pressure_lab.pressure.periodic import variational_lower_bound
from pressure_lab.systems.maps import TorusMap, identity_map, wrap
from pressure_lab.systems.potentials import GeometricPotential, PotentialBase

logger = logging.getLogger(__name__)

REFINE_STARTS = 4


def hyperbolicity_margin(
    catalog: OrbitCatalog,
    system: TorusMap,
    potential: PotentialBase,
    estimate: PressureEstimate,
) -> HyperbolicityMargin:
    """
    P - max orbit average of phi. Positive margins point to a hyperbolic
    potential; the orbit maximum is only a lower bound for sup over measures.
    """
    margin = estimate.value - variational_lower_bound(catalog, system, potential)
    if not catalog.exhaustive:
        logger.info(f"hyperbolicity margin {margin!r} computed on a non-exhaustive catalog")
    return HyperbolicityMargin(margin=float(margin), exhaustive=catalog.exhaustive)


def potential_range(
    potential: PotentialBase,
    system: Optional[TorusMap] = None,
    sample_budget: int = VARIATION_GRID**2,
) -> Tuple[float, float]:
    """Sampled (sup, inf) of phi: a regular grid, then Nelder-Mead from the best grid points."""
    system = system or identity_map(2)
    per_axis = max(2, int(math.ceil(sample_budget ** (1.0 / system.dimension))))
    axes = [np.arange(per_axis) * (system.side / per_axis)] * system.dimension
    grid = np.stack([m.ravel() for m in np.meshgrid(*axes, indexing="ij")], axis=1)
    values = potential.evaluate(system, grid)

    def at(x: np.ndarray) -> float:
        return float(potential.evaluate(system, wrap(np.atleast_2d(x), system.side))[0])

    sup, inf = float(values.max()), float(values.min())
    for sign, starts in ((-1.0, np.argsort(values)[::-1]), (1.0, np.argsort(values))):
        for i in starts[:REFINE_STARTS]:
            result = minimize(lambda x: sign * at(x), grid[i], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14})
            if sign < 0:
                sup = max(sup, -float(result.fun))
            else:
                inf = min(inf, float(result.fun))
    return sup, inf


def variation_test(
    potential: PotentialBase,
    h_top_est: float,
    sample_budget: int = VARIATION_GRID**2,
    system: Optional[TorusMap] = None,
) -> bool:
    """sup phi - inf phi < h_top: a sufficient condition for phi to be hyperbolic."""
    if h_top_est < 0:
        raise ValueError("h_top_est must be >= 0")
    sup, inf = potential_range(potential, system, sample_budget)
    variation = sup - inf
    logger.info(f"potential variation {variation!r} vs entropy {h_top_est!r}: margin {h_top_est - variation!r}")
    return variation < h_top_est


def equilibrium_candidates(
    catalog: OrbitCatalog,
    system: TorusMap,
    potential: PotentialBase,
    estimate: PressureEstimate,
    tol: float = CANDIDATE_TOLERANCE,
) -> List[PeriodicOrbit]:
    """Orbits with lambda^+ within tol of 0 and orbit average within tol of the pressure."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    return [
        o
        for o in catalog.orbits
        if abs(o.positive_exponent) <= tol and abs(orbit_average(o, system, potential) - estimate.value) <= tol
    ]


def elliptic_geometric_values(catalog: OrbitCatalog, system: TorusMap, m: int) -> List[EllipticDiagnostic]:
    """
    phi_m on elliptic orbits whose period divides m, with its largest
    deviation from zero. The values are reported as computed.
    """
    phi = GeometricPotential(m=m)
    out: List[EllipticDiagnostic] = []
    for o in catalog.orbits:
        if o.classification != OrbitClass.ELLIPTIC or m % o.period != 0:
            continue
        values = phi.evaluate(system, o.points_array)
        out.append(
            EllipticDiagnostic(
                orbit_id=o.orbit_id,
                period=o.period,
                geometric_average=float(np.mean(values)),
                max_deviation=float(np.max(np.abs(values))),
            )
        )
    return out
