"""
Pressure from periodic data: the max of Delta_phi(f, p) over a catalog,
plus the inequalities that ride on the same catalog.
"""
import logging
from typing import Callable, List, Sequence

import numpy as np

from pressure_lab.errors import EmptyCatalogError
from pressure_lab.models import ContinuityReport, OrbitCatalog, PressureEstimate
from pressure_lab.orbits.search import find_periodic_orbits
from pressure_lab.orbits.spectrum import delta, delta_phi, orbit_average, orbit_sigma_k
from pressure_lab.systems.maps import TorusMap
from pressure_lab.systems.potentials import PotentialBase

logger = logging.getLogger(__name__)


def _catalog_flags(catalog: OrbitCatalog) -> tuple:
    return () if catalog.exhaustive else ("non-exhaustive-catalog",)


def _require_orbits(catalog: OrbitCatalog) -> None:
    if not catalog.orbits:
        raise EmptyCatalogError(f"catalog for {catalog.system.label} holds no orbits up to period {catalog.max_period}")


def periodic_pressure(catalog: OrbitCatalog, system: TorusMap, potential: PotentialBase) -> PressureEstimate:
    """max over the catalog of Delta_phi(f, p); a lower bound since the catalog is finite."""
    _require_orbits(catalog)
    values = [delta_phi(o, system, potential) for o in catalog.orbits]
    best = int(np.argmax(values))
    return PressureEstimate(
        value=float(values[best]),
        method="periodic",
        bound_kind="lower",
        parameters={
            "max_period": catalog.max_period,
            "grid_density": catalog.grid_density,
            "orbits": len(catalog.orbits),
            "seed": catalog.seed,
        },
        argmax=catalog.orbits[best].orbit_id,
        flags=_catalog_flags(catalog),
        warnings=catalog.warnings,
    )


def ruelle_bound(catalog: OrbitCatalog) -> List[float]:
    """Delta(f, p) per orbit; every entry is >= 0 (Ruelle's inequality on the orbit measure)."""
    return [delta(o) for o in catalog.orbits]


def variational_lower_bound(catalog: OrbitCatalog, system: TorusMap, potential: PotentialBase) -> float:
    """Max plain orbit average of phi; never exceeds periodic_pressure since Delta >= 0."""
    _require_orbits(catalog)
    return max(orbit_average(o, system, potential) for o in catalog.orbits)


def periodic_grassmann_bound(catalog: OrbitCatalog, system: TorusMap, potential: PotentialBase) -> PressureEstimate:
    """max over orbits and k of sigma_k on the orbit measure: a lower bound for grassmann_pressure."""
    _require_orbits(catalog)
    best_value, best_id, best_k = -np.inf, "", 0
    for o in catalog.orbits:
        for k in range(1, system.dimension + 1):
            value = orbit_sigma_k(o, system, potential, k)
            if value > best_value:
                best_value, best_id, best_k = value, o.orbit_id, k
    return PressureEstimate(
        value=float(best_value),
        method="periodic",
        bound_kind="lower",
        parameters={"max_period": catalog.max_period, "k": best_k},
        argmax=best_id,
        flags=_catalog_flags(catalog),
    )


def continuity_probe(
    system_factory: Callable[[float], TorusMap],
    params: Sequence[float],
    potential: PotentialBase,
    max_period: int,
    grid_density: int = 32,
    seed: int = 0,
) -> ContinuityReport:
    """
    Periodic pressure along a one-parameter family, with the successive
    differences between neighbouring parameters.
    """
    values: List[float] = []
    for param in params:
        system = system_factory(param)
        catalog = find_periodic_orbits(system, max_period, grid_density, seed)
        values.append(periodic_pressure(catalog, system, potential).value)
        logger.debug(f"continuity probe: param={param!r} pressure={values[-1]!r}")
    return ContinuityReport(
        params=tuple(float(p) for p in params),
        values=tuple(values),
        differences=tuple(float(b - a) for a, b in zip(values, values[1:])),
    )
