import logging
from typing import Dict, Optional

from pressure_lab.config import CROSS_VALIDATION_TOLERANCE, THREADS
from pressure_lab.models import Budgets, CrossValidationReport, OrbitCatalog, PressureEstimate
from pressure_lab.orbits.search import find_periodic_orbits
from pressure_lab.pressure.bowen import bowen_pressure
from pressure_lab.pressure.grassmann import grassmann_pressure
from pressure_lab.pressure.periodic import periodic_pressure
from pressure_lab.systems.maps import TorusMap
from pressure_lab.systems.potentials import PotentialBase

logger = logging.getLogger(__name__)


def cross_validate(
    system: TorusMap,
    potential: PotentialBase,
    budgets: Optional[Budgets] = None,
    seed: int = 0,
    tolerance: float = CROSS_VALIDATION_TOLERANCE,
    threads: int = THREADS,
) -> CrossValidationReport:
    """
    Run the Bowen, periodic and Grassmann estimators on one system/potential
    pair. Sub-method failures are recorded, not raised. The periodic orbit
    catalog is kept on the report for follow-up diagnostics.
    """
    budgets = budgets or Budgets()
    estimates: Dict[str, PressureEstimate] = {}
    errors: Dict[str, str] = {}
    catalog: Optional[OrbitCatalog] = None

    try:
        catalog = find_periodic_orbits(system, budgets.max_period, budgets.grid_density, seed, threads=threads)
        estimates["periodic"] = periodic_pressure(catalog, system, potential)
    except Exception as e:
        logger.error(f"periodic estimator failed: {e}")
        errors["periodic"] = str(e)

    try:
        estimates["grassmann"] = grassmann_pressure(system, potential, budgets, seed, threads=threads)
    except Exception as e:
        logger.error(f"grassmann estimator failed: {e}")
        errors["grassmann"] = str(e)

    try:
        estimates["bowen"] = bowen_pressure(
            system,
            potential,
            budgets.n_range,
            budgets.epsilon,
            cell_budget=budgets.cell_budget,
            seed=seed,
            threads=threads,
        )
    except Exception as e:
        logger.error(f"bowen estimator failed: {e}")
        errors["bowen"] = str(e)

    values = {name: e.value for name, e in estimates.items()}
    spread = max(values.values()) - min(values.values()) if values else 0.0
    ordering_violation = (
        "periodic" in values and "grassmann" in values and values["periodic"] > values["grassmann"] + tolerance
    )
    disagreement = spread > tolerance or bool(errors)
    if ordering_violation:
        logger.warning(f"periodic {values['periodic']!r} exceeds grassmann {values['grassmann']!r} beyond {tolerance}")
    if disagreement:
        logger.warning(f"estimators disagree: spread {spread!r} (tolerance {tolerance}), failures {sorted(errors)}")
    return CrossValidationReport(
        values=values,
        estimates=estimates,
        spread=float(spread),
        tolerance=tolerance,
        ordering_violation=ordering_violation,
        disagreement=disagreement,
        errors=errors,
        catalog=catalog,
    )
