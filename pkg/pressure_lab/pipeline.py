"""
One pipeline per CLI command. Each takes a validated ExperimentConfig and an
existing output directory, writes its result files and returns a RunOutcome;
the CLI adds the summary and run manifest.
"""
import logging
from pathlib import Path
from typing import Callable, Dict, List

from pydantic import BaseModel

from pressure_lab import export
from pressure_lab.config import CROSS_VALIDATION_TOLERANCE, THREADS
from pressure_lab.domination.splitting import domination_gap, domination_report
from pressure_lab.models import (
    DominationVerdict,
    ExperimentConfig,
    GapSeries,
    HyperbolicityMargin,
    OrbitCatalog,
    PeriodicOrbit,
    PressureEstimate,
    SftModel,
)
from pressure_lab.orbits.search import find_periodic_orbits
from pressure_lab.orbits.spectrum import delta
from pressure_lab.pressure.bowen import bowen_pressure
from pressure_lab.pressure.cross_validate import cross_validate
from pressure_lab.pressure.grassmann import grassmann_pressure, sigma_k
from pressure_lab.pressure.periodic import periodic_pressure
from pressure_lab.pressure.sft import sft_pressure, sft_trace_pressure
from pressure_lab.systems.potentials import GeometricPotential, scaled, zero
from pressure_lab.transition.curve import pressure_curve, zero_crossing
from pressure_lab.transition.equilibria import (
    elliptic_geometric_values,
    equilibrium_candidates,
    hyperbolicity_margin,
    variation_test,
)

logger = logging.getLogger(__name__)


class RunOutcome(BaseModel):
    files: List[Path] = []
    summary: List[str] = []
    exhausted: bool = False


def _catalog(config: ExperimentConfig, threads: int) -> OrbitCatalog:
    b = config.budgets
    return find_periodic_orbits(config.system, b.max_period, b.grid_density, config.seed, threads=threads)


def _estimate_line(e: PressureEstimate) -> str:
    line = f"{e.method}: {e.value!r} ({e.bound_kind})"
    if e.argmax:
        line += f" argmax {e.argmax}"
    if e.flags:
        line += f" [{', '.join(e.flags)}]"
    return line


def _exhausted(estimates: List[PressureEstimate]) -> bool:
    return any("budget-exhausted" in e.flags for e in estimates)


def _margin_line(margin: HyperbolicityMargin) -> str:
    return f"{margin.margin!r}" + ("" if margin.exhaustive else " (non-exhaustive catalog)")


def run_orbits(config: ExperimentConfig, out: Path, threads: int = THREADS) -> RunOutcome:
    catalog = _catalog(config, threads)
    files = export.export_catalog(catalog, out / "catalog.csv", out / "catalog.json")
    summary = [
        f"orbits: {len(catalog.orbits)} up to period {catalog.max_period} ({len(catalog.saddles())} saddles)",
        f"exhaustive: {str(catalog.exhaustive).lower()}",
        f"discarded seeds: {catalog.discarded_seeds}",
    ]
    if catalog.orbits:
        summary.append(f"min Delta over the catalog: {min(delta(o) for o in catalog.orbits)!r}")
    summary += [f"warning: {w}" for w in catalog.warnings]
    return RunOutcome(files=files, summary=summary, exhausted=catalog.truncated)


def _sft_pressure(config: ExperimentConfig, out: Path) -> RunOutcome:
    model: SftModel = config.system
    estimate = sft_pressure(model)
    traces = []
    for n in config.budgets.n_list:
        try:
            traces.append((float(n), sft_trace_pressure(model, n)))
        except ValueError as e:
            logger.info(f"trace pressure skipped at n={n}: {e}")
    estimate = estimate.model_copy(update={"series": tuple(traces)})
    files = [
        export.export_estimates([estimate], out / "pressure.csv"),
        export.export_estimates_json([estimate], out / "pressure.json"),
        export.emit_plot_series(estimate, out / "pressure_series.csv"),
    ]
    summary = [f"headline {_estimate_line(estimate)}"] + [f"warning: {w}" for w in estimate.warnings]
    return RunOutcome(files=files, summary=summary)


def run_pressure(config: ExperimentConfig, out: Path, threads: int = THREADS) -> RunOutcome:
    if isinstance(config.system, SftModel):
        return _sft_pressure(config, out)

    system, potential, b = config.system, config.potential, config.budgets
    estimates: List[PressureEstimate] = []
    for method in b.methods:
        if method == "periodic":
            estimates.append(periodic_pressure(_catalog(config, threads), system, potential))
        elif method == "bowen":
            estimates.append(
                bowen_pressure(
                    system,
                    potential,
                    b.n_range,
                    b.epsilon,
                    cell_budget=b.cell_budget,
                    seed=config.seed,
                    threads=threads,
                )
            )
        else:
            estimates.append(grassmann_pressure(system, potential, b, config.seed, threads=threads))
        logger.info(f"pressure via {method}: {estimates[-1].value!r}")

    files = [
        export.export_estimates(estimates, out / "pressure.csv"),
        export.export_estimates_json(estimates, out / "pressure.json"),
    ]
    for e in estimates:
        files.append(export.emit_plot_series(e, out / f"pressure_series_{e.method}.csv"))
    summary = [f"headline {_estimate_line(estimates[0])}"] + [_estimate_line(e) for e in estimates[1:]]
    summary += [f"warning: {w}" for e in estimates for w in e.warnings]
    return RunOutcome(files=files, summary=summary, exhausted=_exhausted(estimates))


def run_sigma(config: ExperimentConfig, out: Path, threads: int = THREADS) -> RunOutcome:
    system, potential, b = config.system, config.potential, config.budgets
    if b.k is not None:
        if b.k > system.dimension:
            raise ValueError(f"k={b.k} exceeds the dimension {system.dimension}")
        estimate = sigma_k(
            system,
            potential,
            b.k,
            b.n_list,
            sample_budget=b.angles,
            seed=config.seed,
            basepoints=b.basepoints,
            refine_steps=b.refine_steps,
            threads=threads,
        )
    else:
        estimate = grassmann_pressure(system, potential, b, config.seed, threads=threads)
    files = [
        export.export_estimates([estimate], out / "sigma.csv"),
        export.export_estimates_json([estimate], out / "sigma.json"),
        export.emit_plot_series(estimate, out / "sigma_series.csv"),
    ]
    label = f"sigma_{b.k}" if b.k is not None else "max_k sigma_k"
    return RunOutcome(files=files, summary=[f"{label}: {_estimate_line(estimate)}"])


def run_domination(config: ExperimentConfig, out: Path, threads: int = THREADS) -> RunOutcome:
    system, b = config.system, config.budgets
    catalog = _catalog(config, threads)
    reports = [domination_report(o, b.N_values, b.horizon, system) for o in catalog.orbits]
    files = [export.export_domination(reports, out / "domination.csv")]
    summary = [f"orbits tested: {len(reports)} for N in {list(b.N_values)}"]
    for r in reports:
        dominated = [N for N, v in r.verdicts.items() if v == DominationVerdict.DOMINATED]
        verdict = f"{min(dominated)}-dominated" if dominated else next(iter(r.verdicts.values())).value
        summary.append(f"{r.orbit_id}: {verdict}" + (f" ({r.reason})" if r.reason else ""))

    point = b.gap_point if b.gap_point is not None else (catalog.orbits[0].point if catalog.orbits else None)
    if point is not None:
        if len(point) != system.dimension:
            raise ValueError(f"gap_point has {len(point)} coordinates, the system has {system.dimension}")
        gaps = GapSeries(point=tuple(point), values=tuple(domination_gap(system, point, b.gap_n_max)))
        files.append(export.emit_plot_series(gaps, out / "gap_series.csv"))
        summary.append(f"gap at {list(gaps.point)}: g_{b.gap_n_max} = {gaps.values[-1]!r}")
    else:
        files.append(export.emit_plot_series(None, out / "gap_series.csv"))
    return RunOutcome(files=files, summary=summary, exhausted=catalog.truncated)


def run_transition(config: ExperimentConfig, out: Path, threads: int = THREADS) -> RunOutcome:
    system, b = config.system, config.budgets
    catalog = _catalog(config, threads)
    report = pressure_curve(catalog, system, b.m, b.t_grid)
    crossing = zero_crossing(catalog, system, b.m)

    summary = [
        f"t0: {report.t0!r}" + (f" from {report.t0_orbit}" if report.t0_orbit else ""),
        f"envelope zero: {crossing!r}",
        f"breakpoints: {[float(t) for t in report.breakpoints]}",
    ]
    candidates: List[PeriodicOrbit] = []
    if report.t0 is not None:
        potential = scaled(GeometricPotential(m=b.m), report.t0)
        at_t0 = periodic_pressure(catalog, system, potential)
        candidates = equilibrium_candidates(catalog, system, potential, at_t0, b.tolerance)
        report = report.model_copy(update={"candidates": tuple(o.orbit_id for o in candidates)})
        summary.append(f"equilibrium candidates at t0: {list(report.candidates)}")

    diagnostics = elliptic_geometric_values(catalog, system, b.m)
    for d in diagnostics:
        summary.append(f"elliptic {d.orbit_id}: phi_{b.m} average {d.geometric_average!r}")
    estimate = periodic_pressure(catalog, system, config.potential)
    margin = hyperbolicity_margin(catalog, system, config.potential, estimate)
    summary.append(f"hyperbolicity margin of the configured potential: {_margin_line(margin)}")

    files = [
        export.export_transition(report, out / "transition.csv"),
        export.export_transition_report(report, out / "transition.json", crossing, candidates, margin),
        export.export_candidates(candidates, system, out / "candidates.csv"),
        export.emit_plot_series(report, out / "transition_series.csv"),
        export.export_elliptic(diagnostics, out / "elliptic.csv"),
    ]
    return RunOutcome(files=files, summary=summary, exhausted=catalog.truncated)


def run_validate(config: ExperimentConfig, out: Path, threads: int = THREADS) -> RunOutcome:
    system, potential = config.system, config.potential
    report = cross_validate(system, potential, config.budgets, config.seed, CROSS_VALIDATION_TOLERANCE, threads)
    files = [export.export_cross_validation(report, out / "validate.csv")]
    summary = [_estimate_line(e) for e in report.estimates.values()]
    summary += [f"{name} failed: {msg}" for name, msg in sorted(report.errors.items())]
    summary.append(f"spread: {report.spread!r} (tolerance {report.tolerance})")
    if report.ordering_violation:
        summary.append("ordering violation: periodic lower bound exceeds the grassmann estimate")

    catalog = report.catalog
    if catalog is not None and catalog.orbits:
        h_top = periodic_pressure(catalog, system, zero()).value
        summary.append(f"variation below entropy: {str(variation_test(potential, max(h_top, 0.0), system=system)).lower()}")
        if "periodic" in report.estimates:
            margin = hyperbolicity_margin(catalog, system, potential, report.estimates["periodic"])
            summary.append(f"hyperbolicity margin: {_margin_line(margin)}")
    exhausted = _exhausted(list(report.estimates.values())) or (catalog is not None and catalog.truncated)
    return RunOutcome(files=files, summary=summary, exhausted=exhausted)


PIPELINES: Dict[str, Callable[[ExperimentConfig, Path, int], RunOutcome]] = {
    "orbits": run_orbits,
    "pressure": run_pressure,
    "sigma": run_sigma,
    "domination": run_domination,
    "transition": run_transition,
    "validate": run_validate,
}
