"""
CSV, JSON and plain-text writers for every result type.

Reals are written with 17 significant digits so files round-trip exactly;
row order always follows the (already deterministic) order of the results.
"""
import csv
import hashlib
import json
import logging
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pressure_lab import __version__
from pressure_lab.config import CSV_SIGNIFICANT_DIGITS
from pressure_lab.models import (
    CrossValidationReport,
    DominationReport,
    EllipticDiagnostic,
    ExperimentConfig,
    GapSeries,
    HyperbolicityMargin,
    OrbitCatalog,
    PeriodicOrbit,
    PressureEstimate,
    TransitionReport,
)
from pressure_lab.orbits.spectrum import delta
from pressure_lab.systems.maps import TorusMap

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
PlotReport = Union[PressureEstimate, TransitionReport, GapSeries, None]


def fmt(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return f"{value:.{CSV_SIGNIFICANT_DIGITS}g}"
    return str(value)


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    logger.debug(f"wrote {path}")
    return path


def write_json(path: PathLike, payload: Any) -> Path:
    path = Path(path)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def catalog_records(catalog: OrbitCatalog) -> List[Dict[str, Any]]:
    return [
        {
            "orbit_id": o.orbit_id,
            "period": o.period,
            "point": list(o.point),
            "exponents": list(o.exponents),
            "classification": o.classification.value,
            "delta": delta(o),
            "residual": o.residual,
        }
        for o in catalog.orbits
    ]


def export_catalog(catalog: OrbitCatalog, csv_path: PathLike, json_path: PathLike) -> List[Path]:
    d = catalog.system.dimension
    header = ["orbit_id", "period"] + [f"x{i}" for i in range(d)] + [f"lambda{i}" for i in range(d)]
    header += ["classification", "delta", "residual"]
    rows = [
        [r["orbit_id"], r["period"], *r["point"], *r["exponents"], r["classification"], r["delta"], r["residual"]]
        for r in catalog_records(catalog)
    ]
    payload = {
        "system": catalog.system.model_dump(),
        "max_period": catalog.max_period,
        "grid_density": catalog.grid_density,
        "seed": catalog.seed,
        "newton_iterations": catalog.newton_iterations,
        "exhaustive": catalog.exhaustive,
        "truncated": catalog.truncated,
        "discarded_seeds": catalog.discarded_seeds,
        "count_check": {str(n): list(v) for n, v in (catalog.count_check or {}).items()},
        "orbits": catalog_records(catalog),
    }
    return [write_csv(csv_path, header, rows), write_json(json_path, payload)]


def export_estimates(estimates: Sequence[PressureEstimate], path: PathLike) -> Path:
    header = ["method", "bound_kind", "value", "argmax", "flags", "parameters"]
    rows = [
        [e.method, e.bound_kind, e.value, e.argmax, ";".join(e.flags), json.dumps(e.parameters, sort_keys=True)]
        for e in estimates
    ]
    return write_csv(path, header, rows)


def export_estimates_json(estimates: Sequence[PressureEstimate], path: PathLike) -> Path:
    """Every field of every estimate, series and warnings included."""
    return write_json(path, {"estimates": [e.model_dump(mode="json") for e in estimates]})


def export_domination(reports: Sequence[DominationReport], path: PathLike) -> Path:
    header = ["orbit_id", "period", "N", "horizon", "verdict", "max_ratio", "reason"]
    rows: List[List[Any]] = []
    for r in reports:
        for N in r.tested_n:
            tail = [ratio for n, ratio in r.ratios if n >= N]
            rows.append([r.orbit_id, r.period, N, r.horizon, r.verdicts[N].value, max(tail) if tail else None, r.reason])
    return write_csv(path, header, rows)


def export_transition(report: TransitionReport, path: PathLike) -> Path:
    rows = [[t, v, o] for t, v, o in zip(report.t_grid, report.values, report.argmax_orbits)]
    return write_csv(path, ["t", "value", "argmax_orbit"], rows)


def export_candidates(candidates: Sequence[PeriodicOrbit], system: TorusMap, path: PathLike) -> Path:
    d = system.dimension
    header = ["orbit_id", "period"] + [f"x{i}" for i in range(d)] + ["positive_exponent", "classification", "delta"]
    rows = [[o.orbit_id, o.period, *o.point, o.positive_exponent, o.classification.value, delta(o)] for o in candidates]
    return write_csv(path, header, rows)


def export_transition_report(
    report: TransitionReport,
    path: PathLike,
    envelope_zero: Optional[float] = None,
    candidates: Sequence[PeriodicOrbit] = (),
    margin: Optional[HyperbolicityMargin] = None,
) -> Path:
    """The curve with t0, kinks and the equilibrium candidate table as one JSON document."""
    payload = report.model_dump(mode="json")
    payload["envelope_zero"] = envelope_zero
    payload["candidates"] = [
        {
            "orbit_id": o.orbit_id,
            "period": o.period,
            "point": list(o.point),
            "positive_exponent": o.positive_exponent,
            "classification": o.classification.value,
        }
        for o in candidates
    ]
    payload["hyperbolicity_margin"] = margin.model_dump(mode="json") if margin else None
    return write_json(path, payload)


def export_elliptic(diagnostics: Sequence[EllipticDiagnostic], path: PathLike) -> Path:
    rows = [[d.orbit_id, d.period, d.geometric_average, d.max_deviation] for d in diagnostics]
    return write_csv(path, ["orbit_id", "period", "geometric_average", "max_deviation"], rows)


def export_cross_validation(report: CrossValidationReport, path: PathLike) -> Path:
    header = ["method", "value", "bound_kind", "flags", "error"]
    rows: List[List[Any]] = []
    for name in ("periodic", "grassmann", "bowen"):
        e = report.estimates.get(name)
        rows.append([name, e.value if e else None, e.bound_kind if e else "", ";".join(e.flags) if e else "", report.errors.get(name, "")])
    rows.append(["spread", report.spread, "", "disagreement" if report.disagreement else "", ""])
    return write_csv(path, header, rows)


def plot_series(report: PlotReport) -> Tuple[Tuple[str, str], List[Tuple[float, float]]]:
    """The two-column numeric series a report contributes to a figure."""
    if isinstance(report, TransitionReport):
        return ("t", "value"), list(zip(report.t_grid, report.values))
    if isinstance(report, GapSeries):
        return ("n", "gap"), [(float(i + 1), g) for i, g in enumerate(report.values)]
    if isinstance(report, PressureEstimate):
        column = "sup" if report.method == "grassmann" else "value"
        return ("n", column), list(report.series)
    return ("x", "y"), []


def emit_plot_series(report: PlotReport, path: PathLike) -> Path:
    header, rows = plot_series(report)
    return write_csv(path, header, rows)


def write_summary(path: PathLike, lines: Sequence[str]) -> Path:
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path


def config_digest(config: ExperimentConfig) -> str:
    """sha256 of the canonical config JSON; the output directory does not affect results and is left out."""
    payload = config.model_dump(mode="json", exclude={"output_dir"})
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def package_versions() -> Dict[str, str]:
    versions = {"pressure-lab": __version__}
    for name in ("numpy", "scipy", "pydantic", "jsonschema"):
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def write_manifest(path: PathLike, config: ExperimentConfig, files: Sequence[Path], exit_status: int) -> Path:
    """Everything needed to rerun the experiment: the full config, its hash, seed and library versions."""
    return write_json(
        path,
        {
            "command": config.command,
            "config": config.model_dump(mode="json"),
            "config_sha256": config_digest(config),
            "seed": config.seed,
            "versions": package_versions(),
            "files": sorted(p.name for p in files),
            "exit_status": exit_status,
        },
    )
