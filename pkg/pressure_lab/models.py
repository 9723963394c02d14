from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from pressure_lab.config import BUDGET_CAPS, DET_TOLERANCE
from pressure_lab.systems.maps import ComposedMap, LinearTorusMap, ShearMap, StandardMap, SystemDef
from pressure_lab.systems.potentials import ConstantPotential, Potential

Vector = Tuple[float, ...]
Matrix = Tuple[Tuple[float, ...], ...]


class Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


class TangentFrame(Frozen):
    """k orthonormal tangent vectors at a basepoint: a point of Grass_k(TM) with its basepoint."""

    basepoint: Vector
    vectors: Matrix

    @model_validator(mode="after")
    def _orthonormal(self) -> "TangentFrame":
        v = np.array(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[1] != len(self.basepoint) or not 1 <= v.shape[0] <= len(self.basepoint):
            raise ValueError("frame must hold 1..d vectors of the basepoint's dimension")
        if np.max(np.abs(v @ v.T - np.eye(v.shape[0]))) > DET_TOLERANCE:
            raise ValueError("frame vectors must be orthonormal")
        return self

    @property
    def k(self) -> int:
        return len(self.vectors)

    def columns(self) -> np.ndarray:
        """(d, k) array with the frame vectors as columns."""
        return np.array(self.vectors, dtype=float).T


class OrbitClass(str, Enum):
    SADDLE = "saddle"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"


class PeriodicOrbit(Frozen):
    orbit_id: str = ""
    point: Vector
    period: int
    points: Tuple[Vector, ...]
    jacobians: Tuple[Matrix, ...]
    multiplier: Matrix
    eigenvalues_real: Vector
    eigenvalues_imag: Vector
    exponents: Vector
    classification: OrbitClass
    residual: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array(self.eigenvalues_real) + 1j * np.array(self.eigenvalues_imag)

    @property
    def multiplier_array(self) -> np.ndarray:
        return np.array(self.multiplier, dtype=float)

    @property
    def points_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float)

    @property
    def jacobians_array(self) -> np.ndarray:
        return np.array(self.jacobians, dtype=float)

    @property
    def positive_exponent(self) -> float:
        return float(max(self.exponents))


class OrbitCatalog(Frozen):
    system: SystemDef
    max_period: int
    grid_density: int
    seed: int
    newton_iterations: int
    orbits: Tuple[PeriodicOrbit, ...]
    exhaustive: bool
    count_check: Optional[Dict[int, Tuple[int, int]]] = None
    discarded_seeds: int = 0
    truncated: bool = False
    warnings: Tuple[str, ...] = ()

    def saddles(self) -> List[PeriodicOrbit]:
        return [o for o in self.orbits if o.classification == OrbitClass.SADDLE]

    def point_count(self, n: int) -> int:
        """Number of catalogued points x with f^n x = x (minimal period dividing n)."""
        return sum(o.period for o in self.orbits if n % o.period == 0)

    def restricted(self, orbit_ids: List[str]) -> "OrbitCatalog":
        keep = tuple(o for o in self.orbits if o.orbit_id in set(orbit_ids))
        return self.model_copy(update={"orbits": keep, "exhaustive": False})


BoundKind = Literal["lower", "upper", "two-sided", "heuristic"]
Method = Literal["bowen", "periodic", "grassmann", "sft"]


class PressureEstimate(Frozen):
    value: float
    method: Method
    bound_kind: BoundKind
    parameters: Dict[str, Any] = {}
    series: Tuple[Tuple[float, float], ...] = ()
    argmax: Optional[str] = None
    flags: Tuple[str, ...] = ()
    warnings: Tuple[str, ...] = ()


class ContinuityReport(Frozen):
    params: Tuple[float, ...]
    values: Tuple[float, ...]
    differences: Tuple[float, ...]


class SftModel(Frozen):
    """
    Subshift of finite type with a locally constant potential. `potential`
    is either one value per symbol (depends on x_0) or a matrix indexed by
    (x_0, x_1).
    """

    kind: Literal["sft"] = "sft"
    transitions: List[List[int]]
    potential: Optional[Union[List[float], List[List[float]]]] = None

    @field_validator("transitions")
    @classmethod
    def _extendable(cls, value: List[List[int]]) -> List[List[int]]:
        b = np.array(value)
        if b.ndim != 2 or b.shape[0] != b.shape[1] or b.shape[0] < 1:
            raise ValueError("transition matrix must be square and non-empty")
        if not np.isin(b, (0, 1)).all():
            raise ValueError("transition matrix must be 0/1")
        if (b.sum(axis=1) == 0).any() or (b.sum(axis=0) == 0).any():
            raise ValueError("every symbol needs a successor and a predecessor")
        return value

    @model_validator(mode="after")
    def _potential_shape(self) -> "SftModel":
        if self.potential is not None:
            table = np.array(self.potential, dtype=float)
            n = self.alphabet_size
            if table.shape not in ((n,), (n, n)):
                raise ValueError(f"potential table must have shape ({n},) or ({n}, {n})")
        return self

    @property
    def alphabet_size(self) -> int:
        return len(self.transitions)

    def weighted_matrix(self) -> np.ndarray:
        """M_ij = B_ij exp(phi(i, j))."""
        b = np.array(self.transitions, dtype=float)
        if self.potential is None:
            return b
        table = np.array(self.potential, dtype=float)
        if table.ndim == 1:
            table = np.repeat(table[:, None], self.alphabet_size, axis=1)
        return b * np.exp(table)


class DominationVerdict(str, Enum):
    DOMINATED = "dominated"
    NOT_DOMINATED = "not-dominated"
    INDETERMINATE = "indeterminate"


class DominationReport(Frozen):
    orbit_id: str
    period: int
    horizon: int
    splitting_source: Literal["eigen", "finite-time-singular"]
    tested_n: Tuple[int, ...]
    ratios: Tuple[Tuple[int, float], ...] = ()
    verdicts: Dict[int, DominationVerdict] = {}
    reason: str = ""


class TransitionReport(Frozen):
    m: int
    t_grid: Tuple[float, ...]
    values: Tuple[float, ...]
    argmax_orbits: Tuple[str, ...]
    t0: Optional[float] = None
    t0_orbit: Optional[str] = None
    breakpoints: Tuple[float, ...] = ()
    candidates: Tuple[str, ...] = ()
    exhaustive: bool = False


class EllipticDiagnostic(Frozen):
    orbit_id: str
    period: int
    geometric_average: float
    max_deviation: float


class HyperbolicityMargin(Frozen):
    """P(phi) minus the largest orbit average of phi; `exhaustive` tells whether the catalog was complete."""

    margin: float
    exhaustive: bool


class GapSeries(Frozen):
    """Singular value gaps g_n of the cocycle along one orbit segment."""

    point: Vector
    values: Tuple[float, ...]


class CrossValidationReport(Frozen):
    values: Dict[str, float]
    estimates: Dict[str, PressureEstimate]
    spread: float
    tolerance: float
    ordering_violation: bool
    disagreement: bool
    errors: Dict[str, str] = {}
    catalog: Optional[OrbitCatalog] = None


class Budgets(Frozen):
    max_period: int = Field(3, ge=1, le=BUDGET_CAPS["max_period"])
    grid_density: int = Field(64, ge=2, le=BUDGET_CAPS["grid_density"])
    n_range: Tuple[int, int] = (6, 10)
    epsilon: float = Field(0.05, gt=0.0, lt=0.25)
    cell_budget: int = Field(8, ge=1, le=BUDGET_CAPS["sample_budget"])
    n_list: List[int] = [1, 2, 4, 8]
    k: Optional[int] = Field(None, ge=1)
    angles: int = Field(256, ge=4, le=BUDGET_CAPS["sample_budget"])
    basepoints: int = Field(64, ge=2, le=BUDGET_CAPS["grid_density"])
    refine_steps: int = Field(20, ge=0, le=200)
    N_values: List[int] = [1, 2, 4, 8, 16, 32, 64]
    horizon: Optional[int] = Field(None, ge=1, le=BUDGET_CAPS["horizon"])
    m: int = Field(1, ge=1, le=BUDGET_CAPS["n_max"])
    t_grid: List[float] = [0.0, 0.5, 1.0, 1.5, 2.0]
    tolerance: float = Field(1e-6, gt=0.0)
    gap_point: Optional[Vector] = None
    gap_n_max: int = Field(30, ge=1, le=BUDGET_CAPS["n_max"])
    methods: List[Literal["periodic", "bowen", "grassmann"]] = ["periodic", "bowen"]

    @field_validator("n_range")
    @classmethod
    def _ordered_range(cls, value: Tuple[int, int]) -> Tuple[int, int]:
        if not 1 <= value[0] < value[1] <= BUDGET_CAPS["n_max"]:
            raise ValueError("n_range must satisfy 1 <= start < end <= cap")
        return value

    @field_validator("n_list", "N_values")
    @classmethod
    def _ascending(cls, value: List[int]) -> List[int]:
        if not value or sorted(set(value)) != value or value[0] < 1 or value[-1] > BUDGET_CAPS["n_max"]:
            raise ValueError("n lists must be strictly ascending positive integers within the cap")
        return value

    @field_validator("t_grid")
    @classmethod
    def _t_grid(cls, value: List[float]) -> List[float]:
        if not value or len(value) > BUDGET_CAPS["t_points"] or value[0] < 0 or sorted(value) != value:
            raise ValueError("t_grid must be ascending, non-negative and within the cap")
        return value


Command = Literal["orbits", "pressure", "sigma", "domination", "transition", "validate"]

ExperimentSystem = Annotated[
    Union[LinearTorusMap, StandardMap, ShearMap, ComposedMap, SftModel],
    Field(discriminator="kind"),
]


class ExperimentConfig(Frozen):
    command: Command
    system: ExperimentSystem
    potential: Potential = Field(default_factory=lambda: ConstantPotential(value=0.0))
    budgets: Budgets = Budgets()
    seed: int
    output_dir: str = "results"

    @model_validator(mode="after")
    def _sft_commands(self) -> "ExperimentConfig":
        if isinstance(self.system, SftModel) and self.command != "pressure":
            raise ValueError("symbolic systems only support the 'pressure' command")
        return self
