"""
Potentials (observables) on the torus.

Expressions are restricted to finite sums of products of sin/cos of integer
frequency combinations of the angle coordinates theta = 2 pi x / L, so every
expression is smooth and periodic on the torus. The geometric potential
phi_m(x) = -(1/m) log ||D_x f^m|| depends on the system it is evaluated for.
"""
from typing import TYPE_CHECKING, Annotated, List, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


if TYPE_CHECKING:
    from pressure_lab.systems.maps import TorusMap


class PotentialBase(BaseModel):
    model_config = ConfigDict(frozen=True)

    def evaluate(self, system: "TorusMap", points: np.ndarray) -> np.ndarray:
        """Values at a batch of points (N, d) -> (N,)."""
        raise NotImplementedError

    @property
    def label(self) -> str:
        raise NotImplementedError

    def __call__(self, system: "TorusMap", point: np.ndarray) -> float:
        return float(self.evaluate(system, np.atleast_2d(np.asarray(point, dtype=float)))[0])


class ConstantPotential(PotentialBase):
    kind: Literal["constant"] = "constant"
    value: float = 0.0

    def evaluate(self, system: "TorusMap", points: np.ndarray) -> np.ndarray:
        return np.full(points.shape[0], self.value)

    @property
    def label(self) -> str:
        return f"{self.value!r}"


class TrigFactor(BaseModel):
    model_config = ConfigDict(frozen=True)

    fn: Literal["sin", "cos"]
    frequency: List[int]
    phase: float = 0.0


class TrigTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    coefficient: float
    factors: List[TrigFactor] = []


class ExpressionPotential(PotentialBase):
    kind: Literal["expression"] = "expression"
    terms: List[TrigTerm]

    def evaluate(self, system: "TorusMap", points: np.ndarray) -> np.ndarray:
        theta = 2.0 * np.pi * points / system.side
        total = np.zeros(points.shape[0])
        for term in self.terms:
            value = np.full(points.shape[0], term.coefficient)
            for factor in term.factors:
                freq = np.zeros(points.shape[1])
                freq[: len(factor.frequency)] = factor.frequency
                arg = theta @ freq + factor.phase
                value = value * (np.sin(arg) if factor.fn == "sin" else np.cos(arg))
            total += value
        return total

    def amplitude_bound(self) -> float:
        """sup|phi| <= sum |coefficient|."""
        return float(sum(abs(t.coefficient) for t in self.terms))

    @property
    def label(self) -> str:
        parts = []
        for term in self.terms:
            factors = "*".join(f"{f.fn}({f.frequency}+{f.phase})" for f in term.factors)
            parts.append(f"{term.coefficient!r}" + (f"*{factors}" if factors else ""))
        return " + ".join(parts) or "0"


class GeometricPotential(PotentialBase):
    kind: Literal["geometric"] = "geometric"
    m: int = 1

    @field_validator("m")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("geometric potential order m must be >= 1")
        return value

    def evaluate(self, system: "TorusMap", points: np.ndarray) -> np.ndarray:
        from pressure_lab.systems.dynamics import log_cocycle_norms

        return -log_cocycle_norms(system, points, self.m) / self.m

    @property
    def label(self) -> str:
        return f"geometric({self.m})"


class ScaledPotential(PotentialBase):
    kind: Literal["scaled"] = "scaled"
    scale: float
    base: "Potential"

    def evaluate(self, system: "TorusMap", points: np.ndarray) -> np.ndarray:
        return self.scale * self.base.evaluate(system, points)

    @property
    def label(self) -> str:
        return f"{self.scale!r}*({self.base.label})"


class SumPotential(PotentialBase):
    kind: Literal["sum"] = "sum"
    terms: List["Potential"]

    def evaluate(self, system: "TorusMap", points: np.ndarray) -> np.ndarray:
        total = np.zeros(points.shape[0])
        for term in self.terms:
            total = total + term.evaluate(system, points)
        return total

    @property
    def label(self) -> str:
        return " + ".join(f"({t.label})" for t in self.terms)


Potential = Annotated[
    Union[ConstantPotential, ExpressionPotential, GeometricPotential, ScaledPotential, SumPotential],
    Field(discriminator="kind"),
]

ScaledPotential.model_rebuild()
SumPotential.model_rebuild()


def constant(value: float) -> ConstantPotential:
    return ConstantPotential(value=value)


def zero() -> ConstantPotential:
    return ConstantPotential(value=0.0)


def cosine(amplitude: float, frequency: List[int]) -> ExpressionPotential:
    """amplitude * cos(2 pi k.x / L)."""
    return ExpressionPotential(
        terms=[TrigTerm(coefficient=amplitude, factors=[TrigFactor(fn="cos", frequency=frequency)])]
    )


def shifted(potential: PotentialBase, c: float) -> SumPotential:
    return SumPotential(terms=[potential, ConstantPotential(value=c)])


def scaled(potential: PotentialBase, t: float) -> ScaledPotential:
    return ScaledPotential(scale=t, base=potential)
