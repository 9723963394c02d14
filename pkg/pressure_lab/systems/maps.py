"""
Explicit conservative maps of the d-torus with exact Jacobians.

Each system acts on the lift R^d of the torus R^d / (L Z)^d, where L is the
side of the fundamental domain (1 for linear and shear maps, 2*pi for the
standard map). Lifts commute with integer translations, which is what the
periodic orbit search relies on. All methods are vectorized over a leading
batch axis: points have shape (N, d), Jacobians (N, d, d).
"""
import math
from typing import Annotated, List, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def wrap(points: np.ndarray, side: float) -> np.ndarray:
    """Reduce lifted coordinates into the half-open fundamental domain [0, side)."""
    reduced = np.mod(points, side)
    # fmod artefacts land on the right edge; they belong to 0
    return np.where(side - reduced <= 1e-12 * max(1.0, side), 0.0, reduced)


class TorusMap(BaseModel):
    model_config = ConfigDict(frozen=True)

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    @property
    def side(self) -> float:
        return 1.0

    @property
    def label(self) -> str:
        raise NotImplementedError

    def lift(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def lift_inverse(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def jacobian_at(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inverse_jacobian_at(self, points: np.ndarray) -> np.ndarray:
        """Derivative of the inverse map at `points` (chain rule through the preimage)."""
        return np.linalg.inv(self.jacobian_at(self.lift_inverse(points)))

    def lipschitz(self) -> float:
        """Upper bound for the operator norm of the Jacobian over the torus."""
        raise NotImplementedError


class LinearTorusMap(TorusMap):
    """x -> A x mod 1 for an integer matrix with |det A| = 1 (cat map, identity, ...)."""

    kind: Literal["linear-torus"] = "linear-torus"
    matrix: List[List[int]]

    @field_validator("matrix")
    @classmethod
    def _unimodular(cls, value: List[List[int]]) -> List[List[int]]:
        d = len(value)
        if d < 2 or any(len(row) != d for row in value):
            raise ValueError("matrix must be square with dimension >= 2")
        det = round(float(np.linalg.det(np.array(value, dtype=float))))
        if abs(det) != 1:
            raise ValueError(f"matrix must have |det| = 1, got {det}")
        return value

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=float)

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @property
    def label(self) -> str:
        return "linear-torus" + str(self.matrix).replace(" ", "")

    def lift(self, points: np.ndarray) -> np.ndarray:
        return points @ self.array.T

    def lift_inverse(self, points: np.ndarray) -> np.ndarray:
        inverse = np.rint(np.linalg.inv(self.array))
        return points @ inverse.T

    def jacobian_at(self, points: np.ndarray) -> np.ndarray:
        return np.broadcast_to(self.array, (points.shape[0], self.dimension, self.dimension)).copy()

    def inverse_jacobian_at(self, points: np.ndarray) -> np.ndarray:
        inverse = np.rint(np.linalg.inv(self.array))
        return np.broadcast_to(inverse, (points.shape[0], self.dimension, self.dimension)).copy()

    def lipschitz(self) -> float:
        return float(np.linalg.norm(self.array, 2))


class StandardMap(TorusMap):
    """
    Chirikov standard map on [0, 2pi)^2 in (x, p) coordinates:
    p' = p + K sin x, x' = x + p'.
    """

    kind: Literal["standard-map"] = "standard-map"
    K: float

    @property
    def dimension(self) -> int:
        return 2

    @property
    def side(self) -> float:
        return 2.0 * math.pi

    @property
    def label(self) -> str:
        return f"standard-map(K={self.K!r})"

    def lift(self, points: np.ndarray) -> np.ndarray:
        x, p = points[:, 0], points[:, 1]
        p_new = p + self.K * np.sin(x)
        return np.stack([x + p_new, p_new], axis=1)

    def lift_inverse(self, points: np.ndarray) -> np.ndarray:
        x_new, p_new = points[:, 0], points[:, 1]
        x = x_new - p_new
        return np.stack([x, p_new - self.K * np.sin(x)], axis=1)

    def jacobian_at(self, points: np.ndarray) -> np.ndarray:
        c = self.K * np.cos(points[:, 0])
        jac = np.empty((points.shape[0], 2, 2))
        jac[:, 0, 0] = 1.0 + c
        jac[:, 0, 1] = 1.0
        jac[:, 1, 0] = c
        jac[:, 1, 1] = 1.0
        return jac

    def inverse_jacobian_at(self, points: np.ndarray) -> np.ndarray:
        c = self.K * np.cos(points[:, 0] - points[:, 1])
        jac = np.empty((points.shape[0], 2, 2))
        jac[:, 0, 0] = 1.0
        jac[:, 0, 1] = -1.0
        jac[:, 1, 0] = -c
        jac[:, 1, 1] = 1.0 + c
        return jac

    def lipschitz(self) -> float:
        k = abs(self.K)
        return float(np.linalg.norm(np.array([[1.0 + k, 1.0], [k, 1.0]]), 2))


class ShearMap(TorusMap):
    """(x, y) -> (x, y + a/(2pi) sin(2pi x)) on the unit 2-torus; used to perturb linear maps."""

    kind: Literal["shear"] = "shear"
    amplitude: float

    @property
    def dimension(self) -> int:
        return 2

    @property
    def label(self) -> str:
        return f"shear(a={self.amplitude!r})"

    def _kick(self, x: np.ndarray) -> np.ndarray:
        return self.amplitude / (2.0 * math.pi) * np.sin(2.0 * math.pi * x)

    def lift(self, points: np.ndarray) -> np.ndarray:
        return np.stack([points[:, 0], points[:, 1] + self._kick(points[:, 0])], axis=1)

    def lift_inverse(self, points: np.ndarray) -> np.ndarray:
        return np.stack([points[:, 0], points[:, 1] - self._kick(points[:, 0])], axis=1)

    def jacobian_at(self, points: np.ndarray) -> np.ndarray:
        jac = np.zeros((points.shape[0], 2, 2))
        jac[:, 0, 0] = 1.0
        jac[:, 1, 1] = 1.0
        jac[:, 1, 0] = self.amplitude * np.cos(2.0 * math.pi * points[:, 0])
        return jac

    def inverse_jacobian_at(self, points: np.ndarray) -> np.ndarray:
        jac = self.jacobian_at(points)
        jac[:, 1, 0] *= -1.0
        return jac

    def lipschitz(self) -> float:
        a = abs(self.amplitude)
        return float(np.linalg.norm(np.array([[1.0, 0.0], [a, 1.0]]), 2))


class ComposedMap(TorusMap):
    """Apply `maps` in order: maps[0] first. Inverse runs them backwards."""

    kind: Literal["composed"] = "composed"
    maps: List["SystemDef"]

    @model_validator(mode="after")
    def _compatible(self) -> "ComposedMap":
        if not self.maps:
            raise ValueError("composed system needs at least one map")
        dims = {m.dimension for m in self.maps}
        sides = {m.side for m in self.maps}
        if len(dims) != 1 or len(sides) != 1:
            raise ValueError("composed maps must share dimension and fundamental domain")
        return self

    @property
    def dimension(self) -> int:
        return self.maps[0].dimension

    @property
    def side(self) -> float:
        return self.maps[0].side

    @property
    def label(self) -> str:
        return " o ".join(m.label for m in reversed(self.maps))

    def lift(self, points: np.ndarray) -> np.ndarray:
        for m in self.maps:
            points = m.lift(points)
        return points

    def lift_inverse(self, points: np.ndarray) -> np.ndarray:
        for m in reversed(self.maps):
            points = m.lift_inverse(points)
        return points

    def jacobian_at(self, points: np.ndarray) -> np.ndarray:
        jac = np.broadcast_to(np.eye(self.dimension), (points.shape[0], self.dimension, self.dimension)).copy()
        for m in self.maps:
            jac = m.jacobian_at(points) @ jac
            points = m.lift(points)
        return jac

    def inverse_jacobian_at(self, points: np.ndarray) -> np.ndarray:
        jac = np.broadcast_to(np.eye(self.dimension), (points.shape[0], self.dimension, self.dimension)).copy()
        for m in reversed(self.maps):
            jac = m.inverse_jacobian_at(points) @ jac
            points = m.lift_inverse(points)
        return jac

    def lipschitz(self) -> float:
        return float(np.prod([m.lipschitz() for m in self.maps]))


SystemDef = Annotated[
    Union[LinearTorusMap, StandardMap, ShearMap, ComposedMap],
    Field(discriminator="kind"),
]

ComposedMap.model_rebuild()


def cat_map() -> LinearTorusMap:
    return LinearTorusMap(matrix=[[2, 1], [1, 1]])


def identity_map(dimension: int = 2) -> LinearTorusMap:
    return LinearTorusMap(matrix=np.eye(dimension, dtype=int).tolist())
