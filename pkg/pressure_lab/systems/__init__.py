from pressure_lab.systems.dynamics import (
    birkhoff_sum,
    birkhoff_sums,
    bowen_distance,
    cocycle,
    cocycle_batch,
    eval_inverse,
    eval_map,
    jacobian,
    log_cocycle_norms,
    lyapunov_spectrum,
    orbit,
    torus_distance,
)
from pressure_lab.systems.maps import (
    ComposedMap,
    LinearTorusMap,
    ShearMap,
    StandardMap,
    SystemDef,
    TorusMap,
    cat_map,
    identity_map,
    wrap,
)
from pressure_lab.systems.potentials import (
    ConstantPotential,
    ExpressionPotential,
    GeometricPotential,
    Potential,
    PotentialBase,
    ScaledPotential,
    SumPotential,
    constant,
    cosine,
    scaled,
    shifted,
    zero,
)

__all__ = [
    "birkhoff_sum",
    "birkhoff_sums",
    "bowen_distance",
    "cocycle",
    "cocycle_batch",
    "eval_inverse",
    "eval_map",
    "jacobian",
    "log_cocycle_norms",
    "lyapunov_spectrum",
    "orbit",
    "torus_distance",
    "ComposedMap",
    "LinearTorusMap",
    "ShearMap",
    "StandardMap",
    "SystemDef",
    "TorusMap",
    "cat_map",
    "identity_map",
    "wrap",
    "ConstantPotential",
    "ExpressionPotential",
    "GeometricPotential",
    "Potential",
    "PotentialBase",
    "ScaledPotential",
    "SumPotential",
    "constant",
    "cosine",
    "scaled",
    "shifted",
    "zero",
]
