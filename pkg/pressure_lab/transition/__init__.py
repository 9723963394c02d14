from pressure_lab.transition.curve import (
    affine_terms,
    curve_breakpoints,
    pressure_curve,
    transition_point,
    zero_crossing,
)
from pressure_lab.transition.equilibria import (
    elliptic_geometric_values,
    equilibrium_candidates,
    hyperbolicity_margin,
    potential_range,
    variation_test,
)

__all__ = [
    "affine_terms",
    "curve_breakpoints",
    "pressure_curve",
    "transition_point",
    "zero_crossing",
    "elliptic_geometric_values",
    "equilibrium_candidates",
    "hyperbolicity_margin",
    "potential_range",
    "variation_test",
]
