"""
Subshift of finite type oracle: pressure of a locally constant potential
is the log spectral radius of the weighted transition matrix.
"""
import logging
from typing import Tuple

import numpy as np
from scipy.sparse.csgraph import connected_components

from pressure_lab.config import SFT_EIGEN_TOLERANCE
from pressure_lab.models import PressureEstimate, SftModel

logger = logging.getLogger(__name__)


def is_irreducible(model: SftModel) -> bool:
    n_components, _ = connected_components(np.array(model.transitions), directed=True, connection="strong")
    return n_components == 1


def _spectral_radius(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))


def sft_pressure(model: SftModel) -> PressureEstimate:
    warnings: Tuple[str, ...] = ()
    if not is_irreducible(model):
        msg = "transition matrix is reducible; pressure is the maximum over its irreducible components"
        logger.warning(msg)
        warnings = (msg,)
    rho = _spectral_radius(model.weighted_matrix())
    return PressureEstimate(
        value=float(np.log(rho)),
        method="sft",
        bound_kind="two-sided",
        parameters={"alphabet_size": model.alphabet_size, "eigen_tolerance": SFT_EIGEN_TOLERANCE},
        warnings=warnings,
    )


def sft_entropy(model: SftModel) -> float:
    return sft_pressure(model.model_copy(update={"potential": None})).value


def sft_trace_pressure(model: SftModel, n: int) -> float:
    """(1/n) log tr(M^n): the weighted count of periodic words of length n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = model.weighted_matrix()
    # rescale by the spectral radius so M^n stays representable for large n
    rho = _spectral_radius(m)
    trace = float(np.trace(np.linalg.matrix_power(m / rho, n)))
    if trace <= 0.0:
        raise ValueError(f"no periodic words of length {n}")
    return float(np.log(rho) + np.log(trace) / n)


def sft_perron_data(model: SftModel) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Perron root and the left/right Perron eigenvectors of the weighted
    matrix, positive and normalized so that <left, right> = 1 and sum(right) = 1.
    """
    m = model.weighted_matrix()
    values, right_vecs = np.linalg.eig(m)
    i = int(np.argmax(values.real))
    right = np.abs(right_vecs[:, i].real)
    values_t, left_vecs = np.linalg.eig(m.T)
    j = int(np.argmax(values_t.real))
    left = np.abs(left_vecs[:, j].real)
    right = right / right.sum()
    left = left / float(left @ right)
    return float(values[i].real), left, right
