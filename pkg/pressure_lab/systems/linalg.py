"""
Closed-form 2x2 kernels and batched fallbacks for small tangent matrices.

Every function accepts a single matrix (d, d) or a stack (..., d, d).
"""
from typing import Tuple

import numpy as np


def spectral_norm(matrices: np.ndarray) -> np.ndarray:
    """Largest singular value, closed form for 2x2, SVD otherwise."""
    m = np.asarray(matrices, dtype=float)
    if m.shape[-2:] == (2, 2):
        s1, _ = singular_values_2x2(m)
        return s1
    return np.linalg.norm(m, ord=2, axis=(-2, -1))


def singular_values_2x2(matrices: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Singular values (s1 >= s2) of 2x2 matrices.

    Each matrix is divided by its largest absolute entry first, so the squared
    Frobenius norm stays bounded for any finite input. s1 comes from the scaled
    Frobenius norm and determinant without cancellation; s2 = |det| / s1 so it
    stays accurate when s1 is large.
    """
    m = np.asarray(matrices, dtype=float)
    scale = np.max(np.abs(m), axis=(-2, -1))
    safe = np.where(scale > 0.0, scale, 1.0)
    u = m / safe[..., None, None]
    frob2 = np.sum(u * u, axis=(-2, -1))
    det = u[..., 0, 0] * u[..., 1, 1] - u[..., 0, 1] * u[..., 1, 0]
    disc = np.sqrt(np.maximum(frob2 * frob2 - 4.0 * det * det, 0.0))
    s1 = np.sqrt((frob2 + disc) / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        s2 = np.where(s1 > 0.0, np.abs(det) / s1, 0.0)
    return s1 * scale, s2 * scale


def eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """
    Eigenvalues of a single square matrix as a complex array.

    The 2x2 case uses trace/determinant; complex pairs get modulus sqrt|det|
    so near-unit moduli do not suffer cancellation.
    """
    m = np.asarray(matrix, dtype=float)
    if m.shape != (2, 2):
        return np.linalg.eigvals(m).astype(complex)
    trace = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = trace * trace - 4.0 * det
    if disc < 0.0:
        modulus = np.sqrt(abs(det))
        angle = np.arctan2(np.sqrt(-disc), trace)
        return np.array([modulus * np.exp(1j * angle), modulus * np.exp(-1j * angle)])
    root = np.sqrt(disc)
    big = (trace + np.copysign(root, trace)) / 2.0 if trace != 0.0 else root / 2.0
    small = det / big if big != 0.0 else 0.0
    return np.array([big, small], dtype=complex)


def orthonormal_columns(vectors: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Batched QR of (..., d, k) frames.

    Returns the orthonormal factor and log|diag R| per column; the sum of the
    latter is the log Gram-volume of the frame.
    """
    q, r = np.linalg.qr(vectors)
    diag = np.abs(np.diagonal(r, axis1=-2, axis2=-1))
    with np.errstate(divide="ignore"):
        return q, np.log(diag)
