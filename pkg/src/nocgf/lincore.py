"""Small dense complex linear algebra with the column-stacking conventions
used throughout the gate-refinement pipeline.

Everything here acts on 2x2 or 4x4 complex matrices (or stacks of them with
arbitrary leading axes) and on length-N^2 column-stacked vectors.
"""

from __future__ import annotations

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)

HERMITICITY_TOL = 1e-12


def vectorize(m: np.ndarray) -> np.ndarray:
    """Stack the columns of a square matrix into a single vector.

    For a batch of matrices (..., n, n) the result is (..., n*n).
    """
    m = np.asarray(m)
    n = m.shape[-1]
    if m.shape[-2] != n:
        raise ValueError("vectorize expects a square matrix")
    return np.swapaxes(m, -1, -2).reshape(*m.shape[:-2], n * n)


def devectorize(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of vectorize: rebuild the (dim, dim) matrix from column stacking."""
    v = np.asarray(v)
    if v.shape[-1] != dim * dim:
        raise ValueError(f"vector length {v.shape[-1]} does not match dim {dim}")
    return np.swapaxes(v.reshape(*v.shape[:-1], dim, dim), -1, -2)


def hermitize(m: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (M + M†)/2."""
    m = np.asarray(m)
    return 0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))


def max_norm(m: np.ndarray) -> float:
    """Largest entry magnitude, max_ij |M_ij|."""
    return float(np.abs(np.asarray(m)).max())


def unitarity_defect(u: np.ndarray) -> float:
    """max-norm of U†U - I; zero for exactly unitary input."""
    u = np.asarray(u)
    n = u.shape[-1]
    g = np.conj(np.swapaxes(u, -1, -2)) @ u
    idx = np.arange(n)
    g[..., idx, idx] -= 1.0
    return float(np.abs(g).max())


def hermitian_eigensystem(m: np.ndarray):
    """Eigenvalues (ascending) and phase-fixed orthonormal eigenvectors.

    The input must be Hermitian to within HERMITICITY_TOL relative to its
    max-norm (hermitize first otherwise).  Each eigenvector is gauged so its
    largest-magnitude component is real and positive, which keeps the columns
    deterministic and continuous along smooth non-degenerate matrix paths.
    Supports stacked input (..., n, n).
    """
    m = np.asarray(m)
    scale = max(1.0, float(np.abs(m).max()))
    defect = float(np.abs(m - np.conj(np.swapaxes(m, -1, -2))).max())
    if defect > HERMITICITY_TOL * scale:
        raise ValueError(
            f"matrix is not Hermitian (defect {defect:.3e}); hermitize first"
        )
    w, v = np.linalg.eigh(m)
    # gauge: largest-|component| of each column made real positive
    mags = np.abs(v)
    pick = np.argmax(mags, axis=-2)                       # (..., n) column-wise index
    anchor = np.take_along_axis(v, pick[..., None, :], axis=-2)  # (..., 1, n)
    phases = anchor / np.abs(anchor)
    v = v * np.conj(phases)
    return w, v
