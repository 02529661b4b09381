"""Dense complex linear-algebra substrate.

Everything here operates on plain numpy arrays with ``complex128`` entries.
The estimator and experiment layers funnel every matrix inverse through
:func:`hermitian_solve`, so positive definiteness is checked in exactly one
place. Problem sizes are a few hundred rows at most; dense storage and
LAPACK-backed factorizations are the right tool, and no sparse or iterative
machinery is provided on purpose.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NotHermitianError,
    NotPositiveDefiniteError,
    SvdFailureError,
)

#: Maximum allowed absolute deviation of ``H - H^H`` before a Hermitian
#: solve refuses the input.
HERMITIAN_TOL = 1e-10

#: Default relative singular-value cutoff for numerical rank.
DEFAULT_RANK_TOL = 1e-10


def adjoint(A: np.ndarray) -> np.ndarray:
    """Conjugate transpose of a matrix (or row/column swap of a vector)."""
    return np.asarray(A).conj().T


def hermitian_deviation(H: np.ndarray) -> float:
    """Largest absolute entry of ``H - H^H``."""
    return float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0


def hermitian_solve(H: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve ``H X = rhs`` for Hermitian positive definite ``H``.

    The input is symmetrized (``(H + H^H) / 2``) to suppress floating-point
    drift and then factored by Cholesky; the inverse is never formed
    explicitly. ``rhs`` may be a vector or a matrix of stacked right-hand
    sides and the result has the same shape.

    Raises
    ------
    NotHermitianError
        If ``max |H - H^H|`` exceeds ``HERMITIAN_TOL``.
    NotPositiveDefiniteError
        If the factorization hits a non-positive pivot.
    """
    H = np.asarray(H)
    rhs = np.asarray(rhs)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {H.shape}")
    if rhs.shape[0] != H.shape[0]:
        raise DimensionMismatchError(
            f"right-hand side has {rhs.shape[0]} rows, matrix has {H.shape[0]}"
        )
    dev = hermitian_deviation(H)
    if dev > HERMITIAN_TOL:
        raise NotHermitianError(
            f"Hermitian deviation {dev:.3e} exceeds tolerance {HERMITIAN_TOL:.0e}"
        )
    H = (H + H.conj().T) / 2
    try:
        factor = scipy.linalg.cho_factor(H, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc
    return scipy.linalg.cho_solve(factor, rhs, check_finite=False)


def svd_rank(A: np.ndarray, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Numerical rank: count of singular values above ``rel_tol * sigma_max``.

    The threshold is relative, so the result is invariant under scaling of
    ``A``. The zero matrix has rank 0. ``rel_tol`` must be positive.
    """
    if rel_tol <= 0:
        raise ValueError(f"rel_tol must be positive, got {rel_tol}")
    A = np.asarray(A)
    try:
        sigma = np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SvdFailureError(str(exc)) from exc
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > rel_tol * sigma[0]))


def vstack(blocks: list[np.ndarray]) -> np.ndarray:
    """Stack matrices vertically, preserving block order.

    All blocks must share the same column count; a mismatch raises
    :class:`DimensionMismatchError`.
    """
    if not blocks:
        raise DimensionMismatchError("cannot stack an empty list of blocks")
    arrays = [np.atleast_2d(np.asarray(b)) for b in blocks]
    cols = arrays[0].shape[1]
    for pos, b in enumerate(arrays):
        if b.shape[1] != cols:
            raise DimensionMismatchError(
                f"block {pos} has {b.shape[1]} columns, expected {cols}"
            )
    return np.vstack(arrays)
