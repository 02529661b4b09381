"""Reconstruction algorithms: stacked Tikhonov and the sequential filter.

Both estimators minimize the same regularized least-squares functional

    alpha * ||phi - phi0||^2  +  sum_n ||f_n - A_n phi||^2_{R^{-1}},

the first by solving the normal equations of all measurements stacked into
one system, the second by absorbing measurements one at a time while
updating a weight matrix ``B``. For linear observation operators the two
agree exactly after all measurements, which the test suite verifies.

The filter gain is computed through the small ``J x J`` innovation matrix
``R + A B A^H`` rather than the ``m x m`` information matrix
``B^{-1} + A^H R^{-1} A``; with J much smaller than m this is cheaper and
better conditioned. The information form serves as a test oracle only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidAlphaError
from .linalg import HERMITIAN_TOL, hermitian_deviation, hermitian_solve, vstack


@dataclass(frozen=True)
class RegularizationConfig:
    """Tikhonov parameter ``alpha`` and observation-error weight ``R``.

    ``R`` is the ``J x J`` Hermitian positive definite weight of the data
    misfit norm; ``None`` means the identity (unit observation error).
    """

    alpha: float
    R: np.ndarray | None = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise InvalidAlphaError(f"alpha must be positive, got {self.alpha}")
        if self.R is not None:
            R = np.asarray(self.R)
            if R.ndim != 2 or R.shape[0] != R.shape[1]:
                raise DimensionMismatchError(f"R must be square, got {R.shape}")
            dev = hermitian_deviation(R)
            if dev > HERMITIAN_TOL:
                raise DimensionMismatchError(
                    f"R is not Hermitian (deviation {dev:.3e})"
                )

    def weight(self, J: int) -> np.ndarray:
        """The weight matrix as an explicit ``J x J`` array."""
        if self.R is None:
            return np.eye(J)
        R = np.asarray(self.R)
        if R.shape[0] != J:
            raise DimensionMismatchError(
                f"R is {R.shape[0]}x{R.shape[0]}, data dimension is {J}"
            )
        return R


@dataclass(frozen=True)
class KalmanState:
    """Filter state: current estimate ``phi``, weight ``B``, steps absorbed.

    ``B`` starts at ``(1/alpha) I`` and contracts with every absorbed
    measurement; it doubles as the posterior covariance of the estimate
    under the Gaussian reading of the functional.
    """

    phi: np.ndarray
    B: np.ndarray
    step: int = 0

    def __post_init__(self):
        m = self.phi.shape[0]
        if self.B.shape != (m, m):
            raise DimensionMismatchError(
                f"B has shape {self.B.shape}, expected ({m}, {m})"
            )
        if self.step < 0:
            raise ValueError(f"step must be nonnegative, got {self.step}")


def tikhonov_single(A: np.ndarray, f: np.ndarray, alpha: float) -> np.ndarray:
    """Regularized solution ``(alpha I + A^H A)^{-1} A^H f`` of ``A phi = f``.

    Minimizes ``alpha ||phi||^2 + ||f - A phi||^2``.
    """
    if alpha <= 0:
        raise InvalidAlphaError(f"alpha must be positive, got {alpha}")
    A = np.asarray(A)
    f = np.asarray(f)
    if f.shape[0] != A.shape[0]:
        raise DimensionMismatchError(
            f"data length {f.shape[0]} does not match operator rows {A.shape[0]}"
        )
    Ah = A.conj().T
    gram = alpha * np.eye(A.shape[1]) + Ah @ A
    return hermitian_solve(gram, Ah @ f)


def full_tikhonov(
    ops: list[np.ndarray],
    data: list[np.ndarray],
    phi0: np.ndarray,
    config: RegularizationConfig,
) -> np.ndarray:
    """Stacked-system Tikhonov estimate from all measurements at once.

    Stacks the operators and data vertically and returns

        phi0 + (alpha I + A^H W A)^{-1} A^H W (f - A phi0),

    where ``W`` applies ``R^{-1}`` blockwise (one block per measurement).

    Parameters
    ----------
    ops : list of (J, m) arrays
        Observation operator per measurement.
    data : list of (J,) arrays
        Measurement vectors, one per operator.
    phi0 : (m,) array
        Initial guess; the estimate is a correction of it.
    config : RegularizationConfig
        Regularization parameter and observation-error weight.
    """
    if not ops:
        raise DimensionMismatchError("need at least one measurement")
    if len(ops) != len(data):
        raise DimensionMismatchError(
            f"{len(ops)} operators but {len(data)} data vectors"
        )
    J, m = ops[0].shape
    phi0 = np.asarray(phi0)
    if phi0.shape != (m,):
        raise DimensionMismatchError(
            f"phi0 has shape {phi0.shape}, expected ({m},)"
        )
    for pos, (A, f) in enumerate(zip(ops, data)):
        if A.shape != (J, m):
            raise DimensionMismatchError(
                f"operator {pos} has shape {A.shape}, expected ({J}, {m})"
            )
        if np.asarray(f).shape != (J,):
            raise DimensionMismatchError(
                f"datum {pos} has shape {np.asarray(f).shape}, expected ({J},)"
            )

    A_bar = vstack(ops)
    f_bar = np.concatenate(data)
    residual = f_bar - A_bar @ phi0
    if config.R is None:
        weighted_ops = A_bar
        weighted_res = residual
    else:
        R = config.weight(J)
        weighted_ops = vstack([hermitian_solve(R, A) for A in ops])
        weighted_res = np.concatenate(
            [hermitian_solve(R, block) for block in np.split(residual, len(ops))]
        )
    gram = config.alpha * np.eye(m) + A_bar.conj().T @ weighted_ops
    rhs = A_bar.conj().T @ weighted_res
    return phi0 + hermitian_solve(gram, rhs)


def kf_init(phi0: np.ndarray, alpha: float) -> KalmanState:
    """Initial filter state: estimate ``phi0`` and weight ``(1/alpha) I``."""
    if alpha <= 0:
        raise InvalidAlphaError(f"alpha must be positive, got {alpha}")
    phi0 = np.asarray(phi0, dtype=complex)
    m = phi0.shape[0]
    return KalmanState(phi=phi0, B=(1.0 / alpha) * np.eye(m, dtype=complex), step=0)


def kf_gain(B_prev: np.ndarray, A: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Gain ``K = B A^H (R + A B A^H)^{-1}`` via the innovation-form solve.

    Only the ``J x J`` innovation matrix is factored; the ``m x m`` weight
    is never inverted.
    """
    BAh = B_prev @ A.conj().T                # (m, J)
    innovation_cov = R + A @ BAh             # (J, J), Hermitian PD
    solved = hermitian_solve(innovation_cov, BAh.conj().T)
    return solved.conj().T


def kf_update(
    state: KalmanState, A: np.ndarray, f: np.ndarray, R: np.ndarray
) -> KalmanState:
    """Absorb one measurement and return the new filter state.

    The estimate moves by the gain applied to the innovation
    ``f - A phi``, and the weight contracts as ``(I - K A) B`` followed by
    symmetrization to suppress floating-point drift.
    """
    A = np.asarray(A)
    f = np.asarray(f)
    m = state.phi.shape[0]
    if A.shape[1] != m:
        raise DimensionMismatchError(
            f"operator has {A.shape[1]} columns, state has length {m}"
        )
    if f.shape[0] != A.shape[0]:
        raise DimensionMismatchError(
            f"datum length {f.shape[0]} does not match operator rows {A.shape[0]}"
        )
    K = kf_gain(state.B, A, R)
    phi_new = state.phi + K @ (f - A @ state.phi)
    B_new = (np.eye(m) - K @ A) @ state.B
    B_new = (B_new + B_new.conj().T) / 2
    return KalmanState(phi=phi_new, B=B_new, step=state.step + 1)
