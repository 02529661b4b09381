"""Scenario runner: reconstruction traces, error curves, rank sweeps.

A :class:`Scenario` freezes everything one experiment needs, including the
noise seed, so identical scenarios reproduce bit-identical traces. Noise is
drawn once per scenario (one substream per incident index) and shared
between the sequential filter and the stacked solver, so their disagreement
measures the algorithms and not the noise realization.

Note on naming: the error curve follows the convention of reporting the
plain squared Euclidean distance ``||q_true - q_n||^2`` per step. It is not
divided by the number of cells, despite being called an MSE.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BornreconError, DimensionMismatchError, ScenarioRunError
from .estimators import RegularizationConfig, full_tikhonov, kf_init, kf_update
from .forward import (
    DirectionSet,
    Grid,
    NoiseModel,
    Scatterer,
    assemble_operator,
    rasterize,
    synthesize,
)
from .linalg import DEFAULT_RANK_TOL, svd_rank, vstack

METHODS = ("kf", "ft", "both")


@dataclass(frozen=True)
class Scenario:
    """One named experiment: medium, physics, regularization, noise, method."""

    name: str
    scatterer: Scatterer
    k: float
    alpha: float
    sigma: float = 0.0
    N: int = 30
    J: int = 30
    M: int = 8
    S: float = 3.0
    r: float = 1.0
    seed: int = 0
    oversample: int = 1
    method: str = "kf"

    def __post_init__(self):
        if min(self.N, self.J, self.M) < 1:
            raise ValueError("N, J, M must all be at least 1")
        if self.k <= 0:
            raise ValueError(f"wavenumber must be positive, got {self.k}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if self.r <= 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if self.oversample < 1:
            raise ValueError(f"oversample must be >= 1, got {self.oversample}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")

    def grid(self) -> Grid:
        return Grid(S=self.S, M=self.M)

    def directions(self) -> DirectionSet:
        return DirectionSet(J=self.J, N=self.N)

    def noise_model(self) -> NoiseModel:
        return NoiseModel(sigma=self.sigma, seed=self.seed)


@dataclass
class ReconstructionTrace:
    """Per-step estimates and errors of one scenario run.

    ``states[n-1]`` and ``mse[n-1]`` describe the estimate after absorbing
    the first ``n`` measurements. The ``ft_*`` fields are filled when the
    scenario method includes the stacked solver: ``ft_mse`` and
    ``step_gaps`` hold the stacked solver's error curve and the relative
    distance between the two estimates per step, ``ft_final`` its final
    estimate, and ``equivalence_gap`` the final relative distance.
    """

    states: list[np.ndarray]
    mse: list[float]
    ft_final: np.ndarray | None = None
    equivalence_gap: float | None = None
    ft_mse: list[float] | None = None
    step_gaps: list[float] | None = None


def mse(truth: np.ndarray, estimate: np.ndarray) -> float:
    """Squared Euclidean distance between two complex vectors."""
    truth = np.asarray(truth)
    estimate = np.asarray(estimate)
    if truth.shape != estimate.shape:
        raise DimensionMismatchError(
            f"shapes {truth.shape} and {estimate.shape} differ"
        )
    diff = truth - estimate
    return float(np.real(np.vdot(diff, diff)))


def _relative_gap(a: np.ndarray, b: np.ndarray) -> float:
    """``||a - b|| / ||b||``, defined as 0 when both vectors vanish."""
    denom = float(np.linalg.norm(b))
    diff = float(np.linalg.norm(a - b))
    if denom == 0.0:
        return 0.0 if diff == 0.0 else float("inf")
    return diff / denom


def run_reconstruction(scenario: Scenario) -> ReconstructionTrace:
    """Run one scenario and record the estimate and error after every step.

    Assembles all ``N`` operators, synthesizes all measurements from seeded
    per-index substreams, and then runs the method(s) the scenario asks
    for. With ``method="ft"`` the per-step states are stacked solutions of
    the first ``n`` measurements; with ``method="both"`` the states come
    from the filter and the stacked solver fills the ``ft_*`` fields.
    """
    grid = scenario.grid()
    dirs = scenario.directions()
    noise = scenario.noise_model()
    truth = rasterize(grid, scenario.scatterer)
    synth_target = scenario.scatterer if scenario.oversample > 1 else truth

    ops = [
        assemble_operator(grid, dirs, n, scenario.k)
        for n in range(1, scenario.N + 1)
    ]
    data = [
        synthesize(grid, dirs, n, scenario.k, synth_target, noise, scenario.oversample)
        for n in range(1, scenario.N + 1)
    ]

    phi0 = np.zeros(grid.n_cells, dtype=complex)
    R = (scenario.r**2) * np.eye(scenario.J)
    config = RegularizationConfig(alpha=scenario.alpha, R=R)

    kf_states: list[np.ndarray] = []
    if scenario.method in ("kf", "both"):
        state = kf_init(phi0, scenario.alpha)
        for n in range(1, scenario.N + 1):
            try:
                state = kf_update(state, ops[n - 1], data[n - 1], R)
            except BornreconError as exc:
                raise ScenarioRunError(scenario.name, n, exc) from exc
            kf_states.append(state.phi)

    ft_states: list[np.ndarray] = []
    if scenario.method in ("ft", "both"):
        for n in range(1, scenario.N + 1):
            try:
                ft_states.append(full_tikhonov(ops[:n], data[:n], phi0, config))
            except BornreconError as exc:
                raise ScenarioRunError(scenario.name, n, exc) from exc

    if scenario.method == "kf":
        states = kf_states
    elif scenario.method == "ft":
        states = ft_states
    else:
        states = kf_states
    trace = ReconstructionTrace(
        states=states,
        mse=[mse(truth, phi) for phi in states],
    )
    if scenario.method == "both":
        trace.ft_final = ft_states[-1]
        trace.ft_mse = [mse(truth, phi) for phi in ft_states]
        trace.step_gaps = [
            _relative_gap(kf, ft) for kf, ft in zip(kf_states, ft_states)
        ]
        trace.equivalence_gap = trace.step_gaps[-1]
    return trace


def rank_sweep(
    ks: list[float],
    grid: Grid,
    dirs: DirectionSet,
    rel_tol: float = DEFAULT_RANK_TOL,
) -> list[tuple[float, int]]:
    """Numerical rank of the stacked far-field operator per wavenumber.

    For each ``k`` all ``N`` operators are stacked into one
    ``N*J x (2M)^2`` matrix and its rank at the given relative singular
    value cutoff is reported, in input order.
    """
    if not ks:
        raise ValueError("need at least one wavenumber")
    results = []
    for k in ks:
        stacked = vstack(
            [assemble_operator(grid, dirs, n, k) for n in range(1, dirs.N + 1)]
        )
        results.append((float(k), svd_rank(stacked, rel_tol)))
    return results
