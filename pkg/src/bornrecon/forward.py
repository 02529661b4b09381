"""Discretized Born forward model for a 2-D penetrable medium.

Conventions, fixed once here because golden files depend on them:

* The sampling square ``[-S, S]^2`` is split into ``(2M)^2`` cells of side
  ``S/M``. Cell centers are ``y_{i,l} = ((2i+1)S/(2M), (2l+1)S/(2M))`` for
  ``-M <= i, l <= M-1``, flattened by ``p = (i+M)*(2M) + (l+M)``.
* Observation directions ``x_hat_j = (cos(2*pi*j/J), sin(2*pi*j/J))`` and
  incident directions ``theta_n = (cos(2*pi*n/N), sin(2*pi*n/N))`` are
  indexed from 1, so ``theta_N = (1, 0)``.
* The far-field matrix for incident index ``n`` has entries
  ``(k^2 S^2)/(4 pi M^2) * exp(i k (theta_n - x_hat_j) . y_{i,l})``.
* Measurement noise is a circularly-symmetric complex Gaussian whose real
  and imaginary parts each have per-component standard deviation ``sigma``
  (total complex variance ``2 sigma^2``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DimensionMismatchError, InvalidWavenumberError


@dataclass(frozen=True)
class Grid:
    """Square sampling domain ``[-S, S]^2`` split into ``(2M)^2`` cells.

    ``S`` is the half-width of the square and ``M`` the number of cells per
    half-axis, so cells have side ``S/M`` and area ``(S/M)^2``.
    """

    S: float = 3.0
    M: int = 8

    def __post_init__(self):
        if self.S <= 0:
            raise ValueError(f"S must be positive, got {self.S}")
        if self.M < 1:
            raise ValueError(f"M must be at least 1, got {self.M}")

    @property
    def n_cells(self) -> int:
        return (2 * self.M) ** 2

    @property
    def cell_side(self) -> float:
        return self.S / self.M

    def cell_centers(self) -> np.ndarray:
        """All cell centers as an ``(n_cells, 2)`` array in flattening order."""
        idx = np.arange(-self.M, self.M)
        coords = (2 * idx + 1) * self.S / (2 * self.M)
        y1, y2 = np.meshgrid(coords, coords, indexing="ij")
        return np.column_stack([y1.ravel(), y2.ravel()])

    def flat_index(self, i: int, l: int) -> int:
        """Position of cell ``(i, l)`` in the flattened vector."""
        if not (-self.M <= i < self.M and -self.M <= l < self.M):
            raise IndexError(f"cell index ({i}, {l}) outside [-M, M-1]^2")
        return (i + self.M) * (2 * self.M) + (l + self.M)

    def index_pairs(self) -> np.ndarray:
        """``(n_cells, 2)`` integer array of ``(i, l)`` per flat position."""
        idx = np.arange(-self.M, self.M)
        ii, ll = np.meshgrid(idx, idx, indexing="ij")
        return np.column_stack([ii.ravel(), ll.ravel()])

    def refined(self, factor: int) -> "Grid":
        """Same domain with every cell split ``factor`` times per axis."""
        if factor < 1:
            raise ValueError(f"refinement factor must be >= 1, got {factor}")
        return Grid(S=self.S, M=self.M * factor)


@dataclass(frozen=True)
class DirectionSet:
    """Equispaced unit directions on the circle, indexed from 1.

    ``J`` observation directions and ``N`` incident directions.
    """

    J: int = 30
    N: int = 30

    def __post_init__(self):
        if self.J < 1 or self.N < 1:
            raise ValueError("direction counts must be at least 1")

    def observation_directions(self) -> np.ndarray:
        j = np.arange(1, self.J + 1)
        ang = 2 * np.pi * j / self.J
        return np.column_stack([np.cos(ang), np.sin(ang)])

    def incident_directions(self) -> np.ndarray:
        n = np.arange(1, self.N + 1)
        ang = 2 * np.pi * n / self.N
        return np.column_stack([np.cos(ang), np.sin(ang)])


@dataclass(frozen=True)
class Scatterer:
    """A medium contrast: a point-in-support predicate and a complex value.

    ``indicator`` maps an ``(n, 2)`` array of points to a boolean array of
    length ``n``. It must be deterministic; boundary behavior follows the
    strict inequalities of the defining sets.
    """

    name: str
    indicator: Callable[[np.ndarray], np.ndarray]
    value: complex = 1.0 + 0.0j


def disk(
    center: tuple[float, float] = (0.0, 0.0),
    radius_squared: float = 1.5,
    value: complex = 1.0 + 0.0j,
) -> Scatterer:
    """Open disk ``(x1-c1)^2 + (x2-c2)^2 < radius_squared``.

    The defaults give the benchmark disk of radius ``sqrt(1.5)`` at the
    origin. Parameterized by the squared radius so the defining inequality
    is evaluated literally.
    """
    if radius_squared <= 0:
        raise ValueError(f"radius_squared must be positive, got {radius_squared}")
    c1, c2 = float(center[0]), float(center[1])

    def indicator(points: np.ndarray) -> np.ndarray:
        d1 = points[:, 0] - c1
        d2 = points[:, 1] - c2
        return d1 * d1 + d2 * d2 < radius_squared

    return Scatterer(name="disk", indicator=indicator, value=value)


def composite(value: complex = 1.0 + 0.0j) -> Scatterer:
    """Benchmark composite support: a small disk plus two open rectangles.

    Union of ``(x1+1.5)^2 + (x2+1.5)^2 < 1``, ``(1, 2) x (-2, 2)``, and
    ``(-2, 2) x (-2, -1)``.
    """

    def indicator(points: np.ndarray) -> np.ndarray:
        x1 = points[:, 0]
        x2 = points[:, 1]
        in_disk = (x1 + 1.5) ** 2 + (x2 + 1.5) ** 2 < 1.0
        in_bar = (1 < x1) & (x1 < 2) & (-2 < x2) & (x2 < 2)
        in_base = (-2 < x1) & (x1 < 2) & (-2.0 < x2) & (x2 < -1.0)
        return in_disk | in_bar | in_base

    return Scatterer(name="composite", indicator=indicator, value=value)


@dataclass(frozen=True)
class NoiseModel:
    """Seeded circularly-symmetric complex Gaussian noise.

    ``sigma`` is the standard deviation of each real and each imaginary
    component separately. Substreams are derived per incident index with
    ``SeedSequence(entropy=seed, spawn_key=(index,))`` feeding a PCG64
    generator, so the sample for index ``n`` is reproducible on its own,
    independent of evaluation order or scheduling.
    """

    sigma: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")

    def substream(self, index: int = 0) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(index,))
        return np.random.Generator(np.random.PCG64(seq))


def sample_noise(length: int, model: NoiseModel, index: int = 0) -> np.ndarray:
    """Draw one complex noise vector from the model's substream ``index``.

    Real parts are drawn first as one block, then imaginary parts, each
    i.i.d. Gaussian with mean 0 and standard deviation ``sigma``. The same
    ``(model, index)`` always reproduces the same vector bit-exactly;
    ``sigma = 0`` yields the zero vector.
    """
    if model.sigma == 0.0:
        return np.zeros(length, dtype=complex)
    rng = model.substream(index)
    re = rng.standard_normal(length)
    im = rng.standard_normal(length)
    return model.sigma * (re + 1j * im)


def assemble_operator(
    grid: Grid, dirs: DirectionSet, n: int, k: float
) -> np.ndarray:
    """Far-field matrix for incident index ``n`` at wavenumber ``k``.

    Returns the ``J x (2M)^2`` complex matrix with entry
    ``(j, p(i,l)) = (k^2 S^2)/(4 pi M^2) * exp(i k (theta_n - x_hat_j) . y_{i,l})``,
    rows ordered ``j = 1..J`` and columns by the grid flattening.
    """
    if k <= 0:
        raise InvalidWavenumberError(f"wavenumber must be positive, got {k}")
    if not 1 <= n <= dirs.N:
        raise IndexError(f"incident index {n} outside 1..{dirs.N}")
    centers = grid.cell_centers()
    theta = dirs.incident_directions()[n - 1]
    x_hat = dirs.observation_directions()
    diff = theta[None, :] - x_hat                      # (J, 2)
    phase = k * (diff @ centers.T)                     # (J, n_cells)
    prefactor = (k * k * grid.S * grid.S) / (4 * np.pi * grid.M * grid.M)
    return prefactor * np.exp(1j * phase)


def rasterize(grid: Grid, scatterer: Scatterer) -> np.ndarray:
    """Piecewise-constant contrast vector: ``value`` on interior cells, else 0."""
    inside = scatterer.indicator(grid.cell_centers())
    q = np.zeros(grid.n_cells, dtype=complex)
    q[inside] = scatterer.value
    return q


def synthesize(
    grid: Grid,
    dirs: DirectionSet,
    n: int,
    k: float,
    truth: Union[np.ndarray, Scatterer],
    model: NoiseModel,
    oversample: int = 1,
) -> np.ndarray:
    """Synthetic far-field measurement for incident index ``n``.

    With ``oversample = 1`` the clean signal is the assembled operator
    applied to the contrast vector (``truth`` may be a vector of length
    ``(2M)^2`` or a :class:`Scatterer`, which is rasterized on ``grid``).
    With ``oversample > 1`` the Born integral is evaluated on a grid refined
    by that factor against the scatterer's exact indicator, which avoids the
    inverse crime; ``truth`` must then be a :class:`Scatterer`. Fresh noise
    from substream ``n`` of ``model`` is added either way.
    """
    if oversample < 1:
        raise ValueError(f"oversample must be >= 1, got {oversample}")
    if isinstance(truth, Scatterer):
        eval_grid = grid if oversample == 1 else grid.refined(oversample)
        contrast = rasterize(eval_grid, truth)
    else:
        if oversample > 1:
            raise ValueError(
                "oversampled synthesis evaluates the exact indicator; "
                "pass a Scatterer as truth"
            )
        contrast = np.asarray(truth)
        if contrast.shape != (grid.n_cells,):
            raise DimensionMismatchError(
                f"truth has shape {contrast.shape}, expected ({grid.n_cells},)"
            )
        eval_grid = grid
    operator = assemble_operator(eval_grid, dirs, n, k)
    clean = operator @ contrast
    return clean + sample_noise(dirs.J, model, index=n)
