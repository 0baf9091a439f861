"""Uniform grids, sampled fields and the Fourier pair used throughout the package.

Conventions
-----------
Position samples sit at ``x_k = x0 + k*dx`` and the conjugate momentum grid is
centred on zero, ``p_j = 2*pi*(j - n/2)/(n*dx)``, so ``p = 0`` is always the
sample at index ``n // 2``.  The forward transform is the Riemann sum

    F(p_j) = sum_k f(x_k) exp(-i x_k p_j) dx

and the inverse is ``f(x_k) = sum_j F(p_j) exp(i x_k p_j) dp / (2 pi)``.  With
this pair ``idft(dft(f)) == f`` and Parseval reads
``sum |f|^2 dx == sum |F|^2 dp / (2 pi)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

ArrayLike = Union[np.ndarray, list, tuple]


def _frozen(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Grid:
    """Uniform 1D position grid with ``n`` samples starting at ``x0``."""

    x0: float
    dx: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.x0) and np.isfinite(self.dx)):
            raise ValueError("grid origin and spacing must be finite")
        if self.dx <= 0:
            raise ValueError(f"grid spacing must be positive, got dx={self.dx}")
        if int(self.n) != self.n or self.n < 8 or self.n % 2:
            raise ValueError(f"grid size must be an even integer >= 8, got n={self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "dx", float(self.dx))

    @classmethod
    def centered(cls, n: int, dx: float) -> "Grid":
        """Grid with ``x = 0`` at index ``n // 2``."""
        return cls(-(n // 2) * dx, dx, n)

    @classmethod
    def spanning(cls, half_width: float, n: int) -> "Grid":
        """Centred grid covering ``[-half_width, half_width)`` with ``n`` samples."""
        return cls.centered(n, 2.0 * half_width / n)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def dp(self) -> float:
        return 2.0 * np.pi / (self.n * self.dx)

    @property
    def p(self) -> np.ndarray:
        return self.dp * (np.arange(self.n) - self.n // 2)

    @property
    def p_zero_index(self) -> int:
        return self.n // 2

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def max_abs_x(self) -> float:
        return max(abs(self.x0), abs(self.x0 + (self.n - 1) * self.dx))

    def conjugate_centered(self) -> "Grid":
        """Centred grid with the same spacing, used for transforms of momentum-space data."""
        return Grid.centered(self.n, self.dx)

    def index_of(self, x: float) -> int:
        """Index of the sample nearest to ``x``."""
        k = int(round((x - self.x0) / self.dx))
        if not 0 <= k < self.n:
            raise ValueError(f"x={x} lies outside the grid")
        return k


def _check_values(values: np.ndarray, grid: Grid, what: str):
    if values.ndim != 1 or values.shape[0] != grid.n:
        raise ValueError(f"{what} needs {grid.n} samples, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{what} contains non-finite samples")


@dataclass(frozen=True)
class SampledField:
    """Complex amplitude samples ``f(x_k)`` on a :class:`Grid`."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        _check_values(values, self.grid, "field")
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm2(self) -> float:
        """Total power ``sum |f|^2 dx``."""
        return float(np.sum(self.intensity) * self.grid.dx)

    def normalized(self) -> "SampledField":
        total = self.norm2()
        if total <= 0:
            raise ValueError("cannot normalise a zero field")
        return SampledField(self.grid, self.values / np.sqrt(total))

    def support(self) -> tuple[float, float]:
        """Coordinates of the first and last nonzero samples."""
        nz = np.flatnonzero(self.values)
        if nz.size == 0:
            raise ValueError("field is identically zero")
        x = self.grid.x
        return float(x[nz[0]]), float(x[nz[-1]])

    def with_values(self, values: ArrayLike) -> "SampledField":
        return SampledField(self.grid, values)


@dataclass(frozen=True)
class Spectrum:
    """Complex amplitude samples ``F(p_j)`` on the momentum grid conjugate to ``grid``."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        _check_values(values, self.grid, "spectrum")
        object.__setattr__(self, "values", values)

    @property
    def p(self) -> np.ndarray:
        return self.grid.p

    @property
    def modulus(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def phase(self) -> np.ndarray:
        return np.angle(self.values)

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm2(self) -> float:
        """``sum |F|^2 dp / (2 pi)``; equals the position-space norm by Parseval."""
        return float(np.sum(self.intensity) * self.grid.dp / (2.0 * np.pi))

    def at_zero(self) -> complex:
        return complex(self.values[self.grid.p_zero_index])

    def with_values(self, values: ArrayLike) -> "Spectrum":
        return Spectrum(self.grid, values)


def _alternating(n: int) -> np.ndarray:
    return 1.0 - 2.0 * (np.arange(n) % 2)


def forward(values: ArrayLike, grid: Grid) -> np.ndarray:
    """Raw forward transform of position samples on ``grid`` (array in, array out)."""
    values = np.asarray(values, dtype=complex)
    n = grid.n
    return grid.dx * np.exp(-1j * grid.x0 * grid.p) * np.fft.fft(values * _alternating(n))


def inverse(values: ArrayLike, grid: Grid) -> np.ndarray:
    """Raw inverse transform of momentum samples back onto ``grid``."""
    values = np.asarray(values, dtype=complex)
    n = grid.n
    return _alternating(n) * np.fft.ifft(values * np.exp(1j * grid.x0 * grid.p)) / grid.dx


def dft(field: SampledField) -> Spectrum:
    # (-1)^k and exp(-i x0 p) turn numpy's index-0-origin FFT into the centred Riemann sum
    return Spectrum(field.grid, forward(field.values, field.grid))


def idft(spectrum: Spectrum) -> SampledField:
    return SampledField(spectrum.grid, inverse(spectrum.values, spectrum.grid))


def direct_dft(field: SampledField) -> np.ndarray:
    """O(n^2) evaluation of the forward sum; reference for :func:`dft`."""
    kernel = np.exp(-1j * np.outer(field.grid.p, field.grid.x))
    return kernel @ field.values * field.grid.dx


def analytic_extension(field: SampledField, p, q: float):
    """Evaluate ``F(p + i q) = sum_k f(x_k) exp(-i x_k (p + i q)) dx`` by direct summation.

    ``p`` may be a scalar or an array; the result has the same shape.
    """
    grid = field.grid
    if abs(q) * grid.max_abs_x > 700.0:
        raise OverflowError(
            f"q={q} overflows exp(q*x) on a grid reaching |x|={grid.max_abs_x:g}"
        )
    p_arr = np.asarray(p, dtype=float)
    z = p_arr.reshape(-1) + 1j * q
    out = np.exp(-1j * np.outer(z, grid.x)) @ field.values * grid.dx
    if p_arr.ndim == 0:
        return complex(out[0])
    return out.reshape(p_arr.shape)


def centroid(field: SampledField) -> float:
    w = field.intensity
    total = w.sum()
    if total <= 0:
        raise ValueError("centroid undefined for a field with zero intensity")
    return float(np.sum(field.x * w) / total)


def position_spread(field: SampledField) -> float:
    """Standard deviation of ``x`` under ``|f|^2``."""
    w = field.intensity
    total = w.sum()
    if total <= 0:
        raise ValueError("spread undefined for a field with zero intensity")
    mean = np.sum(field.x * w) / total
    return float(np.sqrt(np.sum((field.x - mean) ** 2 * w) / total))


def momentum_spread(field: SampledField) -> float:
    """Standard deviation of ``p`` under ``|F(p)|^2``."""
    spec = dft(field)
    w = spec.intensity
    total = w.sum()
    if total <= 0:
        raise ValueError("momentum spread undefined for a zero field")
    p = spec.p
    mean = np.sum(p * w) / total
    return float(np.sqrt(np.sum((p - mean) ** 2 * w) / total))


def translate(field: SampledField, d: float) -> SampledField:
    """Band-limited translation ``f(x - d)`` via a linear spectral phase."""
    spec = dft(field)
    return idft(spec.with_values(spec.values * np.exp(-1j * spec.p * d)))
