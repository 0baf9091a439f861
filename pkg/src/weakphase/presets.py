"""Built-in test objects.

Gaussian widths are given as the position standard deviation ``sigma`` of the
intensity, i.e. ``|f|^2 ~ exp(-x^2 / (2 sigma^2))``, so the momentum spread of
an unchirped Gaussian is ``1 / (2 sigma)``.
"""

from __future__ import annotations

import numpy as np

from .wavefield import Grid, SampledField


def padded_grid(n: int, half_width: float, oversample: int = 4) -> Grid:
    """Centred grid whose middle ``n / oversample`` samples span ``[-half_width, half_width)``."""
    if n % oversample:
        raise ValueError(f"n={n} is not a multiple of oversample={oversample}")
    return Grid.centered(n, 2.0 * half_width / (n // oversample))


def central_support(grid: Grid, oversample: int = 4) -> tuple[float, float]:
    """Support interval of the middle ``n / oversample`` samples of a centred grid."""
    m = grid.n // oversample
    k0 = grid.n // 2 - m // 2
    x = grid.x
    return float(x[k0]), float(x[k0 + m - 1])


def _window(grid: Grid, support) -> np.ndarray:
    if support is None:
        return np.ones(grid.n)
    a, b = support
    x = grid.x
    tol = 1e-9 * grid.dx
    return ((x >= a - tol) & (x <= b + tol)).astype(float)


def _finish(grid, values, support, normalize) -> SampledField:
    field = SampledField(grid, values * _window(grid, support))
    return field.normalized() if normalize else field


def gaussian(grid: Grid, sigma: float = 1.0, center: float = 0.0, support=None,
             normalize: bool = True) -> SampledField:
    u = grid.x - center
    return _finish(grid, np.exp(-u**2 / (4 * sigma**2)), support, normalize)


def chirped_gaussian(grid: Grid, sigma: float = 1.0, chirp: float = 0.5, center: float = 0.0,
                     tilt: float = 0.0, support=None, normalize: bool = True) -> SampledField:
    """Gaussian with quadratic phase ``chirp * (x - center)^2`` and optional linear phase."""
    u = grid.x - center
    values = np.exp(-u**2 / (4 * sigma**2) + 1j * chirp * u**2 + 1j * tilt * u)
    return _finish(grid, values, support, normalize)


def cubic_phase_gaussian(grid: Grid, sigma: float = 1.0, cubic: float = 0.1, center: float = 0.0,
                         support=None, normalize: bool = True) -> SampledField:
    u = grid.x - center
    values = np.exp(-u**2 / (4 * sigma**2) + 1j * cubic * u**3)
    return _finish(grid, values, support, normalize)


def point_mass(grid: Grid, x: float = 0.0) -> SampledField:
    values = np.zeros(grid.n, dtype=complex)
    values[grid.index_of(x)] = 1.0
    return SampledField(grid, values)


def two_spikes(grid: Grid, x1: float = 0.0, x2: float = 1.0) -> SampledField:
    values = np.zeros(grid.n, dtype=complex)
    values[grid.index_of(x1)] = 1.0
    values[grid.index_of(x2)] = 1.0
    return SampledField(grid, values)


def hermitian_lobed(grid: Grid, sigma: float = 1.0, lobe_offset: float = 3.0,
                    lobe_weight: float = 0.8, support=None) -> SampledField:
    """Real, even object: a central Gaussian flanked by two sign-flipped lobes.

    Satisfies ``f(x) = conj(f(-x))`` so its spectrum is real with sign changes.
    """
    x = grid.x
    g = lambda u: np.exp(-u**2 / (4 * sigma**2))
    values = g(x) - lobe_weight * (g(x - lobe_offset) + g(x + lobe_offset))
    return _finish(grid, values.astype(complex), support, True)


def random_smooth(grid: Grid, seed: int, support=None, normalize: bool = True) -> SampledField:
    """Seeded smooth object: Gaussian envelope, weak amplitude ripple, smooth random phase.

    Every random parameter is scaled by ``u = half_support / 16`` so the envelope
    decays below ~1e-15 at the support edges.  Within that family the spectrum
    has no complex zeros close to the real axis, which the exponential-filter
    identities rely on.
    """
    rng = np.random.default_rng(seed)
    if support is None:
        support = central_support(grid)
    a, b = support
    u_scale = 0.5 * (b - a) / 16.0
    mid = 0.5 * (a + b)
    center = mid + rng.uniform(-1, 1) * u_scale
    sigma = rng.uniform(0.8, 1.2) * u_scale
    chirp = rng.uniform(-0.3, 0.3) / u_scale**2
    cubic = rng.uniform(-0.002, 0.002) / u_scale**3
    tilt = rng.uniform(-2.0, 2.0) / u_scale
    ripple = rng.uniform(-0.05, 0.05)
    k = rng.uniform(0.2, 0.6) / u_scale
    shift = rng.uniform(0, 2 * np.pi)
    u = grid.x - center
    envelope = np.exp(-u**2 / (4 * sigma**2)) * (1 + ripple * np.cos(k * u + shift))
    values = envelope * np.exp(1j * (chirp * u**2 + cubic * u**3 + tilt * u))
    return _finish(grid, values, support, normalize)


PRESETS = {
    "gaussian": gaussian,
    "chirped_gaussian": chirped_gaussian,
    "cubic_phase_gaussian": cubic_phase_gaussian,
    "two_spikes": two_spikes,
    "point_mass": point_mass,
    "random_smooth": random_smooth,
    "hermitian_lobed": hermitian_lobed,
}


def make_preset(name: str, grid: Grid, **params) -> SampledField:
    try:
        builder = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return builder(grid, **params)
