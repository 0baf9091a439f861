"""Phase retrieval from two Fourier intensities: the bare object and the object
seen through an exponential amplitude filter ``exp(-c (x - s))``.

Pipeline::

    I, I_filtered --sqrt--> M, |F~|
    M --extended_modulus--> |M(p - ic)|
    (|F~|, |M(p - ic)|) --log_ratio_D--> D(p) = -Im phi(p - ic)
    D --solve_phase--> phi(p), tilt
    (M, phi) --reconstruct_object--> f(x)
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from .wavefield import (
    Grid,
    SampledField,
    analytic_extension,
    dft,
    forward,
    inverse,
)

DEFAULT_FLOOR_REL = 1e-6


class HermitianObjectWarning(UserWarning):
    """The measured intensities look like those of a Hermitian object."""


@dataclass(frozen=True)
class FilterSpec:
    """Exponential amplitude filter ``exp(-c (x - s))``; ``s`` must sit left of the object."""

    c: float
    s: float

    def __post_init__(self):
        if not (np.isfinite(self.c) and np.isfinite(self.s)):
            raise ValueError("filter parameters must be finite")
        if self.c <= 0:
            raise ValueError(f"filter slope c must be positive, got {self.c}")
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "s", float(self.s))

    @classmethod
    def default_for(cls, field: SampledField, strength: float = 2.0,
                    offset: float = 0.05) -> "FilterSpec":
        """``c (b - a) = strength`` and ``s = a - offset (b - a)`` for support ``(a, b)``."""
        a, b = field.support()
        width = b - a
        if width <= 0:
            raise ValueError("default filter needs an object of nonzero width")
        return cls(strength / width, a - offset * width)

    def check_support(self, field: SampledField) -> tuple[float, float]:
        a, b = field.support()
        if not self.s < a:
            raise ValueError(f"filter offset s={self.s} must lie left of the support edge a={a}")
        return a, b

    def transmittance(self, x) -> np.ndarray:
        return np.exp(-self.c * (np.asarray(x, dtype=float) - self.s))


@dataclass(frozen=True)
class PhaseResult:
    """Retrieved spectral phase on the momentum grid of ``grid``.

    ``phase`` excludes the linear term; the full phase is ``phase + tilt * p``.
    """

    phase: np.ndarray
    tilt: float
    valid_mask: np.ndarray
    grid: Grid
    diagnostics: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        phase = np.array(self.phase, dtype=float)
        mask = np.array(self.valid_mask, dtype=bool)
        if phase.shape != (self.grid.n,) or mask.shape != (self.grid.n,):
            raise ValueError("phase and mask must match the grid size")
        if not np.all(np.isfinite(phase[mask])) or not np.isfinite(self.tilt):
            raise ValueError("retrieved phase is not finite on valid bins")
        phase.flags.writeable = False
        mask.flags.writeable = False
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "valid_mask", mask)
        object.__setattr__(self, "tilt", float(self.tilt))

    @property
    def p(self) -> np.ndarray:
        return self.grid.p

    def total_phase(self) -> np.ndarray:
        return self.phase + self.tilt * self.grid.p


def apply_exp_filter(field: SampledField, fs: FilterSpec) -> SampledField:
    fs.check_support(field)
    values = np.array(field.values)
    nz = values != 0
    values[nz] *= fs.transmittance(field.x[nz])
    return field.with_values(values)


def simulate_intensities(field: SampledField, fs: FilterSpec) -> tuple[np.ndarray, np.ndarray]:
    """Fourier intensities of the bare and the filtered object."""
    return dft(field).intensity, dft(apply_exp_filter(field, fs)).intensity


def _continuation_guard(c: float, grid: Grid):
    if c * grid.length / 2 > 700:
        raise OverflowError(f"c={c} overflows exp(c x) over a grid of length {grid.length:g}")


def extended_modulus(M, c: float, grid: Grid) -> np.ndarray:
    """``|M(p - ic)|`` from the measured modulus alone.

    ``M`` is moved to the centred position grid, multiplied by ``exp(-c x)``
    and transformed back.  This continues ``M`` into the lower half-plane and
    is accurate when ``|F|`` has no zeros within ``|Im z| <~ c`` of the real
    axis (which the method assumes).
    """
    M = np.asarray(M, dtype=float)
    if M.shape != (grid.n,):
        raise ValueError(f"modulus needs {grid.n} samples, got shape {M.shape}")
    if np.any(M < 0):
        raise ValueError("modulus must be nonnegative")
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    g = grid.conjugate_centered()
    _continuation_guard(c, g)
    m = inverse(M, g)
    return np.abs(forward(m * np.exp(-c * g.x), g))


def log_ratio_D(Ftilde_mod, Mext, fs: FilterSpec, floor_rel: float = DEFAULT_FLOOR_REL):
    """``D = ln(|F~| / |M(p - ic)|) - c s`` with masking of weak bins.

    Bins where either modulus falls below ``floor_rel`` of its peak are marked
    invalid and refilled by linear interpolation (constant beyond the ends).
    """
    Ft = np.asarray(Ftilde_mod, dtype=float)
    Me = np.asarray(Mext, dtype=float)
    if Ft.shape != Me.shape:
        raise ValueError("moduli must have the same length")
    if not 0 < floor_rel < 1:
        raise ValueError("floor_rel must lie in (0, 1)")
    mask = (Ft >= floor_rel * Ft.max()) & (Me >= floor_rel * Me.max()) & (Ft > 0) & (Me > 0)
    if mask.sum() < 2:
        raise ValueError("insufficient modulus support")
    D = np.empty_like(Ft)
    D[mask] = np.log(Ft[mask] / Me[mask]) - fs.c * fs.s
    idx = np.arange(Ft.size)
    D[~mask] = np.interp(idx[~mask], idx[mask], D[mask])
    return D, mask


def solve_phase(D, c: float, grid: Grid, valid_mask=None) -> PhaseResult:
    """Invert ``D(p) = -Im phi(p - ic)`` for the real phase ``phi(p)``.

    On the centred position grid ``IFT[D](x) = -i sinh(c x) IFT[phi](x)``.  The
    ``x = 0`` sample cannot be divided out; it holds the linear phase
    component and gives the tilt ``alpha = mean(D) / c``.
    """
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    D = np.asarray(D, dtype=float)
    if D.shape != (grid.n,) or not np.all(np.isfinite(D)):
        raise ValueError("D must be finite with one value per momentum bin")
    g = grid.conjugate_centered()
    _continuation_guard(c, g)
    m = inverse(D, g)
    k0 = g.n // 2
    x = g.x
    quotient = np.zeros(g.n, dtype=complex)
    nz = np.arange(g.n) != k0
    quotient[nz] = m[nz] / (-1j * np.sinh(c * x[nz]))
    phi = forward(quotient, g)
    # m[k0] = sum(D) dp / 2pi; the dx restores the continuum delta weight
    tilt = m[k0].real * g.dx / c
    if valid_mask is None:
        valid_mask = np.ones(g.n, dtype=bool)
    diagnostics = {
        "imag_residual": float(np.max(np.abs(phi.imag))),
        "zero_bin": complex(m[k0]),
    }
    return PhaseResult(phi.real, tilt, valid_mask, grid, diagnostics)


def reconstruct_object(M, pr: PhaseResult, grid: Grid, include_tilt: bool = False) -> SampledField:
    M = np.asarray(M, dtype=float)
    if np.any(M < 0):
        raise ValueError("modulus must be nonnegative")
    phase = pr.total_phase() if include_tilt else pr.phase
    return SampledField(grid, inverse(M * np.exp(1j * phase), grid))


def _hermitian_signature(M, D, mask, tol=1e-6):
    """Flags for intensities that carry no usable phase information.

    ``flat_D``: D is constant on valid bins, so the retrieval can only return a
    linear phase (the spectrum is real up to a shift).  ``interior_nulls``: the
    modulus has deep interior minima, i.e. zeros on or next to the real axis.
    """
    Dv = D[mask]
    flat = bool(np.ptp(Dv) <= tol * max(1.0, np.max(np.abs(Dv))))
    idx = np.flatnonzero(mask)
    inner = M[idx[0]:idx[-1] + 1]
    peak = M.max()
    dips = (inner[1:-1] < inner[:-2]) & (inner[1:-1] < inner[2:]) & (inner[1:-1] < 1e-3 * peak)
    return flat, bool(np.any(dips))


def retrieve(intensity_unfiltered, intensity_filtered, fs: FilterSpec, grid: Grid,
             floor_rel: float = DEFAULT_FLOOR_REL, include_tilt: bool = False):
    """Full retrieval from the two Fourier intensities.

    Returns ``(PhaseResult, reconstruction)``.  The reconstruction omits the
    linear phase unless ``include_tilt`` is set.
    """
    I0 = np.asarray(intensity_unfiltered, dtype=float)
    I1 = np.asarray(intensity_filtered, dtype=float)
    if I0.shape != I1.shape:
        raise ValueError("intensities must have the same length")
    if np.any(I0 < 0) or np.any(I1 < 0):
        raise ValueError("intensities must be nonnegative")
    M = np.sqrt(I0)
    Mext = extended_modulus(M, fs.c, grid)
    D, mask = log_ratio_D(np.sqrt(I1), Mext, fs, floor_rel)
    pr = solve_phase(D, fs.c, grid, mask)
    flat, nulls = _hermitian_signature(M, D, mask)
    pr = replace(pr, diagnostics={
        **pr.diagnostics, "c": fs.c, "s": fs.s, "floor_rel": floor_rel,
        "valid_bins": int(mask.sum()), "flat_D": flat, "interior_nulls": nulls,
    })
    if nulls:
        warnings.warn(
            "Fourier modulus has zeros on the real axis, as for a Hermitian object "
            "(real spectrum up to a shift); exponential-filter retrieval does not apply",
            HermitianObjectWarning,
            stacklevel=2,
        )
    return pr, reconstruct_object(M, pr, grid, include_tilt)


def continued_phase(field: SampledField, c: float) -> np.ndarray:
    """``phi(p - ic)`` on the momentum grid, straight from the object.

    With ``M(z) = sqrt(F(z) conj(F(conj z)))`` and ``F = M exp(i phi)``,
    ``phi(p - ic) = (arg F(p-ic) + arg F(p+ic)) / 2 - (i/2) ln|F(p-ic)/F(p+ic)|``.
    Arguments are unwrapped along ``p`` from the bin of largest ``|F(p)|``.
    """
    p = field.grid.p
    Fm = analytic_extension(field, p, -c)
    Fp = analytic_extension(field, p, c)
    ref = int(np.argmax(np.abs(analytic_extension(field, p, 0.0))))

    def unwrapped(F):
        ang = np.unwrap(np.angle(F))
        return ang - 2 * np.pi * np.round((ang[ref] - np.angle(F[ref])) / (2 * np.pi))

    re = 0.5 * (unwrapped(Fm) + unwrapped(Fp))
    # exact spectral nulls give non-finite bins; callers mask them
    with np.errstate(divide="ignore", invalid="ignore"):
        im = -0.5 * (np.log(np.abs(Fm)) - np.log(np.abs(Fp)))
        return re + 1j * im


def phase_error(pr: PhaseResult, truth: SampledField, detrend: bool = True):
    """Residual of ``pr.total_phase()`` against the object's own spectral phase on valid bins.

    With ``detrend`` the least-squares constant and linear terms are removed
    first (the overall phase and the translation gauge).  Returns
    ``(rms, residual)`` where ``residual`` is NaN off the valid bins.
    """
    spec = dft(truth)
    if spec.grid != pr.grid:
        raise ValueError("truth and retrieval live on different grids")
    mask = pr.valid_mask
    ref = int(np.argmax(spec.modulus))
    true_phase = np.unwrap(np.angle(spec.values))
    true_phase -= true_phase[ref] - np.angle(spec.values[ref])
    diff = pr.total_phase() - true_phase
    p = pr.p
    if detrend:
        A = np.stack([np.ones(int(mask.sum())), p[mask]], axis=1)
        coef, *_ = np.linalg.lstsq(A, diff[mask], rcond=None)
        diff = diff - coef[0] - coef[1] * p
    else:
        diff = diff - diff[ref]
    residual = np.full(p.shape, np.nan)
    residual[mask] = diff[mask]
    return float(np.sqrt(np.mean(diff[mask] ** 2))), residual
