"""Direct wavefunction measurement with a rotating sliver and a Fourier-plane pinhole.

The object ``psi(x)`` arrives in ``|V>``.  A half-wave sliver at one grid cell
``x_s`` rotates the polarization there by ``theta``; a pinhole keeps only the
``p = 0`` bin, where the Pauli imbalances read out the weak value of the
projector ``|x_s><x_s|``, which is proportional to ``psi(x_s)``.

Two readouts are provided: the sliver/Pauli route (exact rotation, signals
taken from the p = 0 bin) and the operational route, in which the same cell is
attenuated by ``exp(-theta)`` or phase-shifted by ``exp(-i theta)`` and the
modulus ratios at ``p = 0`` are recorded.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import polarization as pol
from .wavefield import SampledField, dft

SLIVER_THETA_LIMIT = np.deg2rad(20.0)
NULL_FLOOR = 1e-12
RATIO_WARN = 0.5


class LargeCouplingWarning(UserWarning):
    """``|theta * weak value|`` is too large for the first-order readout."""


@dataclass(frozen=True)
class SliverScenario:
    object: SampledField
    theta: float
    sliver_index: int
    allow_large_theta: bool = False

    def __post_init__(self):
        n = self.object.grid.n
        if int(self.sliver_index) != self.sliver_index or not 0 <= self.sliver_index < n:
            raise ValueError(f"sliver_index must be an integer in [0, {n}), got {self.sliver_index}")
        object.__setattr__(self, "sliver_index", int(self.sliver_index))
        if not np.any(self.object.values):
            raise ValueError("object is identically zero")
        if abs(self.theta) > SLIVER_THETA_LIMIT and not self.allow_large_theta:
            raise ValueError(
                f"|theta|={abs(self.theta):g} exceeds 20 degrees; pass allow_large_theta=True to override"
            )


def _pinhole_reference(field: SampledField) -> complex:
    """``psi~(0)``, guarded against a dark pinhole."""
    spec = dft(field)
    F0 = spec.at_zero()
    if abs(F0) <= NULL_FLOOR * np.max(spec.modulus):
        raise ValueError("post-selection null: the object spectrum vanishes at p = 0")
    return F0


def sliver_rotate(sc: SliverScenario) -> pol.PolarizedSpectrum:
    """Exact ``exp(-i theta sigma_y)`` at the sliver cell, identity elsewhere, then Fourier transform."""
    psi = sc.object.values
    k = sc.sliver_index
    h = np.zeros_like(psi)
    v = np.array(psi)
    h[k], v[k] = pol.rotation_matrix(sc.theta) @ np.array([0.0, psi[k]])
    return pol.PolarizedSpectrum(dft(sc.object.with_values(h)), dft(sc.object.with_values(v)))


def pinhole_weak_value(sc: SliverScenario) -> complex:
    """``psi(x_s) dx / psi~(0)``; the dx is the single-cell measure of the projector."""
    F0 = _pinhole_reference(sc.object)
    return complex(sc.object.values[sc.sliver_index] * sc.object.grid.dx / F0)


def pointer_signals(sc: SliverScenario) -> tuple[float, float]:
    """Exact ``(<sigma_x>, <sigma_y>)`` of the polarization behind the pinhole (unnormalised)."""
    _pinhole_reference(sc.object)
    h, v = sliver_rotate(sc).at(sc.object.grid.p_zero_index)
    return pol.pauli_expectation(h, v, pol.SIGMA_X), pol.pauli_expectation(h, v, pol.SIGMA_Y)


def _pinhole_bins(field: SampledField, theta: float):
    """p = 0 amplitudes ``(h, v)`` for every sliver position at once.

    Equivalent to :func:`sliver_rotate` followed by ``.at(p_zero_index)``; at
    ``p = 0`` the transform is just ``sum f dx``.
    """
    psi = field.values
    dx = field.grid.dx
    F0 = _pinhole_reference(field)
    cell = psi * dx
    h = -np.sin(theta) * cell
    v = F0 - (1.0 - np.cos(theta)) * cell
    return h, v


def scan_weak_values(field: SampledField, theta: float) -> np.ndarray:
    """Per-cell estimates ``(-<sigma_x> + i <sigma_y>) / (2 theta I)`` with ``I`` the pinhole intensity.

    To first order in theta these equal :func:`pinhole_weak_value` at each cell.
    """
    if theta == 0:
        raise ValueError("theta = 0 carries no pointer signal")
    h, v = _pinhole_bins(field, theta)
    sx = pol.pauli_expectation(h, v, pol.SIGMA_X)
    sy = pol.pauli_expectation(h, v, pol.SIGMA_Y)
    intensity = np.abs(h) ** 2 + np.abs(v) ** 2
    return (-sx + 1j * sy) / (2 * theta * intensity)


def fix_gauge(field: SampledField) -> SampledField:
    """Unit norm, largest-modulus sample real and positive."""
    f = field.normalized()
    k = int(np.argmax(np.abs(f.values)))
    vk = f.values[k]
    values = f.values * (np.conj(vk) / abs(vk))
    values[k] = abs(vk)
    return f.with_values(values)


def scan_reconstruct(field: SampledField, theta: float) -> SampledField:
    """Wavefunction estimate from a full sliver scan, in the fixed gauge."""
    est = scan_weak_values(field, theta)
    return fix_gauge(field.with_values(est))


def operational_ratios(field: SampledField, x_s: int, theta: float) -> tuple[float, float]:
    """Modulus ratios at ``p = 0`` after attenuating, then phase-shifting, cell ``x_s``.

    ``-ln(re_ratio) / theta`` and ``ln(im_ratio) / theta`` approach the real
    and imaginary parts of the weak value as theta goes to zero.
    """
    n = field.grid.n
    if int(x_s) != x_s or not 0 <= x_s < n:
        raise ValueError(f"x_s must be an integer in [0, {n}), got {x_s}")
    re, im = _operational_arrays(field, theta, np.array([int(x_s)]))
    return float(re[0]), float(im[0])


def _operational_arrays(field: SampledField, theta: float, cells=None):
    F0 = _pinhole_reference(field)
    cell = field.values * field.grid.dx
    if cells is not None:
        cell = cell[cells]
    w = cell / F0
    big = np.abs(theta * w) > RATIO_WARN
    if np.any(big):
        warnings.warn(
            f"|theta * weak value| up to {np.max(np.abs(theta * w)):.3g} exceeds {RATIO_WARN}; "
            "first-order readout is unreliable",
            LargeCouplingWarning,
            stacklevel=3,
        )
    attenuated = np.abs(F0 - (1.0 - np.exp(-theta)) * cell)
    shifted = np.abs(F0 - (1.0 - np.exp(-1j * theta)) * cell)
    ref = abs(F0)
    if np.any(attenuated == 0) or np.any(shifted == 0):
        raise ValueError("post-selection null: a modulated spectrum vanishes at p = 0")
    return attenuated / ref, shifted / ref


def operational_weak_values(field: SampledField, theta: float) -> np.ndarray:
    """Weak values of every cell from the two modulus ratios."""
    if theta == 0:
        raise ValueError("theta = 0 carries no modulation")
    re, im = _operational_arrays(field, theta)
    return -np.log(re) / theta + 1j * np.log(im) / theta


def operational_reconstruct(field: SampledField, theta: float) -> SampledField:
    return fix_gauge(field.with_values(operational_weak_values(field, theta)))


def overlap_error(rec: SampledField, truth: SampledField) -> float:
    """``1 - |<rec|truth>|`` for unit-normalised copies of both."""
    a, b = rec.normalized(), truth.normalized()
    return float(1.0 - abs(np.sum(np.conj(a.values) * b.values) * a.grid.dx))


def max_pointwise_error(rec: SampledField, truth: SampledField) -> float:
    return float(np.max(np.abs(fix_gauge(rec).values - fix_gauge(truth).values)))
