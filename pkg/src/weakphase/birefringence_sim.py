"""Pre-selected probe through a birefringent crystal, post-selected near-orthogonally.

The probe ``psi0`` enters in ``|S>``, the crystal applies ``exp(-i eps sigma_z p)``
and a polarizer projects on ``|D_theta>``.  The detected beam is displaced by
about ``eps / tan(theta)``, far more than the physical separation ``eps``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import polarization as pol
from .presets import gaussian
from .wavefield import (
    Grid,
    SampledField,
    Spectrum,
    centroid,
    dft,
    idft,
    momentum_spread,
    position_spread,
    translate,
)
from .zeros import sine_model_final_state

THETA_LIMIT = np.pi / 9


@dataclass(frozen=True)
class CrystalScenario:
    probe: SampledField
    eps: float
    theta: float
    allow_large_theta: bool = False

    def __post_init__(self):
        vals = self.probe.values
        amp = np.abs(vals)
        if amp.max() == 0:
            raise ValueError("probe is identically zero")
        sig = amp > 1e-8 * amp.max()
        ref = np.angle(vals[np.argmax(amp)])
        drift = np.angle(vals[sig] * np.exp(-1j * ref))
        if np.max(np.abs(drift)) > 1e-9:
            raise ValueError("probe phase must be constant")
        width = position_spread(self.probe)
        if abs(self.eps) > 0.1 * width:
            raise ValueError(f"|eps|={abs(self.eps):g} exceeds 0.1 x probe width {width:g}")
        if abs(self.theta) > THETA_LIMIT and not self.allow_large_theta:
            raise ValueError(
                f"|theta|={abs(self.theta):g} exceeds pi/9; pass allow_large_theta=True to override"
            )


def default_probe(n: int = 4096, sigma: float = 1.0, span: float = 12.0) -> SampledField:
    """Unit-norm Gaussian probe on a grid covering ``+-span*sigma``."""
    return gaussian(Grid.spanning(span * sigma, n), sigma=sigma)


@dataclass(frozen=True)
class DisplacementReport:
    theta: float
    eps: float
    exact_centroid: float
    weak_prediction: float
    amplified_prediction: float
    zero_model_centroid: float
    post_selection_probability: float

    @property
    def amplification(self) -> float:
        return self.exact_centroid / self.eps

    def as_row(self) -> dict:
        return {
            "theta": self.theta,
            "eps": self.eps,
            "exact": self.exact_centroid,
            "weak": self.weak_prediction,
            "amplified": self.amplified_prediction,
            "zero_model": self.zero_model_centroid,
            "probability": self.post_selection_probability,
        }


def crystal_evolve(sc: CrystalScenario, pre: pol.JonesState = pol.S) -> pol.PolarizedSpectrum:
    """``exp(-i eps sigma_z p)`` acting on ``psi0 (x) pre``."""
    spec = dft(sc.probe)
    pre = pre.normalized()
    p = spec.p
    h = pre.h * np.exp(-1j * sc.eps * p) * spec.values
    v = pre.v * np.exp(1j * sc.eps * p) * spec.values
    return pol.PolarizedSpectrum(spec.with_values(h), spec.with_values(v))


def post_select(ps: pol.PolarizedSpectrum, theta: float) -> Spectrum:
    return ps.project(pol.d_theta(theta))


def exact_factor(eps: float, theta: float, p):
    """Post-selection factor ``cos(eps p) sin(theta) - i sin(eps p) cos(theta)``."""
    p = np.asarray(p, dtype=float)
    return np.cos(eps * p) * np.sin(theta) - 1j * np.sin(eps * p) * np.cos(theta)


def amplitude_phase_factors(eps: float, theta: float, p):
    """Modulus and phase of the post-selection factor in tangent form.

    ``A = |cos(eps p) cos(theta)| sqrt(tan^2 theta + tan^2(eps p))`` and
    ``Phi = -arctan(tan(eps p) / tan(theta))``.  For ``0 < theta < pi/2`` and
    ``|eps p| < pi/2``, ``A exp(i Phi)`` equals :func:`exact_factor`; for
    negative theta it equals minus it.
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(np.abs(np.cos(eps * p_arr)) < 1e-12) or abs(np.cos(theta)) < 1e-12:
        raise ValueError("eps*p or theta at an odd multiple of pi/2; tangent form undefined")
    if theta == 0:
        raise ValueError("theta = 0: the tangent-form phase is undefined")
    t_e = np.tan(eps * p_arr)
    t_t = np.tan(theta)
    A = np.abs(np.cos(eps * p_arr) * np.cos(theta)) * np.sqrt(t_t**2 + t_e**2)
    Phi = -np.arctan(t_e / t_t)
    if p_arr.ndim == 0:
        return float(A), float(Phi)
    return A, Phi


def weak_final_field(sc: CrystalScenario) -> SampledField:
    """``|sin theta| psi0(x - eps / tan theta)``, the linear-phase approximation."""
    dp = momentum_spread(sc.probe)
    ratio = abs(sc.eps) * dp / abs(sc.theta) if sc.theta else np.inf
    if not ratio < 1:
        raise ValueError(f"weak regime violated: |eps| dp / |theta| = {ratio:g} >= 1")
    shifted = translate(sc.probe, sc.eps / np.tan(sc.theta))
    return shifted.with_values(abs(np.sin(sc.theta)) * shifted.values)


def measure_displacement(sc: CrystalScenario) -> DisplacementReport:
    final = post_select(crystal_evolve(sc), sc.theta)
    probability = final.norm2() / sc.probe.norm2()
    if probability <= 1e-15:
        raise ValueError("post-selected intensity vanishes")
    spec0 = dft(sc.probe)
    zero_model = spec0.with_values(sine_model_final_state(sc.eps, sc.theta, spec0.p) * spec0.values)
    return DisplacementReport(
        theta=float(sc.theta),
        eps=float(sc.eps),
        exact_centroid=centroid(idft(final)),
        weak_prediction=float(sc.eps / np.tan(sc.theta)),
        amplified_prediction=float(sc.eps / sc.theta),
        zero_model_centroid=centroid(idft(zero_model)),
        post_selection_probability=float(probability),
    )
