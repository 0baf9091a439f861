"""The exponential filter read as a weak measurement.

Filtering by ``exp(-c (x - s))`` is ``exp(-i c A)`` with ``A = -i (X - s)``.
For small ``c`` the modulus ratio at momentum ``p`` behaves like
``exp(c Im <A>_w)``, where ``<A>_w = <p|A|f> / <p|f> = M'/M + i (s + phi')``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expfilter import FilterSpec, apply_exp_filter
from .wavefield import SampledField, analytic_extension, dft

FLOOR = 1e-12


@dataclass(frozen=True)
class BridgeReport:
    p: float
    c: float
    lhs: float
    rhs: float
    residual: float
    weak_value: complex

    def __post_init__(self):
        if not (self.lhs > 0 and self.rhs > 0):
            raise ValueError("both sides of the bridge relation must be positive")

    def as_row(self) -> dict:
        return {
            "p": self.p, "c": self.c, "lhs": self.lhs, "rhs": self.rhs,
            "residual": self.residual,
            "wv_re": self.weak_value.real, "wv_im": self.weak_value.imag,
        }


def _spectrum_at(field: SampledField, p: float, what: str) -> complex:
    F = analytic_extension(field, float(p), 0.0)
    peak = np.max(dft(field).modulus)
    if abs(F) <= FLOOR * peak:
        raise ValueError(f"{what} modulus at p={p:g} is below the floor")
    return F


def position_weak_value(field: SampledField, p: float, s: float) -> complex:
    """``<p|A|f> / <p|f>`` for ``A = -i (X - s)``, by direct summation."""
    F = _spectrum_at(field, p, "object")
    x = field.x
    weighted = field.with_values(-1j * (x - s) * field.values)
    return complex(analytic_extension(weighted, float(p), 0.0) / F)


def weak_value_decomposition(field: SampledField, p: float, s: float, h=None) -> complex:
    """``M'/M + i (s + phi')`` from central differences of ``F`` about ``p``.

    ``h`` defaults to ``1e-3 * dp``; the grid step itself is too coarse for
    agreement with the direct sum at the 1e-6 level.
    """
    if h is None:
        h = 1e-3 * field.grid.dp
    _spectrum_at(field, p, "object")
    Fp = analytic_extension(field, p + h, 0.0)
    Fm = analytic_extension(field, p - h, 0.0)
    dlogM = (np.log(abs(Fp)) - np.log(abs(Fm))) / (2 * h)
    dphi = np.angle(Fp / Fm) / (2 * h)
    return complex(dlogM, s + dphi)


def filter_ratio(field: SampledField, fs: FilterSpec, p: float) -> float:
    """``|<p|exp(-c (X - s))|f>| / |<p|f>|``."""
    F = _spectrum_at(field, p, "object")
    filtered = apply_exp_filter(field, fs)
    Ft = _spectrum_at(filtered, p, "filtered")
    return float(abs(Ft) / abs(F))


def bridge_residual(field: SampledField, s: float, c_list, p: float = 0.0) -> list:
    """One :class:`BridgeReport` per ``c``; the residual ``|ln lhs - c Im<A>_w|`` is O(c^2)."""
    c_list = [float(c) for c in c_list]
    if any(c <= 0 for c in c_list):
        raise ValueError("every c must be positive")
    wv = position_weak_value(field, p, s)
    reports = []
    for c in c_list:
        lhs = filter_ratio(field, FilterSpec(c, s), p)
        rhs = float(np.exp(c * wv.imag))
        reports.append(BridgeReport(float(p), c, lhs, rhs, float(abs(np.log(lhs) - c * wv.imag)), wv))
    return reports


def modulus_shift_deviation(field: SampledField, c: float, p: float) -> float:
    """Relative deviation of ``|M(p - ic)|`` from ``M(p)``, with ``M(z)^2 = F(z) conj(F(conj z))``."""
    F = _spectrum_at(field, p, "object")
    Mext = np.sqrt(abs(analytic_extension(field, p, -c)) * abs(analytic_extension(field, p, c)))
    return float(abs(Mext - abs(F)) / abs(F))


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.size < 2:
        raise ValueError("need at least two matching points")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("log-log fit needs positive values")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])
