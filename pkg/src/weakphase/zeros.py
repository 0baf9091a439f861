"""Zeros of band-limited spectra: Hadamard products, real-axis zero finding and
the shifted-zero model of weak-value amplification."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .wavefield import Spectrum

NOISE_REL = 1e-12


@dataclass(frozen=True)
class ZeroSet:
    """Truncated Hadamard representation of an entire function of exponential type.

    ``zeros`` excludes the origin; a zero at ``z = 0`` is carried by ``order``.
    ``support`` is the interval ``(a, b)`` of the underlying object, which fixes
    the linear-phase prefactor.
    """

    zeros: tuple
    scale: complex = 1.0
    order: int = 0
    support: tuple = (-1.0, 1.0)

    def __post_init__(self):
        zeros = tuple(complex(z) for z in self.zeros)
        if any(z == 0 for z in zeros):
            raise ValueError("a zero at the origin must be encoded by `order`, not listed")
        if int(self.order) != self.order or self.order < 0:
            raise ValueError(f"origin order must be a nonnegative integer, got {self.order}")
        a, b = (float(v) for v in self.support)
        if not a < b:
            raise ValueError(f"support must satisfy a < b, got ({a}, {b})")
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "scale", complex(self.scale))
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "support", (a, b))

    def to_dict(self) -> dict:
        a, b = self.support
        return {
            "zeros": [[z.real, z.imag] for z in self.zeros],
            "B": [self.scale.real, self.scale.imag],
            "d": self.order,
            "a": a,
            "b": b,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "ZeroSet":
        scale = record.get("B", 1.0)
        if isinstance(scale, (list, tuple)):
            scale = complex(scale[0], scale[1])
        return cls(
            zeros=tuple(complex(re, im) for re, im in record["zeros"]),
            scale=scale,
            order=record.get("d", 0),
            support=(record["a"], record["b"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ZeroSet":
        return cls.from_dict(json.loads(text))


def hadamard_eval(zs: ZeroSet, z):
    """``z^d exp(i (a+b) z / 2) B prod_j (1 - z / z_j)`` over the stored zeros.

    The prefactor uses the support midpoint; it is a pure linear phase on the
    real axis and does not affect moduli.
    """
    z_arr = np.asarray(z, dtype=complex)
    a, b = zs.support
    out = z_arr**zs.order * np.exp(0.5j * (a + b) * z_arr) * zs.scale
    for zj in zs.zeros:
        out = out * (1.0 - z_arr / zj)
    if z_arr.ndim == 0:
        return complex(out)
    return out


def find_real_zeros(spectrum: Spectrum, floor: float) -> list:
    """Locate real-axis zeros of a sampled spectrum.

    A zero is reported between neighbouring bins when the spectrum turns by
    more than a right angle across them (the real part changes sign once the
    left sample is rotated onto the positive real axis) and one of the two
    moduli lies below ``floor * max|F|``.  The crossing is placed by linear
    interpolation of the aligned real part.  Samples that are exactly zero are
    reported when a neighbour is above the roundoff level; pairs lying entirely
    below ``1e-12 * max|F|`` are noise and are skipped.
    """
    if floor <= 0:
        raise ValueError("floor must be positive")
    F = np.asarray(spectrum.values)
    p = spectrum.p
    dp = spectrum.grid.dp
    mod = np.abs(F)
    threshold = floor * mod.max() if mod.max() > 0 else 0.0
    noise = NOISE_REL * mod.max()
    found = []
    for j in range(len(F) - 1):
        if mod[j] == 0.0:
            if _above_noise(mod, j, noise):
                found.append(float(p[j]))
            continue
        if mod[j + 1] == 0.0 or min(mod[j], mod[j + 1]) >= threshold:
            continue
        if max(mod[j], mod[j + 1]) < noise:
            continue
        # component of F[j+1] along the direction of F[j]
        u1 = (F[j + 1] * np.conj(F[j])).real / mod[j]
        if u1 < 0:
            u0 = mod[j]
            found.append(float(p[j] + dp * u0 / (u0 - u1)))
    if mod[-1] == 0.0 and _above_noise(mod, len(F) - 1, noise):
        found.append(float(p[-1]))
    return found


def _above_noise(mod, j, noise) -> bool:
    """An exact zero counts only if a neighbour rises above the roundoff level."""
    return bool(np.max(mod[max(j - 1, 0):j + 2]) >= noise) and noise > 0


def zero_shift_factor(theta: float, eps: float, p):
    """Hadamard factor of the zero displaced to ``z0 = -i theta / eps``.

    Returns ``(exact, linear_phase)`` with ``exact = 1 - p / z0`` and
    ``linear_phase = -eps p / theta``, the small-argument phase of ``exact``.
    """
    if theta == 0:
        raise ValueError("theta = 0 puts the zero on the real axis; no amplification regime")
    if eps == 0:
        raise ValueError("eps = 0 sends the zero to infinity")
    p_arr = np.asarray(p, dtype=float)
    z0 = -1j * theta / eps
    exact = 1.0 - p_arr / z0
    linear = -eps * p_arr / theta
    if p_arr.ndim == 0:
        return complex(exact), float(linear)
    return exact, linear


def sine_model_final_state(eps: float, theta: float, p):
    """Small-angle post-selection factor ``-i sin(eps p + i theta)``."""
    p_arr = np.asarray(p, dtype=float)
    out = -1j * np.sin(eps * p_arr + 1j * theta)
    if p_arr.ndim == 0:
        return complex(out)
    return out
