"""Two-state polarization algebra over the {|H>, |V>} basis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavefield import Spectrum

OVERLAP_FLOOR = 1e-12


@dataclass(frozen=True)
class JonesState:
    """Polarization vector ``h|H> + v|V>``; stored unnormalised."""

    h: complex
    v: complex

    def __post_init__(self):
        h, v = complex(self.h), complex(self.v)
        norm2 = abs(h) ** 2 + abs(v) ** 2
        if not np.isfinite(norm2) or norm2 <= 0:
            raise ValueError("Jones state needs a finite nonzero norm")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_vector(cls, vec) -> "JonesState":
        return cls(vec[0], vec[1])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.h, self.v], dtype=complex)

    def norm(self) -> float:
        return float(np.sqrt(abs(self.h) ** 2 + abs(self.v) ** 2))

    def normalized(self) -> "JonesState":
        n = self.norm()
        return JonesState(self.h / n, self.v / n)

    def inner(self, other: "JonesState") -> complex:
        """``<self|other>``."""
        return complex(np.conj(self.h) * other.h + np.conj(self.v) * other.v)

    def apply(self, matrix) -> "JonesState":
        return JonesState.from_vector(np.asarray(matrix) @ self.vector)

    def __str__(self):
        return f"({self.h.real!r},{self.h.imag!r},{self.v.real!r},{self.v.imag!r})"


_R2 = 1 / np.sqrt(2)
H = JonesState(1, 0)
V = JonesState(0, 1)
S = JonesState(_R2, _R2)
D = JonesState(_R2, -_R2)
R = JonesState(_R2, 1j * _R2)


def d_theta(theta: float) -> JonesState:
    """Post-selection state ``sin(theta)|S> + cos(theta)|D>``, close to ``|D>`` for small theta."""
    s, c = np.sin(theta), np.cos(theta)
    return JonesState(_R2 * (s + c), _R2 * (s - c))


@dataclass(frozen=True)
class PauliOp:
    tag: str

    def __post_init__(self):
        if self.tag not in _PAULI:
            raise ValueError(f"unknown Pauli operator {self.tag!r}")

    @property
    def matrix(self) -> np.ndarray:
        return _PAULI[self.tag].copy()


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
SIGMA_X = PauliOp("x")
SIGMA_Y = PauliOp("y")
SIGMA_Z = PauliOp("z")


def projector(state: JonesState) -> np.ndarray:
    vec = state.normalized().vector
    return np.outer(vec, np.conj(vec))


def weak_value(pre: JonesState, post: JonesState, op: PauliOp) -> complex:
    """``<post|A|pre> / <post|pre>``; insensitive to the normalisation of either state."""
    overlap = post.inner(pre)
    if abs(overlap) <= OVERLAP_FLOOR * pre.norm() * post.norm():
        raise ValueError("undefined weak value: pre- and post-selected states are orthogonal")
    return post.inner(pre.apply(op.matrix)) / overlap


def pauli_expectation(h, v, op: PauliOp):
    """``<psi|sigma|psi>`` for ``psi = (h, v)``; vectorised over array inputs."""
    h = np.asarray(h, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if op.tag == "z":
        out = np.abs(h) ** 2 - np.abs(v) ** 2
    else:
        cross = np.conj(h) * v
        out = 2 * cross.real if op.tag == "x" else 2 * cross.imag
    return float(out) if out.ndim == 0 else out


def rotation_matrix(theta: float) -> np.ndarray:
    """``exp(-i theta sigma_y) = cos(theta) I - i sin(theta) sigma_y``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rotate_polarization(state: JonesState, theta: float) -> JonesState:
    return state.apply(rotation_matrix(theta))


@dataclass(frozen=True)
class PolarizedSpectrum:
    """Field-polarization state: one spectrum per basis component."""

    h: Spectrum
    v: Spectrum

    def __post_init__(self):
        if self.h.grid != self.v.grid:
            raise ValueError("polarization components must share a grid")

    @property
    def grid(self):
        return self.h.grid

    def norm2(self) -> float:
        return self.h.norm2() + self.v.norm2()

    def project(self, state: JonesState) -> Spectrum:
        """Bin-wise ``<state|(h, v)>``."""
        return Spectrum(self.grid, np.conj(state.h) * self.h.values + np.conj(state.v) * self.v.values)

    def at(self, index: int) -> tuple[complex, complex]:
        return complex(self.h.values[index]), complex(self.v.values[index])
