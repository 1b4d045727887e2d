"""Two-component spinor algebra for spin-1/2 particles and polarization filters.

States are built in the sigma_z basis. Pauli matrices follow the usual
convention with sigma_z = diag(+1, -1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
SOUTH_POLE_TOL = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])
IDENTITY = np.eye(2, dtype=complex)


class DegenerateDirectionError(ValueError):
    """Raised for the direction (0, 0, -1), where the state formula is singular."""


class NormalizationError(ValueError):
    pass


@dataclass(frozen=True)
class UnitVector3:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        n2 = self.x * self.x + self.y * self.y + self.z * self.z
        if not math.isfinite(n2) or abs(n2 - 1.0) > NORM_TOL:
            raise NormalizationError(
                f"vector ({self.x}, {self.y}, {self.z}) is not unit length (|v|^2={n2})"
            )

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> UnitVector3:
        n = math.sqrt(x * x + y * y + z * z)
        if n == 0.0:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(x / n, y / n, z / n)

    @classmethod
    def from_array(cls, v) -> UnitVector3:
        x, y, z = (float(c) for c in v)
        return cls(x, y, z)

    @classmethod
    def from_polar(cls, theta: float, phi: float) -> UnitVector3:
        """Direction with polar angle ``theta`` from +z and azimuth ``phi``."""
        st = math.sin(theta)
        return cls.normalized(st * math.cos(phi), st * math.sin(phi), math.cos(theta))

    @classmethod
    def in_plane(cls, angle: float) -> UnitVector3:
        """Direction in the x-z plane at ``angle`` radians from +z.

        Used for planar analyzer settings (both stations share this plane).
        """
        return cls.normalized(math.sin(angle), 0.0, math.cos(angle))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def dot(self, other: UnitVector3) -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def __neg__(self) -> UnitVector3:
        return UnitVector3(-self.x, -self.y, -self.z)


X_AXIS = UnitVector3(1.0, 0.0, 0.0)
Y_AXIS = UnitVector3(0.0, 1.0, 0.0)
Z_AXIS = UnitVector3(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class Spinor:
    up: complex
    down: complex

    def __post_init__(self) -> None:
        n2 = abs(self.up) ** 2 + abs(self.down) ** 2
        if abs(n2 - 1.0) > NORM_TOL:
            raise NormalizationError(f"spinor norm^2 is {n2}, expected 1")

    @classmethod
    def from_array(cls, v) -> Spinor:
        return cls(complex(v[0]), complex(v[1]))

    def as_array(self) -> np.ndarray:
        return np.array([self.up, self.down], dtype=complex)

    def overlap(self, other: Spinor) -> complex:
        """<self|other>."""
        return self.up.conjugate() * other.up + self.down.conjugate() * other.down


@dataclass(frozen=True)
class FilterResult:
    amplitude: complex
    probability: float
    post_state: Spinor


def sigma_dot(v: UnitVector3 | np.ndarray) -> np.ndarray:
    """The 2x2 matrix sigma . v."""
    arr = v.as_array() if isinstance(v, UnitVector3) else np.asarray(v, dtype=float)
    return np.tensordot(arr, PAULI, axes=1)


def spinor_from_direction(omega: UnitVector3) -> Spinor:
    """Spin-up state along ``omega``: (1 + sigma.omega)|+z> / sqrt(2(1 + omega_z)).

    The result is the +1 eigenvector of sigma.omega with the phase fixed so
    that the upper component is real and nonnegative.
    """
    if not isinstance(omega, UnitVector3):
        omega = UnitVector3.from_array(omega)
    if 1.0 + omega.z < SOUTH_POLE_TOL:
        raise DegenerateDirectionError(
            "direction (0, 0, -1) has no representation of the form (1 + sigma.n)|+z>"
        )
    up = 1.0 + omega.z
    down = complex(omega.x, omega.y)
    # dividing by the computed norm rather than sqrt(2(1+z)) keeps |psi| = 1
    # to rounding even close to the excluded point
    n = math.sqrt(up * up + abs(down) ** 2)
    return Spinor(complex(up / n), down / n)


def spin_arrow(psi: Spinor) -> UnitVector3:
    """Expectation <psi|sigma|psi> as a unit vector."""
    if not isinstance(psi, Spinor):
        psi = Spinor.from_array(psi)
    v = psi.as_array()
    s = np.real(np.einsum("i,kij,j->k", v.conj(), PAULI, v))
    return UnitVector3.normalized(*s)


def filter_transmit(psi: Spinor, axis: UnitVector3) -> FilterResult:
    """Pass ``psi`` through an analyzer that transmits spin along ``axis``.

    The amplitude is the projection <psi_axis|psi>; after transmission the
    particle is in the state polarized along ``axis``.
    """
    post = spinor_from_direction(axis)
    amp = post.overlap(psi)
    prob = min(max(abs(amp) ** 2, 0.0), 1.0)
    return FilterResult(amplitude=amp, probability=prob, post_state=post)


def transmission_probability(spin: UnitVector3, axis: UnitVector3) -> float:
    """Closed form (1 + axis.spin)/2 of the filter transmission probability."""
    return 0.5 * (1.0 + axis.dot(spin))
