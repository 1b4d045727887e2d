"""Spin state of the recombined beam O in a neutron interferometer, and its fringes.

Path 1 carries spin +y, path 2 carries spin -y with relative amplitude ``r``
and phase ``vartheta``. A spin rotator turns the beam by ``phi`` about x and
an analyzer passes spin +z before detector O.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .spin_algebra import SIGMA_X, UnitVector3

_XI_Y = np.array([1.0, 1j]) / math.sqrt(2.0)
_XI_MINUS_Y = np.array([1.0, -1j]) / math.sqrt(2.0)


@dataclass(frozen=True)
class InterferometerConfig:
    amplitude_sq: float = 1.0
    r: float = 1.0
    vartheta: float = 0.0
    phi: float = 0.0

    def __post_init__(self) -> None:
        vals = (self.amplitude_sq, self.r, self.vartheta, self.phi)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("interferometer parameters must be finite")
        if self.r < 0.0:
            raise ValueError(f"r must be >= 0, got {self.r}")
        if self.amplitude_sq < 0.0:
            raise ValueError(f"amplitude_sq must be >= 0, got {self.amplitude_sq}")


@dataclass(frozen=True)
class BlochState:
    b: UnitVector3
    norm_sq: float


def recombined_bloch(config: InterferometerConfig) -> BlochState:
    """Polarization of beam O: b = (2r sin t, 1 - r^2, 2r cos t)/(1 + r^2)."""
    r, t = config.r, config.vartheta
    d = 1.0 + r * r
    b = UnitVector3(2.0 * r * math.sin(t) / d, (1.0 - r * r) / d, 2.0 * r * math.cos(t) / d)
    return BlochState(b=b, norm_sq=config.amplitude_sq * d)


def fringe_phase(r: float, vartheta: float) -> float:
    """Phase alpha of cos(2 phi + alpha); the arccot branch written as atan2 so r = 1 is regular."""
    return math.atan2(1.0 - r * r, 2.0 * r * math.cos(vartheta))


def detector_intensity(config: InterferometerConfig) -> float:
    """Count rate at detector O: |A|^2/4 [1 + r^2 + M cos(2 phi + alpha)]."""
    r, t = config.r, config.vartheta
    m = math.sqrt(max(1.0 + r**4 + 2.0 * r * r * math.cos(2.0 * t), 0.0))
    alpha = fringe_phase(r, t)
    return 0.25 * config.amplitude_sq * (1.0 + r * r + m * math.cos(2.0 * config.phi + alpha))


def visibility(r: float, vartheta: float) -> float:
    if r < 0.0:
        raise ValueError(f"r must be >= 0, got {r}")
    return math.sqrt(max(1.0 + r**4 + 2.0 * r * r * math.cos(2.0 * vartheta), 0.0)) / (1.0 + r * r)


def beam_o_state(config: InterferometerConfig) -> np.ndarray:
    """Unnormalized spinor A[|+y> + r e^{i vartheta} |-y>] with |A| = sqrt(amplitude_sq)."""
    amp = math.sqrt(config.amplitude_sq)
    return amp * (_XI_Y + config.r * np.exp(1j * config.vartheta) * _XI_MINUS_Y)


def direct_intensity(config: InterferometerConfig) -> float:
    """Detector-O rate evaluated straight from the spinor, |<+z| exp(i phi sigma_x) psi_O|^2 / 2.

    The 1/2 matches the normalization of the closed form. Independent of
    :func:`detector_intensity`; used to cross-check it.
    """
    psi = beam_o_state(config)
    rot = math.cos(config.phi) * np.eye(2) + 1j * math.sin(config.phi) * SIGMA_X
    return 0.5 * float(abs((rot @ psi)[0]) ** 2)


def bloch_via_spinor(config: InterferometerConfig) -> UnitVector3:
    """Bloch vector from the expectation of sigma in the recombined spinor."""
    psi = beam_o_state(config)
    n2 = float(np.vdot(psi, psi).real)
    s = np.array(
        [
            2.0 * (psi[0].conjugate() * psi[1]).real,
            2.0 * (psi[0].conjugate() * psi[1]).imag,
            abs(psi[0]) ** 2 - abs(psi[1]) ** 2,
        ]
    )
    return UnitVector3.normalized(*(s / n2))


def intensity_sweep(config: InterferometerConfig, phis: np.ndarray) -> np.ndarray:
    return np.array(
        [
            detector_intensity(
                InterferometerConfig(config.amplitude_sq, config.r, config.vartheta, float(p))
            )
            for p in phis
        ]
    )



def visibility_from_scan(config: InterferometerConfig, points: int = 720) -> float:
    """(I_max - I_min)/(I_max + I_min) from a phi scan of the spinor-evaluated rate.

    The grid over one period [0, pi) brackets the extrema; each is then
    polished with a bounded Brent search one grid step either side.
    """
    phis = np.pi * np.arange(points) / points
    step = np.pi / points

    def rate(p: float) -> float:
        return direct_intensity(InterferometerConfig(config.amplitude_sq, config.r, config.vartheta, p))

    grid = np.array([rate(p) for p in phis])

    def polish(k: int, sign: float) -> float:
        # sign=+1 finds a minimum, sign=-1 a maximum
        centre = phis[k]
        res = minimize_scalar(
            lambda p: sign * rate(p),
            bounds=(centre - step, centre + step),
            method="bounded",
            options={"xatol": 1e-12},
        )
        return sign * min(res.fun, sign * grid[k])

    i_max = polish(int(np.argmax(grid)), -1.0)
    i_min = polish(int(np.argmin(grid)), 1.0)
    total = i_max + i_min
    return (i_max - i_min) / total if total > 0 else 0.0
