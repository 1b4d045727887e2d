"""Coincidence probabilities for the spin-1/2 decay and the cascade-photon experiments.

Two families live here:

* local hidden-direction models, where after the decay each pair carries a
  random shared polarization axis and each analyzer acts independently on
  its own particle;
* quantum-mechanical reference values (singlet correlation, pre-decay
  projection of the photon pair onto two polarizers).

Closed forms are paired with the per-event integrands they average so that
``montecarlo`` can check one against the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .montecarlo import CoincidenceModel
from .spin_algebra import (
    IDENTITY,
    NORM_TOL,
    NormalizationError,
    UnitVector3,
    Z_AXIS,
    sigma_dot,
)


@dataclass(frozen=True)
class AnalyzerPair:
    """Analyzer axes: ``a`` for the particle flying right, ``b`` for the left."""

    a: UnitVector3
    b: UnitVector3

    @classmethod
    def planar(cls, angle_a: float, angle_b: float) -> AnalyzerPair:
        return cls(UnitVector3.in_plane(angle_a), UnitVector3.in_plane(angle_b))

    @classmethod
    def at_angle(cls, angle: float) -> AnalyzerPair:
        """Pair with ``a`` along +z and ``b`` rotated by ``angle`` in the x-z plane."""
        return cls(Z_AXIS, UnitVector3.in_plane(angle))


@dataclass(frozen=True)
class PhotonAnalyzerPair:
    """Relative polarizer angle. Polarizer axes have period pi, so phi is kept in [0, pi)."""

    phi: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.phi):
            raise ValueError("phi must be finite")
        reduced = math.fmod(self.phi, math.pi)
        if reduced < 0.0:
            reduced += math.pi
        if reduced >= math.pi:
            reduced = 0.0
        object.__setattr__(self, "phi", reduced)


@dataclass(frozen=True)
class EntangledPair:
    weight_first: complex
    weight_second: complex

    def __post_init__(self) -> None:
        n2 = abs(self.weight_first) ** 2 + abs(self.weight_second) ** 2
        if abs(n2 - 1.0) > NORM_TOL:
            raise NormalizationError(f"|alpha|^2 + |beta|^2 = {n2}, expected 1")


# -- spin-1/2 pair after decay ----------------------------------------------

def singlet_coincidence_closed(pair: AnalyzerPair) -> float:
    """Both analyzers transmit: (1 - a.b/3)/4, written as (3 - a.b)/12 so a.b = +-1 is exact."""
    return (3.0 - pair.a.dot(pair.b)) / 12.0


def _dirs(omega) -> np.ndarray:
    if isinstance(omega, UnitVector3):
        return omega.as_array()
    return np.asarray(omega, dtype=float)


def right_transmission(omega, a: UnitVector3):
    """Right particle is polarized along -omega: (1 - omega.a)/2."""
    return 0.5 * (1.0 - _dirs(omega) @ a.as_array())


def left_transmission(omega, b: UnitVector3):
    """Left particle is polarized along +omega: (1 + omega.b)/2."""
    return 0.5 * (1.0 + _dirs(omega) @ b.as_array())


def singlet_coincidence_integrand(omega, pair: AnalyzerPair):
    """Per-direction coincidence probability; accepts one direction or an ``(n, 3)`` array."""
    return right_transmission(omega, pair.a) * left_transmission(omega, pair.b)


def singlet_model(pair: AnalyzerPair) -> CoincidenceModel:
    return CoincidenceModel(
        "sphere",
        lambda lam: right_transmission(lam, pair.a),
        lambda lam: left_transmission(lam, pair.b),
    )


def singlet_ratio_test() -> float:
    """w(a, a) / w(a, -a) from the closed form; 1/2 for any axis."""
    pair_parallel = AnalyzerPair(Z_AXIS, Z_AXIS)
    pair_anti = AnalyzerPair(Z_AXIS, -Z_AXIS)
    return singlet_coincidence_closed(pair_parallel) / singlet_coincidence_closed(pair_anti)


def singlet_joint_probabilities(pair: AnalyzerPair) -> dict[tuple[int, int], float]:
    """All four outcome probabilities, keyed by (right, left) with +1 = transmitted.

    Reflection at an analyzer is transmission through the complementary
    analyzer, so the other outcomes follow from a -> -a and b -> -b.
    """
    a, b = pair.a, pair.b
    return {
        (+1, +1): singlet_coincidence_closed(AnalyzerPair(a, b)),
        (+1, -1): singlet_coincidence_closed(AnalyzerPair(a, -b)),
        (-1, +1): singlet_coincidence_closed(AnalyzerPair(-a, b)),
        (-1, -1): singlet_coincidence_closed(AnalyzerPair(-a, -b)),
    }


def lhv_singlet_correlation(pair: AnalyzerPair) -> float:
    """Correlator of the hidden-direction model; equals -(a.b)/3."""
    return sum(ra * rb * p for (ra, rb), p in singlet_joint_probabilities(pair).items())


def qm_singlet_correlation(pair: AnalyzerPair) -> float:
    return -pair.a.dot(pair.b)


# -- spin-1/2 pair before decay ---------------------------------------------

_UP = np.array([1.0, 0.0], dtype=complex)
_DOWN = np.array([0.0, 1.0], dtype=complex)


@dataclass(frozen=True)
class PredecayTerms:
    direct: float
    cross: float

    @property
    def total(self) -> float:
        return self.direct + self.cross


def predecay_terms(omega: UnitVector3) -> PredecayTerms:
    """Both analyzers along ``omega`` acting on the undecayed pair |-+> - |+->.

    Evaluated as matrix elements of P (x) P on the two-particle space, with
    P = (1 + sigma.omega)/2, split into the diagonal (direct) and the
    off-diagonal (interference) contributions.
    """
    proj = 0.5 * (IDENTITY + sigma_dot(omega))
    op = np.kron(proj, proj)
    down_up = np.kron(_DOWN, _UP)
    up_down = np.kron(_UP, _DOWN)

    def elem(bra, ket) -> complex:
        return complex(bra.conj() @ op @ ket)

    direct = elem(down_up, down_up) + elem(up_down, up_down)
    cross = -(elem(down_up, up_down) + elem(up_down, down_up))
    return PredecayTerms(direct=direct.real, cross=cross.real)


def predecay_parallel_coincidence(omega: UnitVector3) -> float:
    return predecay_terms(omega).total


# -- cascade photons --------------------------------------------------------

def cascade_coincidence_closed(pair: PhotonAnalyzerPair) -> float:
    """(1 + cos(2 phi)/2)/4; 3/8 for parallel, 1/8 for crossed polarizers."""
    return 0.25 * (1.0 + 0.5 * math.cos(2.0 * pair.phi))


def cascade_coincidence_integrand(hidden_angle, pair: PhotonAnalyzerPair):
    """Malus-law product cos^2(h) cos^2(h - phi) for hidden polarization angle h."""
    h = np.asarray(hidden_angle, dtype=float)
    out = np.cos(h) ** 2 * np.cos(h - pair.phi) ** 2
    return float(out) if out.ndim == 0 else out


def cascade_model(pair: PhotonAnalyzerPair) -> CoincidenceModel:
    return CoincidenceModel(
        "circle",
        lambda h: np.cos(h) ** 2,
        lambda h: np.cos(h - pair.phi) ** 2,
    )


def cascade_ratio_test() -> float:
    return cascade_coincidence_closed(PhotonAnalyzerPair(math.pi / 2)) / cascade_coincidence_closed(
        PhotonAnalyzerPair(0.0)
    )


def cascade_predecay_amplitude(pair: PhotonAnalyzerPair) -> float:
    """Projection of (|x,-x> + |y,-y>)/sqrt(2) onto the two polarizers: -cos(phi)/sqrt(2)."""
    return -math.cos(pair.phi) / math.sqrt(2.0)


def cascade_predecay_probability(pair: PhotonAnalyzerPair) -> float:
    return 0.25 * (1.0 + math.cos(2.0 * pair.phi))


# -- entangled state as a per-event mixture of products ----------------------

def realize_entangled_event(pair: EntangledPair, u: float) -> int:
    """Branch 1 if ``u < |alpha|^2`` else branch 2."""
    return 1 if u < abs(pair.weight_first) ** 2 else 2


# -- deterministic sign model (reference local model for CHSH) ---------------

def sign_outcome(axis: UnitVector3, flip: bool = False):
    """Outcome +1 when the hidden direction lies in the hemisphere around ``axis``."""
    v = axis.as_array()
    s = -1.0 if flip else 1.0

    def outcome(lam: np.ndarray) -> np.ndarray:
        return s * np.where(np.asarray(lam) @ v >= 0.0, 1.0, -1.0)

    return outcome


def sign_model_correlation(pair: AnalyzerPair) -> float:
    """Closed-form correlator of A = sgn(a.l), B = -sgn(b.l): -1 + 2 theta/pi."""
    theta = math.acos(max(-1.0, min(1.0, pair.a.dot(pair.b))))
    return -1.0 + 2.0 * theta / math.pi
