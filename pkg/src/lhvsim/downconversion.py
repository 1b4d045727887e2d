"""Coincidence bookkeeping for two photons leaving a two-port beam splitter.

Photon A reaches detectors 1 and 2 with amplitudes alpha and beta; photon B
with gamma and delta. Two coincidence rules are compared: the interfering
|alpha delta + gamma beta|^2 and the incoherent |alpha delta|^2 + |gamma beta|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .spin_algebra import NORM_TOL, NormalizationError


@dataclass(frozen=True)
class SplitterAmplitudes:
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def __post_init__(self) -> None:
        for name, (p, q) in {
            "photon A": (self.alpha, self.beta),
            "photon B": (self.gamma, self.delta),
        }.items():
            n2 = abs(p) ** 2 + abs(q) ** 2
            if abs(n2 - 1.0) > NORM_TOL:
                raise NormalizationError(f"{name} amplitudes have norm^2 {n2}, expected 1")

    @classmethod
    def normalized(cls, alpha: complex, beta: complex, gamma: complex, delta: complex) -> SplitterAmplitudes:
        """Rescale each photon's amplitude pair to unit norm."""
        na = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        nb = math.sqrt(abs(gamma) ** 2 + abs(delta) ** 2)
        if na == 0.0 or nb == 0.0:
            raise NormalizationError("a photon has all-zero amplitudes")
        return cls(alpha / na, beta / na, gamma / nb, delta / nb)

    @classmethod
    def balanced(cls) -> SplitterAmplitudes:
        h = 1.0 / math.sqrt(2.0)
        return cls(h, h, h, -h)

    @property
    def unitary_splitter(self) -> bool:
        """True when the columns are also orthogonal (a physical lossless splitter)."""
        inner = self.alpha * self.gamma.conjugate() + self.beta * self.delta.conjugate()
        return abs(inner) <= 1e-12


@dataclass(frozen=True)
class CountingAudit:
    w1: float
    w2: float
    same_detector: float
    unitary_sum: float
    interference_defect: float

    @property
    def interfering_total(self) -> float:
        """Same-detector plus interfering-coincidence probability."""
        return self.w1 + self.same_detector


def coincidence_interfering(amps: SplitterAmplitudes) -> float:
    return abs(amps.alpha * amps.delta + amps.gamma * amps.beta) ** 2


def coincidence_unitary(amps: SplitterAmplitudes) -> float:
    return abs(amps.alpha * amps.delta) ** 2 + abs(amps.gamma * amps.beta) ** 2


def same_detector(amps: SplitterAmplitudes) -> float:
    return abs(amps.alpha * amps.gamma) ** 2 + abs(amps.beta * amps.delta) ** 2


def audit(amps: SplitterAmplitudes) -> CountingAudit:
    w2 = coincidence_unitary(amps)
    same = same_detector(amps)
    a, b, g, d = (complex(v) for v in (amps.alpha, amps.beta, amps.gamma, amps.delta))
    defect = 2.0 * (a.conjugate() * d.conjugate() * g * b).real
    return CountingAudit(
        w1=coincidence_interfering(amps),
        w2=w2,
        same_detector=same,
        unitary_sum=w2 + same,
        interference_defect=defect,
    )
