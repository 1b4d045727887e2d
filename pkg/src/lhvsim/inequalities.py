"""CHSH combination of correlators and a planar grid search for its maximum."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .montecarlo import SampleStats
from .spin_algebra import UnitVector3

LOCAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
CLOSED_FORM_TOL = 1e-9

WITHIN = "within-local-bound"
VIOLATES = "violates-local-bound"
QUANTUM_MAX = "at-quantum-maximum"

Correlator = Callable[[UnitVector3, UnitVector3], Union[float, SampleStats]]


@dataclass(frozen=True)
class ChshSettings:
    a: UnitVector3
    a_prime: UnitVector3
    b: UnitVector3
    b_prime: UnitVector3

    @classmethod
    def planar(cls, a: float, a_prime: float, b: float, b_prime: float) -> ChshSettings:
        """Four axes in the x-z plane, angles in radians."""
        return cls(*(UnitVector3.in_plane(t) for t in (a, a_prime, b, b_prime)))

    def negated(self) -> ChshSettings:
        return ChshSettings(-self.a, -self.a_prime, -self.b, -self.b_prime)


@dataclass(frozen=True)
class ChshResult:
    s_value: float
    term_values: tuple[float, float, float, float]
    classification: str
    uncertainty: float
    angles: tuple[float, float, float, float] | None = None

    @staticmethod
    def combine(terms) -> float:
        e_ab, e_abp, e_apb, e_apbp = terms
        return e_ab - e_abp + e_apb + e_apbp


def classify(s_value: float, uncertainty: float, tolerance: float | None = None) -> str:
    if tolerance is None:
        tolerance = 4.0 * uncertainty if uncertainty > 0 else CLOSED_FORM_TOL
    s = abs(s_value)
    if abs(s - TSIRELSON_BOUND) <= tolerance:
        return QUANTUM_MAX
    if s <= LOCAL_BOUND + tolerance:
        return WITHIN
    return VIOLATES


def _evaluate(correlator: Correlator, x: UnitVector3, y: UnitVector3) -> tuple[float, float]:
    value = correlator(x, y)
    if isinstance(value, SampleStats):
        return value.mean, value.stderr
    return float(value), 0.0


def chsh_value(
    correlator: Correlator, settings: ChshSettings, tolerance: float | None = None
) -> ChshResult:
    """S = E(a,b) - E(a,b') + E(a',b) + E(a',b').

    ``correlator`` may return a plain number (closed form) or a
    :class:`SampleStats`; sampled standard errors are added in quadrature
    into the result's uncertainty.
    """
    pairs = [
        (settings.a, settings.b),
        (settings.a, settings.b_prime),
        (settings.a_prime, settings.b),
        (settings.a_prime, settings.b_prime),
    ]
    terms, errs = [], []
    for x, y in pairs:
        v, e = _evaluate(correlator, x, y)
        margin = 4.0 * e if e > 0 else CLOSED_FORM_TOL
        if abs(v) > 1.0 + margin:
            raise ValueError(f"correlator value {v} lies outside [-1, 1]")
        terms.append(v)
        errs.append(e)
    unc = math.sqrt(sum(e * e for e in errs))
    s = ChshResult.combine(terms)
    return ChshResult(
        s_value=s,
        term_values=tuple(terms),
        classification=classify(s, unc, tolerance),
        uncertainty=unc,
    )


def chsh_scan(correlator: Correlator, resolution: int = 360) -> ChshResult:
    """Maximize |S| over planar settings on a uniform grid of ``resolution`` angles in [0, 2pi).

    For each choice of (b, b') the best a and a' decouple, so the search is
    O(resolution^3) over a precomputed correlation matrix. Ties resolve to the
    lexicographically smallest (a, a', b, b') index tuple.
    """
    if resolution < 8:
        raise ValueError("resolution must be at least 8 angles")
    angles = 2.0 * np.pi * np.arange(resolution) / resolution
    axes = [UnitVector3.in_plane(t) for t in angles]
    m = np.empty((resolution, resolution))
    for i, x in enumerate(axes):
        for j, y in enumerate(axes):
            m[i, j] = _evaluate(correlator, x, y)[0]

    best = -np.inf
    candidates: list[tuple[float, tuple[int, int, int, int]]] = []
    for sign in (1.0, -1.0):
        ms = sign * m
        for j in range(resolution):
            diff = ms[:, [j]] - ms  # column jp: E(a, b_j) - E(a, b_jp)
            summ = ms[:, [j]] + ms
            i_best = np.argmax(diff, axis=0)
            ip_best = np.argmax(summ, axis=0)
            s_row = diff.max(axis=0) + summ.max(axis=0)
            top = s_row.max()
            if top < best - 1e-12:
                continue
            for jp in np.flatnonzero(s_row >= top - 1e-12):
                candidates.append((float(s_row[jp]), (int(i_best[jp]), int(ip_best[jp]), j, int(jp))))
            best = max(best, top)
    winners = [idx for val, idx in candidates if val >= best - 1e-12]
    i, ip, j, jp = min(winners)
    settings = ChshSettings(axes[i], axes[ip], axes[j], axes[jp])
    result = chsh_value(correlator, settings)
    return ChshResult(
        s_value=result.s_value,
        term_values=result.term_values,
        classification=result.classification,
        uncertainty=result.uncertainty,
        angles=(float(angles[i]), float(angles[ip]), float(angles[j]), float(angles[jp])),
    )
