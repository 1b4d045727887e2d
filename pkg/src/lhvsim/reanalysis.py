"""Background handling and ratio tests for cascade-photon coincidence data.

Counts are treated as Poisson: every count N carries sigma = sqrt(N). The
hidden-polarization model predicts crossed/parallel coincidences in the
ratio 1/3; the tests here measure how far a data set sits from it.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

ONE_THIRD = 1.0 / 3.0
DEFAULT_N_SIGMA = 3.0

PARALLEL = "parallel"
ORTHOGONAL = "orthogonal"
NOPOL = "nopol"
CSV_COLUMNS = ("delay_ns", "counts", "filter_config")


class DataError(ValueError):
    """Malformed coincidence data."""


def parse_filter_config(text: str) -> str:
    """Canonical filter label: parallel, orthogonal, nopol or deg:<angle>."""
    t = text.strip().lower()
    if t in (PARALLEL, ORTHOGONAL, NOPOL):
        return t
    if t.startswith("deg:"):
        try:
            angle = float(t[4:])
        except ValueError:
            raise DataError(f"bad polarizer angle in {text!r}") from None
        if not math.isfinite(angle):
            raise DataError(f"bad polarizer angle in {text!r}")
        return f"deg:{angle:g}"
    raise DataError(f"unknown filter_config {text!r}")


@dataclass(frozen=True)
class CoincidenceRecord:
    delay: float
    counts: int
    filter_config: str

    def __post_init__(self) -> None:
        if self.counts < 0:
            raise DataError(f"negative counts {self.counts}")
        if not math.isfinite(self.delay):
            raise DataError("delay must be finite")

    @property
    def angle(self) -> float | None:
        """Relative polarizer angle in radians, ``None`` without polarizers."""
        if self.filter_config == PARALLEL:
            return 0.0
        if self.filter_config == ORTHOGONAL:
            return math.pi / 2
        if self.filter_config.startswith("deg:"):
            return math.radians(float(self.filter_config[4:]))
        return None


def _parse_counts(raw: str) -> int:
    # accept "12" and "12.0", reject fractions and signs below zero
    value = float(raw)
    if value != int(value):
        raise ValueError(f"counts {raw!r} is not an integer")
    if value < 0:
        raise ValueError(f"counts {raw!r} is negative")
    return int(value)


def load_histogram(rows: Iterable[Mapping[str, str]]) -> list[CoincidenceRecord]:
    """Validate table rows into records, keeping input order. Row numbers are 1-based."""
    records = []
    for i, row in enumerate(rows, start=1):
        try:
            missing = [c for c in CSV_COLUMNS if row.get(c) in (None, "")]
            if missing:
                raise ValueError(f"missing column(s) {', '.join(missing)}")
            delay = float(row["delay_ns"])
            counts = _parse_counts(str(row["counts"]).strip().replace("−", "-"))
            records.append(CoincidenceRecord(delay, counts, parse_filter_config(str(row["filter_config"]))))
        except (ValueError, TypeError) as exc:
            raise DataError(f"row {i}: {exc}") from None
    return records


def read_histogram_csv(path: str | Path) -> list[CoincidenceRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        absent = set(CSV_COLUMNS) - {f.strip() for f in reader.fieldnames}
        if absent:
            raise DataError(f"missing header column(s): {', '.join(sorted(absent))}")
        rows = ({k.strip(): v for k, v in row.items() if k is not None} for row in reader)
        return load_histogram(rows)


@dataclass(frozen=True)
class NetPeak:
    raw_peak: int
    peak_delay: float
    net: float
    clamped: bool


def subtract_background(records: Iterable[CoincidenceRecord], background_level: float) -> dict[str, NetPeak]:
    """Peak (maximum bin) minus a flat background, per filter configuration.

    A single record per configuration is taken as a directly entered peak.
    Nets below zero are clamped to zero and flagged.
    """
    if background_level < 0 or not math.isfinite(background_level):
        raise ValueError("background_level must be a finite value >= 0")
    groups: dict[str, list[CoincidenceRecord]] = {}
    for rec in records:
        groups.setdefault(rec.filter_config, []).append(rec)
    out = {}
    for cfg, recs in groups.items():
        peak = max(recs, key=lambda r: r.counts)
        low = min(r.counts for r in recs)
        if len(recs) > 1 and peak.counts - low <= math.sqrt(peak.counts):
            raise DataError(f"no peak identifiable for {cfg}: all bins agree within Poisson noise")
        net = peak.counts - background_level
        out[cfg] = NetPeak(peak.counts, peak.delay, max(net, 0.0), net < 0)
    return out


def poisson_sigma(n: float) -> float:
    return math.sqrt(max(n, 0.0))


def ratio_sigma(numerator: float, denominator: float) -> float:
    """First-order sigma of numerator/denominator with sqrt(N) errors on both."""
    if denominator <= 0:
        raise ValueError("denominator must be positive")
    r = numerator / denominator
    return math.sqrt(poisson_sigma(numerator) ** 2 + (r * poisson_sigma(denominator)) ** 2) / denominator


@dataclass(frozen=True)
class ReanalysisReport:
    net_parallel: float
    net_orthogonal: float
    ratio: float
    ratio_sigma: float
    consistent_one_third: bool
    deviation_sigma: float
    n_sigma: float = DEFAULT_N_SIGMA
    flags: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "net_parallel": self.net_parallel,
            "net_orthogonal": self.net_orthogonal,
            "ratio": self.ratio,
            "ratio_sigma": self.ratio_sigma,
            "consistent_one_third": self.consistent_one_third,
        }


def _deviation(value: float, target: float, sigma: float) -> float:
    if sigma > 0:
        return abs(value - target) / sigma
    return 0.0 if value == target else math.inf


def ratio_report(
    net_parallel: float,
    net_orthogonal: float,
    n_sigma: float = DEFAULT_N_SIGMA,
    flags: Iterable[str] = (),
) -> ReanalysisReport:
    if net_parallel <= 0:
        raise ValueError("net parallel coincidences must be positive to form a ratio")
    r = net_orthogonal / net_parallel
    sig = ratio_sigma(net_orthogonal, net_parallel)
    dev = _deviation(r, ONE_THIRD, sig)
    return ReanalysisReport(
        net_parallel=float(net_parallel),
        net_orthogonal=float(net_orthogonal),
        ratio=r,
        ratio_sigma=sig,
        consistent_one_third=dev <= n_sigma,
        deviation_sigma=dev,
        n_sigma=n_sigma,
        flags=tuple(flags),
    )


def histogram_report(
    records: Iterable[CoincidenceRecord],
    background_level: float,
    n_sigma: float = DEFAULT_N_SIGMA,
) -> ReanalysisReport:
    nets = subtract_background(records, background_level)
    for cfg in (PARALLEL, ORTHOGONAL):
        if cfg not in nets:
            raise DataError(f"no {cfg} records in data")
    flags = [f"{cfg} net clamped to 0" for cfg, p in sorted(nets.items()) if p.clamped]
    return ratio_report(nets[PARALLEL].net, nets[ORTHOGONAL].net, n_sigma, flags)


@dataclass(frozen=True)
class AspectSplit:
    true_no_polarizer: float
    residual_floor: float
    parallel: float
    orthogonal: float


def aspect_split(total_no_polarizers: float, claimed_accidental: float, alternative_accidental: float) -> AspectSplit:
    """Re-split no-polarizer coincidences when only part of the subtracted floor is accidental.

    The published subtraction leaves T - C true coincidences without
    polarizers, half of which pass ideal parallel polarizers and none crossed
    ones. The part of the floor that is reassigned as genuine,
    C - A, is added to both settings.
    """
    t, c, a = total_no_polarizers, claimed_accidental, alternative_accidental
    if not (0 <= a <= c <= t):
        raise ValueError(
            "need 0 <= alternative_accidental <= claimed_accidental <= total_no_polarizers, "
            f"got {a}, {c}, {t}"
        )
    floor = c - a
    true = t - c
    return AspectSplit(true_no_polarizer=true, residual_floor=floor, parallel=true / 2.0 + floor, orthogonal=floor)


def aspect_resplit(
    total_no_polarizers: float,
    claimed_accidental: float,
    alternative_accidental: float,
    n_sigma: float = DEFAULT_N_SIGMA,
) -> ReanalysisReport:
    split = aspect_split(total_no_polarizers, claimed_accidental, alternative_accidental)
    flags = [] if split.residual_floor > 0 else ["no residual floor: published split"]
    return ratio_report(split.parallel, split.orthogonal, n_sigma, flags)


@dataclass(frozen=True)
class RateModel:
    """R(phi) = K [1 + cos(2 phi)/2] for true coincidences, on top of an accidental floor."""

    true_peak_rate: float
    accidental_rate: float
    residual_floor: float

    def __post_init__(self) -> None:
        if min(self.true_peak_rate, self.accidental_rate, self.residual_floor) < 0:
            raise ValueError("rate model parameters must be nonnegative")

    def true_rate(self, phi: float) -> float:
        return self.true_peak_rate * (1.0 + 0.5 * math.cos(2.0 * phi))


@dataclass(frozen=True)
class RatioFit:
    model: RateModel
    predicted_orthogonal: float
    goodness: float
    consistent: bool


def fit_ratio_model(
    net_parallel: float,
    net_orthogonal: float,
    accidental_rate: float = 0.0,
    n_sigma: float = DEFAULT_N_SIGMA,
) -> RatioFit:
    """Fix K from the parallel net and score the crossed net against K/2.

    ``goodness`` is (observed - predicted)/sigma with sigma = sqrt(observed);
    for an empty crossed channel sigma falls back to sqrt(predicted).
    """
    if net_parallel <= 0:
        raise ValueError("net_parallel must be positive")
    k = net_parallel / 1.5
    predicted = k / 2.0
    sigma = poisson_sigma(net_orthogonal) if net_orthogonal > 0 else poisson_sigma(predicted)
    goodness = (net_orthogonal - predicted) / sigma
    model = RateModel(true_peak_rate=k, accidental_rate=accidental_rate, residual_floor=predicted)
    return RatioFit(model=model, predicted_orthogonal=predicted, goodness=goodness, consistent=abs(goodness) <= n_sigma)
