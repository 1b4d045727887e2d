"""Seeded Monte Carlo engine over hidden directions, plus a fixed-grid quadrature oracle.

Randomness comes from counter-based Philox streams keyed by
``(seed, stream, shard)``. Work is cut into fixed-size shards whose partial
statistics are merged in a fixed pairwise order, so an estimate depends only
on ``(seed, stream, n)`` and never on how many workers computed it.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

Domain = Literal["sphere", "circle"]
Estimator = Literal["product", "bernoulli"]

SHARD_SIZE = 1 << 16
MIN_SAMPLES = 100
MIN_QUADRATURE_NODES = 64
RANGE_TOL = 1e-12

HiddenFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SampleStats:
    mean: float
    stderr: float
    n: int
    seed: int

    def within(self, expected: float, k: float = 4.0) -> bool:
        return abs(self.mean - expected) <= k * self.stderr


@dataclass(frozen=True)
class CoincidenceModel:
    """Per-event transmission probabilities of the two stations.

    ``right`` and ``left`` map an array of hidden parameters (``(n, 3)``
    directions for the sphere, ``(n,)`` angles for the circle) to the
    probability that the respective analyzer transmits.
    """

    domain: Domain
    right: HiddenFn
    left: HiddenFn

    @classmethod
    def from_integrand(cls, domain: Domain, integrand: HiddenFn) -> CoincidenceModel:
        return cls(domain, integrand, lambda lam: np.ones(len(lam)))

    def integrand(self, lam: np.ndarray) -> np.ndarray:
        return self.right(lam) * self.left(lam)


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def shard_generator(seed: int, stream: int, shard: int) -> np.random.Generator:
    ss = np.random.SeedSequence(_check_seed(seed), spawn_key=(int(stream), int(shard)))
    return np.random.Generator(np.random.Philox(ss))


def _shard_sizes(n: int) -> list[int]:
    full, rest = divmod(n, SHARD_SIZE)
    return [SHARD_SIZE] * full + ([rest] if rest else [])


def draw_sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform directions: cos(theta) uniform on [-1, 1], azimuth uniform."""
    u, v = rng.random((n, 2)).T
    cos_t = 1.0 - 2.0 * u
    sin_t = np.sqrt(np.clip(1.0 - cos_t * cos_t, 0.0, None))
    phi = 2.0 * np.pi * v
    return np.column_stack([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t])


def draw_circle(rng: np.random.Generator, n: int) -> np.ndarray:
    return 2.0 * np.pi * rng.random(n)


def _draw(domain: Domain, rng: np.random.Generator, n: int) -> np.ndarray:
    if domain == "sphere":
        return draw_sphere(rng, n)
    if domain == "circle":
        return draw_circle(rng, n)
    raise ValueError(f"unsupported domain {domain!r}")


def sample_hidden(domain: Domain, n: int, seed: int = 0, stream: int = 0) -> np.ndarray:
    """The exact hidden-parameter sequence an estimator with these arguments sees."""
    parts = [
        _draw(domain, shard_generator(seed, stream, k), m)
        for k, m in enumerate(_shard_sizes(n))
    ]
    return np.concatenate(parts) if parts else _draw(domain, shard_generator(seed, stream, 0), 0)


def sample_sphere(n: int, seed: int = 0, stream: int = 0) -> np.ndarray:
    return sample_hidden("sphere", n, seed, stream)


# -- partial statistics -----------------------------------------------------

def _partial(values: np.ndarray) -> tuple[int, float, float]:
    m = len(values)
    mean = float(values.mean())
    dev = values - mean
    return m, mean, float(dev @ dev)


def _merge(p: tuple[int, float, float], q: tuple[int, float, float]) -> tuple[int, float, float]:
    na, ma, sa = p
    nb, mb, sb = q
    n = na + nb
    delta = mb - ma
    mean = ma + delta * nb / n
    m2 = sa + sb + delta * delta * na * nb / n
    return n, mean, m2


def _pairwise(parts: list[tuple[int, float, float]]) -> tuple[int, float, float]:
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    return _merge(_pairwise(parts[:mid]), _pairwise(parts[mid:]))


def _run_sharded(shard_fn, n: int, seed: int, stream: int, workers: int | None) -> SampleStats:
    if n < MIN_SAMPLES:
        raise ValueError(f"n must be at least {MIN_SAMPLES}, got {n}")
    seed = _check_seed(seed)
    jobs = [(k, m) for k, m in enumerate(_shard_sizes(int(n)))]

    def run(job):
        k, m = job
        return shard_fn(shard_generator(seed, stream, k), m)

    if workers is None:
        workers = min(len(jobs), os.cpu_count() or 1)
    if workers <= 1:
        parts = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, jobs))
    total, mean, m2 = _pairwise(parts)
    stderr = math.sqrt(max(m2, 0.0) / (total - 1)) / math.sqrt(total)
    return SampleStats(mean=mean, stderr=stderr, n=total, seed=seed)


def _checked_probability(p: np.ndarray, what: str) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < -RANGE_TOL) or np.any(p > 1.0 + RANGE_TOL) or not np.all(np.isfinite(p)):
        raise ValueError(f"{what} returned values outside [0, 1]")
    return np.clip(p, 0.0, 1.0)


def estimate_probability(
    model: CoincidenceModel,
    n: int = 10**6,
    seed: int = 0,
    *,
    estimator: Estimator = "product",
    stream: int = 0,
    workers: int | None = None,
) -> SampleStats:
    """Estimate the coincidence probability E[w_right * w_left] over the hidden parameter.

    ``estimator="product"`` averages the product of the two transmission
    probabilities. ``estimator="bernoulli"`` instead simulates each station
    with its own uniform draw and counts joint transmissions.
    """
    if estimator not in ("product", "bernoulli"):
        raise ValueError(f"unknown estimator {estimator!r}")

    def shard(rng: np.random.Generator, m: int):
        lam = _draw(model.domain, rng, m)
        pr = _checked_probability(model.right(lam), "right-station probability")
        pl = _checked_probability(model.left(lam), "left-station probability")
        if estimator == "product":
            values = pr * pl
        else:
            ur = rng.random(m)
            ul = rng.random(m)
            values = ((ur < pr) & (ul < pl)).astype(float)
        return _partial(values)

    return _run_sharded(shard, n, seed, stream, workers)


def estimate_correlator(
    outcome_a: HiddenFn,
    outcome_b: HiddenFn,
    n: int = 10**6,
    seed: int = 0,
    *,
    domain: Domain = "sphere",
    stream: int = 0,
    workers: int | None = None,
) -> SampleStats:
    """Monte Carlo estimate of the correlator E[A(lambda) B(lambda)] for +/-1 outcomes."""

    def shard(rng: np.random.Generator, m: int):
        lam = _draw(domain, rng, m)
        va = np.asarray(outcome_a(lam), dtype=float)
        vb = np.asarray(outcome_b(lam), dtype=float)
        if not (np.all(np.abs(va) == 1.0) and np.all(np.abs(vb) == 1.0)):
            raise ValueError("outcome functions must return exactly +1 or -1")
        return _partial(va * vb)

    return _run_sharded(shard, n, seed, stream, workers)


def ratio_with_error(num: SampleStats, den: SampleStats) -> tuple[float, float]:
    """Ratio of two independent estimates with first-order error propagation."""
    if den.mean == 0.0:
        raise ZeroDivisionError("denominator estimate is zero")
    r = num.mean / den.mean
    rel_num = num.stderr / num.mean if num.mean else 0.0
    rel_den = den.stderr / den.mean
    return r, abs(r) * math.hypot(rel_num, rel_den)


# -- deterministic quadrature oracle ---------------------------------------

def quadrature(integrand: HiddenFn, domain: Domain = "sphere", resolution: int = 256) -> float:
    """Average of ``integrand`` over the sphere (dOmega/4pi) or circle (dphi/2pi).

    Sphere: Gauss-Legendre nodes in cos(theta) times a uniform azimuth grid.
    Circle: uniform periodic trapezoid rule.
    """
    if resolution < MIN_QUADRATURE_NODES:
        raise ValueError(f"resolution must be >= {MIN_QUADRATURE_NODES}")
    phi = 2.0 * np.pi * np.arange(resolution) / resolution
    if domain == "circle":
        return float(np.mean(integrand(phi)))
    if domain != "sphere":
        raise ValueError(f"unsupported domain {domain!r}")
    mu, w = np.polynomial.legendre.leggauss(resolution)
    sin_t = np.sqrt(1.0 - mu * mu)
    ct, pp = np.meshgrid(mu, phi, indexing="ij")
    st, _ = np.meshgrid(sin_t, phi, indexing="ij")
    pts = np.column_stack([(st * np.cos(pp)).ravel(), (st * np.sin(pp)).ravel(), ct.ravel()])
    vals = np.asarray(integrand(pts), dtype=float).reshape(resolution, resolution)
    # weights over mu sum to 2; azimuth average already normalizes by 2pi
    return float(w @ vals.mean(axis=1) / 2.0)
