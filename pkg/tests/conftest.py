import numpy as np
import pytest

from lhvsim.spin_algebra import UnitVector3


def gaussian_directions(rng: np.random.Generator, n: int, min_one_plus_z: float = 1e-6) -> list[UnitVector3]:
    """Isotropic directions by normalizing Gaussian triples (independent of the package sampler)."""
    out = []
    while len(out) < n:
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        if 1.0 + v[2] > min_one_plus_z:
            out.append(UnitVector3.normalized(*v))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def same_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-12) -> bool:
    return abs(abs(np.vdot(u, v)) - 1.0) <= tol
