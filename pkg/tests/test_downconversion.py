import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lhvsim.downconversion import (
    SplitterAmplitudes,
    audit,
    coincidence_interfering,
    coincidence_unitary,
)
from lhvsim.spin_algebra import NormalizationError


def random_amplitudes(rng) -> SplitterAmplitudes:
    z = rng.normal(size=4) + 1j * rng.normal(size=4)
    return SplitterAmplitudes.normalized(*z)


BAL = SplitterAmplitudes.balanced()
SPLIT = SplitterAmplitudes(1, 0, 0, 1)  # A -> detector 1, B -> detector 2
BUNCH = SplitterAmplitudes(1, 0, 1, 0)  # both -> detector 1


class TestCoincidence:
    def test_balanced_null(self):
        # alpha delta + gamma beta = -1/2 + 1/2
        assert coincidence_interfering(BAL) == pytest.approx(0.0, abs=1e-15)
        assert coincidence_unitary(BAL) == pytest.approx(0.5, abs=1e-15)

    def test_deterministic_split(self):
        assert coincidence_interfering(SPLIT) == 1.0
        assert coincidence_unitary(SPLIT) == 1.0

    def test_bunched(self):
        assert coincidence_interfering(BUNCH) == 0.0
        assert coincidence_unitary(BUNCH) == 0.0

    def test_normalization_enforced(self):
        with pytest.raises(NormalizationError):
            SplitterAmplitudes(1, 1, 1, 0)


class TestAudit:
    def test_balanced(self):
        a = audit(BAL)
        assert a.unitary_sum == pytest.approx(1.0, abs=1e-12)
        assert a.interference_defect == pytest.approx(-0.5, abs=1e-12)
        assert a.interfering_total == pytest.approx(0.5, abs=1e-12)
        assert BAL.unitary_splitter

    def test_no_interference(self):
        a = audit(SPLIT)
        assert a.interference_defect == 0.0
        assert a.unitary_sum == 1.0 and a.interfering_total == 1.0

    def test_identities_on_random_draws(self, rng):
        for _ in range(1000):
            amps = random_amplitudes(rng)
            a = audit(amps)
            # (|alpha|^2 + |beta|^2)(|gamma|^2 + |delta|^2) expanded
            expanded = (abs(amps.alpha) ** 2 + abs(amps.beta) ** 2) * (abs(amps.gamma) ** 2 + abs(amps.delta) ** 2)
            assert a.unitary_sum == pytest.approx(expanded, abs=1e-12)
            assert abs(a.unitary_sum - 1.0) <= 1e-12
            assert a.w2 + a.same_detector == pytest.approx(a.unitary_sum, abs=1e-15)
            assert a.unitary_sum + a.interference_defect == pytest.approx(a.w1 + a.same_detector, abs=1e-12)
            assert a.w1 == pytest.approx(a.w2 + a.interference_defect, abs=1e-12)
            bound = 2 * abs(amps.alpha * amps.beta * amps.gamma * amps.delta)
            assert abs(a.interference_defect) <= bound + 1e-15
            assert bound <= 0.5 + 1e-15

    def test_no_defect_means_equal_rules(self):
        amps = SplitterAmplitudes(1 / math.sqrt(2), 1 / math.sqrt(2), 1j / math.sqrt(2), 1 / math.sqrt(2))
        a = audit(amps)
        assert a.interference_defect == pytest.approx(0.0, abs=1e-15)
        assert a.w1 == pytest.approx(a.w2, abs=1e-15)

    def test_unitary_flag(self):
        assert not SplitterAmplitudes(1, 0, 1, 0).unitary_splitter


@given(
    st.floats(0, math.pi / 2), st.floats(0, math.pi / 2),
    st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi),
    st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi),
)
def test_unitary_sum_is_one(t1, t2, p1, p2, p3, p4):
    amps = SplitterAmplitudes(
        math.cos(t1) * cmath.exp(1j * p1), math.sin(t1) * cmath.exp(1j * p2),
        math.cos(t2) * cmath.exp(1j * p3), math.sin(t2) * cmath.exp(1j * p4),
    )
    assert abs(audit(amps).unitary_sum - 1.0) <= 1e-12
