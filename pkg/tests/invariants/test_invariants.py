import json
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from legsat.errors import NotConnected
from legsat.families.families import GeneratorId, generate
from legsat.front_core.event import Direction, Shape, L, R
from legsat.front_core.front_word import FrontWord
from legsat.front_core.generator import FrontWordGenerator
from legsat.front_core.trace import reorient, trace_components
from legsat.invariants.invariants import compute, crossing_sign, invariants_of
from legsat.satellite.satellite import SpliceSpec, legendrian_satellite


def _random_word(seed: int, seam: int) -> FrontWord:
    sampler = FrontWordGenerator(
        n_words=1, length=10, max_strands=6,
        shape=Shape.ANNULAR if seam else Shape.CLOSED, seam_strands=seam, seed=seed)
    sampler.sample()
    return sampler.words[0]


closed_words = st.builds(_random_word, seed=st.integers(0, 2 ** 16), seam=st.just(0))
any_words = st.builds(_random_word, seed=st.integers(0, 2 ** 16), seam=st.integers(0, 3))


class TestCrossingSign:
    def test_parallel(self):
        assert crossing_sign(Direction.RIGHTWARD, Direction.RIGHTWARD) == 1
        assert crossing_sign(Direction.LEFTWARD, Direction.LEFTWARD) == 1

    def test_antiparallel(self):
        assert crossing_sign(Direction.RIGHTWARD, Direction.LEFTWARD) == -1
        assert crossing_sign(Direction.LEFTWARD, Direction.RIGHTWARD) == -1


class TestCompute:
    def test_unknot(self):
        report = invariants_of(FrontWord.closed([L(1), R(1)]))
        assert (report.tb, report.rot, report.writhe) == (-1, 0, 0)
        assert report.winding is None

    def test_trefoil_calibration(self):
        report = invariants_of(generate(GeneratorId.parse("trefoil")))
        assert report.writhe == 3
        assert (report.tb, report.rot) == (1, 0)
        assert (report.cusps_down, report.cusps_up) == (2, 2)

    def test_whitehead_pattern(self):
        report = invariants_of(generate(GeneratorId.parse("W")))
        assert (report.tb, report.rot, report.winding) == (0, 1, 0)

    def test_cable_pattern(self):
        report = invariants_of(generate(GeneratorId.parse("P(3)")))
        assert (report.tb, report.rot, report.winding) == (2, 0, 3)

    def test_stabilized_unknot(self):
        # down zigzag on the lower strand
        report = invariants_of(FrontWord.closed([L(1), L(1), R(2), R(1)]))
        assert (report.tb, report.rot) == (-2, 1)

    def test_two_component_link(self):
        report = invariants_of(FrontWord.closed([L(1), L(2), R(2), R(1)]))
        assert report.components == 2
        assert report.linking == [[0, 0], [0, 0]]
        assert report.tb == -2
        with pytest.raises(NotConnected):
            report.knot_tb()
        with pytest.raises(NotConnected):
            report.knot_rot()

    def test_satellite_has_no_winding(self):
        spec = SpliceSpec(pattern=generate(GeneratorId.parse("demo")),
                          companion=generate(GeneratorId.parse("trefoil")))
        assert compute(legendrian_satellite(spec)).winding is None

    def test_text_and_json(self):
        report = invariants_of(generate(GeneratorId.parse("trefoil")))
        assert "tb 1\n" in report.as_text()
        assert "winding -\n" in report.as_text()
        document = json.loads(report.json())
        assert {"writhe", "cusps_down", "cusps_up", "tb", "rot", "winding",
                "components", "linking"} <= set(document)


class TestInvariantProperties:
    @settings(derandomize=True, max_examples=150, deadline=None)
    @given(any_words)
    def test_formulas(self, word):
        report = invariants_of(word)
        assert report.cusps_down + report.cusps_up == report.cusps_total
        assert report.cusps_total % 2 == 0
        assert report.tb == report.writhe - report.cusps_total // 2
        assert 2 * report.rot == report.cusps_down - report.cusps_up
        assert sum(report.component_rot) == report.rot

    @settings(derandomize=True, max_examples=150, deadline=None)
    @given(closed_words)
    def test_linking_matrix(self, word):
        report = invariants_of(word)
        n = report.components
        linking = np.array(report.linking, dtype=np.int64).reshape(n, n)
        assert np.array_equal(linking, linking.T)
        assert not np.diag(linking).any()
        assert report.tb == sum(report.component_tb) + int(linking.sum())

    @settings(derandomize=True, max_examples=500, deadline=None)
    @given(any_words)
    def test_reversing_every_component(self, word):
        front = trace_components(word)
        flipped = reorient(front, [
            (component, -front.component_direction(component))
            for component in range(front.n_components)])
        before, after = compute(front), compute(flipped)
        assert after.tb == before.tb
        assert after.writhe == before.writhe
        assert after.rot == -before.rot
        assert after.linking == before.linking
        if before.winding is not None:
            assert after.winding == -before.winding

    def test_reversal_on_generators(self):
        for name in ("unknot", "trefoil", "W", "J", "Q(2)", "P(4)"):
            front = trace_components(generate(GeneratorId.parse(name)))
            flipped = reorient(front, [(0, -front.component_direction(0))])
            assert compute(flipped).tb == compute(front).tb
            assert compute(flipped).rot == -compute(front).rot
