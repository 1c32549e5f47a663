import time
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from legsat.errors import NotConnected, SpliceMismatch
from legsat.families.families import GeneratorId, generate
from legsat.front_core.event import EventKind, Shape, L, R
from legsat.front_core.front_word import FrontWord
from legsat.front_core.generator import FrontWordGenerator
from legsat.front_core.validation import validate
from legsat.invariants.invariants import compute, invariants_of
from legsat.moves.moves import perturb
from legsat.satellite.satellite import (
    SpliceSpec, admissible_cuts, block_offsets, block_sizes, check_composition,
    legendrian_satellite, parallel_copies, predicted_invariants)


def _gen(text: str) -> FrontWord:
    return generate(GeneratorId.parse(text))


def _random_word(seed: int, seam: int) -> FrontWord:
    sampler = FrontWordGenerator(
        n_words=1, length=6, max_strands=6,
        shape=Shape.ANNULAR if seam else Shape.CLOSED, seam_strands=seam, seed=seed)
    sampler.sample()
    return sampler.words[0]


closed_words = st.builds(_random_word, seed=st.integers(0, 2 ** 16), seam=st.just(0))


class TestParallelCopies:
    def test_unknot(self):
        copies = parallel_copies(_gen("unknot"), 2)
        report = invariants_of(copies)
        assert report.cusps_total == 4
        assert int((copies.kinds == EventKind.CROSSING).sum()) == 2
        assert report.components == 2
        assert report.linking[0][1] == -1

    def test_trefoil(self):
        copies = parallel_copies(_gen("trefoil"), 2)
        report = invariants_of(copies)
        assert int((copies.kinds == EventKind.CROSSING).sum()) == 16
        assert report.cusps_total == 8
        assert report.writhe == 8
        assert report.components == 2

    def test_block_offsets(self):
        offsets = block_offsets(_gen("trefoil"), 3)
        assert offsets.tolist() == [0, 6, 12, 21, 30, 39, 45, 51]

    @settings(derandomize=True, max_examples=50, deadline=None)
    @given(closed_words, st.integers(1, 4))
    def test_size_law(self, word, n):
        copies = parallel_copies(word, n)
        cusps = int((word.kinds != EventKind.CROSSING).sum())
        crossings = len(word) - cusps
        assert len(copies) == cusps * (n + n * (n - 1) // 2) + crossings * n * n
        assert len(copies) == int(block_sizes(word, n).sum())
        assert validate(copies).ok
        assert invariants_of(copies).components == n * invariants_of(word).components

    @settings(derandomize=True, max_examples=50, deadline=None)
    @given(closed_words)
    def test_one_copy_is_identity(self, word):
        assert parallel_copies(word, 1) == word

    def test_no_copies(self):
        with pytest.raises(SpliceMismatch):
            parallel_copies(_gen("unknot"), 0)


class TestLegendrianSatellite:
    def test_worked_example(self):
        satellite = legendrian_satellite(
            SpliceSpec(pattern=_gen("demo"), companion=_gen("trefoil")))
        report = compute(satellite)
        assert (report.tb, report.rot, report.components) == (3, 0, 1)

    def test_whitehead_over_j(self):
        satellite = legendrian_satellite(SpliceSpec(pattern=_gen("W"), companion=_gen("J")))
        report = compute(satellite)
        assert (report.tb, report.rot) == (0, 1)

    def test_clasped_over_tb_zero_companion(self):
        satellite = legendrian_satellite(SpliceSpec(pattern=_gen("Q(2)"), companion=_gen("J")))
        report = compute(satellite)
        assert (report.tb, report.rot) == (3, 0)

    def test_cable_over_k(self):
        satellite = legendrian_satellite(SpliceSpec(pattern=_gen("P(3)"), companion=_gen("K")))
        report = compute(satellite)
        assert (report.tb, report.rot) == (2, 3)

    def test_doubled_cable_is_a_boundary_link(self):
        satellite = legendrian_satellite(SpliceSpec(pattern=_gen("L(1)"), companion=_gen("K")))
        report = compute(satellite)
        assert report.components == 2
        assert report.linking == [[0, 0], [0, 0]]
        assert (report.tb, report.rot) == (2, 0)

    def test_cut_independence(self):
        pattern, companion = _gen("demo"), _gen("trefoil")
        cuts = admissible_cuts(companion, pattern.seam_strands)
        assert len(cuts) > 1
        for cut_index, strand in cuts:
            report = compute(legendrian_satellite(SpliceSpec(
                pattern=pattern, companion=companion, cut_index=cut_index, strand=strand)))
            assert (report.tb, report.rot, report.components) == (3, 0, 1)

    def test_cut_inside_a_block(self):
        spec = SpliceSpec(pattern=_gen("demo"), companion=_gen("trefoil"), cut_index=1)
        with pytest.raises(SpliceMismatch):
            legendrian_satellite(spec)

    def test_cut_on_leftward_strand(self):
        spec = SpliceSpec(pattern=_gen("demo"), companion=_gen("trefoil"),
                          cut_index=6, strand=2)
        with pytest.raises(SpliceMismatch):
            legendrian_satellite(spec)

    def test_strand_never_rightward(self):
        spec = SpliceSpec(pattern=_gen("demo"), companion=_gen("trefoil"), strand=9)
        with pytest.raises(SpliceMismatch):
            legendrian_satellite(spec)

    def test_disconnected_companion(self):
        link = FrontWord.closed([L(1), L(2), R(2), R(1)])
        with pytest.raises(NotConnected):
            legendrian_satellite(SpliceSpec(pattern=_gen("demo"), companion=link))

    def test_pattern_must_be_annular(self):
        with pytest.raises(SpliceMismatch):
            SpliceSpec(pattern=_gen("unknot"), companion=_gen("trefoil"))

    def test_companion_must_be_closed(self):
        with pytest.raises(SpliceMismatch):
            SpliceSpec(pattern=_gen("demo"), companion=_gen("W"))

    def test_doubled_cable_size_and_time(self):
        i = 50
        pattern, companion = _gen(f"L({i})"), _gen("K")
        cusps = int((companion.kinds != EventKind.CROSSING).sum())
        crossings = len(companion) - cusps
        n = pattern.seam_strands
        start = time.perf_counter()
        satellite = legendrian_satellite(SpliceSpec(pattern=pattern, companion=companion))
        report = compute(satellite)
        elapsed = time.perf_counter() - start
        assert n == 2 * i + 2
        assert len(satellite.word) == \
            cusps * (n + n * (n - 1) // 2) + crossings * n * n + len(pattern)
        assert (report.tb, report.rot, report.components) == (2 * i, 0, 2)
        assert elapsed < 2.0


class TestComposition:
    def test_worked_example(self):
        report = check_composition(_gen("demo"), _gen("trefoil"))
        assert report.holds
        assert (report.tb_formula, report.rot_formula) == (3, 0)

    def test_cables_over_k(self):
        for i in range(1, 5):
            report = check_composition(_gen(f"P({i})"), _gen("K"))
            assert report.holds
            assert (report.tb_direct, report.rot_direct) == (i - 1, i)

    def test_generator_pairs(self):
        patterns = ["demo", "W", "P(2)", "Q(1)", "Q(2)", "L(0)", "L(1)", "Lprime(1)"]
        companions = ["unknot", "trefoil", "J"]
        for pattern in patterns:
            for companion in companions:
                assert check_composition(_gen(pattern), _gen(companion)).holds

    def test_predicted_invariants(self):
        predicted = predicted_invariants(
            invariants_of(_gen("L(3)")), invariants_of(_gen("K")))
        assert (predicted.tb, predicted.rot, predicted.components) == (6, 0, 2)

    @settings(derandomize=True, max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 16), st.integers(1, 3), st.sampled_from(["unknot", "trefoil", "J"]))
    def test_random_pairs(self, seed, seam, companion):
        pattern = perturb(_random_word(seed, seam), 2, seed)
        report = check_composition(pattern, perturb(_gen(companion), 2, seed))
        assert report.holds
