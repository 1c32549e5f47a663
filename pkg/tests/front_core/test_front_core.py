import json
from pathlib import Path
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from legsat.errors import (
    ArityError, FrontSyntaxError, InvalidFront, OverrideOutOfRange, UnknownDirective)
from legsat.front_core.dsl import parse, render_text
from legsat.front_core.event import Direction, Shape, L, R, X
from legsat.front_core.front_word import FrontWord
from legsat.front_core.generator import FrontWordGenerator
from legsat.front_core.trace import reverse_component, trace_components
from legsat.front_core.validation import strand_counts, validate

TREFOIL = FrontWord.closed(
    [L(1), L(3), X(2), X(2), X(2), R(1), R(1)], [(0, Direction.RIGHTWARD)])


def _random_word(seed: int, length: int, seam: int) -> FrontWord:
    sampler = FrontWordGenerator(
        n_words=1, length=length, max_strands=6,
        shape=Shape.ANNULAR if seam else Shape.CLOSED, seam_strands=seam, seed=seed)
    sampler.sample()
    return sampler.words[0]


words = st.builds(
    _random_word,
    seed=st.integers(0, 2 ** 16),
    length=st.integers(0, 16),
    seam=st.integers(0, 3))


class TestValidate:
    def test_unknot(self):
        assert validate(FrontWord.closed([L(1), R(1)])).ok

    def test_trefoil(self):
        assert validate(TREFOIL).ok

    def test_crossing_without_strands(self):
        report = validate(FrontWord.closed([X(1)]))
        assert not report.ok
        assert report.index == 0
        assert report.reason == "crossing needs two strands"

    def test_left_cusp_above_top_gap(self):
        report = validate(FrontWord.closed([L(1), L(4), R(1)]))
        assert (report.index, report.reason) == (1, "left cusp above the top gap")

    def test_unbalanced_word(self):
        report = validate(FrontWord.closed([L(1)]))
        assert report.index == 1
        assert report.reason == "word ends with 2 strands, expected 0"

    def test_empty_pattern(self):
        assert validate(FrontWord.annular(2, []))

    def test_strand_counts(self):
        assert strand_counts(TREFOIL).tolist() == [0, 2, 4, 4, 4, 4, 2, 0]


class TestTraceComponents:
    with open(Path.joinpath(Path(__file__).parent, "trefoil_trace.json"),
              encoding="utf-8") as f:
        golden = json.load(f)

    def test_unknot(self):
        front = trace_components(FrontWord.closed([L(1), R(1)]))
        assert front.n_components == 1
        assert front.directions.tolist() == [1, -1]

    def test_trefoil_golden(self):
        front = trace_components(parse(self.golden["word"]))
        assert [list(cycle) for cycle in front.components] == self.golden["components"]
        assert front.directions.tolist() == self.golden["directions"]
        assert front.arc_component.tolist() == self.golden["arc_component"]
        assert front.lower_arcs.tolist() == self.golden["lower_arcs"]
        assert front.upper_arcs.tolist() == self.golden["upper_arcs"]

    def test_trefoil_crossing_strands_are_leftward(self):
        front = trace_components(TREFOIL)
        crossing_arcs = front.arcs_at([3])[3][1:3]
        assert all(front.directions[arc] == Direction.LEFTWARD for arc in crossing_arcs)

    def test_identity_pattern(self):
        front = trace_components(FrontWord.annular(1, []))
        assert front.n_components == 1
        assert front.winding == 1

    def test_closed_front_has_no_winding(self):
        assert trace_components(TREFOIL).winding is None

    def test_override_reverses_component(self):
        word = FrontWord.closed([L(1), R(1)], [(0, Direction.LEFTWARD)])
        assert trace_components(word).directions.tolist() == [-1, 1]

    def test_later_override_wins(self):
        word = FrontWord.closed(
            [L(1), R(1)], [(0, Direction.LEFTWARD), (0, Direction.RIGHTWARD)])
        assert trace_components(word).directions.tolist() == [1, -1]

    def test_override_out_of_range(self):
        word = FrontWord.closed([L(1), R(1)], [(3, Direction.RIGHTWARD)])
        with pytest.raises(OverrideOutOfRange):
            trace_components(word)

    def test_invalid_word(self):
        with pytest.raises(InvalidFront):
            trace_components(FrontWord.closed([X(1)]))

    def test_two_nested_unknots(self):
        front = trace_components(FrontWord.closed([L(1), L(2), R(2), R(1)]))
        assert front.n_components == 2
        assert front.references == (0, 2)

    @settings(derandomize=True, max_examples=100, deadline=None)
    @given(words)
    def test_every_arc_in_one_component(self, word):
        front = trace_components(word)
        arcs = sorted(arc for cycle in front.components for arc in cycle)
        assert arcs == list(range(front.directions.size))

    @settings(derandomize=True, max_examples=100, deadline=None)
    @given(words)
    def test_reversal_flips_one_component(self, word):
        front = trace_components(word)
        for component in range(front.n_components):
            reversed_front = reverse_component(front, component)
            on = front.arc_component == component
            assert np.array_equal(reversed_front.directions[on], -front.directions[on])
            assert np.array_equal(reversed_front.directions[~on], front.directions[~on])


class TestDsl:
    def test_parse_knot(self):
        assert parse(b"knot\nL1 R1\n") == FrontWord.closed([L(1), R(1)])

    def test_parse_pattern(self):
        word = parse("pattern 2\nX1\n")
        assert word.shape is Shape.ANNULAR
        assert word.seam_strands == 2
        assert word.events == [X(1)]

    def test_comments_and_line_breaks(self):
        word = parse("# a comment\nknot # header\nL1\n  R1 # end\norient 0 L\n")
        assert word == FrontWord.closed([L(1), R(1)], [(0, Direction.LEFTWARD)])

    def test_unknown_token(self):
        with pytest.raises(FrontSyntaxError) as error:
            parse("knot\nQ9\n")
        assert (error.value.line, error.value.column) == (2, 1)

    def test_level_zero(self):
        with pytest.raises(FrontSyntaxError):
            parse("knot\nL1 L0\n")

    def test_unknown_directive(self):
        with pytest.raises(UnknownDirective):
            parse("knot\nL1 twist R1\n")

    def test_missing_header(self):
        with pytest.raises(ArityError):
            parse("# nothing here\n")

    def test_header_arity(self):
        with pytest.raises(ArityError):
            parse("knot 3\nL1 R1\n")
        with pytest.raises(ArityError):
            parse("pattern\n")

    def test_orient_arity(self):
        with pytest.raises(ArityError):
            parse("knot\nL1 R1\norient 0\n")

    def test_orient_direction(self):
        with pytest.raises(FrontSyntaxError):
            parse("knot\nL1 R1\norient 0 U\n")

    def test_render(self):
        assert render_text(TREFOIL) == b"knot\nL1 L3 X2 X2 X2 R1 R1\norient 0 R\n"

    def test_render_wraps_long_words(self):
        word = FrontWord.closed([L(1)] * 10 + [R(1)] * 10)
        lines = render_text(word).decode("utf-8").splitlines()
        assert len(lines) == 3
        assert parse(render_text(word)) == word

    @settings(derandomize=True, max_examples=1000, deadline=None)
    @given(words, st.booleans())
    def test_round_trip(self, word, flip):
        if flip:
            word = word.with_orientations([(0, Direction.LEFTWARD)])
        assert parse(render_text(word)) == word


class TestFrontWordGenerator:
    def test_sample_valid_words(self):
        fwg = FrontWordGenerator(n_words=50, seed=1)
        fwg.sample()
        assert len(fwg.words) == 50
        assert all(validate(word).ok for word in fwg.words)

    def test_annular_words_keep_seam(self):
        fwg = FrontWordGenerator(n_words=50, shape=Shape.ANNULAR, seam_strands=3, seed=2)
        fwg.sample()
        for word in fwg.words:
            assert validate(word).ok
            assert strand_counts(word)[-1] == 3

    def test_reproducible(self):
        first = FrontWordGenerator(n_words=10, seed=7)
        second = FrontWordGenerator(n_words=10, seed=7)
        first.sample()
        second.sample()
        assert first.words == second.words

    def test_closed_words_have_no_seam(self):
        with pytest.raises(ValueError):
            FrontWordGenerator(shape=Shape.CLOSED, seam_strands=2)
