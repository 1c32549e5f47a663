import io
import json
import sys
import xml.etree.ElementTree as ET
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from legsat.cli.main import run
from legsat.cli.render import RenderSpec, parse_ascii, render_ascii, render_svg
from legsat.cli.verify import CHECKS, run_checks, to_frame
from legsat.config import Settings
from legsat.errors import ArityError, FrontSyntaxError
from legsat.families.families import GeneratorId, generate
from legsat.front_core.event import Shape, L, R
from legsat.front_core.front_word import FrontWord
from legsat.front_core.generator import FrontWordGenerator
from legsat.front_core.trace import trace_components

GENERATORS = ["unknot", "trefoil", "demo", "W", "J", "P(3)", "Q(2)", "L(1)", "Lprime(1)"]


def _random_word(seed: int, seam: int) -> FrontWord:
    sampler = FrontWordGenerator(
        n_words=1, length=10, max_strands=6,
        shape=Shape.ANNULAR if seam else Shape.CLOSED, seam_strands=seam, seed=seed)
    sampler.sample()
    return sampler.words[0]


words = st.builds(_random_word, seed=st.integers(0, 2 ** 16), seam=st.integers(0, 3))


def _stdin(monkeypatch, data: bytes) -> None:
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(data)))


class TestAscii:
    def test_unknot(self):
        assert render_ascii(FrontWord.closed([L(1), R(1)])) == "knot\n <-> \n <-> \n"

    def test_generators_round_trip(self):
        for name in GENERATORS:
            word = generate(GeneratorId.parse(name))
            assert parse_ascii(render_ascii(word)) == word

    def test_empty_words(self):
        for word in (FrontWord.closed([]), FrontWord.annular(2, [])):
            assert parse_ascii(render_ascii(word)) == word

    @settings(derandomize=True, max_examples=100, deadline=None)
    @given(words)
    def test_round_trip(self, word):
        assert parse_ascii(render_ascii(word)) == word

    def test_bad_header(self):
        with pytest.raises(ArityError):
            parse_ascii("loop\n <->\n")

    def test_unexpected_character(self):
        with pytest.raises(FrontSyntaxError):
            parse_ascii("knot\n <-?\n <->\n")


class TestSvg:
    def test_cusp_ids(self):
        svg = render_svg(trace_components(FrontWord.closed([L(1), R(1)])))
        root = ET.fromstring(svg)
        ids = [element.get("id", "") for element in root.iter()]
        assert sum(gid.startswith("cusp-") for gid in ids) == 2
        assert "component-0" in ids

    def test_options(self):
        front = trace_components(generate(GeneratorId.parse("W")))
        svg = render_svg(front, RenderSpec(scale=10, labels=True, directions=True))
        root = ET.fromstring(svg)
        ids = [element.get("id", "") for element in root.iter()]
        assert sum(gid.startswith("cusp-") for gid in ids) == 4


class TestRun:
    def test_family_into_invariants(self, capsys, monkeypatch):
        assert run(["family", "Q", "3"]) == 0
        text = capsys.readouterr().out
        assert text.startswith("pattern 6\n")
        _stdin(monkeypatch, text.encode("utf-8"))
        assert run(["invariants", "-"]) == 0
        out = capsys.readouterr().out
        assert "tb 5\n" in out
        assert "rot 0\n" in out
        assert "winding 0\n" in out

    def test_invariants_json(self, capsys, monkeypatch):
        _stdin(monkeypatch, b"knot\nL1 R1\n")
        assert run(["invariants", "-", "--json"]) == 0
        document = json.loads(capsys.readouterr().out)
        assert (document["tb"], document["rot"], document["winding"]) == (-1, 0, None)

    def test_ascii_input(self, capsys, monkeypatch):
        _stdin(monkeypatch, render_ascii(generate(GeneratorId.parse("trefoil"))).encode())
        assert run(["invariants", "-"]) == 0
        assert "tb 1\n" in capsys.readouterr().out

    def test_validate(self, capsys, monkeypatch):
        _stdin(monkeypatch, b"knot\nL1 R1\n")
        assert run(["validate", "-"]) == 0
        assert capsys.readouterr().out == "ok: 2 events\n"

    def test_validate_invalid(self, capsys, monkeypatch):
        _stdin(monkeypatch, b"knot\nX1\n")
        assert run(["validate", "-"]) == 2
        assert capsys.readouterr().out == "invalid: event 0: crossing needs two strands\n"

    def test_syntax_error(self, capsys, monkeypatch):
        _stdin(monkeypatch, b"knot\nQ9\n")
        assert run(["invariants", "-"]) == 2
        assert "legsat:" in capsys.readouterr().err

    def test_satellite_check(self, capsys, tmp_path):
        pattern, companion = tmp_path / "demo.front", tmp_path / "trefoil.front"
        pattern.write_text("pattern 3\nX1 L3 X2 X4 R3\norient 0 R\n")
        companion.write_text("knot\nL1 L3 X2 X2 X2 R1 R1\n")
        assert run(["satellite", str(pattern), str(companion), "--check"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert (report["tb_direct"], report["tb_formula"]) == (3, 3)

    def test_satellite_output(self, tmp_path):
        pattern, companion = tmp_path / "w.front", tmp_path / "unknot.front"
        pattern.write_text("pattern 2\nL1 R2 L2 X1 X3 R2\n")
        companion.write_text("knot\nL1 R1\n")
        output = tmp_path / "satellite.front"
        assert run(["satellite", str(pattern), str(companion), "-o", str(output)]) == 0
        assert output.read_text().startswith("knot\n")

    def test_bad_generator(self, capsys):
        assert run(["family", "Q", "0"]) == 1
        assert run(["family", "figure8"]) == 1

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as error:
            run(["render"])
        assert error.value.code == 1

    def test_certify(self, capsys):
        assert run(["certify", "P", "4"]) == 0
        out = capsys.readouterr().out
        assert "P(4)" in out

    def test_certify_json(self, capsys):
        assert run(["certify", "--i-max", "2", "--json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert {row["generator"] for row in rows} >= {"K", "Q(2)", "Lprime(0)"}

    def test_perturb(self, capsys, monkeypatch):
        _stdin(monkeypatch, b"knot\nL1 R1\n")
        assert run(["perturb", "-", "--steps", "5", "--seed", "3"]) == 0
        _stdin(monkeypatch, capsys.readouterr().out.encode("utf-8"))
        assert run(["invariants", "-"]) == 0
        assert "tb -1\n" in capsys.readouterr().out

    def test_render_ascii(self, capsys, monkeypatch):
        _stdin(monkeypatch, b"knot\nL1 R1\n")
        assert run(["render", "-", "--format", "ascii"]) == 0
        assert capsys.readouterr().out == "knot\n <-> \n <-> \n"

    def test_bounds_contradiction(self, capsys, monkeypatch):
        _stdin(monkeypatch, b"theorem 2\nsplit-check L_2(K) P_3(K)\n")
        assert run(["bounds", "-", "--json"]) == 0
        document = json.loads(capsys.readouterr().out)
        assert document["split_checks"] == [
            {"link": "L_2(K)", "cable": "P_3(K)", "verdict": "contradiction"}]
        assert document["contradiction"] is None
        assert document["derivation"]

    def test_bounds_scenario_error(self, capsys, monkeypatch):
        _stdin(monkeypatch, b"node A components 1\nsb B 1 0\n")
        assert run(["bounds", "-"]) == 2
        assert "line 2" in capsys.readouterr().err


class TestVerify:
    def test_selected_checks(self):
        selected = [check for check in CHECKS
                    if check.name in ("worked-example", "calibration", "boundary-links")]
        outcomes = run_checks(Settings(verify_workers=2), selected)
        assert [outcome.check for outcome in outcomes] == [
            "worked-example", "calibration", "boundary-links"]
        assert all(outcome.passed for outcome in outcomes)
        frame = to_frame(outcomes)
        assert frame.shape == (3, 5)
        assert (frame["status"] == "pass").all()

    def test_randomized_checks(self):
        selected = [check for check in CHECKS
                    if check.name in ("composition-random", "move-invariance")]
        outcomes = run_checks(Settings(random_cases=10, move_cases=20), selected)
        assert all(outcome.passed for outcome in outcomes)
