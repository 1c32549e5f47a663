import pytest
from pydantic import ValidationError
from legsat.errors import IndexOutOfRange
from legsat.families.families import (
    GeneratorId, GeneratorName, certify, certify_all, expected_invariants, generate)
from legsat.front_core.event import Shape
from legsat.front_core.validation import validate
from legsat.invariants.invariants import invariants_of


def _gen(text: str):
    return generate(GeneratorId.parse(text))


class TestGeneratorId:
    def test_parse(self):
        assert GeneratorId.parse("Q(3)") == GeneratorId(name=GeneratorName.Q, index=3)
        assert GeneratorId.parse(" trefoil ") == GeneratorId(name=GeneratorName.TREFOIL)

    def test_str(self):
        assert str(GeneratorId.parse("Lprime(2)")) == "Lprime(2)"
        assert str(GeneratorId.parse("W")) == "W"

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            GeneratorId.parse("Q(0)")
        with pytest.raises(IndexOutOfRange):
            GeneratorId.parse("P")

    def test_index_on_fixed_diagram(self):
        with pytest.raises(IndexOutOfRange):
            GeneratorId.parse("unknot(2)")

    def test_unknown_name(self):
        with pytest.raises(ValidationError):
            GeneratorId.parse("figure8")


class TestGenerate:
    def test_shapes(self):
        for name in ("unknot", "trefoil", "J", "K"):
            assert _gen(name).shape is Shape.CLOSED
        for name in ("demo", "W", "P(2)", "Q(2)", "L(1)", "Lprime(1)"):
            assert _gen(name).shape is Shape.ANNULAR

    def test_seam_strands(self):
        assert _gen("P(5)").seam_strands == 5
        assert _gen("Q(4)").seam_strands == 8
        assert _gen("L(3)").seam_strands == 8

    def test_all_valid(self):
        for name in ("unknot", "trefoil", "demo", "W", "J", "K",
                     "P(1)", "P(6)", "Q(1)", "Q(6)", "L(0)", "L(6)", "Lprime(6)"):
            assert validate(_gen(name)).ok

    def test_companion_k(self):
        report = invariants_of(_gen("K"))
        assert (report.tb, report.rot, report.components) == (0, 1, 1)

    def test_clasped(self):
        report = invariants_of(_gen("Q(1)"))
        assert (report.tb, report.rot, report.winding) == (1, 0, 0)

    def test_doubled_cable(self):
        report = invariants_of(_gen("L(5)"))
        assert (report.tb, report.rot, report.winding, report.components) == (10, 0, 0, 2)
        assert report.linking == [[0, 0], [0, 0]]

    def test_doubled_cable_same_orientation(self):
        report = invariants_of(_gen("Lprime(2)"))
        assert (report.tb, report.winding, report.components) == (4, 6, 2)


class TestCertify:
    def test_expected_invariants(self):
        assert expected_invariants(GeneratorId.parse("P(4)")) == {
            "tb": 3, "rot": 0, "winding": 4, "components": 1}

    def test_fixed(self):
        for name in ("unknot", "trefoil", "demo", "W", "J", "K"):
            assert certify(GeneratorId.parse(name)).passed

    def test_large_index(self):
        assert certify(GeneratorId.parse("P(10)")).passed
        assert certify(GeneratorId.parse("Q(10)")).passed

    def test_frame(self):
        frame = certify(GeneratorId.parse("Q(3)")).to_frame()
        assert frame.columns.tolist() == ["generator", "invariant", "expected", "computed"]
        assert frame.shape == (4, 4)
        assert (frame["generator"] == "Q(3)").all()
        assert frame.set_index("invariant").loc["tb", "computed"] == 5

    def test_certify_all(self):
        reports = certify_all(5)
        assert len(reports) == 6 + 5 + 5 + 6 + 6
        assert all(report.passed for report in reports)

    def test_certify_all_up_to_thirty(self):
        reports = certify_all(30)
        assert len(reports) == 6 + 30 + 30 + 31 + 31
        failed = [str(report.generator) for report in reports if not report.passed]
        assert failed == []
