from datetime import timedelta

import pytest

from gucon_obligations.core import (
    NEG_INF,
    POS_INF,
    Graph,
    Iri,
    Literal,
    Ordering,
    QuotedTriple,
    Triple,
    Variable,
    add_duration,
    compare_instants,
    format_instant,
    is_ground,
    parse_datetime,
    parse_duration,
)
from gucon_obligations.exceptions import ParseError, UnsupportedDurationError
from gucon_obligations.vocab import EX, XSD_DATETIME

DOCTOR = Iri(str(EX["doctor-angelika-smith"]))
PATIENT = Iri(str(EX["patient-alice-waltz"]))
TREATS = Iri(str(EX["treats"]))
NAME = Iri(str(EX["name"]))


class TestTimeline:
    def test_offset_is_kept(self):
        instant = parse_datetime("2025-07-20T10:30:00+02:00")
        assert format_instant(instant) == "2025-07-20T10:30:00+02:00"

    def test_zero_offset_written_as_z(self):
        assert format_instant(parse_datetime("2025-07-20T08:30:00+00:00")) == "2025-07-20T08:30:00Z"

    def test_same_instant_in_different_zones(self):
        a = parse_datetime("2025-07-20T10:30:00+02:00")
        b = parse_datetime("2025-07-20T08:30:00Z")
        assert a == b
        assert compare_instants(a, b) is Ordering.EQUAL

    def test_fraction_truncated_to_milliseconds(self):
        instant = parse_datetime("2025-07-20T10:30:00.123456Z")
        assert instant.value.microsecond == 123000
        assert format_instant(instant) == "2025-07-20T10:30:00.123Z"

    def test_infinities(self):
        finite = parse_datetime("2025-07-20T10:30:00Z")
        assert parse_datetime("-INF") == NEG_INF
        assert parse_datetime("+INF") == POS_INF
        assert NEG_INF < finite < POS_INF
        assert compare_instants(POS_INF, finite) is Ordering.GREATER
        assert compare_instants(NEG_INF, NEG_INF) is Ordering.EQUAL
        assert format_instant(POS_INF) == "+INF"

    @pytest.mark.parametrize(
        "lexical, column",
        [
            ("2025-07-20T10:30:00", 20),
            ("2025-07-20 10:30:00Z", 11),
            ("25-07-20T10:30:00Z", 1),
            ("2025-07-20T10:30:00Zjunk", 21),
        ],
    )
    def test_bad_datetime_reports_column(self, lexical, column):
        with pytest.raises(ParseError) as info:
            parse_datetime(lexical)
        assert info.value.column == column
        assert info.value.line == 1

    def test_invalid_calendar_date(self):
        with pytest.raises(ParseError):
            parse_datetime("2025-02-30T10:00:00Z")

    def test_add_duration(self):
        start = parse_datetime("2025-07-20T10:30:00+02:00")
        assert add_duration(start, "PT12H") == parse_datetime("2025-07-20T22:30:00+02:00")
        assert add_duration(start, timedelta(days=1)) == parse_datetime("2025-07-21T10:30:00+02:00")

    def test_infinity_absorbs_duration(self):
        assert add_duration(POS_INF, "PT1H") == POS_INF
        assert add_duration(NEG_INF, "P3D") == NEG_INF

    def test_calendar_durations_rejected(self):
        with pytest.raises(UnsupportedDurationError):
            parse_duration("P1M")
        with pytest.raises(UnsupportedDurationError):
            parse_duration("P1Y2D")

    def test_bad_duration(self):
        with pytest.raises(ParseError):
            parse_duration("twelve hours")


class TestTerms:
    def test_datetime_literals_equal_by_instant(self):
        a = Literal("2025-07-20T10:30:00+02:00", XSD_DATETIME)
        b = Literal("2025-07-20T08:30:00Z", XSD_DATETIME)
        assert a == b
        assert hash(a) == hash(b)
        assert a.as_instant() == parse_datetime("2025-07-20T08:30:00Z")

    def test_plain_literals_equal_by_lexical_form(self):
        assert Literal.of_integer(1) != Literal("01", Literal.of_integer(1).datatype)
        assert Literal.of_string("x") == Literal("x")

    def test_quoted_triple_conversion(self):
        triple = Triple(DOCTOR, TREATS, PATIENT)
        assert triple.as_term().as_triple() == triple

    def test_is_ground(self):
        assert is_ground(QuotedTriple(DOCTOR, TREATS, PATIENT))
        assert not is_ground(QuotedTriple(Variable("doctor"), TREATS, PATIENT))


class TestGraph:
    def test_set_semantics(self):
        graph = Graph()
        assert graph.add(Triple(DOCTOR, TREATS, PATIENT))
        assert not graph.add(Triple(DOCTOR, TREATS, PATIENT))
        assert len(graph) == 1

    def test_match_with_wildcards(self):
        name = Triple(PATIENT, NAME, Literal.of_string("Alice Waltz"))
        treats = Triple(DOCTOR, TREATS, PATIENT)
        graph = Graph([name, treats])
        assert set(graph.match(None, TREATS, None)) == {treats}
        assert set(graph.match(PATIENT, None, None)) == {name}
        assert set(graph.match(None, None, PATIENT)) == {treats}
        assert set(graph.match(None, None, None)) == {name, treats}
        assert list(graph.match(DOCTOR, NAME, None)) == []

    def test_count_is_upper_bound(self):
        graph = Graph([Triple(DOCTOR, TREATS, PATIENT), Triple(PATIENT, NAME, Literal.of_string("Alice Waltz"))])
        for s, p, o in [(DOCTOR, None, None), (None, NAME, None), (DOCTOR, NAME, None)]:
            assert graph.count(s, p, o) >= len(list(graph.match(s, p, o)))

    def test_terms_include_nested(self):
        action = QuotedTriple(DOCTOR, TREATS, PATIENT)
        graph = Graph([Triple(action, NAME, Literal.of_string("x"))])
        assert {DOCTOR, TREATS, PATIENT, action, NAME} <= graph.terms()

    def test_non_ground_triple_rejected(self):
        with pytest.raises(ValueError):
            Graph().add(Triple(Variable("x"), TREATS, PATIENT))

    def test_prefixes_ignored_by_equality(self):
        triple = Triple(DOCTOR, TREATS, PATIENT)
        assert Graph([triple], {"ex": str(EX)}) == Graph([triple])

    def test_copy_is_independent(self):
        graph = Graph([Triple(DOCTOR, TREATS, PATIENT)])
        copy = graph.copy()
        copy.add(Triple(PATIENT, TREATS, DOCTOR))
        assert len(graph) == 1
        assert graph.issubset(copy)
