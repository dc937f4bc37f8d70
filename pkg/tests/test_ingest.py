"""Field-tagged and CSV parsing, diagnostics, and reference-set grouping."""
from __future__ import annotations

import io
import random

import pytest

from pctrank.ingest import (
    ParseError,
    group_documents,
    parse_csv,
    parse_wos,
)
from pctrank.model import Document

from conftest import DATA_DIR


def parse_text(text: str):
    return parse_wos(io.StringIO(text))


def record(tc="14", ut="WOS:1", extra=()):
    lines = ["PT J", "SO JOURNAL A", "DT Article", "PY 2010"]
    if tc is not None:
        lines.append(f"TC {tc}")
    lines.append(f"UT {ut}")
    lines.extend(extra)
    lines.append("ER")
    return "\n".join(lines) + "\n"


class TestParseWos:
    def test_two_records(self):
        text = record(tc="14", ut="WOS:1") + record(tc="0", ut="WOS:2") + "EF\n"
        docs, report = parse_text(text)
        assert [d.times_cited for d in docs] == [14, 0]
        assert report.records_read == 2
        assert report.documents_emitted == 2
        assert report.errors == []

    def test_fixture_with_missing_tc_and_continuation(self):
        with open(DATA_DIR / "fixture_mixed5.txt", encoding="utf-8") as fh:
            docs, report = parse_wos(fh)
        assert len(docs) == 5
        assert report.documents_emitted == 5
        assert len(report.warnings) == 1
        assert report.errors == []
        by_id = {d.id: d for d in docs}
        assert by_id["WOS:MIX0000000002"].times_cited == 0
        assert (
            by_id["WOS:MIX0000000003"].source
            == "INTERNATIONAL JOURNAL OF VERY LONG TITLES AND SUBTITLES"
        )

    def test_missing_tc_warns_and_keeps_document(self):
        docs, report = parse_text(record(tc=None) + "EF\n")
        assert docs[0].times_cited == 0
        assert len(report.warnings) == 1
        assert "TC" in report.warnings[0][1]

    def test_non_integer_tc_skips_record_naming_line(self):
        text = record(tc="fourteen", ut="WOS:1") + record(tc="3", ut="WOS:2") + "EF\n"
        docs, report = parse_text(text)
        assert [d.id for d in docs] == ["WOS:2"]
        assert len(report.errors) == 1
        line_no, message = report.errors[0]
        assert "fourteen" in message
        assert text.splitlines()[line_no - 1] == "TC fourteen"

    def test_negative_tc_skips_record(self):
        docs, report = parse_text(record(tc="-2") + "EF\n")
        assert docs == []
        assert len(report.errors) == 1

    def test_fields_extracted(self):
        docs, _ = parse_text(record() + "EF\n")
        doc = docs[0]
        assert doc.source == "JOURNAL A"
        assert doc.doc_type == "Article"
        assert doc.year == 2010
        assert doc.id == "WOS:1"

    def test_malformed_year_warns(self):
        text = "PT J\nPY day one\nTC 3\nUT WOS:1\nER\nEF\n"
        docs, report = parse_text(text)
        assert docs[0].year is None
        assert any("year" in msg for _, msg in report.warnings)

    def test_missing_ut_falls_back_to_source_year_sequence(self):
        text = "PT J\nSO J A\nPY 2010\nTC 3\nER\nEF\n"
        docs, _ = parse_text(text)
        assert docs[0].id == "J A:2010:1"

    def test_duplicate_ut_suffixed_and_kept(self):
        text = record(tc="1", ut="WOS:X") + record(tc="2", ut="WOS:X") + "EF\n"
        docs, report = parse_text(text)
        assert [d.id for d in docs] == ["WOS:X", "WOS:X#2"]
        assert any("duplicate id" in msg for _, msg in report.warnings)

    def test_bom_tolerated(self):
        text = "﻿" + record() + "EF\n"
        docs, report = parse_text(text)
        assert len(docs) == 1
        assert report.errors == []

    def test_crlf_tolerated(self):
        text = record().replace("\n", "\r\n") + "EF\r\n"
        docs, _ = parse_text(text)
        assert docs[0].times_cited == 14

    def test_malformed_line_inside_record_skips_it(self):
        text = (
            "PT J\nbroken line here\nTC 3\nUT WOS:1\nER\n"
            + record(tc="5", ut="WOS:2")
            + "EF\n"
        )
        docs, report = parse_text(text)
        assert [d.id for d in docs] == ["WOS:2"]
        assert len(report.errors) == 1
        assert report.errors[0][0] == 2

    def test_stray_line_outside_record_warns(self):
        text = "stray prose\n" + record() + "EF\n"
        docs, report = parse_text(text)
        assert len(docs) == 1
        assert any("unrecognizable" in msg for _, msg in report.warnings)

    def test_unterminated_record_discarded_with_warning(self):
        docs, report = parse_text("PT J\nTC 4\nUT WOS:1\n")
        assert docs == []
        assert any("unterminated" in msg for _, msg in report.warnings)

    def test_content_after_ef_ignored(self):
        text = record(ut="WOS:1") + "EF\n" + record(tc="9", ut="WOS:2")
        docs, _ = parse_text(text)
        assert [d.id for d in docs] == ["WOS:1"]

    def test_duplicate_tag_keeps_first_value(self):
        docs, report = parse_text(record(extra=("TC 99",)) + "EF\n")
        assert docs[0].times_cited == 14
        assert any("duplicate tag" in msg for _, msg in report.warnings)

    def test_empty_record_warns(self):
        docs, report = parse_text("ER\n" + record() + "EF\n")
        assert len(docs) == 1
        assert report.records_read == 2
        assert any("empty record" in msg for _, msg in report.warnings)

    def test_parse_is_deterministic(self):
        text = (DATA_DIR / "fixture_mixed5.txt").read_text(encoding="utf-8")
        first = parse_text(text)
        second = parse_text(text)
        assert first[0] == second[0]
        assert first[1] == second[1]


def serialize_documents(docs) -> str:
    """Emit documents in the field-tagged format, for the round-trip check."""
    chunks = ["FN Generated fixture", "VR 1.0"]
    for doc in docs:
        chunks.append("PT J")
        if doc.doc_type is not None:
            chunks.append(f"DT {doc.doc_type}")
        if doc.source is not None:
            chunks.append(f"SO {doc.source}")
        if doc.year is not None:
            chunks.append(f"PY {doc.year}")
        chunks.append(f"TC {doc.times_cited}")
        chunks.append(f"UT {doc.id}")
        chunks.append("ER")
        chunks.append("")
    chunks.append("EF")
    return "\n".join(chunks) + "\n"


def test_round_trip_recovers_fields():
    rng = random.Random(2012)
    sources = ["JOURNAL OF TESTING", "ACTA EXEMPLI", None]
    types = ["Article", "Review", None]
    docs = [
        Document(
            id=f"WOS:{i:06d}",
            times_cited=rng.randint(0, 200),
            source=rng.choice(sources),
            year=rng.choice([2009, 2010, None]),
            doc_type=rng.choice(types),
        )
        for i in range(40)
    ]
    parsed, report = parse_text(serialize_documents(docs))
    assert report.errors == []
    assert len(parsed) == len(docs)
    for original, back in zip(docs, parsed):
        assert back.times_cited == original.times_cited
        assert back.year == original.year
        assert back.source == original.source
        assert back.doc_type == original.doc_type


class TestParseCsv:
    def test_basic_rows(self):
        docs, report = parse_csv(io.StringIO("id,tc\na,3\nb,0\n"), "id", "tc")
        assert [(d.id, d.times_cited) for d in docs] == [("a", 3), ("b", 0)]
        assert report.errors == []

    def test_negative_tc_skipped_with_error(self):
        docs, report = parse_csv(io.StringIO("id,tc\nc,-1\nd,2\n"), "id", "tc")
        assert [d.id for d in docs] == ["d"]
        assert len(report.errors) == 1

    def test_non_integer_tc_skipped(self):
        docs, report = parse_csv(io.StringIO("id,tc\nc,many\n"), "id", "tc")
        assert docs == []
        assert len(report.errors) == 1

    def test_quoted_group_value_preserves_comma(self):
        stream = io.StringIO('id,tc,journal\na,3,"Journal, of X"\n')
        docs, _ = parse_csv(stream, "id", "tc", ["journal"])
        assert docs[0].source == "Journal, of X"

    def test_missing_column_is_fatal(self):
        with pytest.raises(ParseError, match="'cites'"):
            parse_csv(io.StringIO("id,tc\na,3\n"), "id", "cites")

    def test_empty_input_is_fatal(self):
        with pytest.raises(ParseError, match="header"):
            parse_csv(io.StringIO(""), "id", "tc")

    def test_group_columns_map_positionally(self):
        stream = io.StringIO("id,tc,j,y,t\na,3,Journal A,2010,Review\n")
        docs, _ = parse_csv(stream, "id", "tc", ["j", "y", "t"])
        doc = docs[0]
        assert doc.source == "Journal A"
        assert doc.year == 2010
        assert doc.doc_type == "Review"

    def test_empty_group_position_skips_attribute(self):
        stream = io.StringIO("id,tc,t\na,3,Review\n")
        docs, _ = parse_csv(stream, "id", "tc", ["", "", "t"])
        assert docs[0].source is None
        assert docs[0].doc_type == "Review"

    def test_bad_year_warns(self):
        stream = io.StringIO("id,tc,y\na,3,MMX\n")
        docs, report = parse_csv(stream, "id", "tc", ["", "y"])
        assert docs[0].year is None
        assert len(report.warnings) == 1

    def test_too_many_group_columns_rejected(self):
        with pytest.raises(ParseError, match="group columns"):
            parse_csv(io.StringIO("id,tc\n"), "id", "tc", ["a", "b", "c", "d"])

    def test_short_row_skipped_with_error(self):
        docs, report = parse_csv(io.StringIO("id,tc\na\nb,2\n"), "id", "tc")
        assert [d.id for d in docs] == ["b"]
        assert len(report.errors) == 1

    def test_duplicate_id_suffixed(self):
        docs, report = parse_csv(io.StringIO("id,tc\na,1\na,2\n"), "id", "tc")
        assert [d.id for d in docs] == ["a", "a#2"]
        assert len(report.warnings) == 1


class TestGroupDocuments:
    def test_ten_reviews_form_one_set(self):
        docs = [
            Document(
                id=f"r{i}",
                times_cited=i,
                source="ANNUAL REVIEWS",
                year=2011,
                doc_type="Review",
            )
            for i in range(10)
        ]
        sets = group_documents(docs, ("source", "year", "doc_type"))
        assert len(sets) == 1
        assert sets[0].n == 10

    def test_no_keys_gives_one_global_set(self):
        docs = [Document(id=f"d{i}", times_cited=i, year=2000 + i) for i in range(5)]
        (only,) = group_documents(docs)
        assert only.n == 5
        assert only.key.label() == "(all)"

    def test_split_by_year(self):
        docs = [
            Document(id=f"d{i}", times_cited=i, year=2010 + i % 2) for i in range(7)
        ]
        sets = group_documents(docs, ("year",))
        assert [s.key.parts[0][1] for s in sets] == ["2010", "2011"]
        assert sum(s.n for s in sets) == 7

    def test_doc_type_grouping_is_case_insensitive(self):
        docs = [
            Document(id="a", times_cited=1, doc_type="Review"),
            Document(id="b", times_cited=2, doc_type="REVIEW"),
        ]
        sets = group_documents(docs, ("doc_type",))
        assert len(sets) == 1

    def test_missing_attribute_groups_as_unknown(self):
        docs = [
            Document(id="a", times_cited=1),
            Document(id="b", times_cited=2, source="J"),
        ]
        sets = group_documents(docs, ("source",))
        assert [s.key.parts[0][1] for s in sets] == ["(unknown)", "J"]

    def test_partition_property(self):
        rng = random.Random(11)
        docs = [
            Document(
                id=f"d{i}",
                times_cited=rng.randint(0, 9),
                source=rng.choice(["A", "B", None]),
                year=rng.choice([2010, 2011, None]),
                doc_type=rng.choice(["Article", "Review", None]),
            )
            for i in range(120)
        ]
        for keys in (
            (),
            ("source",),
            ("year",),
            ("doc_type",),
            ("source", "year"),
            ("source", "year", "doc_type"),
        ):
            sets = group_documents(docs, keys)
            assert sum(s.n for s in sets) == len(docs)
            ids = [d.id for s in sets for d in s.members]
            assert sorted(ids) == sorted(d.id for d in docs)

    def test_set_order_is_lexicographic_and_stable(self):
        docs = [
            Document(id="a", times_cited=1, source="ZEBRA"),
            Document(id="b", times_cited=2, source="ALPHA"),
        ]
        sets = group_documents(docs, ("source",))
        assert [s.key.parts[0][1] for s in sets] == ["ALPHA", "ZEBRA"]
        assert group_documents(docs, ("source",)) == sets

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="grouping attribute"):
            group_documents([Document(id="a", times_cited=1)], ("title",))
