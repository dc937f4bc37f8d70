"""Parsers for field-tagged and CSV citation exports, plus set grouping.

The field-tagged reader understands the plain-text export convention of
two-character tags at column 0 (``PT``, ``DT``, ``PY``, ``SO``, ``TC``,
``UT``, ...), continuation lines indented by three spaces, ``ER`` as the
record terminator and ``EF`` as the file terminator. Documents with a
missing times-cited field are kept with a count of 0 and a warning:
non-cited documents must not silently vanish from a citation analysis.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

from .model import (
    GROUP_ATTRIBUTES,
    UNKNOWN_VALUE,
    Document,
    GroupKey,
    ReferenceSet,
    group_value,
)


class ParseError(ValueError):
    """Raised for fatal input problems (unusable header, missing columns)."""


@dataclass
class ParseReport:
    """Counts and line-tagged diagnostics from one parse run."""

    records_read: int = 0
    documents_emitted: int = 0
    warnings: list[tuple[int, str]] = field(default_factory=list)
    errors: list[tuple[int, str]] = field(default_factory=list)

    def warn(self, line_no: int, message: str) -> None:
        self.warnings.append((line_no, message))

    def error(self, line_no: int, message: str) -> None:
        self.errors.append((line_no, message))


def _is_tag_line(line: str) -> bool:
    return (
        len(line) >= 3
        and line[2] == " "
        and line[0].isascii()
        and line[1].isascii()
        and (line[0].isupper() or line[0].isdigit())
        and (line[1].isupper() or line[1].isdigit())
    )


class _IdAllocator:
    """Hands out batch-unique ids, suffixing duplicates with #2, #3, ..."""

    def __init__(self) -> None:
        self._seen: dict[str, int] = {}

    def claim(self, wanted: str) -> tuple[str, bool]:
        if wanted not in self._seen:
            self._seen[wanted] = 1
            return wanted, False
        while True:
            self._seen[wanted] += 1
            candidate = f"{wanted}#{self._seen[wanted]}"
            if candidate not in self._seen:
                self._seen[candidate] = 1
                return candidate, True


def parse_wos(stream: Iterable[str]) -> tuple[list[Document], ParseReport]:
    """Parse a field-tagged export into documents plus a diagnostic report.

    One document is emitted per ``ER``-delimited record: times cited from
    ``TC``, year from ``PY``, source from ``SO``, type from ``DT`` and id
    from ``UT`` (falling back to source:year:sequence). A record with a
    non-integer or negative ``TC``, or with an unrecognizable line, is
    skipped with an error; a missing ``TC`` yields a warning and a count
    of 0.
    """
    report = ParseReport()
    docs: list[Document] = []
    ids = _IdAllocator()

    fields: dict[str, list[str]] = {}
    tag_lines: dict[str, int] = {}
    current_tag: str | None = None
    bad_line: int | None = None
    last_line = 0

    def finalize(end_line: int) -> None:
        nonlocal fields, tag_lines, current_tag, bad_line
        report.records_read += 1
        try:
            if bad_line is not None:
                report.error(bad_line, "unrecognizable line; record skipped")
                return
            if not fields:
                report.warn(end_line, "empty record")
                return

            def text_of(tag: str) -> str | None:
                if tag not in fields:
                    return None
                return " ".join(fields[tag])

            tc_text = text_of("TC")
            if tc_text is None:
                report.warn(end_line, "missing TC; times cited set to 0")
                times_cited = 0
            else:
                try:
                    times_cited = int(tc_text.strip())
                except ValueError:
                    report.error(
                        tag_lines["TC"],
                        f"times cited is not an integer: {tc_text.strip()!r}; record skipped",
                    )
                    return
                if times_cited < 0:
                    report.error(
                        tag_lines["TC"],
                        f"times cited is negative: {times_cited}; record skipped",
                    )
                    return

            year: int | None = None
            py_text = text_of("PY")
            if py_text is not None:
                try:
                    year = int(py_text.strip())
                except ValueError:
                    report.warn(
                        tag_lines["PY"],
                        f"publication year is not an integer: {py_text.strip()!r}; year dropped",
                    )

            source = text_of("SO")
            doc_type = text_of("DT")
            ut_text = text_of("UT")
            if ut_text is not None and ut_text.strip():
                wanted = ut_text.strip()
            else:
                wanted = ":".join(
                    (
                        source if source else UNKNOWN_VALUE,
                        str(year) if year is not None else UNKNOWN_VALUE,
                        str(report.records_read),
                    )
                )
            doc_id, renamed = ids.claim(wanted)
            if renamed:
                report.warn(end_line, f"duplicate id {wanted!r}; renamed to {doc_id!r}")

            docs.append(
                Document(
                    id=doc_id,
                    times_cited=times_cited,
                    source=source,
                    year=year,
                    doc_type=doc_type,
                )
            )
            report.documents_emitted += 1
        finally:
            fields = {}
            tag_lines = {}
            current_tag = None
            bad_line = None

    for line_no, raw in enumerate(stream, start=1):
        last_line = line_no
        line = raw.rstrip("\r\n")
        if line_no == 1:
            line = line.lstrip("﻿")
        if not line.strip():
            continue
        if line == "EF" or (line.startswith("EF ") and _is_tag_line(line)):
            break
        if line == "ER" or (line.startswith("ER ") and _is_tag_line(line)):
            finalize(line_no)
            continue
        if _is_tag_line(line):
            tag, value = line[:2], line[3:]
            if tag in fields:
                report.warn(line_no, f"duplicate tag {tag}; later value ignored")
                current_tag = None
                continue
            fields[tag] = [value]
            tag_lines[tag] = line_no
            current_tag = tag
            continue
        if line.startswith("   "):
            if current_tag is None:
                report.warn(line_no, "continuation line without a field; ignored")
            else:
                fields[current_tag].append(line[3:])
            continue
        if fields:
            # malformed line inside an open record poisons the whole record
            if bad_line is None:
                bad_line = line_no
        else:
            report.warn(line_no, f"unrecognizable line outside any record: {line[:40]!r}")

    leftover = set(fields) - {"FN", "VR"}  # file-header tags are not a record
    if leftover or bad_line is not None:
        report.warn(last_line, "unterminated record discarded")

    return docs, report


def parse_csv(
    stream: IO[str],
    id_column: str,
    tc_column: str,
    group_columns: Sequence[str] = (),
) -> tuple[list[Document], ParseReport]:
    """Parse a CSV export with a header row into documents plus a report.

    ``group_columns`` names up to three columns holding, in order, the
    source, year and document type; an empty name skips that attribute.
    Rows with a non-integer or negative times-cited value are skipped with
    an error. A missing named column is fatal.
    """
    if len(group_columns) > len(GROUP_ATTRIBUTES):
        raise ParseError(
            f"at most {len(GROUP_ATTRIBUTES)} group columns are supported"
        )
    report = ParseReport()
    docs: list[Document] = []
    ids = _IdAllocator()

    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise ParseError("input has no header row")
    if header and header[0].startswith("﻿"):
        header[0] = header[0].lstrip("﻿")

    def column_index(name: str) -> int:
        try:
            return header.index(name)
        except ValueError:
            raise ParseError(f"column {name!r} not found in header") from None

    id_idx = column_index(id_column)
    tc_idx = column_index(tc_column)
    group_idx = [
        (attr, column_index(name))
        for attr, name in zip(GROUP_ATTRIBUTES, group_columns)
        if name
    ]

    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        line_no = reader.line_num
        report.records_read += 1
        needed = max(
            [id_idx, tc_idx] + [idx for _, idx in group_idx], default=0
        )
        if len(row) <= needed:
            report.error(line_no, f"row has {len(row)} fields, expected at least {needed + 1}")
            continue
        raw_id = row[id_idx].strip()
        if not raw_id:
            report.error(line_no, "empty id; row skipped")
            continue
        tc_text = row[tc_idx].strip()
        try:
            times_cited = int(tc_text)
        except ValueError:
            report.error(
                line_no, f"times cited is not an integer: {tc_text!r}; row skipped"
            )
            continue
        if times_cited < 0:
            report.error(
                line_no, f"times cited is negative: {times_cited}; row skipped"
            )
            continue

        attrs: dict[str, str | int | None] = {
            "source": None,
            "year": None,
            "doc_type": None,
        }
        for attr, idx in group_idx:
            cell = row[idx].strip()
            if not cell:
                continue
            if attr == "year":
                try:
                    attrs[attr] = int(cell)
                except ValueError:
                    report.warn(
                        line_no, f"year is not an integer: {cell!r}; year dropped"
                    )
            else:
                attrs[attr] = cell

        doc_id, renamed = ids.claim(raw_id)
        if renamed:
            report.warn(line_no, f"duplicate id {raw_id!r}; renamed to {doc_id!r}")
        docs.append(
            Document(
                id=doc_id,
                times_cited=times_cited,
                source=attrs["source"],  # type: ignore[arg-type]
                year=attrs["year"],  # type: ignore[arg-type]
                doc_type=attrs["doc_type"],  # type: ignore[arg-type]
            )
        )
        report.documents_emitted += 1

    return docs, report


def group_documents(
    docs: Sequence[Document], keys: Sequence[str] = ()
) -> list[ReferenceSet]:
    """Partition documents into reference sets by the given attributes.

    Every document lands in exactly one set; sets come back sorted
    lexicographically by their key values. No keys means one global set.
    """
    keys = tuple(keys)
    for key in keys:
        if key not in GROUP_ATTRIBUTES:
            raise ValueError(f"unknown grouping attribute {key!r}")
    buckets: dict[tuple[str, ...], list[Document]] = {}
    for doc in docs:
        values = tuple(group_value(doc, key) for key in keys)
        buckets.setdefault(values, []).append(doc)
    return [
        ReferenceSet(GroupKey(tuple(zip(keys, values))), tuple(buckets[values]))
        for values in sorted(buckets)
    ]
