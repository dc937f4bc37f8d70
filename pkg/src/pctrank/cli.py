"""Batch pipeline: parse, group, rank, attribute to classes, test, report.

Exit codes: 0 on success, 1 on a fatal input or I/O problem, 2 on invalid
configuration. Identical inputs and flags produce byte-identical output
files regardless of worker count.
"""
from __future__ import annotations

import argparse
import csv
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import IO, Sequence

from .binning import (
    SchemeFormatError,
    aggregate_quantile_sum,
    fractional_attribution,
    load_scheme,
    point_attribution,
    pr6_scheme,
    quartile_scheme,
    scheme_expected_value,
)
from .ingest import ParseError, ParseReport, group_documents, parse_csv, parse_wos
from .kernels import BACKEND
from .model import (
    ClassAttribution,
    ClassScheme,
    CountingRule,
    Document,
    QuantileResult,
    ReferenceSet,
    SchemeClass,
)
from .quantile import quantile_reference_set
from .stats import test_percentiles_vs_median, test_scores_vs_baseline

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONFIG = 2

_RULES = {
    "lb": CountingRule.CITED_LESS,
    "rousseau": CountingRule.CITED_LESS_OR_EQUAL,
    "mid": CountingRule.MIDPOINT,
}
_GROUP_TOKENS = {
    "source": "source",
    "year": "year",
    "doctype": "doc_type",
    "doc_type": "doc_type",
}

#: Fixed-point places for percentile columns.
PERCENT_PLACES = 6


@dataclass(frozen=True)
class RunConfig:
    """Everything one pipeline run needs, resolved from CLI flags."""

    input_path: Path
    input_format: str = "wos"
    rule: CountingRule = CountingRule.MIDPOINT
    scheme_choice: str = "pr6"
    group_by: tuple[str, ...] = ("source", "year", "doc_type")
    fractional: bool = True
    out_path: Path = Path("results.csv")
    summary_path: Path = Path("summary.txt")
    csv_id: str = "id"
    csv_tc: str = "tc"
    csv_group: tuple[str, ...] = ()
    precision: int | None = None
    workers: int = 1

    @property
    def score_places(self) -> int:
        return self.precision if self.precision is not None else 2

    @property
    def fraction_places(self) -> int:
        return self.precision if self.precision is not None else 6


@dataclass(frozen=True)
class ResultRow:
    """One output row: a document with its rank, attribution and class."""

    document: Document
    result: QuantileResult
    attribution: ClassAttribution
    scheme_class: SchemeClass


def format_fraction(value, places: int) -> str:
    """Fixed-point decimal rendering of an exact rational, half away from zero.

    Pure integer arithmetic, so output bytes never depend on platform
    floating-point behavior.
    """
    value = Fraction(value)
    sign = "-" if value < 0 else ""
    scaled = abs(value) * 10**places
    whole, rem = divmod(scaled.numerator, scaled.denominator)
    if 2 * rem >= scaled.denominator:
        whole += 1
    digits = str(whole)
    if places:
        digits = digits.rjust(places + 1, "0")
        return f"{sign}{digits[:-places]}.{digits[-places:]}"
    return sign + digits


def _process_set(
    ref_set: ReferenceSet, scheme: ClassScheme, rule: CountingRule, fractional: bool
) -> list[ResultRow]:
    results = quantile_reference_set(ref_set)
    rows = []
    for doc, result in zip(ref_set.members, results):
        attribution = fractional_attribution(result.interval, scheme)
        if fractional:
            cls = attribution.rounded_class
        else:
            cls = point_attribution(result.percentile(rule), scheme)
        rows.append(ResultRow(doc, result, attribution, cls))
    return rows


def write_results_csv(
    rows: Sequence[ResultRow], scheme: ClassScheme, out: IO[str], config: RunConfig
) -> None:
    """Write one CSV row per document, in input order."""
    writer = csv.writer(out, lineterminator="\n")
    header = [
        "id",
        "group",
        "tc",
        "n",
        "below",
        "tied",
        "p_lb",
        "p_mid",
        "p_rousseau",
        "interval_lo",
        "interval_hi",
        "scheme_score",
        "scheme_class",
    ]
    header += [f"frac_{i}" for i in range(1, len(scheme.classes) + 1)]
    writer.writerow(header)
    for row in rows:
        result = row.result
        record = [
            row.document.id,
            result.group.label(),
            str(row.document.times_cited),
            str(result.n),
            str(result.below),
            str(result.tied),
            format_fraction(result.p_cited_less, PERCENT_PLACES),
            format_fraction(result.p_midpoint, PERCENT_PLACES),
            format_fraction(result.p_cited_leq, PERCENT_PLACES),
            format_fraction(result.interval.lo, PERCENT_PLACES),
            format_fraction(result.interval.hi, PERCENT_PLACES),
            format_fraction(row.attribution.score, config.score_places),
            str(row.scheme_class.value),
        ]
        record += [
            format_fraction(f, config.fraction_places) for f in row.attribution.fractions
        ]
        writer.writerow(record)


def _summary_block(
    out: IO[str],
    title: str,
    rows: Sequence[ResultRow],
    scheme: ClassScheme,
    rule: CountingRule,
    baseline_text: str,
) -> None:
    results = [r.result for r in rows]
    scores = [r.attribution.score for r in rows]
    n = len(rows)
    mean_midpoint = sum((r.p_midpoint for r in results), Fraction(0)) / n
    vs_median = test_percentiles_vs_median(results, rule)
    vs_baseline = test_scores_vs_baseline(scores, scheme)
    out.write(f"{title}\n")
    out.write(f"  n: {n}\n")
    if n == 1:
        out.write("  note: n=1, maximum uncertainty (interval width 100)\n")
    out.write(
        f"  quantile sum ({rule.value}): "
        f"{format_fraction(aggregate_quantile_sum(results, rule), PERCENT_PLACES)}\n"
    )
    out.write(f"  mean midpoint: {format_fraction(mean_midpoint, PERCENT_PLACES)}\n")
    out.write(
        f"  wilcoxon vs 50: p={vs_median.p_two_sided:.6f}"
        f" method={vs_median.method.value}"
        f" w+={vs_median.w_plus:.1f} w-={vs_median.w_minus:.1f}"
        f" n_nonzero={vs_median.n_nonzero}\n"
    )
    out.write(
        f"  scheme score vs {baseline_text}: p={vs_baseline.p_two_sided:.6f}"
        f" method={vs_baseline.method.value}"
        f" w+={vs_baseline.w_plus:.1f} w-={vs_baseline.w_minus:.1f}"
        f" n_nonzero={vs_baseline.n_nonzero}\n"
    )


def write_summary(
    grouped_rows: Sequence[tuple[ReferenceSet, Sequence[ResultRow]]],
    scheme: ClassScheme,
    out: IO[str],
    config: RunConfig,
) -> None:
    """Per-group and batch-level statistics blocks."""
    baseline = format_fraction(scheme_expected_value(scheme), 2)
    out.write("percentile-rank summary\n")
    out.write(f"input: {config.input_path}\n")
    out.write(f"format: {config.input_format}\n")
    out.write(f"counting rule: {config.rule.value}\n")
    out.write(f"scheme: {scheme.name} (random-attribution baseline {baseline})\n")
    out.write(f"attribution: {'fractional' if config.fractional else 'point'}\n")
    grouping = ", ".join(config.group_by) if config.group_by else "(none)"
    out.write(f"grouping: {grouping}\n")
    out.write(f"kernel backend: {BACKEND}\n")
    out.write(
        "normal approximation: tie-corrected variance,"
        " continuity-corrected tail, z reported without correction\n"
    )
    total = sum(len(rows) for _, rows in grouped_rows)
    out.write(f"documents: {total}\n")
    out.write(f"reference sets: {len(grouped_rows)}\n")
    for ref_set, rows in grouped_rows:
        out.write("\n")
        _summary_block(
            out, f"group: {ref_set.key.label()}", rows, scheme, config.rule, baseline
        )
    all_rows = [row for _, rows in grouped_rows for row in rows]
    out.write("\n")
    _summary_block(out, "batch:", all_rows, scheme, config.rule, baseline)


def _resolve_scheme(choice: str) -> ClassScheme:
    if choice == "pr6":
        return pr6_scheme()
    if choice == "quartiles":
        return quartile_scheme()
    path = Path(choice)
    with path.open(encoding="utf-8") as handle:
        return load_scheme(handle, name=path.stem)


def _report_diagnostics(report: ParseReport, stream: IO[str]) -> None:
    for line_no, message in sorted(report.errors + report.warnings):
        stream.write(f"LINE {line_no}: {message}\n")


def run_pipeline(config: RunConfig, stderr: IO[str] | None = None) -> int:
    """Run the full batch conversion; returns the process exit code."""
    if stderr is None:
        stderr = sys.stderr
    try:
        scheme = _resolve_scheme(config.scheme_choice)
    except (OSError, SchemeFormatError) as exc:
        stderr.write(f"error: invalid scheme {config.scheme_choice!r}: {exc}\n")
        return EXIT_CONFIG

    try:
        with config.input_path.open(encoding="utf-8-sig", newline="") as handle:
            if config.input_format == "wos":
                docs, report = parse_wos(handle)
            else:
                docs, report = parse_csv(
                    handle, config.csv_id, config.csv_tc, config.csv_group
                )
    except OSError as exc:
        stderr.write(f"error: cannot read {config.input_path}: {exc}\n")
        return EXIT_INPUT
    except (ParseError, UnicodeDecodeError) as exc:
        stderr.write(f"error: cannot parse {config.input_path}: {exc}\n")
        return EXIT_INPUT

    _report_diagnostics(report, stderr)
    if not docs:
        stderr.write(f"error: no documents parsed from {config.input_path}\n")
        return EXIT_INPUT

    ref_sets = group_documents(docs, config.group_by)

    def process(ref_set: ReferenceSet) -> list[ResultRow]:
        return _process_set(ref_set, scheme, config.rule, config.fractional)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            per_set = list(pool.map(process, ref_sets))
    else:
        per_set = [process(ref_set) for ref_set in ref_sets]

    # results are emitted in original input order, whatever the grouping
    by_id = {row.document.id: row for rows in per_set for row in rows}
    ordered_rows = [by_id[doc.id] for doc in docs]

    try:
        with config.out_path.open("w", encoding="utf-8", newline="") as out:
            write_results_csv(ordered_rows, scheme, out, config)
        with config.summary_path.open("w", encoding="utf-8", newline="") as out:
            write_summary(list(zip(ref_sets, per_set)), scheme, out, config)
    except OSError as exc:
        stderr.write(f"error: cannot write output: {exc}\n")
        return EXIT_INPUT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pctrank",
        description=(
            "Convert times-cited counts into percentile ranks within reference"
            " sets, attribute them to a class scheme, and test against"
            " expected-value baselines."
        ),
    )
    parser.add_argument("--input", required=True, type=Path, help="input file")
    parser.add_argument(
        "--format", choices=("wos", "csv"), default="wos", help="input format"
    )
    parser.add_argument(
        "--rule",
        choices=sorted(_RULES),
        default="mid",
        help="counting rule: lb (cited less), rousseau (cited less or equal),"
        " mid (midpoint, default)",
    )
    parser.add_argument(
        "--scheme",
        default="pr6",
        help="class scheme: pr6, quartiles, or the path of a scheme file",
    )
    parser.add_argument(
        "--group-by",
        default="source,year,doctype",
        help="comma-separated grouping attributes (source, year, doctype);"
        " pass an empty value for one global reference set",
    )
    parser.add_argument(
        "--fractional",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="attribute the uncertainty interval fractionally (default);"
        " --no-fractional assigns the class of the rule's percentile instead",
    )
    parser.add_argument("--out", type=Path, default=Path("results.csv"))
    parser.add_argument("--summary", type=Path, default=Path("summary.txt"))
    parser.add_argument("--csv-id", default="id", help="CSV column with the document id")
    parser.add_argument("--csv-tc", default="tc", help="CSV column with times cited")
    parser.add_argument(
        "--csv-group",
        default="",
        help="comma-separated CSV columns for source, year, doctype (in that"
        " order; leave a position empty to skip it)",
    )
    parser.add_argument(
        "--precision",
        type=int,
        default=None,
        help="decimal places for scores and class fractions (defaults: 2 and 6)",
    )
    parser.add_argument(
        "--workers", type=int, default=1, help="reference-set worker threads"
    )
    return parser


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)

    group_by = []
    for token in args.group_by.split(","):
        token = token.strip()
        if not token:
            continue
        attr = _GROUP_TOKENS.get(token.lower())
        if attr is None:
            parser.error(
                f"unknown grouping attribute {token!r}"
                " (expected source, year, or doctype)"
            )
        if attr not in group_by:
            group_by.append(attr)

    csv_group = tuple(name.strip() for name in args.csv_group.split(",")) if args.csv_group else ()
    if args.precision is not None and args.precision < 0:
        parser.error("--precision must be >= 0")
    if args.workers < 1:
        parser.error("--workers must be >= 1")

    return RunConfig(
        input_path=args.input,
        input_format=args.format,
        rule=_RULES[args.rule],
        scheme_choice=args.scheme,
        group_by=tuple(group_by),
        fractional=args.fractional,
        out_path=args.out,
        summary_path=args.summary,
        csv_id=args.csv_id,
        csv_tc=args.csv_tc,
        csv_group=csv_group,
        precision=args.precision,
        workers=args.workers,
    )


def main(argv: Sequence[str] | None = None) -> int:
    config = parse_args(argv)
    return run_pipeline(config)


if __name__ == "__main__":
    sys.exit(main())
