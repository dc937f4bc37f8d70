"""Class schemes and the attribution of percentile results to them.

A scheme partitions [0, 100] percent into valued classes (half-open
[lower, upper), top class closed at 100). A document is attributed either
fractionally, spreading its uncertainty interval over the classes it
overlaps, or by point, from a single percentile value.
"""
from __future__ import annotations

import io
from fractions import Fraction
from typing import IO, Iterable

from .model import (
    ClassAttribution,
    ClassScheme,
    CountingRule,
    QuantileResult,
    SchemeClass,
    UncertaintyInterval,
)


class SchemeFormatError(ValueError):
    """Raised when a scheme definition file is malformed."""


_PR6 = ClassScheme(
    name="PR6",
    classes=(
        SchemeClass("bottom-50%", Fraction(0), Fraction(50), 1),
        SchemeClass("top-50%", Fraction(50), Fraction(75), 2),
        SchemeClass("top-25%", Fraction(75), Fraction(90), 3),
        SchemeClass("top-10%", Fraction(90), Fraction(95), 4),
        SchemeClass("top-5%", Fraction(95), Fraction(99), 5),
        SchemeClass("top-1%", Fraction(99), Fraction(100), 6),
    ),
)

_QUARTILES = ClassScheme(
    name="quartiles",
    classes=(
        SchemeClass("Q1", Fraction(0), Fraction(25), 1),
        SchemeClass("Q2", Fraction(25), Fraction(50), 2),
        SchemeClass("Q3", Fraction(50), Fraction(75), 3),
        SchemeClass("Q4", Fraction(75), Fraction(100), 4),
    ),
)


def pr6_scheme() -> ClassScheme:
    """The six-class excellence scheme (bottom-50% up to top-1%, values 1-6)."""
    return _PR6


def quartile_scheme() -> ClassScheme:
    """Four quartile classes with values 1-4."""
    return _QUARTILES


def point_attribution(p, scheme: ClassScheme) -> SchemeClass:
    """The unique class whose span contains percentile ``p``.

    Spans are half-open at the upper bound except for the top class, so a
    boundary value belongs to the class above it and 100 to the top class.
    """
    p = Fraction(p)
    if not 0 <= p <= 100:
        raise ValueError(f"percentile must lie in [0, 100], got {p}")
    for cls in scheme.classes[:-1]:
        if p < cls.upper:
            return cls
    return scheme.classes[-1]


def rounded_class(score, scheme: ClassScheme) -> SchemeClass:
    """The class whose value is nearest to ``score``, ties away from zero.

    For schemes with consecutive integer values this is exactly
    round-half-away-from-zero on the score. Scores outside the scheme's
    value range are rejected.
    """
    score = Fraction(score)
    if not scheme.min_value <= score <= scheme.max_value:
        raise ValueError(
            f"score {score} outside class value range"
            f" [{scheme.min_value}, {scheme.max_value}]"
        )
    best = scheme.classes[0]
    for cls in scheme.classes[1:]:
        # strict comparison keeps the larger value on a tie
        if abs(cls.value - score) <= abs(best.value - score):
            best = cls
    return best


def fractional_attribution(
    interval: UncertaintyInterval, scheme: ClassScheme
) -> ClassAttribution:
    """Attribute an uncertainty interval proportionally to a scheme's classes.

    Each class receives the share of the interval it overlaps; the score is
    the fraction-weighted sum of class values, i.e. the expected class value
    of a percentile drawn uniformly from the interval.
    """
    width = interval.width
    fractions = []
    score = Fraction(0)
    for cls in scheme.classes:
        overlap = min(interval.hi, cls.upper) - max(interval.lo, cls.lower)
        share = overlap / width if overlap > 0 else Fraction(0)
        fractions.append(share)
        score += cls.value * share
    return ClassAttribution(
        fractions=tuple(fractions),
        score=score,
        rounded_class=rounded_class(score, scheme),
    )


def scheme_expected_value(scheme: ClassScheme) -> Fraction:
    """Expected class value of a uniformly random percentile in [0, 100]."""
    return sum((cls.value * cls.width for cls in scheme.classes), Fraction(0)) / 100


def aggregate_quantile_sum(
    results: Iterable[QuantileResult], rule: CountingRule
) -> Fraction:
    """Sum of the selected rule's percentile over a batch of results."""
    return sum((r.percentile(rule) for r in results), Fraction(0))


def load_scheme(source: str | IO[str], name: str = "custom") -> ClassScheme:
    """Parse a scheme definition: one ``label,lower,upper,value`` line per class.

    Lines must be ordered by lower bound and partition [0, 100]; ``#``
    starts a comment. Violations are reported with their line number.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    entries: list[tuple[int, SchemeClass]] = []
    for line_no, raw in enumerate(source, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 4:
            raise SchemeFormatError(
                f"line {line_no}: expected 'label,lower,upper,value', got {raw.strip()!r}"
            )
        label, lower_text, upper_text, value_text = parts
        try:
            lower = Fraction(lower_text)
            upper = Fraction(upper_text)
        except (ValueError, ZeroDivisionError):
            raise SchemeFormatError(
                f"line {line_no}: bounds must be decimal numbers"
            ) from None
        try:
            value = int(value_text)
        except ValueError:
            raise SchemeFormatError(
                f"line {line_no}: class value must be an integer, got {value_text!r}"
            ) from None
        try:
            entries.append((line_no, SchemeClass(label, lower, upper, value)))
        except (ValueError, TypeError) as exc:
            raise SchemeFormatError(f"line {line_no}: {exc}") from None

    if not entries:
        raise SchemeFormatError("scheme definition contains no classes")
    first_line, first = entries[0]
    if first.lower != 0:
        raise SchemeFormatError(f"line {first_line}: first class must start at 0")
    last_line, last = entries[-1]
    if last.upper != 100:
        raise SchemeFormatError(f"line {last_line}: last class must end at 100")
    for (_, prev), (line_no, cls) in zip(entries, entries[1:]):
        if cls.lower > prev.upper:
            raise SchemeFormatError(f"line {line_no}: gap at {prev.upper}")
        if cls.lower < prev.upper:
            raise SchemeFormatError(f"line {line_no}: overlap at {cls.lower}")
        if cls.value <= prev.value:
            raise SchemeFormatError(
                f"line {line_no}: class values must increase, got {cls.value}"
                f" after {prev.value}"
            )
    return ClassScheme(name=name, classes=tuple(cls for _, cls in entries))
