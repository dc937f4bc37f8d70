"""Domain types shared by the percentile-rank pipeline.

Percentiles and class bounds are carried as exact rationals
(:class:`fractions.Fraction`); decimal rendering happens only at output.
All types are immutable after construction and safe to share between
concurrent workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

#: Document attributes that may participate in reference-set grouping.
GROUP_ATTRIBUTES = ("source", "year", "doc_type")

#: Key value used when a grouping attribute is missing on a document.
UNKNOWN_VALUE = "(unknown)"


class CountingRule(Enum):
    """How a document's own tie group counts toward its percentile rank.

    CITED_LESS counts only members cited strictly less, CITED_LESS_OR_EQUAL
    also counts the full tie group, and MIDPOINT (the default) counts half
    of it.
    """

    CITED_LESS = "lb"
    CITED_LESS_OR_EQUAL = "rousseau"
    MIDPOINT = "mid"


class WilcoxonMethod(Enum):
    EXACT = "exact"
    NORMAL_APPROX = "normal-approx"


@dataclass(frozen=True)
class Document:
    """One publication with its citation count and grouping attributes."""

    id: str
    times_cited: int
    source: str | None = None
    year: int | None = None
    doc_type: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("document id must be nonempty")
        if not isinstance(self.times_cited, int) or isinstance(self.times_cited, bool):
            raise TypeError(f"times_cited must be an integer, got {self.times_cited!r}")
        if self.times_cited < 0:
            raise ValueError(f"times_cited must be >= 0, got {self.times_cited}")


def group_value(doc: Document, attribute: str) -> str:
    """Text value a document contributes to a grouping key.

    Document types are compared case-insensitively ("Review" groups with
    "REVIEW"); a missing attribute maps to the literal "(unknown)" so that
    no document ever drops out of a grouping.
    """
    if attribute not in GROUP_ATTRIBUTES:
        raise ValueError(f"unknown grouping attribute {attribute!r}")
    raw = getattr(doc, attribute)
    if raw is None:
        return UNKNOWN_VALUE
    if attribute == "doc_type":
        return str(raw).strip().casefold()
    return str(raw)


@dataclass(frozen=True)
class GroupKey:
    """Ordered (attribute, value) pairs identifying one reference set."""

    parts: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(tuple(p) for p in self.parts))
        names = [name for name, _ in self.parts]
        for name in names:
            if name not in GROUP_ATTRIBUTES:
                raise ValueError(f"unknown grouping attribute {name!r}")
        if len(set(names)) != len(names):
            raise ValueError("grouping attributes must be distinct")

    def label(self) -> str:
        if not self.parts:
            return "(all)"
        return "|".join(f"{name}={value}" for name, value in self.parts)


@dataclass(frozen=True)
class ReferenceSet:
    """A nonempty group of documents evaluated against each other."""

    key: GroupKey
    members: tuple[Document, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("reference set must contain at least one document")
        for doc in self.members:
            for name, value in self.key.parts:
                if group_value(doc, name) != value:
                    raise ValueError(
                        f"document {doc.id!r} does not belong to group {self.key.label()!r}"
                    )

    @property
    def n(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class UncertaintyInterval:
    """Span between the cited-less and cited-less-or-equal percentiles.

    The width is strictly positive: every document ties at least with
    itself, so lo < hi always holds.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not 0 <= self.lo < self.hi <= 100:
            raise ValueError(
                f"interval must satisfy 0 <= lo < hi <= 100, got [{self.lo}, {self.hi}]"
            )

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


@dataclass(frozen=True)
class QuantileResult:
    """Percentile rank of one document under all three counting rules."""

    document_id: str
    group: GroupKey
    n: int
    below: int
    tied: int
    p_cited_less: Fraction
    p_midpoint: Fraction
    p_cited_leq: Fraction
    interval: UncertaintyInterval

    def __post_init__(self) -> None:
        if self.tied < 1:
            raise ValueError("tied must be >= 1: a document always ties with itself")
        if self.below < 0 or self.below + self.tied > self.n:
            raise ValueError("below/tied counts exceed the reference-set size")
        if self.p_cited_less != self.interval.lo or self.p_cited_leq != self.interval.hi:
            raise ValueError("rule percentiles disagree with the uncertainty interval")
        if 2 * self.p_midpoint != self.p_cited_less + self.p_cited_leq:
            raise ValueError("midpoint percentile must average the interval bounds")

    def percentile(self, rule: CountingRule) -> Fraction:
        """The percentile under the given counting rule."""
        if rule is CountingRule.CITED_LESS:
            return self.p_cited_less
        if rule is CountingRule.CITED_LESS_OR_EQUAL:
            return self.p_cited_leq
        return self.p_midpoint


@dataclass(frozen=True)
class SchemeClass:
    """One valued band of a class scheme.

    Bands are half-open [lower, upper) in percent points; the top band of a
    scheme is closed at 100.
    """

    label: str
    lower: Fraction
    upper: Fraction
    value: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", Fraction(self.lower))
        object.__setattr__(self, "upper", Fraction(self.upper))
        if not isinstance(self.value, int) or isinstance(self.value, bool):
            raise TypeError(f"class value must be an integer, got {self.value!r}")
        if self.value <= 0:
            raise ValueError(f"class value must be positive, got {self.value}")
        if not 0 <= self.lower < self.upper <= 100:
            raise ValueError(
                f"class {self.label!r} bounds must satisfy 0 <= lower < upper <= 100"
            )

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower


@dataclass(frozen=True)
class ClassScheme:
    """Ordered partition of [0, 100] percent into valued classes."""

    name: str
    classes: tuple[SchemeClass, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.classes:
            raise ValueError("scheme must contain at least one class")
        if self.classes[0].lower != 0:
            raise ValueError("first class must start at 0")
        if self.classes[-1].upper != 100:
            raise ValueError("last class must end at 100")
        prev = None
        for cls in self.classes:
            if prev is not None:
                if cls.lower > prev.upper:
                    raise ValueError(f"gap at {prev.upper} before class {cls.label!r}")
                if cls.lower < prev.upper:
                    raise ValueError(f"overlap at {cls.lower} in class {cls.label!r}")
                if cls.value <= prev.value:
                    raise ValueError(
                        f"class values must increase with the bounds, got {cls.value}"
                        f" after {prev.value}"
                    )
            prev = cls

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(cls.value for cls in self.classes)

    @property
    def min_value(self) -> int:
        return self.classes[0].value

    @property
    def max_value(self) -> int:
        return self.classes[-1].value


@dataclass(frozen=True)
class ClassAttribution:
    """Per-class fractions of a percentile interval plus the expected score."""

    fractions: tuple[Fraction, ...]
    score: Fraction
    rounded_class: SchemeClass

    def __post_init__(self) -> None:
        object.__setattr__(self, "fractions", tuple(Fraction(f) for f in self.fractions))
        object.__setattr__(self, "score", Fraction(self.score))
        if any(f < 0 or f > 1 for f in self.fractions):
            raise ValueError("class fractions must lie in [0, 1]")
        total = sum(self.fractions)
        if abs(total - 1) > Fraction(1, 10**12):
            raise ValueError(f"class fractions must sum to 1, got {total}")


@dataclass(frozen=True)
class WilcoxonResult:
    """Outcome of a one-sample Wilcoxon signed-rank test.

    ``statistic_z`` is populated only under the normal approximation; the
    exact method derives the p value from the full rank-sum distribution.
    """

    n_nonzero: int
    w_plus: float
    w_minus: float
    statistic_z: float | None
    p_two_sided: float
    method: WilcoxonMethod

    def __post_init__(self) -> None:
        expected = self.n_nonzero * (self.n_nonzero + 1) / 2
        if abs(self.w_plus + self.w_minus - expected) > 1e-9:
            raise ValueError("w_plus + w_minus must equal n(n+1)/2 over nonzero differences")
        if not 0.0 <= self.p_two_sided <= 1.0:
            raise ValueError(f"p value must lie in [0, 1], got {self.p_two_sided}")
