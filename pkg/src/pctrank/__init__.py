"""Percentile ranks for citation counts, with class attribution and testing."""

from .binning import (
    SchemeFormatError,
    aggregate_quantile_sum,
    fractional_attribution,
    load_scheme,
    point_attribution,
    pr6_scheme,
    quartile_scheme,
    rounded_class,
    scheme_expected_value,
)
from .ingest import ParseError, ParseReport, group_documents, parse_csv, parse_wos
from .kernels import BACKEND, below_tied_counts
from .model import (
    ClassAttribution,
    ClassScheme,
    CountingRule,
    Document,
    GroupKey,
    QuantileResult,
    ReferenceSet,
    SchemeClass,
    UncertaintyInterval,
    WilcoxonMethod,
    WilcoxonResult,
)
from .quantile import (
    count_below_tied,
    percentile,
    quantile_reference_set,
    uncertainty_interval,
)
from .stats import (
    exact_two_sided_p,
    exact_wplus_counts,
    test_percentiles_vs_median,
    test_scores_vs_baseline,
    wilcoxon_signed_rank,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ClassAttribution",
    "ClassScheme",
    "CountingRule",
    "Document",
    "GroupKey",
    "ParseError",
    "ParseReport",
    "QuantileResult",
    "ReferenceSet",
    "SchemeClass",
    "SchemeFormatError",
    "UncertaintyInterval",
    "WilcoxonMethod",
    "WilcoxonResult",
    "aggregate_quantile_sum",
    "below_tied_counts",
    "count_below_tied",
    "exact_two_sided_p",
    "exact_wplus_counts",
    "fractional_attribution",
    "group_documents",
    "load_scheme",
    "parse_csv",
    "parse_wos",
    "percentile",
    "point_attribution",
    "pr6_scheme",
    "quantile_reference_set",
    "quartile_scheme",
    "rounded_class",
    "scheme_expected_value",
    "test_percentiles_vs_median",
    "test_scores_vs_baseline",
    "uncertainty_interval",
    "wilcoxon_signed_rank",
]
