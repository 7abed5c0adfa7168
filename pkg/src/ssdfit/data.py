"""Censored toxicity datasets: representation, parsing, transforms.

A dataset is a list of per-species critical effect concentrations where
each value may be known exactly or only up to a bound.  The text file
format is line oriented:

    value            exact observation (one-column file)
    value   NA       right-censored: true value is above ``value``
    NA      value    left-censored: true value is below ``value``
    a       b        interval-censored: true value in (a, b), a < b
    a       a        exact observation

Fields are separated by tabs, commas, or runs of spaces; the decimal
mark is ``.`` and the missing-bound token is exactly ``NA`` (case
sensitive).  Blank lines and lines starting with ``#`` are skipped, and
a single leading header line is tolerated when its first token is
neither a number nor ``NA``.  Serialization always writes two
tab-separated columns; ``# label:`` / ``# unit:`` comment lines carry
the metadata so that a serialize/parse round trip is the identity.

All types here are immutable after construction and every function is
pure, so values can be shared freely across threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

__all__ = [
    "Observation",
    "Dataset",
    "CensusSummary",
    "parse_dataset",
    "serialize_dataset",
    "aggregate_species",
    "transform_to_noncensored",
    "summarize",
]

from .errors import DatasetError, EmptyTransformError, ParseError

_NA = "NA"
_SEPARATOR = re.compile(r"[,\t ]+")
_META_COMMENT = re.compile(r"#\s*(label|unit):\s*(.*)$")


@dataclass(frozen=True)
class Observation:
    """One toxicity datum as a (lower, upper) bound pair.

    The censoring kind is implied by which bounds are present: lower
    only means right-censored, upper only left-censored, equal bounds an
    exact value, distinct bounds an interval.
    """

    lower: float | None
    upper: float | None

    def __post_init__(self):
        low = None if self.lower is None else float(self.lower)
        up = None if self.upper is None else float(self.upper)
        if low is None and up is None:
            raise DatasetError("observation needs at least one bound")
        for bound in (low, up):
            if bound is not None and not (math.isfinite(bound) and bound > 0.0):
                raise DatasetError(f"bounds must be positive and finite, got {bound!r}")
        if low is not None and up is not None and low > up:
            raise DatasetError(f"lower bound {low} exceeds upper bound {up}")
        object.__setattr__(self, "lower", low)
        object.__setattr__(self, "upper", up)

    @property
    def kind(self) -> str:
        """One of ``exact``, ``left``, ``right``, ``interval``."""
        if self.lower is None:
            return "left"
        if self.upper is None:
            return "right"
        return "exact" if self.lower == self.upper else "interval"

    @classmethod
    def exact(cls, value: float) -> "Observation":
        return cls(value, value)

    @classmethod
    def left_censored(cls, upper: float) -> "Observation":
        return cls(None, upper)

    @classmethod
    def right_censored(cls, lower: float) -> "Observation":
        return cls(lower, None)

    @classmethod
    def interval(cls, lower: float, upper: float) -> "Observation":
        return cls(lower, upper)


@dataclass(frozen=True)
class Dataset:
    """Ordered, non-empty collection of observations plus metadata."""

    observations: tuple[Observation, ...]
    label: str = ""
    unit: str = ""

    def __post_init__(self):
        obs = tuple(self.observations)
        if not obs:
            raise DatasetError("dataset must contain at least one observation")
        object.__setattr__(self, "observations", obs)

    def __len__(self) -> int:
        return len(self.observations)

    def __iter__(self):
        return iter(self.observations)


@dataclass(frozen=True)
class CensusSummary:
    """Observation counts by censoring kind."""

    n_total: int
    n_exact: int
    n_left: int
    n_right: int
    n_interval: int
    fraction_censored: float


def _is_number(token: str) -> bool:
    try:
        return math.isfinite(float(token))
    except ValueError:
        return False


def _parse_field(token: str, lineno: int) -> float | None:
    if token == _NA:
        return None
    try:
        value = float(token)
    except ValueError:
        raise ParseError(lineno, f"unparseable token {token!r}") from None
    if not math.isfinite(value):
        raise ParseError(lineno, f"unparseable token {token!r}")
    return value


def _check_positive(value: float | None, lineno: int) -> None:
    if value is not None and value <= 0.0:
        raise ParseError(lineno, f"non-positive bound {value}")


def parse_dataset(text: str, label: str = "", unit: str = "") -> Dataset:
    """Parse file content into a :class:`Dataset`.

    Raises :class:`ParseError` with a 1-based line number on malformed
    rows, mixed 1-/2-column layouts, non-positive bounds, rows with both
    fields NA, and reversed intervals.
    """
    observations: list[Observation] = []
    ncols: int | None = None
    header_skipped = False
    meta = {"label": label, "unit": unit}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _META_COMMENT.match(line)
            if match and not meta[match.group(1)]:
                meta[match.group(1)] = match.group(2).strip()
            continue
        tokens = _SEPARATOR.split(line)
        if ncols is None and not header_skipped:
            if tokens[0] != _NA and not _is_number(tokens[0]):
                header_skipped = True
                continue
        if len(tokens) > 2:
            raise ParseError(lineno, f"expected 1 or 2 fields, got {len(tokens)}")
        if ncols is None:
            ncols = len(tokens)
        elif len(tokens) != ncols:
            raise ParseError(
                lineno, f"expected {ncols} field(s) as in earlier rows, got {len(tokens)}"
            )

        if ncols == 1:
            value = _parse_field(tokens[0], lineno)
            if value is None:
                raise ParseError(lineno, "single-column value may not be NA")
            _check_positive(value, lineno)
            observations.append(Observation(value, value))
        else:
            low = _parse_field(tokens[0], lineno)
            up = _parse_field(tokens[1], lineno)
            if low is None and up is None:
                raise ParseError(lineno, "both fields are NA")
            _check_positive(low, lineno)
            _check_positive(up, lineno)
            if low is not None and up is not None and low > up:
                raise ParseError(lineno, f"lower bound {low} exceeds upper bound {up}")
            observations.append(Observation(low, up))

    if not observations:
        raise ParseError(None, "file contains no data rows")
    return Dataset(tuple(observations), label=meta["label"], unit=meta["unit"])


def _format_bound(value: float | None) -> str:
    return _NA if value is None else repr(value)


def serialize_dataset(dataset: Dataset) -> str:
    """Write a dataset in the two-column tab-separated format.

    Bounds use ``repr`` so the parse of the output restores the exact
    same floats; label/unit metadata travel in leading comments.
    """
    lines = []
    if dataset.label:
        lines.append(f"# label: {dataset.label}")
    if dataset.unit:
        lines.append(f"# unit: {dataset.unit}")
    for obs in dataset.observations:
        lines.append(f"{_format_bound(obs.lower)}\t{_format_bound(obs.upper)}")
    return "\n".join(lines) + "\n"


def aggregate_species(values, mode: str = "geometric-mean") -> Observation:
    """Collapse several sensitivity values for one species into one observation.

    ``geometric-mean`` replaces the values with their geometric mean as
    an exact observation; ``interval`` keeps the whole spread as an
    interval-censored observation [min, max] (exact when all equal).
    """
    values = [float(v) for v in values]
    if not values:
        raise DatasetError("cannot aggregate an empty list of values")
    for v in values:
        if not (math.isfinite(v) and v > 0.0):
            raise DatasetError(f"values must be positive and finite, got {v!r}")
    if mode == "geometric-mean":
        log_mean = math.fsum(math.log(v) for v in values) / len(values)
        value = math.exp(log_mean)
        return Observation(value, value)
    if mode == "interval":
        return Observation(min(values), max(values))
    raise ValueError(f"unknown aggregation mode {mode!r}")


def transform_to_noncensored(dataset: Dataset) -> Dataset:
    """Apply the customary censoring workaround: discard left- and
    right-censored rows and replace intervals by their arithmetic
    midpoint.  Exact observations are kept as is.
    """
    kept: list[Observation] = []
    for obs in dataset.observations:
        kind = obs.kind
        if kind == "exact":
            kept.append(obs)
        elif kind == "interval":
            mid = (obs.lower + obs.upper) / 2.0
            kept.append(Observation(mid, mid))
    if not kept:
        raise EmptyTransformError(
            "all observations were left- or right-censored; nothing remains"
        )
    return Dataset(tuple(kept), label=dataset.label, unit=dataset.unit)


def summarize(dataset: Dataset) -> CensusSummary:
    """Count observations by censoring kind."""
    counts = {"exact": 0, "left": 0, "right": 0, "interval": 0}
    for obs in dataset.observations:
        counts[obs.kind] += 1
    n_total = len(dataset.observations)
    return CensusSummary(
        n_total=n_total,
        n_exact=counts["exact"],
        n_left=counts["left"],
        n_right=counts["right"],
        n_interval=counts["interval"],
        fraction_censored=(n_total - counts["exact"]) / n_total,
    )
