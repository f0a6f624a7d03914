"""Chart-ready aggregations over joined event contexts.

Pure functions from sequences of ``EventWithContext`` to small series
types: article-volume timelines, tone min/median/max bands, top-N
country frequencies, choropleth counts, and a trailing-window z-score
spike detector. All outputs are deterministically ordered and
insensitive to input permutation.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import AlignmentError
from .records import EventWithContext

GRANULARITY_DAY = "day"
GRANULARITY_MONTH = "month"
GRANULARITIES = (GRANULARITY_DAY, GRANULARITY_MONTH)

COUNT_UNIT_EVENTS = "events"
COUNT_UNIT_ARTICLES = "distinct-articles"
COUNT_UNIT_AUTO = "auto"

DEFAULT_SPIKE_WINDOW = 8
DEFAULT_SPIKE_THRESHOLD = 3.0


class TimelinePoint(NamedTuple):
    bucket: date
    count: int


class TonePoint(NamedTuple):
    bucket: date
    minimum: float
    median: float
    maximum: float
    n: int


class SpikeFlag(NamedTuple):
    bucket: date
    value: int
    baseline_mean: float
    baseline_std: float
    z_score: float


@dataclass(frozen=True)
class TimelineSeries:
    """Zero-filled, contiguous bucket counts; optionally with a
    percent-of-total overlay aligned point for point."""

    granularity: str
    points: tuple[TimelinePoint, ...]
    unit: str = COUNT_UNIT_EVENTS
    percent: tuple[float, ...] | None = None
    # Buckets where the percent denominator was zero (percent forced to 0.0).
    zero_denominator_buckets: tuple[date, ...] = ()

    def buckets(self) -> tuple[date, ...]:
        return tuple(p.bucket for p in self.points)

    def counts(self) -> tuple[int, ...]:
        return tuple(p.count for p in self.points)


@dataclass(frozen=True)
class ToneSeries:
    granularity: str
    points: tuple[TonePoint, ...]


@dataclass(frozen=True)
class CountryFrequency:
    """(country_code, count) pairs, count descending, ties by code."""

    which: str
    entries: tuple[tuple[str, int], ...]

    def codes(self) -> tuple[str, ...]:
        return tuple(code for code, _ in self.entries)


@dataclass(frozen=True)
class ChoroplethCounts:
    counts: dict[str, int]
    country_names: dict[str, str]
    root_filter: tuple[str, ...] | None = None

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class SpikeReport:
    window: int
    threshold: float
    flagged: tuple[SpikeFlag, ...] = field(default_factory=tuple)


# --------------------------------------------------------------------------
# Bucket arithmetic
# --------------------------------------------------------------------------

def bucket_of(day: date, granularity: str) -> date:
    if granularity == GRANULARITY_DAY:
        return day
    if granularity == GRANULARITY_MONTH:
        return day.replace(day=1)
    raise ValueError(f"unknown granularity {granularity!r}")


def next_bucket(bucket: date, granularity: str) -> date:
    if granularity == GRANULARITY_DAY:
        return bucket + timedelta(days=1)
    if bucket.month == 12:
        return date(bucket.year + 1, 1, 1)
    return date(bucket.year, bucket.month + 1, 1)


def bucket_range(first: date, last: date, granularity: str) -> list[date]:
    """Contiguous buckets from the one containing ``first`` through the
    one containing ``last``."""
    if first > last:
        raise ValueError(f"bucket range start {first} after end {last}")
    out = []
    cursor = bucket_of(first, granularity)
    stop = bucket_of(last, granularity)
    while cursor <= stop:
        out.append(cursor)
        cursor = next_bucket(cursor, granularity)
    return out


# --------------------------------------------------------------------------
# Aggregations
# --------------------------------------------------------------------------

def article_count_timeline(
    contexts: Sequence[EventWithContext],
    granularity: str = GRANULARITY_DAY,
    count_unit: str = COUNT_UNIT_AUTO,
    date_range: tuple[date, date] | None = None,
) -> TimelineSeries:
    """Per-bucket volume: event rows, or distinct mention identifiers.

    ``auto`` resolves to distinct-articles when any context carries
    mentions, else events; the resolved unit is recorded on the series.
    The bucket axis covers ``date_range`` when given, else the span of
    the input, zero-filled in between.
    """
    if granularity not in GRANULARITIES:
        raise ValueError(f"unknown granularity {granularity!r}")
    if count_unit not in (COUNT_UNIT_AUTO, COUNT_UNIT_EVENTS, COUNT_UNIT_ARTICLES):
        raise ValueError(f"unknown count unit {count_unit!r}")
    if count_unit == COUNT_UNIT_AUTO:
        has_mentions = any(ctx.mentions for ctx in contexts)
        count_unit = COUNT_UNIT_ARTICLES if has_mentions else COUNT_UNIT_EVENTS

    if date_range is not None:
        lo, hi = date_range
        contexts = [c for c in contexts if lo <= c.event.day <= hi]
        axis = bucket_range(lo, hi, granularity)
    elif contexts:
        days = [c.event.day for c in contexts]
        axis = bucket_range(min(days), max(days), granularity)
    else:
        axis = []

    if count_unit == COUNT_UNIT_EVENTS:
        per_bucket: dict[date, int] = {}
        for ctx in contexts:
            b = bucket_of(ctx.event.day, granularity)
            per_bucket[b] = per_bucket.get(b, 0) + 1
    else:
        identifiers: dict[date, set[str]] = {}
        for ctx in contexts:
            b = bucket_of(ctx.event.day, granularity)
            bag = identifiers.setdefault(b, set())
            for mention in ctx.mentions:
                bag.add(mention.mention_identifier)
        per_bucket = {b: len(bag) for b, bag in identifiers.items()}

    points = tuple(TimelinePoint(b, per_bucket.get(b, 0)) for b in axis)
    return TimelineSeries(granularity=granularity, points=points, unit=count_unit)


def percent_of_total(
    matched: TimelineSeries, total: Sequence
) -> TimelineSeries:
    """Overlay ``matched`` with percent = 100 * matched / total.

    ``total`` is a sequence of volume observations carrying ``date``,
    ``matched_count`` and ``total_monitored``; observations are bucketed
    at the series granularity, summing the monitored totals within a
    bucket. The bucket sets must coincide exactly. Arithmetic is exact
    rational; a zero denominator yields 0.0 and flags the bucket.
    """
    totals: dict[date, int] = {}
    for point in total:
        when = point.date
        # datetime subclasses date, so test the narrower type first
        day = when.date() if isinstance(when, datetime) else when
        b = bucket_of(day, matched.granularity)
        totals[b] = totals.get(b, 0) + int(point.total_monitored)

    matched_buckets = set(matched.buckets())
    offending = sorted(matched_buckets.symmetric_difference(totals))
    if offending:
        raise AlignmentError(
            "matched and total series cover different buckets",
            offending_buckets=tuple(offending),
        )

    percents: list[float] = []
    zero_buckets: list[date] = []
    for bucket, count in matched.points:
        denominator = totals[bucket]
        if denominator == 0:
            percents.append(0.0)
            zero_buckets.append(bucket)
        else:
            percents.append(float(Fraction(100 * count, denominator)))
    return TimelineSeries(
        granularity=matched.granularity,
        points=matched.points,
        unit=matched.unit,
        percent=tuple(percents),
        zero_denominator_buckets=tuple(zero_buckets),
    )


def tone_stats(
    contexts: Sequence[EventWithContext], granularity: str = GRANULARITY_DAY
) -> ToneSeries:
    """Per-bucket min/median/max of event average tone.

    Median of an even count is the mean of the two central values.
    Buckets with no events are omitted rather than zero-filled: a tone
    of zero is a real (neutral) observation, not an absence.
    """
    if granularity not in GRANULARITIES:
        raise ValueError(f"unknown granularity {granularity!r}")
    grouped: dict[date, list[float]] = {}
    for ctx in contexts:
        b = bucket_of(ctx.event.day, granularity)
        grouped.setdefault(b, []).append(ctx.event.avg_tone)
    points = []
    for bucket in sorted(grouped):
        tones = sorted(grouped[bucket])
        points.append(
            TonePoint(
                bucket=bucket,
                minimum=tones[0],
                median=statistics.median(tones),
                maximum=tones[-1],
                n=len(tones),
            )
        )
    return ToneSeries(granularity=granularity, points=tuple(points))


def top_country_frequencies(
    contexts: Sequence[EventWithContext], n: int, which: str = "actor1"
) -> CountryFrequency:
    """Most frequent actor country codes; blanks excluded, ties broken
    lexicographically by code."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if which not in ("actor1", "actor2"):
        raise ValueError(f"which must be actor1 or actor2, got {which!r}")
    counts: dict[str, int] = {}
    for ctx in contexts:
        actor = ctx.event.actor1 if which == "actor1" else ctx.event.actor2
        if actor is None or not actor.country_code:
            continue
        counts[actor.country_code] = counts.get(actor.country_code, 0) + 1
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return CountryFrequency(which=which, entries=tuple(ordered[:n]))


def choropleth_counts(
    contexts: Sequence[EventWithContext],
    root_code_filter: Iterable[str] | None = None,
    which: str = "actor1",
    tables=None,
) -> ChoroplethCounts:
    """Event counts keyed by actor country code, optionally restricted
    to a set of event root codes, with country names for tooltips.

    With no filter the counts sum to the number of events whose chosen
    actor has a non-blank country code (conservation).
    """
    if which not in ("actor1", "actor2"):
        raise ValueError(f"which must be actor1 or actor2, got {which!r}")
    if tables is None:
        from .cameo import default_tables

        tables = default_tables()
    roots = frozenset(root_code_filter) if root_code_filter is not None else None
    counts: dict[str, int] = {}
    for ctx in contexts:
        if roots is not None and ctx.event.event_root_code not in roots:
            continue
        actor = ctx.event.actor1 if which == "actor1" else ctx.event.actor2
        if actor is None or not actor.country_code:
            continue
        counts[actor.country_code] = counts.get(actor.country_code, 0) + 1
    ordered = {code: counts[code] for code in sorted(counts)}
    names = {code: tables.country_name(code) for code in ordered}
    return ChoroplethCounts(
        counts=ordered,
        country_names=names,
        root_filter=tuple(sorted(roots)) if roots is not None else None,
    )


def detect_spikes(
    series: TimelineSeries,
    window: int = DEFAULT_SPIKE_WINDOW,
    k: float = DEFAULT_SPIKE_THRESHOLD,
) -> SpikeReport:
    """Flag buckets whose value sits ``k`` or more standard deviations
    above the mean of the ``window`` buckets immediately before them.

    The baseline excludes the bucket under test and uses the population
    standard deviation. The first ``window`` buckets have no full
    baseline and are never flagged; a flat baseline (std = 0) flags
    nothing. A series shorter than the window is rejected outright.
    """
    if window < 3:
        raise ValueError(f"window must be >= 3, got {window}")
    if k <= 0:
        raise ValueError(f"threshold k must be > 0, got {k}")
    values = series.counts()
    if len(values) < window:
        raise ValueError(
            f"series has {len(values)} buckets, need at least {window} "
            f"for a window of {window}"
        )
    flagged = []
    for i in range(window, len(values)):
        baseline = values[i - window:i]
        mean = statistics.mean(baseline)
        std = statistics.pstdev(baseline)
        if std <= 0:
            continue
        z = (values[i] - mean) / std
        if z >= k:
            flagged.append(
                SpikeFlag(
                    bucket=series.points[i].bucket,
                    value=values[i],
                    baseline_mean=mean,
                    baseline_std=std,
                    z_score=z,
                )
            )
    return SpikeReport(window=window, threshold=k, flagged=tuple(flagged))
