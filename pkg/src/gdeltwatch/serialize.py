"""Stable JSON and CSV forms for records and aggregates.

Every HTTP payload and CLI export funnels through this module so that
the same store state always produces byte-identical output: keys are
emitted in fixed order, dates as ISO-8601 strings, and ``dumps`` pins
the separator/encoding choices.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import date, datetime

from .analytics import (
    ChoroplethCounts,
    CountryFrequency,
    SpikeReport,
    TimelineSeries,
    ToneSeries,
)
from .records import (
    ActorRef,
    EventRecord,
    EventWithContext,
    GeoPoint,
    GkgRecord,
    MentionRecord,
)

# Frozen column order for the CLI event export.
EVENT_CSV_COLUMNS = (
    "global_event_id", "day",
    "actor1_code", "actor1_name", "actor1_country",
    "actor2_code", "actor2_name", "actor2_country",
    "event_code", "event_root_code", "quad_class", "goldstein",
    "num_mentions", "num_sources", "num_articles", "avg_tone",
    "geo_country", "geo_lat", "geo_lon",
    "date_added", "source_url",
)


def dumps(payload) -> str:
    """Canonical JSON text: compact separators, UTF-8 verbatim."""
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False)


# --------------------------------------------------------------------------
# Record dicts
# --------------------------------------------------------------------------

def actor_dict(actor: ActorRef | None) -> dict | None:
    if actor is None:
        return None
    return {
        "code": actor.code,
        "name": actor.name,
        "country_code": actor.country_code,
        "type_codes": list(actor.type_codes),
    }


def geo_dict(geo: GeoPoint | None) -> dict | None:
    if geo is None:
        return None
    return {
        "latitude": geo.latitude,
        "longitude": geo.longitude,
        "country_code": geo.country_code,
        "full_name": geo.full_name,
    }


def event_dict(event: EventRecord) -> dict:
    return {
        "global_event_id": event.global_event_id,
        "day": event.day.isoformat(),
        "actor1": actor_dict(event.actor1),
        "actor2": actor_dict(event.actor2),
        "is_root_event": event.is_root_event,
        "event_code": event.event_code,
        "event_base_code": event.event_base_code,
        "event_root_code": event.event_root_code,
        "quad_class": event.quad_class,
        "goldstein_scale": event.goldstein_scale,
        "num_mentions": event.num_mentions,
        "num_sources": event.num_sources,
        "num_articles": event.num_articles,
        "avg_tone": event.avg_tone,
        "action_geo": geo_dict(event.action_geo),
        "date_added": event.date_added.isoformat(),
        "source_url": event.source_url,
    }


def mention_dict(mention: MentionRecord) -> dict:
    return {
        "global_event_id": mention.global_event_id,
        "event_time": mention.event_time.isoformat(),
        "mention_time": mention.mention_time.isoformat(),
        "mention_type": mention.mention_type,
        "source_name": mention.mention_source_name,
        "mention_identifier": mention.mention_identifier,
        "sentence_id": mention.sentence_id,
        "confidence": mention.confidence,
        "doc_tone": mention.mention_doc_tone,
    }


def gkg_dict(doc: GkgRecord) -> dict:
    return {
        "gkg_record_id": doc.gkg_record_id,
        "date": doc.date.isoformat(),
        "document_identifier": doc.document_identifier,
        "themes": [
            {"theme": hit.theme, "char_offset": hit.char_offset}
            for hit in doc.themes
        ],
        "tone": {
            "tone": doc.v2_tone.tone,
            "positive": doc.v2_tone.positive,
            "negative": doc.v2_tone.negative,
            "polarity": doc.v2_tone.polarity,
        },
    }


def context_dict(ctx: EventWithContext) -> dict:
    return {
        "event": event_dict(ctx.event),
        "mentions": [mention_dict(m) for m in ctx.mentions],
        "documents": [gkg_dict(d) for d in ctx.documents],
    }


# --------------------------------------------------------------------------
# Aggregate dicts
# --------------------------------------------------------------------------

def timeline_dict(series: TimelineSeries) -> dict:
    payload = {
        "granularity": series.granularity,
        "unit": series.unit,
        "points": [
            {"bucket": p.bucket.isoformat(), "count": p.count}
            for p in series.points
        ],
    }
    if series.percent is not None:
        payload["percent"] = list(series.percent)
        payload["zero_denominator_buckets"] = [
            b.isoformat() for b in series.zero_denominator_buckets
        ]
    return payload


def tone_dict(series: ToneSeries) -> dict:
    return {
        "granularity": series.granularity,
        "points": [
            {
                "bucket": p.bucket.isoformat(),
                "min": p.minimum,
                "median": p.median,
                "max": p.maximum,
                "n": p.n,
            }
            for p in series.points
        ],
    }


def countries_dict(freq: CountryFrequency) -> dict:
    return {
        "which": freq.which,
        "entries": [
            {"country": code, "count": count} for code, count in freq.entries
        ],
    }


def choropleth_dict(result: ChoroplethCounts) -> dict:
    return {
        "roots": list(result.root_filter) if result.root_filter is not None else None,
        "counts": result.counts,
        "country_names": result.country_names,
        "total": result.total(),
    }


def spikes_dict(report: SpikeReport) -> dict:
    return {
        "window": report.window,
        "k": report.threshold,
        "flagged": [
            {
                "bucket": f.bucket.isoformat(),
                "value": f.value,
                "baseline_mean": f.baseline_mean,
                "baseline_std": f.baseline_std,
                "z_score": f.z_score,
            }
            for f in report.flagged
        ],
    }


# --------------------------------------------------------------------------
# CSV
# --------------------------------------------------------------------------

def _csv_rows(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def events_csv(contexts_or_events) -> str:
    """One row per event, frozen column order, RFC-4180 quoting."""
    rows = []
    for item in contexts_or_events:
        event = item.event if isinstance(item, EventWithContext) else item
        a1, a2, geo = event.actor1, event.actor2, event.action_geo
        rows.append((
            event.global_event_id,
            event.day.isoformat(),
            a1.code if a1 else "", a1.name if a1 else "",
            a1.country_code if a1 else "",
            a2.code if a2 else "", a2.name if a2 else "",
            a2.country_code if a2 else "",
            event.event_code, event.event_root_code,
            event.quad_class, event.goldstein_scale,
            event.num_mentions, event.num_sources, event.num_articles,
            event.avg_tone,
            geo.country_code if geo else "",
            geo.latitude if geo else "", geo.longitude if geo else "",
            event.date_added.isoformat(), event.source_url,
        ))
    # Blank cells for absent optionals, never the string "None".
    cleaned = [
        tuple("" if cell is None else cell for cell in row) for row in rows
    ]
    return _csv_rows(EVENT_CSV_COLUMNS, cleaned)


def timeline_csv(series: TimelineSeries) -> str:
    if series.percent is not None:
        zero = set(series.zero_denominator_buckets)
        rows = [
            (p.bucket.isoformat(), p.count, pct, int(p.bucket in zero))
            for p, pct in zip(series.points, series.percent)
        ]
        return _csv_rows(("bucket", "count", "percent", "zero_denominator"), rows)
    rows = [(p.bucket.isoformat(), p.count) for p in series.points]
    return _csv_rows(("bucket", "count"), rows)


def tone_csv(series: ToneSeries) -> str:
    rows = [
        (p.bucket.isoformat(), p.minimum, p.median, p.maximum, p.n)
        for p in series.points
    ]
    return _csv_rows(("bucket", "min", "median", "max", "n"), rows)


def countries_csv(freq: CountryFrequency) -> str:
    return _csv_rows(("country", "count"), freq.entries)


def choropleth_csv(result: ChoroplethCounts) -> str:
    rows = [
        (code, result.country_names.get(code, ""), count)
        for code, count in result.counts.items()
    ]
    return _csv_rows(("country", "name", "count"), rows)


def spikes_csv(report: SpikeReport) -> str:
    rows = [
        (f.bucket.isoformat(), f.value, f.baseline_mean, f.baseline_std, f.z_score)
        for f in report.flagged
    ]
    return _csv_rows(
        ("bucket", "value", "baseline_mean", "baseline_std", "z_score"), rows
    )
