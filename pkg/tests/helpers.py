"""Independent brute-force oracles the suites compare against.

Nothing here reuses the package's store or aggregation code paths:
joins are dict lookups, stats are sort-based, grouping is plain
counting. If these disagree with the library, the library is wrong.
"""

from __future__ import annotations

from collections import Counter
from datetime import date

from gdeltwatch.records import EventWithContext


def brute_force_join(events, mentions, gkgs) -> list[EventWithContext]:
    """In-memory three-table join ordered by (day, event id)."""
    mentions_by_event = {}
    for mention in mentions:
        mentions_by_event.setdefault(mention.global_event_id, []).append(mention)
    docs_by_identifier = {}
    for doc in gkgs:
        docs_by_identifier.setdefault(doc.document_identifier, []).append(doc)

    out = []
    for event in sorted(events, key=lambda e: (e.day, e.global_event_id)):
        ms = sorted(
            mentions_by_event.get(event.global_event_id, []),
            key=lambda m: (m.mention_time, m.mention_identifier),
        )
        docs = {}
        for mention in ms:
            for doc in docs_by_identifier.get(mention.mention_identifier, []):
                docs[doc.gkg_record_id] = doc
        out.append(
            EventWithContext(
                event=event,
                mentions=tuple(ms),
                documents=tuple(docs[k] for k in sorted(docs)),
            )
        )
    return out


def brute_force_filter(criteria, contexts) -> list[EventWithContext]:
    """Clause-by-clause predicate evaluation, written independently."""
    out = []
    for ctx in contexts:
        event = ctx.event
        if criteria.actor2_refugee:
            actor = event.actor2
            if actor is None:
                continue
            is_ref = actor.code == "REF"
            if criteria.refugee_mode == "contains-type":
                is_ref = is_ref or "REF" in actor.type_codes
            if not is_ref:
                continue
        if criteria.date_range is not None:
            lo, hi = criteria.date_range
            if event.day < lo or event.day > hi:
                continue
        if criteria.event_root_codes is not None:
            if event.event_root_code not in criteria.event_root_codes:
                continue
        if criteria.actor1_country is not None:
            if event.actor1 is None or event.actor1.country_code is None:
                continue
            if event.actor1.country_code not in criteria.actor1_country:
                continue
        if criteria.themes is not None:
            tokens = [h.theme for d in ctx.documents for h in d.themes]
            if criteria.themes.mode == "exact-set":
                hit = any(t in criteria.themes.tokens for t in tokens)
            else:
                hit = any(
                    t.startswith(p)
                    for t in tokens for p in criteria.themes.tokens
                )
            if not hit:
                continue
        out.append(ctx)
    return out


def bucket_count_oracle(contexts, granularity) -> dict[date, int]:
    """Events per calendar bucket, computed by plain counting."""
    counter: Counter = Counter()
    for ctx in contexts:
        day = ctx.event.day
        key = day if granularity == "day" else date(day.year, day.month, 1)
        counter[key] += 1
    return dict(counter)


def distinct_article_oracle(contexts, granularity) -> dict[date, int]:
    per_bucket: dict[date, set] = {}
    for ctx in contexts:
        day = ctx.event.day
        key = day if granularity == "day" else date(day.year, day.month, 1)
        bag = per_bucket.setdefault(key, set())
        for mention in ctx.mentions:
            bag.add(mention.mention_identifier)
    return {k: len(v) for k, v in per_bucket.items()}


def tone_oracle(contexts, granularity) -> dict[date, tuple[float, float, float, int]]:
    """Per-bucket (min, median, max, n) from an explicit sort."""
    grouped: dict[date, list[float]] = {}
    for ctx in contexts:
        day = ctx.event.day
        key = day if granularity == "day" else date(day.year, day.month, 1)
        grouped.setdefault(key, []).append(ctx.event.avg_tone)
    out = {}
    for key, tones in grouped.items():
        tones = sorted(tones)
        n = len(tones)
        if n % 2:
            median = tones[n // 2]
        else:
            median = (tones[n // 2 - 1] + tones[n // 2]) / 2
        out[key] = (tones[0], median, tones[-1], n)
    return out


def country_count_oracle(contexts, which="actor1") -> dict[str, int]:
    counter: Counter = Counter()
    for ctx in contexts:
        actor = ctx.event.actor1 if which == "actor1" else ctx.event.actor2
        if actor is not None and actor.country_code:
            counter[actor.country_code] += 1
    return dict(counter)


def choropleth_oracle(contexts, roots=None, which="actor1") -> dict[str, int]:
    counter: Counter = Counter()
    for ctx in contexts:
        if roots is not None and ctx.event.event_root_code not in roots:
            continue
        actor = ctx.event.actor1 if which == "actor1" else ctx.event.actor2
        if actor is not None and actor.country_code:
            counter[actor.country_code] += 1
    return dict(counter)
