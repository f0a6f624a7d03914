"""Seeded synthetic corpora shaped like real GDELT exports.

Everything here is driven by a caller-supplied ``random.Random`` so
fixtures are reproducible from a seed. Two canned fixtures mirror the
monitored case studies: a 2015 series with a September surge, and a
March-2021 slice whose actor-country weights order Spain ahead of the
United States ahead of Italy.
"""

from __future__ import annotations

import io
import random
import zipfile
from datetime import date, datetime, time, timedelta
from pathlib import Path

from . import formats
from .ingest import VolumePoint
from .query import REFUGEE_THEMES
from .records import (
    ActorRef,
    EventRecord,
    GeoPoint,
    GkgRecord,
    MentionRecord,
    ThemeHit,
    ToneTuple,
)

COUNTRY_POOL = (
    "ESP", "USA", "ITA", "DEU", "FRA", "GBR", "TUR", "GRC", "SYR", "HUN",
    "AUS", "CAN", "SWE", "AUT", "POL", "NLD", "BEL", "CHE", "DNK", "NOR",
)

EVENT_CODE_POOL = (
    "010", "014", "018", "020", "040", "043", "0871", "051", "110", "112",
    "130", "14", "141", "1411", "1414", "170", "171", "190", "193", "200",
)

THEME_POOL = (
    "REFUGEES", "IMMIGRATION", "BORDER", "PROTEST", "CRISISLEX_CRISISLEXREC",
    "EPU_POLICY", "TAX_FNCACT", "GENERAL_GOVERNMENT", "EDUCATION",
    "ARMEDCONFLICT", "HUMAN_RIGHTS_ABUSES",
)

# Family-prefixed tokens deliberately OUTSIDE the stock eight-theme set.
PREFIX_ONLY_THEMES = (
    "DISCRIMINATION_IMMIGRATION_SOMETHINGELSE",
    "DISCRIMINATION_IMMIGRATION_QUOTAS",
    "DISCRIMINATION_IMMIGRATION_DEBATE",
)

SOURCE_SITES = (
    "worldnews.example", "dailybulletin.example", "thegazette.example",
    "courier.example", "heraldonline.example", "metropress.example",
)


def _rand_tone(rng: random.Random) -> float:
    return round(rng.uniform(-9.5, 4.5), 2)


def random_actor(
    rng: random.Random,
    refugee: bool = False,
    country: str | None = None,
) -> ActorRef | None:
    if refugee:
        return ActorRef(
            code="REF", name="REFUGEE", country_code=None, type_codes=("REF",)
        )
    roll = rng.random()
    if roll < 0.10:
        return None
    code = country or rng.choice(COUNTRY_POOL)
    if roll < 0.30:
        return ActorRef(
            code=code + "GOV", name=f"{code} GOVERNMENT",
            country_code=code, type_codes=("GOV",),
        )
    return ActorRef(code=code, name=code, country_code=code, type_codes=())


def random_event(
    rng: random.Random,
    global_event_id: int,
    day: date,
    actor1_country: str | None = None,
    refugee_actor2: bool = False,
    event_code: str | None = None,
) -> EventRecord:
    code = event_code or rng.choice(EVENT_CODE_POOL)
    base = code[:3] if len(code) > 3 else code
    root = code[:2] if len(code) > 2 else code
    geo = None
    if rng.random() < 0.8:
        geo_country = actor1_country or rng.choice(COUNTRY_POOL)
        geo = GeoPoint(
            latitude=round(rng.uniform(-55, 65), 4),
            longitude=round(rng.uniform(-120, 120), 4),
            country_code=geo_country[:2],
            full_name=f"{geo_country} (synthetic)",
        )
    return EventRecord(
        global_event_id=global_event_id,
        day=day,
        actor1=random_actor(rng, country=actor1_country),
        actor2=random_actor(rng, refugee=refugee_actor2),
        is_root_event=rng.random() < 0.5,
        event_code=code,
        event_base_code=base,
        event_root_code=root,
        quad_class=rng.randint(1, 4),
        goldstein_scale=round(rng.uniform(-10, 10), 1),
        num_mentions=rng.randint(1, 40),
        num_sources=rng.randint(1, 10),
        num_articles=rng.randint(1, 40),
        avg_tone=_rand_tone(rng),
        action_geo=geo,
        date_added=datetime.combine(day, time(rng.randint(0, 23), 15)),
        source_url=f"https://{rng.choice(SOURCE_SITES)}/{global_event_id}",
    )


def random_mentions(
    rng: random.Random,
    event: EventRecord,
    count: int | None = None,
    shared_pool: list[str] | None = None,
) -> list[MentionRecord]:
    if count is None:
        count = rng.randint(0, 5)
    event_time = datetime.combine(event.day, time(rng.randint(0, 12), 0))
    out = []
    used = set()
    for i in range(count):
        if shared_pool and rng.random() < 0.3:
            identifier = rng.choice(shared_pool)
        else:
            identifier = (
                f"https://{rng.choice(SOURCE_SITES)}/"
                f"{event.global_event_id}/a{i}"
            )
        if identifier in used:
            continue
        used.add(identifier)
        out.append(
            MentionRecord(
                global_event_id=event.global_event_id,
                event_time=event_time,
                mention_time=event_time + timedelta(hours=rng.randint(0, 48)),
                mention_type=1,
                mention_source_name=identifier.split("/")[2],
                mention_identifier=identifier,
                sentence_id=rng.randint(1, 12),
                confidence=rng.choice((10, 20, 30, 50, 70, 90, 100)),
                mention_doc_tone=_rand_tone(rng),
            )
        )
    return out


def random_gkg(
    rng: random.Random,
    record_seq: int,
    document_identifier: str,
    when: datetime,
    refugee_theme: bool = False,
    prefix_only_theme: bool = False,
) -> GkgRecord:
    themes: list[ThemeHit] = []
    offset = rng.randint(10, 400)
    picks = rng.sample(THEME_POOL, rng.randint(1, 4))
    if refugee_theme:
        picks.append(rng.choice(sorted(REFUGEE_THEMES)))
    if prefix_only_theme:
        picks.append(rng.choice(PREFIX_ONLY_THEMES))
    for theme in picks:
        themes.append(ThemeHit(theme=theme, char_offset=offset))
        offset += rng.randint(20, 300)
    stamp = when.strftime("%Y%m%d%H%M%S")
    return GkgRecord(
        gkg_record_id=f"{stamp}-{record_seq}",
        date=when,
        document_identifier=document_identifier,
        themes=tuple(themes),
        v2_tone=ToneTuple(
            tone=_rand_tone(rng),
            positive=round(rng.uniform(0, 8), 2),
            negative=round(rng.uniform(0, 12), 2),
            polarity=round(rng.uniform(0, 15), 2),
        ),
    )


def random_corpus(
    rng: random.Random,
    n_events: int,
    start: date = date(2021, 3, 1),
    end: date = date(2021, 3, 31),
    refugee_fraction: float = 0.3,
    refugee_theme_fraction: float = 0.5,
    gkg_fraction: float = 0.6,
    first_event_id: int = 500_000_000,
) -> tuple[list[EventRecord], list[MentionRecord], list[GkgRecord]]:
    """A joined three-table corpus with tunable refugee weighting.

    ``gkg_fraction`` of distinct mention identifiers get a GKG row;
    among those, ``refugee_theme_fraction`` carry a stock refugee theme.
    """
    span = (end - start).days
    events: list[EventRecord] = []
    mentions: list[MentionRecord] = []
    shared_pool = [
        f"https://{rng.choice(SOURCE_SITES)}/shared/{i}" for i in range(20)
    ]
    for i in range(n_events):
        day = start + timedelta(days=rng.randint(0, span))
        event = random_event(
            rng, first_event_id + i, day,
            refugee_actor2=rng.random() < refugee_fraction,
        )
        events.append(event)
        mentions.extend(random_mentions(rng, event, shared_pool=shared_pool))

    gkgs: list[GkgRecord] = []
    seen: set[str] = set()
    seq = 0
    for mention in mentions:
        identifier = mention.mention_identifier
        if identifier in seen or rng.random() > gkg_fraction:
            continue
        seen.add(identifier)
        gkgs.append(
            random_gkg(
                rng, seq, identifier, mention.mention_time,
                refugee_theme=rng.random() < refugee_theme_fraction,
                prefix_only_theme=rng.random() < 0.15,
            )
        )
        seq += 1
    return events, mentions, gkgs


# --------------------------------------------------------------------------
# Case-study fixtures
# --------------------------------------------------------------------------

def kurdi_fixture(
    rng: random.Random,
) -> tuple[list[EventRecord], list[MentionRecord], list[GkgRecord]]:
    """Refugee events March 2015 - March 2016 with a September-2015 surge.

    Monthly refugee-event volume peaks unambiguously in 2015-09 in both
    counting modes; tone dips during the surge. Non-refugee noise events
    are mixed in so criteria filtering has something to reject.
    """
    months = []
    cursor = date(2015, 3, 1)
    while cursor <= date(2016, 3, 1):
        months.append(cursor)
        cursor = (
            date(cursor.year + 1, 1, 1) if cursor.month == 12
            else date(cursor.year, cursor.month + 1, 1)
        )
    events, mentions, gkgs = [], [], []
    gid = 410_000_000
    seq = 0
    for month in months:
        surge = month == date(2015, 9, 1)
        n = rng.randint(50, 62) if surge else rng.randint(6, 16)
        for _ in range(n):
            day = month + timedelta(days=rng.randint(0, 27))
            event = random_event(rng, gid, day, refugee_actor2=True)
            if surge:
                event = _with_tone(event, round(rng.uniform(-9.5, -4.0), 2))
            gid += 1
            events.append(event)
            ms = random_mentions(rng, event, count=rng.randint(1, 3))
            mentions.extend(ms)
            for mention in ms:
                if rng.random() < 0.5:
                    gkgs.append(
                        random_gkg(
                            rng, seq, mention.mention_identifier,
                            mention.mention_time, refugee_theme=True,
                        )
                    )
                    seq += 1
        # Noise: non-refugee events criteria 1 must exclude.
        for _ in range(rng.randint(3, 8)):
            day = month + timedelta(days=rng.randint(0, 27))
            events.append(random_event(rng, gid, day, refugee_actor2=False))
            gid += 1
    return events, mentions, gkgs


def march2021_fixture(
    rng: random.Random,
    weights: dict[str, int] | None = None,
) -> tuple[list[EventRecord], list[MentionRecord], list[GkgRecord]]:
    """March-2021 refugee-theme events weighted ESP > USA > ITA.

    Every weighted event passes the theme criteria: at least one mention
    whose document carries a stock refugee theme.
    """
    weights = weights or {
        "ESP": 30, "USA": 22, "ITA": 15, "DEU": 8, "FRA": 6, "GRC": 4,
    }
    events, mentions, gkgs = [], [], []
    gid = 970_000_000
    seq = 0
    for country, count in weights.items():
        for _ in range(count):
            day = date(2021, 3, 1) + timedelta(days=rng.randint(0, 30))
            event = random_event(
                rng, gid, day, actor1_country=country, refugee_actor2=True
            )
            # The ordering fixture counts actor1 countries, so pin that
            # actor to a plain country actor (random_actor may drop it).
            event = _with_actor1(
                event,
                ActorRef(code=country, name=country,
                         country_code=country, type_codes=()),
            )
            gid += 1
            events.append(event)
            ms = random_mentions(rng, event, count=rng.randint(1, 2))
            mentions.extend(ms)
            gkgs.append(
                random_gkg(
                    rng, seq, ms[0].mention_identifier, ms[0].mention_time,
                    refugee_theme=True,
                )
            )
            seq += 1
            for extra in ms[1:]:
                if rng.random() < 0.4:
                    gkgs.append(
                        random_gkg(rng, seq, extra.mention_identifier,
                                   extra.mention_time)
                    )
                    seq += 1
    # Prefix-only events: pass prefix mode, fail exact-set mode.
    for _ in range(5):
        day = date(2021, 3, 1) + timedelta(days=rng.randint(0, 30))
        event = random_event(rng, gid, day, refugee_actor2=True)
        gid += 1
        events.append(event)
        ms = random_mentions(rng, event, count=1)
        mentions.extend(ms)
        gkgs.append(
            random_gkg(rng, seq, ms[0].mention_identifier, ms[0].mention_time,
                       prefix_only_theme=True)
        )
        seq += 1
    return events, mentions, gkgs


def _with_tone(event: EventRecord, tone: float) -> EventRecord:
    from dataclasses import replace

    return replace(event, avg_tone=tone)


def _with_actor1(event: EventRecord, actor: ActorRef) -> EventRecord:
    from dataclasses import replace

    return replace(event, actor1=actor)


def volume_points_for(
    rng: random.Random, days: list[date], matched_by_day: dict[date, int]
) -> list[VolumePoint]:
    """Plausible matched/total volume observations covering ``days``."""
    return [
        VolumePoint(
            date=datetime.combine(day, time(0, 0)),
            matched_count=float(matched_by_day.get(day, 0)),
            total_monitored=float(rng.randint(80_000, 120_000)),
        )
        for day in days
    ]


# --------------------------------------------------------------------------
# Export-file rendering
# --------------------------------------------------------------------------

def _zip_single(member_name: str, text: str) -> bytes:
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
        zf.writestr(member_name, text)
    return buf.getvalue()


def write_export_files(
    directory: str | Path,
    stamp: str,
    events: list[EventRecord],
    mentions: list[MentionRecord],
    gkgs: list[GkgRecord],
) -> list[Path]:
    """Render records into feed-named zip files, e.g.
    ``<stamp>.export.CSV.zip``; returns the three paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    parts = (
        (f"{stamp}.export.CSV", formats.render_event_line, events),
        (f"{stamp}.mentions.CSV", formats.render_mention_line, mentions),
        (f"{stamp}.gkg.csv", formats.render_gkg_line, gkgs),
    )
    out = []
    for member, renderer, records in parts:
        text = "".join(renderer(rec) + "\n" for rec in records)
        path = directory / f"{member}.zip"
        path.write_bytes(_zip_single(member, text))
        out.append(path)
    return out
