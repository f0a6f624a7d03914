"""Embedded SQLite store materializing the events/mentions/GKG join.

Schema mirrors the three-table topology: Events 1-N Mentions (by
GLOBALEVENTID), Mentions 1-0..1 GKG documents (mention identifier ==
document identifier). Upserts are idempotent by primary key, so
re-ingesting a file changes nothing. Mentions and GKG rows arriving
before their event row are stored and linked lazily at read time.

Single writer, multiple readers: one shared connection guarded by a
lock; all aggregate reads take a consistent snapshot per call.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from datetime import date, datetime
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .errors import StoreError
from .records import (
    ActorRef,
    EventRecord,
    EventWithContext,
    GeoPoint,
    GkgRecord,
    MentionRecord,
    ThemeHit,
    ToneTuple,
)

SCHEMA_VERSION = 1

_SCHEMA = """
CREATE TABLE IF NOT EXISTS schema_version (version INTEGER NOT NULL);

CREATE TABLE IF NOT EXISTS events (
    global_event_id INTEGER PRIMARY KEY,
    day TEXT NOT NULL,
    actor1_code TEXT, actor1_name TEXT, actor1_country TEXT, actor1_types TEXT,
    actor2_code TEXT, actor2_name TEXT, actor2_country TEXT, actor2_types TEXT,
    is_root_event INTEGER NOT NULL,
    event_code TEXT NOT NULL,
    event_base_code TEXT NOT NULL,
    event_root_code TEXT NOT NULL,
    quad_class INTEGER NOT NULL,
    goldstein REAL NOT NULL,
    num_mentions INTEGER NOT NULL,
    num_sources INTEGER NOT NULL,
    num_articles INTEGER NOT NULL,
    avg_tone REAL NOT NULL,
    geo_lat REAL, geo_lon REAL, geo_country TEXT, geo_fullname TEXT,
    date_added TEXT NOT NULL,
    source_url TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_events_day ON events(day);
CREATE INDEX IF NOT EXISTS idx_events_actor2_code ON events(actor2_code);

CREATE TABLE IF NOT EXISTS mentions (
    global_event_id INTEGER NOT NULL,
    mention_identifier TEXT NOT NULL,
    event_time TEXT NOT NULL,
    mention_time TEXT NOT NULL,
    mention_type INTEGER NOT NULL,
    source_name TEXT NOT NULL,
    sentence_id INTEGER NOT NULL,
    confidence INTEGER NOT NULL,
    doc_tone REAL NOT NULL,
    PRIMARY KEY (global_event_id, mention_identifier)
);
CREATE INDEX IF NOT EXISTS idx_mentions_identifier
    ON mentions(mention_identifier);

CREATE TABLE IF NOT EXISTS gkg (
    gkg_record_id TEXT PRIMARY KEY,
    date TEXT NOT NULL,
    document_identifier TEXT NOT NULL,
    themes TEXT NOT NULL,
    tone REAL NOT NULL, tone_positive REAL NOT NULL,
    tone_negative REAL NOT NULL, tone_polarity REAL NOT NULL,
    locations_raw TEXT NOT NULL,
    gcam_raw TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_gkg_doc ON gkg(document_identifier);

CREATE TABLE IF NOT EXISTS volume_points (
    bucket TEXT PRIMARY KEY,
    matched INTEGER NOT NULL,
    total INTEGER NOT NULL,
    query_filter TEXT NOT NULL
);

CREATE TABLE IF NOT EXISTS ingest_log (
    file_name TEXT PRIMARY KEY,
    kind TEXT NOT NULL,
    rows_ok INTEGER NOT NULL,
    rows_skipped INTEGER NOT NULL,
    inserted INTEGER NOT NULL,
    updated INTEGER NOT NULL,
    ingested_at TEXT NOT NULL
);

CREATE TABLE IF NOT EXISTS meta (
    key TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
"""


# Column order of the events table; keep in sync with _SCHEMA.
_EVENT_COLS = (
    "global_event_id", "day",
    "actor1_code", "actor1_name", "actor1_country", "actor1_types",
    "actor2_code", "actor2_name", "actor2_country", "actor2_types",
    "is_root_event", "event_code", "event_base_code", "event_root_code",
    "quad_class", "goldstein", "num_mentions", "num_sources", "num_articles",
    "avg_tone", "geo_lat", "geo_lon", "geo_country", "geo_fullname",
    "date_added", "source_url",
)
_DATE_ADDED_IDX = _EVENT_COLS.index("date_added")


class UpsertCounts(NamedTuple):
    inserted: int
    updated: int


class IngestStatus(NamedTuple):
    last_poll_time: datetime | None
    files_ingested: int
    event_rows: int
    mention_rows: int
    gkg_rows: int


class VolumePointRow(NamedTuple):
    """A stored matched/total article-volume observation.

    Field names mirror the feed client's VolumePoint so the two are
    interchangeable wherever volume observations are consumed."""

    date: datetime
    matched_count: int
    total_monitored: int


class Store:
    def __init__(self, path: str | Path = ":memory:", date_floor: date | None = None):
        self._path = str(path)
        # Events older than the floor are dropped at ingest (retention knob).
        self._date_floor = date_floor
        self._lock = threading.RLock()
        self._conn = sqlite3.connect(self._path, check_same_thread=False)
        self._conn.execute("PRAGMA foreign_keys = OFF")
        with self._lock, self._conn:
            self._conn.executescript(_SCHEMA)
            row = self._conn.execute("SELECT version FROM schema_version").fetchone()
            if row is None:
                self._conn.execute(
                    "INSERT INTO schema_version (version) VALUES (?)",
                    (SCHEMA_VERSION,),
                )
            elif row[0] != SCHEMA_VERSION:
                raise StoreError(
                    f"store {self._path} has schema version {row[0]}, "
                    f"this build expects {SCHEMA_VERSION}"
                )

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # ------------------------------------------------------------------
    # Upserts
    # ------------------------------------------------------------------

    def upsert_events(self, batch: Iterable[EventRecord]) -> UpsertCounts:
        inserted = updated = 0
        with self._lock, self._conn:
            for rec in batch:
                if self._date_floor is not None and rec.day < self._date_floor:
                    continue
                row = _event_to_row(rec)
                existing = self._conn.execute(
                    "SELECT * FROM events WHERE global_event_id = ?",
                    (rec.global_event_id,),
                ).fetchone()
                if existing is None:
                    self._conn.execute(
                        f"INSERT INTO events VALUES ({_marks(row)})", row
                    )
                    inserted += 1
                elif tuple(existing) != row:
                    # Re-published events overwrite; the later date_added wins.
                    if rec.date_added.isoformat() >= existing[_DATE_ADDED_IDX]:
                        self._conn.execute(
                            f"INSERT OR REPLACE INTO events VALUES ({_marks(row)})",
                            row,
                        )
                        updated += 1
        return UpsertCounts(inserted, updated)

    def upsert_mentions(self, batch: Iterable[MentionRecord]) -> UpsertCounts:
        inserted = updated = 0
        with self._lock, self._conn:
            for rec in batch:
                row = _mention_to_row(rec)
                existing = self._conn.execute(
                    "SELECT * FROM mentions WHERE global_event_id = ? "
                    "AND mention_identifier = ?",
                    (rec.global_event_id, rec.mention_identifier),
                ).fetchone()
                if existing is None:
                    self._conn.execute(
                        f"INSERT INTO mentions VALUES ({_marks(row)})", row
                    )
                    inserted += 1
                elif tuple(existing) != row:
                    self._conn.execute(
                        f"INSERT OR REPLACE INTO mentions VALUES ({_marks(row)})",
                        row,
                    )
                    updated += 1
        return UpsertCounts(inserted, updated)

    def upsert_gkg(self, batch: Iterable[GkgRecord]) -> UpsertCounts:
        inserted = updated = 0
        with self._lock, self._conn:
            for rec in batch:
                row = _gkg_to_row(rec)
                existing = self._conn.execute(
                    "SELECT * FROM gkg WHERE gkg_record_id = ?",
                    (rec.gkg_record_id,),
                ).fetchone()
                if existing is None:
                    self._conn.execute(
                        f"INSERT INTO gkg VALUES ({_marks(row)})", row
                    )
                    inserted += 1
                elif tuple(existing) != row:
                    self._conn.execute(
                        f"INSERT OR REPLACE INTO gkg VALUES ({_marks(row)})", row
                    )
                    updated += 1
        return UpsertCounts(inserted, updated)

    def upsert_volume_points(
        self, points: Iterable, query_filter: str = ""
    ) -> UpsertCounts:
        """Store DOC-API volume observations keyed by timestamp.

        The total-monitored denominator is query-independent, so the
        table is keyed by bucket alone; re-fetching overwrites.
        """
        inserted = updated = 0
        with self._lock, self._conn:
            for point in points:
                key = point.date.isoformat()
                row = (key, point.matched_count, point.total_monitored, query_filter)
                existing = self._conn.execute(
                    "SELECT * FROM volume_points WHERE bucket = ?", (key,)
                ).fetchone()
                if existing is None:
                    self._conn.execute(
                        "INSERT INTO volume_points VALUES (?, ?, ?, ?)", row
                    )
                    inserted += 1
                elif tuple(existing) != row:
                    self._conn.execute(
                        "INSERT OR REPLACE INTO volume_points VALUES (?, ?, ?, ?)",
                        row,
                    )
                    updated += 1
        return UpsertCounts(inserted, updated)

    # ------------------------------------------------------------------
    # Reads
    # ------------------------------------------------------------------

    def event_count(self) -> int:
        return self._count("events")

    def mention_count(self) -> int:
        return self._count("mentions")

    def gkg_count(self) -> int:
        return self._count("gkg")

    def _count(self, table: str) -> int:
        with self._lock:
            return self._conn.execute(f"SELECT COUNT(*) FROM {table}").fetchone()[0]

    def get_event_with_context(self, global_event_id: int) -> EventWithContext | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT * FROM events WHERE global_event_id = ?",
                (global_event_id,),
            ).fetchone()
            if row is None:
                return None
            event = _row_to_event(row)
            mentions = self._mentions_for([global_event_id])[global_event_id]
            documents = self._documents_for(
                {m.mention_identifier for m in mentions}
            )
        return EventWithContext(
            event=event, mentions=tuple(mentions), documents=tuple(documents)
        )

    def scan(self, criteria) -> list[EventWithContext]:
        """All contexts passing ``criteria``, ordered by (day, event id).

        SQL narrows by date range (and the exact-mode refugee clause);
        the full conjunction is applied by ``query.matches`` so results
        are exactly the predicate semantics.
        """
        from .query import REFUGEE_MODE_EXACT, matches

        clauses, args = [], []
        if criteria.date_range is not None:
            clauses.append("day BETWEEN ? AND ?")
            args += [criteria.date_range[0].isoformat(),
                     criteria.date_range[1].isoformat()]
        if criteria.actor2_refugee and criteria.refugee_mode == REFUGEE_MODE_EXACT:
            clauses.append("actor2_code = 'REF'")
        where = f"WHERE {' AND '.join(clauses)}" if clauses else ""
        with self._lock:
            rows = self._conn.execute(
                f"SELECT * FROM events {where} ORDER BY day, global_event_id",
                args,
            ).fetchall()
            events = [_row_to_event(r) for r in rows]
            mentions_by_event = self._mentions_for(
                [e.global_event_id for e in events]
            )
            identifiers = {
                m.mention_identifier
                for ms in mentions_by_event.values()
                for m in ms
            }
            docs_by_identifier = self._documents_by_identifier(identifiers)

        out = []
        for event in events:
            mentions = mentions_by_event[event.global_event_id]
            docs: dict[str, GkgRecord] = {}
            for m in mentions:
                for doc in docs_by_identifier.get(m.mention_identifier, ()):
                    docs[doc.gkg_record_id] = doc
            ctx = EventWithContext(
                event=event,
                mentions=tuple(mentions),
                documents=tuple(
                    docs[k] for k in sorted(docs)
                ),
            )
            if matches(criteria, ctx):
                out.append(ctx)
        return out

    def _mentions_for(
        self, event_ids: Sequence[int]
    ) -> dict[int, list[MentionRecord]]:
        grouped: dict[int, list[MentionRecord]] = {gid: [] for gid in event_ids}
        for chunk in _chunks(list(event_ids), 500):
            marks = ",".join("?" * len(chunk))
            rows = self._conn.execute(
                f"SELECT * FROM mentions WHERE global_event_id IN ({marks})",
                chunk,
            ).fetchall()
            for row in rows:
                rec = _row_to_mention(row)
                grouped[rec.global_event_id].append(rec)
        for gid in grouped:
            grouped[gid].sort(key=lambda m: (m.mention_time, m.mention_identifier))
        return grouped

    def _documents_by_identifier(
        self, identifiers: Iterable[str]
    ) -> dict[str, list[GkgRecord]]:
        grouped: dict[str, list[GkgRecord]] = {}
        for chunk in _chunks(sorted(identifiers), 500):
            marks = ",".join("?" * len(chunk))
            rows = self._conn.execute(
                f"SELECT * FROM gkg WHERE document_identifier IN ({marks})",
                chunk,
            ).fetchall()
            for row in rows:
                rec = _row_to_gkg(row)
                grouped.setdefault(rec.document_identifier, []).append(rec)
        return grouped

    def _documents_for(self, identifiers: Iterable[str]) -> list[GkgRecord]:
        grouped = self._documents_by_identifier(identifiers)
        docs = {d.gkg_record_id: d for ds in grouped.values() for d in ds}
        return [docs[k] for k in sorted(docs)]

    def orphan_mentions(self) -> list[MentionRecord]:
        """Mentions whose event row has not arrived (feed-ordering gaps)."""
        with self._lock:
            rows = self._conn.execute(
                "SELECT m.* FROM mentions m "
                "LEFT JOIN events e USING (global_event_id) "
                "WHERE e.global_event_id IS NULL "
                "ORDER BY m.global_event_id, m.mention_identifier"
            ).fetchall()
        return [_row_to_mention(r) for r in rows]

    def list_events(self, limit: int = 100, offset: int = 0) -> list[EventRecord]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT * FROM events ORDER BY day, global_event_id "
                "LIMIT ? OFFSET ?",
                (limit, offset),
            ).fetchall()
        return [_row_to_event(r) for r in rows]

    def volume_points(self) -> list[VolumePointRow]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT bucket, matched, total FROM volume_points ORDER BY bucket"
            ).fetchall()
        return [
            VolumePointRow(datetime.fromisoformat(b), m, t) for b, m, t in rows
        ]

    # ------------------------------------------------------------------
    # Ingest bookkeeping
    # ------------------------------------------------------------------

    def record_file_ingest(
        self,
        file_name: str,
        kind: str,
        rows_ok: int,
        rows_skipped: int,
        counts: UpsertCounts,
    ) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO ingest_log VALUES (?, ?, ?, ?, ?, ?, ?)",
                (
                    file_name, kind, rows_ok, rows_skipped,
                    counts.inserted, counts.updated,
                    datetime.utcnow().isoformat(),
                ),
            )

    def set_last_poll_time(self, when: datetime) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO meta VALUES ('last_poll_time', ?)",
                (when.isoformat(),),
            )

    def ingest_status(self) -> IngestStatus:
        with self._lock:
            row = self._conn.execute(
                "SELECT value FROM meta WHERE key = 'last_poll_time'"
            ).fetchone()
            files = self._conn.execute(
                "SELECT COUNT(*) FROM ingest_log"
            ).fetchone()[0]
        return IngestStatus(
            last_poll_time=datetime.fromisoformat(row[0]) if row else None,
            files_ingested=files,
            event_rows=self.event_count(),
            mention_rows=self.mention_count(),
            gkg_rows=self.gkg_count(),
        )


# --------------------------------------------------------------------------
# Row mapping
# --------------------------------------------------------------------------

def _marks(row: tuple) -> str:
    return ",".join("?" * len(row))


def _chunks(items: list, size: int):
    for i in range(0, len(items), size):
        yield items[i:i + size]


def _actor_cells(actor: ActorRef | None) -> tuple:
    if actor is None:
        return (None, None, None, None)
    return (
        actor.code,
        actor.name,
        actor.country_code,
        ",".join(actor.type_codes) if actor.type_codes else "",
    )


def _event_to_row(rec: EventRecord) -> tuple:
    geo = rec.action_geo
    return (
        rec.global_event_id,
        rec.day.isoformat(),
        *_actor_cells(rec.actor1),
        *_actor_cells(rec.actor2),
        1 if rec.is_root_event else 0,
        rec.event_code,
        rec.event_base_code,
        rec.event_root_code,
        rec.quad_class,
        rec.goldstein_scale,
        rec.num_mentions,
        rec.num_sources,
        rec.num_articles,
        rec.avg_tone,
        geo.latitude if geo else None,
        geo.longitude if geo else None,
        geo.country_code if geo else None,
        geo.full_name if geo else None,
        rec.date_added.isoformat(),
        rec.source_url,
    )


def _row_to_actor(code, name, country, types) -> ActorRef | None:
    if code is None and name is None and country is None and not types:
        return None
    return ActorRef(
        code=code,
        name=name,
        country_code=country,
        type_codes=tuple(types.split(",")) if types else (),
    )


def _row_to_event(row: tuple) -> EventRecord:
    (
        gid, day, a1c, a1n, a1cc, a1t, a2c, a2n, a2cc, a2t, is_root,
        code, base, root, quad, goldstein, n_mentions, n_sources,
        n_articles, tone, lat, lon, geo_cc, geo_name, added, url,
    ) = row
    geo = None
    if lat is not None and lon is not None:
        geo = GeoPoint(
            latitude=lat, longitude=lon, country_code=geo_cc, full_name=geo_name
        )
    return EventRecord(
        global_event_id=gid,
        day=date.fromisoformat(day),
        actor1=_row_to_actor(a1c, a1n, a1cc, a1t),
        actor2=_row_to_actor(a2c, a2n, a2cc, a2t),
        is_root_event=bool(is_root),
        event_code=code,
        event_base_code=base,
        event_root_code=root,
        quad_class=quad,
        goldstein_scale=goldstein,
        num_mentions=n_mentions,
        num_sources=n_sources,
        num_articles=n_articles,
        avg_tone=tone,
        action_geo=geo,
        date_added=datetime.fromisoformat(added),
        source_url=url,
    )


def _mention_to_row(rec: MentionRecord) -> tuple:
    return (
        rec.global_event_id,
        rec.mention_identifier,
        rec.event_time.isoformat(),
        rec.mention_time.isoformat(),
        rec.mention_type,
        rec.mention_source_name,
        rec.sentence_id,
        rec.confidence,
        rec.mention_doc_tone,
    )


def _row_to_mention(row: tuple) -> MentionRecord:
    gid, identifier, event_time, mention_time, mtype, source, sid, conf, tone = row
    return MentionRecord(
        global_event_id=gid,
        event_time=datetime.fromisoformat(event_time),
        mention_time=datetime.fromisoformat(mention_time),
        mention_type=mtype,
        mention_source_name=source,
        mention_identifier=identifier,
        sentence_id=sid,
        confidence=conf,
        mention_doc_tone=tone,
    )


def _gkg_to_row(rec: GkgRecord) -> tuple:
    return (
        rec.gkg_record_id,
        rec.date.isoformat(),
        rec.document_identifier,
        json.dumps([[h.theme, h.char_offset] for h in rec.themes]),
        rec.v2_tone.tone,
        rec.v2_tone.positive,
        rec.v2_tone.negative,
        rec.v2_tone.polarity,
        rec.locations_raw,
        rec.gcam_raw,
    )


def _row_to_gkg(row: tuple) -> GkgRecord:
    (
        rid, when, identifier, themes_json,
        tone, positive, negative, polarity, locations, gcam,
    ) = row
    return GkgRecord(
        gkg_record_id=rid,
        date=datetime.fromisoformat(when),
        document_identifier=identifier,
        themes=tuple(
            ThemeHit(theme=t, char_offset=o) for t, o in json.loads(themes_json)
        ),
        v2_tone=ToneTuple(tone, positive, negative, polarity),
        locations_raw=locations,
        gcam_raw=gcam,
    )
