"""Domain records for GDELT 2.0 rows and their joined context.

All record types are immutable values: parsers and the store hand them
out freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime

#: Cap on how many per-line errors ParseDiagnostics keeps verbatim.
MAX_DIAGNOSTIC_ERRORS = 20


@dataclass(frozen=True)
class ActorRef:
    """One actor slot of a coded event.

    ``code`` is the raw composite CAMEO actor code (e.g. ``REF``,
    ``SYRREF``, ``USAGOV``); ``type_codes`` are the up-to-three
    role/type segments GDELT breaks out alongside it.
    """

    code: str | None = None
    name: str | None = None
    country_code: str | None = None
    type_codes: tuple[str, ...] = ()


@dataclass(frozen=True)
class GeoPoint:
    latitude: float
    longitude: float
    country_code: str | None = None
    full_name: str | None = None


@dataclass(frozen=True)
class EventRecord:
    """One coded world event row (Events table)."""

    global_event_id: int
    day: date
    actor1: ActorRef | None
    actor2: ActorRef | None
    is_root_event: bool
    event_code: str
    event_base_code: str
    event_root_code: str
    quad_class: int
    goldstein_scale: float
    num_mentions: int
    num_sources: int
    num_articles: int
    avg_tone: float
    action_geo: GeoPoint | None
    date_added: datetime
    source_url: str


@dataclass(frozen=True)
class MentionRecord:
    """One news-article mention of an event (Mentions table)."""

    global_event_id: int
    event_time: datetime
    mention_time: datetime
    mention_type: int
    mention_source_name: str
    mention_identifier: str
    sentence_id: int
    confidence: int
    mention_doc_tone: float


@dataclass(frozen=True)
class ThemeHit:
    """A GDELT theme token with its character offset in the document."""

    theme: str
    char_offset: int


@dataclass(frozen=True)
class ToneTuple:
    """First four components of the GKG V2Tone cell."""

    tone: float
    positive: float
    negative: float
    polarity: float


@dataclass(frozen=True)
class GkgRecord:
    """Per-document knowledge-graph row (GKG table).

    Locations and GCAM are retained as opaque strings; they are stored
    and round-tripped but never interpreted.
    """

    gkg_record_id: str
    date: datetime
    document_identifier: str
    themes: tuple[ThemeHit, ...]
    v2_tone: ToneTuple
    locations_raw: str = ""
    gcam_raw: str = ""


@dataclass
class ParseDiagnostics:
    """Counters accumulated while parsing one file.

    ``rows_total == rows_ok + rows_skipped`` always holds; ``first_errors``
    keeps at most MAX_DIAGNOSTIC_ERRORS ``(line_number, reason)`` pairs.
    """

    rows_total: int = 0
    rows_ok: int = 0
    rows_skipped: int = 0
    first_errors: list[tuple[int, str]] = field(default_factory=list)

    def ok(self) -> None:
        self.rows_total += 1
        self.rows_ok += 1

    def skip(self, line_number: int, reason: str) -> None:
        self.rows_total += 1
        self.rows_skipped += 1
        if len(self.first_errors) < MAX_DIAGNOSTIC_ERRORS:
            self.first_errors.append((line_number, reason))


@dataclass(frozen=True)
class EventWithContext:
    """An event joined with its mentions and their GKG documents.

    ``documents`` holds every stored GKG row whose document identifier
    equals some mention's identifier; lists are deterministically ordered
    (mentions by time then identifier, documents by record id).
    """

    event: EventRecord
    mentions: tuple[MentionRecord, ...] = ()
    documents: tuple[GkgRecord, ...] = ()
