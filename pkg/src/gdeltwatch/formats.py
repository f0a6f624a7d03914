"""Parsers for GDELT 2.0 bulk export files.

GDELT publishes three tab-delimited tables every 15 minutes (the files
are named ``.CSV`` but are tab-delimited): the Events table, the
Mentions table, and the Global Knowledge Graph (GKG). Column positions
follow the official 2.0 codebooks and are addressed through the layout
tables below, so a codebook revision changes one tuple, not the code.

Parsers are pure functions over byte streams. Malformed rows are
skipped and counted in ParseDiagnostics, never fatal; only a file that
yields zero parseable rows from non-empty input raises FormatError.
Where GDELT ships both V1 and V2 variants of a field, only the V2
variant is parsed.
"""

from __future__ import annotations

import io
import zipfile
from datetime import date, datetime
from typing import IO, Iterable, Iterator

from .errors import FormatError
from .records import (
    ActorRef,
    EventRecord,
    GeoPoint,
    GkgRecord,
    MentionRecord,
    ParseDiagnostics,
    ThemeHit,
    ToneTuple,
)

# --------------------------------------------------------------------------
# Column layouts (GDELT 2.0 Event / Mentions / GKG 2.1 codebooks)
# --------------------------------------------------------------------------

EVENT_COLUMNS = (
    "GLOBALEVENTID", "SQLDATE", "MonthYear", "Year", "FractionDate",
    "Actor1Code", "Actor1Name", "Actor1CountryCode", "Actor1KnownGroupCode",
    "Actor1EthnicCode", "Actor1Religion1Code", "Actor1Religion2Code",
    "Actor1Type1Code", "Actor1Type2Code", "Actor1Type3Code",
    "Actor2Code", "Actor2Name", "Actor2CountryCode", "Actor2KnownGroupCode",
    "Actor2EthnicCode", "Actor2Religion1Code", "Actor2Religion2Code",
    "Actor2Type1Code", "Actor2Type2Code", "Actor2Type3Code",
    "IsRootEvent", "EventCode", "EventBaseCode", "EventRootCode",
    "QuadClass", "GoldsteinScale",
    "NumMentions", "NumSources", "NumArticles", "AvgTone",
    "Actor1Geo_Type", "Actor1Geo_FullName", "Actor1Geo_CountryCode",
    "Actor1Geo_ADM1Code", "Actor1Geo_ADM2Code", "Actor1Geo_Lat",
    "Actor1Geo_Long", "Actor1Geo_FeatureID",
    "Actor2Geo_Type", "Actor2Geo_FullName", "Actor2Geo_CountryCode",
    "Actor2Geo_ADM1Code", "Actor2Geo_ADM2Code", "Actor2Geo_Lat",
    "Actor2Geo_Long", "Actor2Geo_FeatureID",
    "ActionGeo_Type", "ActionGeo_FullName", "ActionGeo_CountryCode",
    "ActionGeo_ADM1Code", "ActionGeo_ADM2Code", "ActionGeo_Lat",
    "ActionGeo_Long", "ActionGeo_FeatureID",
    "DATEADDED", "SOURCEURL",
)

MENTION_COLUMNS = (
    "GLOBALEVENTID", "EventTimeDate", "MentionTimeDate", "MentionType",
    "MentionSourceName", "MentionIdentifier", "SentenceID",
    "Actor1CharOffset", "Actor2CharOffset", "ActionCharOffset", "InRawText",
    "Confidence", "MentionDocLen", "MentionDocTone",
    "MentionDocTranslationInfo", "Extras",
)

GKG_COLUMNS = (
    "GKGRECORDID", "DATE", "SourceCollectionIdentifier", "SourceCommonName",
    "DocumentIdentifier", "Counts", "V2Counts", "Themes", "V2Themes",
    "Locations", "V2Locations", "Persons", "V2Persons", "Organizations",
    "V2Organizations", "V2Tone", "Dates", "GCAM", "SharingImage",
    "RelatedImages", "SocialImageEmbeds", "SocialVideoEmbeds", "Quotations",
    "AllNames", "Amounts", "TranslationInfo", "Extras",
)

_EVENT_IDX = {name: i for i, name in enumerate(EVENT_COLUMNS)}
_MENTION_IDX = {name: i for i, name in enumerate(MENTION_COLUMNS)}
_GKG_IDX = {name: i for i, name in enumerate(GKG_COLUMNS)}


class _RowSkip(Exception):
    """Internal: abandon the current row with a reason."""


# --------------------------------------------------------------------------
# Cell helpers
# --------------------------------------------------------------------------

def _text(cell: str) -> str | None:
    cell = cell.strip()
    return cell or None


def _req_int(cell: str, what: str) -> int:
    try:
        return int(cell.strip())
    except ValueError:
        raise _RowSkip(f"{what}: not an integer ({cell!r})") from None


def _req_float(cell: str, what: str) -> float:
    try:
        return float(cell.strip())
    except ValueError:
        raise _RowSkip(f"{what}: not a number ({cell!r})") from None


def _req_day(cell: str, what: str) -> date:
    try:
        return datetime.strptime(cell.strip(), "%Y%m%d").date()
    except ValueError:
        raise _RowSkip(f"{what}: not a YYYYMMDD date ({cell!r})") from None


def _req_timestamp(cell: str, what: str) -> datetime:
    try:
        return datetime.strptime(cell.strip(), "%Y%m%d%H%M%S")
    except ValueError:
        raise _RowSkip(f"{what}: not a YYYYMMDDHHMMSS timestamp ({cell!r})") from None


def _iter_lines(source: bytes | IO[bytes]) -> Iterator[str]:
    # Heterogeneous upstream sources: decode as UTF-8 with replacement,
    # never fatal.
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    else:
        data = source.read()
    yield from data.decode("utf-8", errors="replace").splitlines()


# --------------------------------------------------------------------------
# Events
# --------------------------------------------------------------------------

def _parse_actor(cols: list[str], prefix: str) -> ActorRef | None:
    code = _text(cols[_EVENT_IDX[prefix + "Code"]])
    name = _text(cols[_EVENT_IDX[prefix + "Name"]])
    country = _text(cols[_EVENT_IDX[prefix + "CountryCode"]])
    types = tuple(
        t.upper()
        for t in (
            _text(cols[_EVENT_IDX[prefix + f"Type{n}Code"]]) for n in (1, 2, 3)
        )
        if t
    )
    if code is not None:
        code = code.upper()
        if not code.isalnum():
            # Junk actor codes are dropped, not fabricated or fatal.
            code = None
    if country is not None:
        country = country.upper()
    if code is None and name is None and country is None and not types:
        return None
    return ActorRef(code=code, name=name, country_code=country, type_codes=types)


def _parse_geo(cols: list[str], prefix: str) -> GeoPoint | None:
    lat_cell = cols[_EVENT_IDX[prefix + "_Lat"]].strip()
    lon_cell = cols[_EVENT_IDX[prefix + "_Long"]].strip()
    if not lat_cell or not lon_cell:
        return None
    try:
        lat = float(lat_cell)
        lon = float(lon_cell)
    except ValueError:
        return None
    if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
        return None
    return GeoPoint(
        latitude=lat,
        longitude=lon,
        country_code=_text(cols[_EVENT_IDX[prefix + "_CountryCode"]]),
        full_name=_text(cols[_EVENT_IDX[prefix + "_FullName"]]),
    )


def _parse_event_row(cols: list[str]) -> EventRecord:
    if len(cols) != len(EVENT_COLUMNS):
        raise _RowSkip(f"expected {len(EVENT_COLUMNS)} columns, got {len(cols)}")

    gid = _req_int(cols[_EVENT_IDX["GLOBALEVENTID"]], "GLOBALEVENTID")
    day = _req_day(cols[_EVENT_IDX["SQLDATE"]], "SQLDATE")

    root_cell = cols[_EVENT_IDX["IsRootEvent"]].strip()
    if root_cell not in ("0", "1"):
        raise _RowSkip(f"IsRootEvent: expected 0 or 1 ({root_cell!r})")

    event_code = _text(cols[_EVENT_IDX["EventCode"]])
    if event_code is None:
        raise _RowSkip("EventCode: empty")
    event_code = event_code.upper()
    # Base and root codes are prefixes of the action code by definition;
    # deriving them keeps noisy rows consistent without inventing data.
    event_base_code = event_code[:3] if len(event_code) > 3 else event_code
    event_root_code = event_code[:2] if len(event_code) > 2 else event_code

    quad_class = _req_int(cols[_EVENT_IDX["QuadClass"]], "QuadClass")
    if not 1 <= quad_class <= 4:
        raise _RowSkip(f"QuadClass: out of range ({quad_class})")
    goldstein = _req_float(cols[_EVENT_IDX["GoldsteinScale"]], "GoldsteinScale")
    if not -10.0 <= goldstein <= 10.0:
        raise _RowSkip(f"GoldsteinScale: out of range ({goldstein})")

    counts = []
    for col in ("NumMentions", "NumSources", "NumArticles"):
        n = _req_int(cols[_EVENT_IDX[col]], col)
        if n < 0:
            raise _RowSkip(f"{col}: negative ({n})")
        counts.append(n)

    return EventRecord(
        global_event_id=gid,
        day=day,
        actor1=_parse_actor(cols, "Actor1"),
        actor2=_parse_actor(cols, "Actor2"),
        is_root_event=root_cell == "1",
        event_code=event_code,
        event_base_code=event_base_code,
        event_root_code=event_root_code,
        quad_class=quad_class,
        goldstein_scale=goldstein,
        num_mentions=counts[0],
        num_sources=counts[1],
        num_articles=counts[2],
        avg_tone=_req_float(cols[_EVENT_IDX["AvgTone"]], "AvgTone"),
        action_geo=_parse_geo(cols, "ActionGeo"),
        date_added=_req_timestamp(cols[_EVENT_IDX["DATEADDED"]], "DATEADDED"),
        source_url=cols[_EVENT_IDX["SOURCEURL"]].strip(),
    )


def _parse_table(
    source: bytes | IO[bytes],
    row_parser,
    table_name: str,
) -> tuple[list, ParseDiagnostics]:
    records = []
    diag = ParseDiagnostics()
    for line_no, line in enumerate(_iter_lines(source), start=1):
        try:
            records.append(row_parser(line.split("\t")))
        except _RowSkip as skip:
            diag.skip(line_no, str(skip))
        else:
            diag.ok()
    if diag.rows_total > 0 and diag.rows_ok == 0:
        raise FormatError(
            f"no parseable {table_name} rows in non-empty input "
            f"({diag.rows_skipped} skipped)",
            diagnostics=diag,
        )
    return records, diag


def parse_events_file(source: bytes | IO[bytes]) -> tuple[list[EventRecord], ParseDiagnostics]:
    """Parse one Events export file (tab-delimited, one event per line)."""
    return _parse_table(source, _parse_event_row, "event")


# --------------------------------------------------------------------------
# Mentions
# --------------------------------------------------------------------------

def _parse_mention_row(cols: list[str]) -> MentionRecord:
    if len(cols) != len(MENTION_COLUMNS):
        raise _RowSkip(f"expected {len(MENTION_COLUMNS)} columns, got {len(cols)}")
    identifier = cols[_MENTION_IDX["MentionIdentifier"]].strip()
    if not identifier:
        raise _RowSkip("MentionIdentifier: empty")
    confidence = _req_int(cols[_MENTION_IDX["Confidence"]], "Confidence")
    if not 0 <= confidence <= 100:
        raise _RowSkip(f"Confidence: out of range ({confidence})")
    return MentionRecord(
        global_event_id=_req_int(cols[_MENTION_IDX["GLOBALEVENTID"]], "GLOBALEVENTID"),
        event_time=_req_timestamp(cols[_MENTION_IDX["EventTimeDate"]], "EventTimeDate"),
        mention_time=_req_timestamp(cols[_MENTION_IDX["MentionTimeDate"]], "MentionTimeDate"),
        mention_type=_req_int(cols[_MENTION_IDX["MentionType"]], "MentionType"),
        mention_source_name=cols[_MENTION_IDX["MentionSourceName"]].strip(),
        mention_identifier=identifier,
        sentence_id=_req_int(cols[_MENTION_IDX["SentenceID"]], "SentenceID"),
        confidence=confidence,
        mention_doc_tone=_req_float(cols[_MENTION_IDX["MentionDocTone"]], "MentionDocTone"),
    )


def parse_mentions_file(source: bytes | IO[bytes]) -> tuple[list[MentionRecord], ParseDiagnostics]:
    """Parse one Mentions export file."""
    return _parse_table(source, _parse_mention_row, "mention")


# --------------------------------------------------------------------------
# GKG
# --------------------------------------------------------------------------

def parse_v2themes(raw: str) -> list[ThemeHit]:
    """Parse a V2Themes cell: ``THEME,offset`` entries joined by ``;``.

    Order-preserving. Entries without a comma (or with a junk offset)
    are kept with char_offset 0; empty segments are dropped.
    """
    hits: list[ThemeHit] = []
    for entry in raw.split(";"):
        entry = entry.strip()
        if not entry:
            continue
        theme, sep, offset_text = entry.rpartition(",")
        if sep and theme:
            try:
                offset = int(offset_text)
            except ValueError:
                hits.append(ThemeHit(theme=entry, char_offset=0))
                continue
            hits.append(ThemeHit(theme=theme, char_offset=max(offset, 0)))
        else:
            hits.append(ThemeHit(theme=entry, char_offset=0))
    return hits


def render_v2themes(hits: Iterable[ThemeHit]) -> str:
    return ";".join(f"{h.theme},{h.char_offset}" for h in hits)


def _parse_tone(cell: str) -> ToneTuple:
    parts = cell.split(",")
    if len(parts) < 4:
        raise _RowSkip(f"V2Tone: expected at least 4 components ({cell!r})")
    try:
        values = [float(p) for p in parts[:4]]
    except ValueError:
        raise _RowSkip(f"V2Tone: non-numeric component ({cell!r})") from None
    return ToneTuple(*values)


def _parse_gkg_row(cols: list[str]) -> GkgRecord:
    if len(cols) != len(GKG_COLUMNS):
        raise _RowSkip(f"expected {len(GKG_COLUMNS)} columns, got {len(cols)}")
    record_id = cols[_GKG_IDX["GKGRECORDID"]].strip()
    if not record_id:
        raise _RowSkip("GKGRECORDID: empty")
    identifier = cols[_GKG_IDX["DocumentIdentifier"]].strip()
    if not identifier:
        raise _RowSkip("DocumentIdentifier: empty")
    return GkgRecord(
        gkg_record_id=record_id,
        date=_req_timestamp(cols[_GKG_IDX["DATE"]], "DATE"),
        document_identifier=identifier,
        themes=tuple(parse_v2themes(cols[_GKG_IDX["V2Themes"]])),
        v2_tone=_parse_tone(cols[_GKG_IDX["V2Tone"]]),
        locations_raw=cols[_GKG_IDX["V2Locations"]],
        gcam_raw=cols[_GKG_IDX["GCAM"]],
    )


def parse_gkg_file(source: bytes | IO[bytes]) -> tuple[list[GkgRecord], ParseDiagnostics]:
    """Parse one GKG export file (V2 fields; locations/GCAM kept opaque)."""
    return _parse_table(source, _parse_gkg_row, "GKG")


# --------------------------------------------------------------------------
# Renderers (round-trip support; also used to build fixtures)
# --------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    # str() of a float round-trips exactly in Python 3.
    return str(x)


def render_event_line(rec: EventRecord) -> str:
    """Serialize an EventRecord back to a 61-column tab-delimited line.

    Columns this parser does not read are filled with GDELT-plausible
    defaults; re-parsing the result yields an equal record.
    """
    cols = [""] * len(EVENT_COLUMNS)

    def put(name: str, value: str) -> None:
        cols[_EVENT_IDX[name]] = value

    put("GLOBALEVENTID", str(rec.global_event_id))
    put("SQLDATE", rec.day.strftime("%Y%m%d"))
    put("MonthYear", rec.day.strftime("%Y%m"))
    put("Year", str(rec.day.year))
    doy = rec.day.timetuple().tm_yday
    put("FractionDate", f"{rec.day.year + (doy - 1) / 365.0:.4f}")

    for prefix, actor in (("Actor1", rec.actor1), ("Actor2", rec.actor2)):
        if actor is None:
            continue
        put(prefix + "Code", actor.code or "")
        put(prefix + "Name", actor.name or "")
        put(prefix + "CountryCode", actor.country_code or "")
        for n, type_code in zip((1, 2, 3), actor.type_codes):
            put(prefix + f"Type{n}Code", type_code)

    put("IsRootEvent", "1" if rec.is_root_event else "0")
    put("EventCode", rec.event_code)
    put("EventBaseCode", rec.event_base_code)
    put("EventRootCode", rec.event_root_code)
    put("QuadClass", str(rec.quad_class))
    put("GoldsteinScale", _fmt_float(rec.goldstein_scale))
    put("NumMentions", str(rec.num_mentions))
    put("NumSources", str(rec.num_sources))
    put("NumArticles", str(rec.num_articles))
    put("AvgTone", _fmt_float(rec.avg_tone))

    if rec.action_geo is not None:
        put("ActionGeo_Type", "1")
        put("ActionGeo_FullName", rec.action_geo.full_name or "")
        put("ActionGeo_CountryCode", rec.action_geo.country_code or "")
        put("ActionGeo_Lat", _fmt_float(rec.action_geo.latitude))
        put("ActionGeo_Long", _fmt_float(rec.action_geo.longitude))
    else:
        put("ActionGeo_Type", "0")

    put("DATEADDED", rec.date_added.strftime("%Y%m%d%H%M%S"))
    put("SOURCEURL", rec.source_url)
    return "\t".join(cols)


def render_mention_line(rec: MentionRecord) -> str:
    cols = [""] * len(MENTION_COLUMNS)

    def put(name: str, value: str) -> None:
        cols[_MENTION_IDX[name]] = value

    put("GLOBALEVENTID", str(rec.global_event_id))
    put("EventTimeDate", rec.event_time.strftime("%Y%m%d%H%M%S"))
    put("MentionTimeDate", rec.mention_time.strftime("%Y%m%d%H%M%S"))
    put("MentionType", str(rec.mention_type))
    put("MentionSourceName", rec.mention_source_name)
    put("MentionIdentifier", rec.mention_identifier)
    put("SentenceID", str(rec.sentence_id))
    put("Actor1CharOffset", "-1")
    put("Actor2CharOffset", "-1")
    put("ActionCharOffset", "-1")
    put("InRawText", "1")
    put("Confidence", str(rec.confidence))
    put("MentionDocLen", "0")
    put("MentionDocTone", _fmt_float(rec.mention_doc_tone))
    return "\t".join(cols)


def render_gkg_line(rec: GkgRecord) -> str:
    cols = [""] * len(GKG_COLUMNS)

    def put(name: str, value: str) -> None:
        cols[_GKG_IDX[name]] = value

    put("GKGRECORDID", rec.gkg_record_id)
    put("DATE", rec.date.strftime("%Y%m%d%H%M%S"))
    put("SourceCollectionIdentifier", "1")
    put("DocumentIdentifier", rec.document_identifier)
    put("Themes", ";".join(h.theme for h in rec.themes))
    put("V2Themes", render_v2themes(rec.themes))
    put("V2Locations", rec.locations_raw)
    tone = rec.v2_tone
    put("V2Tone", ",".join([
        _fmt_float(tone.tone), _fmt_float(tone.positive),
        _fmt_float(tone.negative), _fmt_float(tone.polarity),
        "0", "0", "0",
    ]))
    put("GCAM", rec.gcam_raw)
    return "\t".join(cols)


# --------------------------------------------------------------------------
# Zip containers
# --------------------------------------------------------------------------

def open_export_container(source: bytes | IO[bytes]) -> IO[bytes]:
    """Return the decompressed byte stream of a single-member zip archive.

    GDELT ships every 15-minute file as a zip holding exactly one CSV.
    """
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(bytes(source))
    try:
        archive = zipfile.ZipFile(source)
        names = archive.namelist()
    except zipfile.BadZipFile as exc:
        raise FormatError(f"corrupt zip container: {exc}") from exc
    if len(names) != 1:
        raise FormatError(
            f"expected exactly one archive member, found {len(names)}"
        )
    with archive.open(names[0]) as member:
        return io.BytesIO(member.read())
