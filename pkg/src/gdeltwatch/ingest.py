"""Network acquisition: the 15-minute update feed and the DOC 2.0 API.

Three concerns live here: reading the update manifest (lines of
``size md5 url``), downloading and md5-verifying the referenced export
files, and querying the article-volume API. Everything network-touching
accepts an injectable session/fetcher so tests run against fixtures.
"""

from __future__ import annotations

import hashlib
import logging
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import date, datetime
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Sequence

import requests

from .errors import ApiRangeError, FormatError, IntegrityError, TransportError

log = logging.getLogger(__name__)

DEFAULT_FEED_URL = "http://data.gdeltproject.org/gdeltv2/lastupdate.txt"
DEFAULT_DOC_API_URL = "https://api.gdeltproject.org/api/v2/doc/doc"
DEFAULT_POLL_INTERVAL = 15 * 60

# The article-volume API only covers 2017 onward; earlier ranges must
# come from bulk files instead.
DOC_API_FLOOR = date(2017, 1, 1)

KIND_EVENTS = "events"
KIND_MENTIONS = "mentions"
KIND_GKG = "gkg"

_KIND_BY_SUFFIX = (
    (".export.csv.zip", KIND_EVENTS),
    (".mentions.csv.zip", KIND_MENTIONS),
    (".gkg.csv.zip", KIND_GKG),
)


class FeedEntry(NamedTuple):
    size_bytes: int
    md5: str
    url: str
    kind: str


class VolumePoint(NamedTuple):
    """One API observation: articles matching the query vs all
    articles monitored in the interval."""

    date: datetime
    matched_count: float
    total_monitored: float


def kind_for_url(url: str) -> str | None:
    lowered = url.lower()
    for suffix, kind in _KIND_BY_SUFFIX:
        if lowered.endswith(suffix):
            return kind
    return None


def parse_manifest(body: str) -> list[FeedEntry]:
    """Entries from manifest text; malformed lines are skipped with a
    logged diagnostic rather than failing the poll."""
    entries = []
    for lineno, line in enumerate(body.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            log.warning("manifest line %d: expected 3 fields, got %d", lineno, len(parts))
            continue
        size_text, md5, url = parts
        kind = kind_for_url(url)
        if not size_text.isdigit():
            log.warning("manifest line %d: bad size %r", lineno, size_text)
            continue
        if len(md5) != 32 or any(c not in "0123456789abcdefABCDEF" for c in md5):
            log.warning("manifest line %d: bad md5 %r", lineno, md5)
            continue
        if kind is None:
            log.warning("manifest line %d: unrecognized file suffix in %r", lineno, url)
            continue
        entries.append(FeedEntry(int(size_text), md5.lower(), url, kind))
    return entries


def fetch_update_manifest(
    feed_url: str = DEFAULT_FEED_URL, session: requests.Session | None = None
) -> list[FeedEntry]:
    session = session or requests.Session()
    try:
        response = session.get(feed_url, timeout=30)
        response.raise_for_status()
    except requests.RequestException as exc:
        raise TransportError(f"manifest fetch failed: {exc}") from exc
    return parse_manifest(response.text)


def download_and_verify(
    entry: FeedEntry,
    dest: str | Path,
    session: requests.Session | None = None,
    attempts: int = 3,
    backoff_base: float = 0.5,
    sleeper: Callable[[float], None] = time.sleep,
) -> Path:
    """Fetch one export file and require its md5 to match the manifest.

    A digest mismatch removes the file and raises immediately; transport
    failures retry with bounded exponential backoff.
    """
    session = session or requests.Session()
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    target = dest / entry.url.rstrip("/").rsplit("/", 1)[-1]

    last_exc: Exception | None = None
    for attempt in range(attempts):
        if attempt:
            sleeper(backoff_base * (2 ** (attempt - 1)))
        try:
            response = session.get(entry.url, timeout=120)
            response.raise_for_status()
        except requests.RequestException as exc:
            last_exc = exc
            continue
        digest = hashlib.md5(response.content).hexdigest()
        if digest != entry.md5:
            raise IntegrityError(
                f"{target.name}: md5 {digest} does not match manifest {entry.md5}"
            )
        with tempfile.NamedTemporaryFile(dir=dest, delete=False) as tmp:
            tmp.write(response.content)
        Path(tmp.name).replace(target)
        return target
    raise TransportError(
        f"download of {entry.url} failed after {attempts} attempts: {last_exc}"
    ) from last_exc


def download_many(
    entries: Sequence[FeedEntry],
    dest: str | Path,
    session: requests.Session | None = None,
    pool_size: int = 4,
) -> list[Path]:
    session = session or requests.Session()
    with ThreadPoolExecutor(max_workers=pool_size) as pool:
        return list(
            pool.map(lambda e: download_and_verify(e, dest, session=session), entries)
        )


class FeedPoller:
    """Repeatedly fetch the manifest, invoking a handler once per entry
    never seen before (dedup by url for the process lifetime).

    Handler failures are logged and do not stop polling. ``poll_once``
    is the unit of work; ``run`` loops it on the configured interval.
    """

    def __init__(
        self,
        handler: Callable[[FeedEntry], None],
        feed_url: str = DEFAULT_FEED_URL,
        interval: float = DEFAULT_POLL_INTERVAL,
        fetcher: Callable[[], list[FeedEntry]] | None = None,
        on_poll: Callable[[], None] | None = None,
    ):
        if interval < 60:
            raise ValueError(f"poll interval must be >= 60 s, got {interval}")
        self._handler = handler
        self._interval = interval
        self._fetcher = fetcher or (lambda: fetch_update_manifest(feed_url))
        self._on_poll = on_poll
        self._seen: set[str] = set()
        self._stop = threading.Event()

    def poll_once(self) -> list[FeedEntry]:
        """One fetch-and-dispatch cycle; returns the NEW entries."""
        entries = self._fetcher()
        fresh = [e for e in entries if e.url not in self._seen]
        for entry in fresh:
            self._seen.add(entry.url)
            try:
                self._handler(entry)
            except Exception:
                log.exception("feed handler failed for %s", entry.url)
        if self._on_poll is not None:
            self._on_poll()
        return fresh

    def run(self) -> None:
        while not self._stop.is_set():
            try:
                self.poll_once()
            except TransportError as exc:
                log.warning("poll failed, will retry: %s", exc)
            self._stop.wait(self._interval)

    def stop(self) -> None:
        self._stop.set()


# --------------------------------------------------------------------------
# DOC 2.0 article-volume API
# --------------------------------------------------------------------------

# Response-mapping table: one place pinning the API's JSON field names.
_TIMELINE_KEY = "timeline"
_SERIES_DATA_KEY = "data"
_POINT_DATE_KEY = "date"
_POINT_MATCHED_KEY = "value"
_POINT_TOTAL_KEY = "norm"

_POINT_DATE_FORMATS = ("%Y%m%dT%H%M%SZ", "%Y%m%d%H%M%S", "%Y%m%d")


def _parse_point_date(text: str) -> datetime:
    for fmt in _POINT_DATE_FORMATS:
        try:
            return datetime.strptime(text, fmt)
        except ValueError:
            continue
    try:
        return datetime.fromisoformat(text)
    except ValueError:
        raise FormatError(f"unrecognized timeline date {text!r}") from None


def parse_volume_response(payload: dict) -> list[VolumePoint]:
    """Map a raw volume-timeline JSON body to sorted VolumePoints."""
    series = payload.get(_TIMELINE_KEY) or []
    if not series:
        return []
    points = []
    for raw in series[0].get(_SERIES_DATA_KEY, []):
        points.append(
            VolumePoint(
                date=_parse_point_date(str(raw[_POINT_DATE_KEY])),
                matched_count=float(raw[_POINT_MATCHED_KEY]),
                total_monitored=float(raw[_POINT_TOTAL_KEY]),
            )
        )
    deduped = {p.date: p for p in points}
    return [deduped[d] for d in sorted(deduped)]


def doc_api_timeline(
    query: str,
    start: date,
    end: date,
    base_url: str = DEFAULT_DOC_API_URL,
    session: requests.Session | None = None,
) -> list[VolumePoint]:
    """Matched vs total article volume between two dates (inclusive).

    Rejects ranges starting before 2017: the volume API only provides
    data on articles produced in 2017 and later.
    """
    if start > end:
        raise ValueError(f"start {start} after end {end}")
    if start < DOC_API_FLOOR:
        raise ApiRangeError(
            f"requested start {start.isoformat()} predates the volume API, "
            "which only provides data on articles produced in 2017 and later; "
            "use bulk file ingestion for earlier ranges"
        )
    session = session or requests.Session()
    params = {
        "query": query,
        "mode": "timelinevolraw",
        "format": "json",
        "startdatetime": start.strftime("%Y%m%d") + "000000",
        "enddatetime": end.strftime("%Y%m%d") + "235959",
    }
    try:
        response = session.get(base_url, params=params, timeout=60)
        response.raise_for_status()
        payload = response.json()
    except requests.RequestException as exc:
        raise TransportError(f"volume API request failed: {exc}") from exc
    except ValueError as exc:
        raise TransportError(f"volume API returned non-JSON body: {exc}") from exc
    return parse_volume_response(payload)


# --------------------------------------------------------------------------
# File-to-store pipeline
# --------------------------------------------------------------------------

def ingest_path(store, path: str | Path):
    """Parse one export file (zip or bare) into the store.

    Returns (kind, diagnostics, upsert counts). The file kind comes
    from its name; unrecognized names are rejected.
    """
    from . import formats

    path = Path(path)
    kind = kind_for_url(path.name)
    if kind is None:
        # Tolerate unzipped fixtures named like the zip members.
        for suffix, k in ((".export.csv", KIND_EVENTS),
                          (".mentions.csv", KIND_MENTIONS),
                          (".gkg.csv", KIND_GKG)):
            if path.name.lower().endswith(suffix):
                kind = k
                break
    if kind is None:
        raise FormatError(f"cannot classify {path.name} as events/mentions/gkg")

    blob = path.read_bytes()
    if path.name.lower().endswith(".zip"):
        stream = formats.open_export_container(blob)
    else:
        import io

        stream = io.BytesIO(blob)

    if kind == KIND_EVENTS:
        records, diag = formats.parse_events_file(stream)
        counts = store.upsert_events(records)
    elif kind == KIND_MENTIONS:
        records, diag = formats.parse_mentions_file(stream)
        counts = store.upsert_mentions(records)
    else:
        records, diag = formats.parse_gkg_file(stream)
        counts = store.upsert_gkg(records)

    store.record_file_ingest(path.name, kind, diag.rows_ok, diag.rows_skipped, counts)
    return kind, diag, counts


def ingest_entry(store, entry: FeedEntry, dest: str | Path,
                 session: requests.Session | None = None):
    """Download, verify, and ingest one feed entry."""
    path = download_and_verify(entry, dest, session=session)
    return ingest_path(store, path)
