"""Read-only HTTP API over a store: criteria queries and aggregations.

Every endpoint is a thin adapter: it parses query parameters, calls the
library, and returns the library result serialized by ``serialize``,
so an HTTP response body and the equivalent direct call produce
byte-identical JSON. Mutation happens only through the ingest pipeline;
the API is GET-only.

Error bodies all share one shape: {"status": int, "code": str,
"message": str}. 400 marks invalid parameters/criteria, 422 marks
structurally valid requests the data cannot satisfy (bad dates,
misaligned or missing volume data, oversized spike windows), 404 marks
unknown resources.
"""

from __future__ import annotations

from datetime import date
from pathlib import Path
from typing import Mapping

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import serialize
from .analytics import (
    COUNT_UNIT_ARTICLES,
    COUNT_UNIT_AUTO,
    COUNT_UNIT_EVENTS,
    GRANULARITIES,
    GRANULARITY_DAY,
    article_count_timeline,
    bucket_of,
    choropleth_counts,
    detect_spikes,
    percent_of_total,
    tone_stats,
    top_country_frequencies,
)
from .cameo import CameoTables, default_tables
from .errors import AlignmentError, CriteriaError
from .query import QueryCriteria, criteria_from_params
from .store import Store

_CRITERIA_KEYS = (
    "criteria", "ref", "refmode", "thememode", "themes",
    "from", "to", "roots", "a1country",
)
_COUNT_UNITS = (COUNT_UNIT_AUTO, COUNT_UNIT_EVENTS, COUNT_UNIT_ARTICLES)
DEFAULT_PAGE_SIZE = 100


class ApiException(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _json(payload) -> Response:
    return Response(
        content=serialize.dumps(payload), media_type="application/json"
    )


def _error_response(status: int, code: str, message: str) -> Response:
    body = {"status": status, "code": code, "message": message}
    return Response(
        content=serialize.dumps(body),
        status_code=status,
        media_type="application/json",
    )


def _parse_criteria(params: Mapping[str, str]) -> QueryCriteria:
    """Criteria from query params; date problems are 422, the rest 400."""
    bounds = {}
    for key in ("from", "to"):
        if key in params:
            try:
                bounds[key] = date.fromisoformat(params[key])
            except ValueError:
                raise ApiException(
                    422, "invalid_date",
                    f"{key}: not an ISO date ({params[key]!r})",
                ) from None
    if len(bounds) == 1:
        raise ApiException(
            422, "invalid_date_range", "date range needs both 'from' and 'to'"
        )
    if bounds and bounds["from"] > bounds["to"]:
        raise ApiException(
            422, "invalid_date_range",
            f"date range inverted: {bounds['from']} > {bounds['to']}",
        )
    subset = {k: params[k] for k in _CRITERIA_KEYS if k in params}
    try:
        return criteria_from_params(subset)
    except CriteriaError as exc:
        raise ApiException(400, "invalid_criteria", str(exc)) from exc


def _parse_granularity(params: Mapping[str, str]) -> str:
    granularity = params.get("granularity", GRANULARITY_DAY)
    if granularity not in GRANULARITIES:
        raise ApiException(
            400, "invalid_param",
            f"granularity must be one of {', '.join(GRANULARITIES)}",
        )
    return granularity


def _parse_int(params: Mapping[str, str], key: str, default: int) -> int:
    text = params.get(key)
    if text is None:
        return default
    try:
        return int(text)
    except ValueError:
        raise ApiException(
            400, "invalid_param", f"{key} must be an integer, got {text!r}"
        ) from None


def _parse_float(params: Mapping[str, str], key: str, default: float) -> float:
    text = params.get(key)
    if text is None:
        return default
    try:
        return float(text)
    except ValueError:
        raise ApiException(
            400, "invalid_param", f"{key} must be a number, got {text!r}"
        ) from None


def create_app(
    store: Store,
    tables: CameoTables | None = None,
    cors_origins: tuple[str, ...] = ("*",),
    dashboard_dir: str | Path | None = None,
) -> FastAPI:
    tables = tables or default_tables()
    app = FastAPI(title="gdeltwatch", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiException)
    async def _api_exception(request: Request, exc: ApiException):
        return _error_response(exc.status, exc.code, exc.message)

    @app.exception_handler(StarletteHTTPException)
    async def _http_exception(request: Request, exc: StarletteHTTPException):
        return _error_response(exc.status_code, "http_error", str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return _error_response(400, "invalid_param", str(exc.errors()))

    def _timeline_series(params: Mapping[str, str]):
        criteria = _parse_criteria(params)
        granularity = _parse_granularity(params)
        unit = params.get("unit", COUNT_UNIT_AUTO)
        if unit not in _COUNT_UNITS:
            raise ApiException(
                400, "invalid_param",
                f"unit must be one of {', '.join(_COUNT_UNITS)}",
            )
        contexts = store.scan(criteria)
        return article_count_timeline(
            contexts, granularity, unit, criteria.date_range
        )

    @app.get("/api/timeline")
    def timeline(request: Request):
        params = dict(request.query_params)
        series = _timeline_series(params)
        if params.get("percent") == "1":
            covered = set(series.buckets())
            totals = [
                p for p in store.volume_points()
                if bucket_of(p.date.date(), series.granularity) in covered
            ]
            try:
                series = percent_of_total(series, totals)
            except AlignmentError as exc:
                missing = ", ".join(
                    b.isoformat() for b in exc.offending_buckets[:10]
                )
                raise ApiException(
                    422, "volume_not_aligned",
                    f"no stored volume data for buckets: {missing}",
                ) from exc
        return _json(serialize.timeline_dict(series))

    @app.get("/api/tone")
    def tone(request: Request):
        params = dict(request.query_params)
        criteria = _parse_criteria(params)
        granularity = _parse_granularity(params)
        series = tone_stats(store.scan(criteria), granularity)
        return _json(serialize.tone_dict(series))

    @app.get("/api/countries")
    def countries(request: Request):
        params = dict(request.query_params)
        criteria = _parse_criteria(params)
        n = _parse_int(params, "n", 20)
        if n < 1:
            raise ApiException(400, "invalid_param", f"n must be >= 1, got {n}")
        which = params.get("which", "actor1")
        if which not in ("actor1", "actor2"):
            raise ApiException(
                400, "invalid_param", f"which must be actor1 or actor2, got {which!r}"
            )
        freq = top_country_frequencies(store.scan(criteria), n, which)
        return _json(serialize.countries_dict(freq))

    @app.get("/api/choropleth")
    def choropleth(request: Request):
        params = dict(request.query_params)
        # `roots` acts as the map's display filter, not a criteria clause;
        # unknown codes are accepted and simply match nothing.
        roots_text = params.pop("roots", None)
        roots = None
        if roots_text:
            roots = frozenset(
                p.strip().upper() for p in roots_text.split(",") if p.strip()
            ) or None
        criteria = _parse_criteria(params)
        which = params.get("which", "actor1")
        if which not in ("actor1", "actor2"):
            raise ApiException(
                400, "invalid_param", f"which must be actor1 or actor2, got {which!r}"
            )
        result = choropleth_counts(
            store.scan(criteria), roots, which, tables=tables
        )
        return _json(serialize.choropleth_dict(result))

    @app.get("/api/spikes")
    def spikes(request: Request):
        params = dict(request.query_params)
        window = _parse_int(params, "window", 8)
        k = _parse_float(params, "k", 3.0)
        if window < 3:
            raise ApiException(
                400, "invalid_param", f"window must be >= 3, got {window}"
            )
        if k <= 0:
            raise ApiException(400, "invalid_param", f"k must be > 0, got {k}")
        series = _timeline_series(params)
        try:
            report = detect_spikes(series, window, k)
        except ValueError as exc:
            raise ApiException(422, "window_too_large", str(exc)) from exc
        return _json(serialize.spikes_dict(report))

    @app.get("/api/events/{event_id}")
    def event_detail(event_id: int):
        ctx = store.get_event_with_context(event_id)
        if ctx is None:
            raise ApiException(404, "not_found", f"no event {event_id}")
        return _json(serialize.context_dict(ctx))

    @app.get("/api/events")
    def event_list(request: Request):
        params = dict(request.query_params)
        limit = _parse_int(params, "limit", DEFAULT_PAGE_SIZE)
        offset = _parse_int(params, "offset", 0)
        if limit < 1 or offset < 0:
            raise ApiException(
                400, "invalid_param", "limit must be >= 1 and offset >= 0"
            )
        events = store.list_events(limit=limit, offset=offset)
        return _json({
            "events": [serialize.event_dict(e) for e in events],
            "limit": limit,
            "offset": offset,
            "total": store.event_count(),
        })

    @app.get("/api/ingest/status")
    def ingest_status():
        status = store.ingest_status()
        return _json({
            "last_poll_time": (
                status.last_poll_time.isoformat()
                if status.last_poll_time else None
            ),
            "files_ingested": status.files_ingested,
            "event_rows": status.event_rows,
            "mention_rows": status.mention_rows,
            "gkg_rows": status.gkg_rows,
        })

    @app.get("/api/meta/countries")
    def meta_countries():
        return _json({
            "countries": [
                {
                    "cameo": info.cameo,
                    "name": info.name,
                    "iso2": info.iso2,
                    "iso3": info.iso3,
                }
                for info in tables.countries()
            ]
        })

    @app.get("/api/meta/rootcodes")
    def meta_rootcodes():
        return _json({"roots": tables.root_descriptions()})

    if dashboard_dir is not None and Path(dashboard_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount(
            "/", StaticFiles(directory=str(dashboard_dir), html=True),
            name="dashboard",
        )

    return app
