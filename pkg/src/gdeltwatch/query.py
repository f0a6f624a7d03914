"""Declarative filter criteria over joined event records.

A QueryCriteria is a conjunction of optional clauses: the refugee-actor
test on Actor2, a theme test against linked GKG documents, an inclusive
event-date range, an EventRootCode set, and an Actor1 country set. The
two stock presets used throughout the CLI and API are exposed as
``refugee_actor_criteria`` (preset "1") and ``refugee_theme_criteria``
(preset "2").

Criteria serialize to a flat query-string form (used by the HTTP API)
and a JSON form; both round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import date
from typing import Iterable, Mapping

from .cameo import is_refugee_actor
from .errors import CriteriaError
from .records import EventWithContext

#: The eight refugee-related discrimination themes matched by the
#: exact-set mode of the stock theme criteria.
REFUGEE_THEMES = frozenset({
    "DISCRIMINATION_IMMIGRATION_XENOPHOBIA",
    "DISCRIMINATION_IMMIGRATION_ANTIIMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_OPPOSED_TO_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_AGAINST_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_ATTACKS_ON_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_ATTACKS_AGAINST_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_XENOPHOBE",
    "DISCRIMINATION_IMMIGRATION_XENOPHOBES",
})

#: Prefix shared by the whole discrimination/immigration theme family.
REFUGEE_THEME_PREFIX = "DISCRIMINATION_IMMIGRATION"

THEME_MODE_EXACT = "exact-set"
THEME_MODE_PREFIX = "prefix"
REFUGEE_MODE_EXACT = "exact"
REFUGEE_MODE_TYPE = "contains-type"


@dataclass(frozen=True)
class ThemeMatcher:
    """Match GKG theme tokens either by exact set membership or prefix.

    Matching is case-sensitive against whole V2Themes tokens; prefix
    mode tests token.startswith, never substring-inside-token.
    """

    mode: str = THEME_MODE_EXACT
    tokens: frozenset[str] = field(default_factory=lambda: frozenset(REFUGEE_THEMES))

    def __post_init__(self):
        if self.mode not in (THEME_MODE_EXACT, THEME_MODE_PREFIX):
            raise CriteriaError(f"unknown theme mode: {self.mode!r}")
        if not self.tokens:
            raise CriteriaError("theme matcher needs at least one token")

    def matches_token(self, token: str) -> bool:
        if self.mode == THEME_MODE_EXACT:
            return token in self.tokens
        return any(token.startswith(prefix) for prefix in self.tokens)


@dataclass(frozen=True)
class QueryCriteria:
    actor2_refugee: bool = False
    refugee_mode: str = REFUGEE_MODE_EXACT
    themes: ThemeMatcher | None = None
    date_range: tuple[date, date] | None = None
    event_root_codes: frozenset[str] | None = None
    actor1_country: frozenset[str] | None = None

    def __post_init__(self):
        if self.refugee_mode not in (REFUGEE_MODE_EXACT, REFUGEE_MODE_TYPE):
            raise CriteriaError(f"unknown refugee mode: {self.refugee_mode!r}")
        if self.date_range is not None:
            start, end = self.date_range
            if start > end:
                raise CriteriaError(f"date range inverted: {start} > {end}")

    def with_date_range(self, start: date, end: date) -> "QueryCriteria":
        return replace(self, date_range=(start, end))


def refugee_actor_criteria(
    date_range: tuple[date, date] | None = None,
    refugee_mode: str = REFUGEE_MODE_EXACT,
) -> QueryCriteria:
    """Preset "1": events whose Actor2 denotes refugees."""
    return QueryCriteria(
        actor2_refugee=True,
        refugee_mode=refugee_mode,
        date_range=date_range,
    )


def refugee_theme_criteria(
    theme_mode: str = THEME_MODE_EXACT,
    date_range: tuple[date, date] | None = None,
    refugee_mode: str = REFUGEE_MODE_EXACT,
) -> QueryCriteria:
    """Preset "2": refugee Actor2 plus refugee-related GKG themes.

    ``exact-set`` matches the eight enumerated discrimination themes;
    ``prefix`` matches the whole DISCRIMINATION_IMMIGRATION family.
    """
    if theme_mode == THEME_MODE_EXACT:
        matcher = ThemeMatcher(THEME_MODE_EXACT, frozenset(REFUGEE_THEMES))
    elif theme_mode == THEME_MODE_PREFIX:
        matcher = ThemeMatcher(THEME_MODE_PREFIX, frozenset({REFUGEE_THEME_PREFIX}))
    else:
        raise CriteriaError(f"unknown theme mode: {theme_mode!r}")
    return QueryCriteria(
        actor2_refugee=True,
        refugee_mode=refugee_mode,
        themes=matcher,
        date_range=date_range,
    )


CRITERIA_PRESETS = {
    "1": refugee_actor_criteria,
    "2": refugee_theme_criteria,
}


def matches(criteria: QueryCriteria, ctx: EventWithContext) -> bool:
    """Evaluate the conjunction of all present clauses on one context.

    The theme clause passes iff ANY linked document carries ANY
    matching theme token.
    """
    event = ctx.event
    if criteria.actor2_refugee:
        if not is_refugee_actor(event.actor2, criteria.refugee_mode):
            return False
    if criteria.date_range is not None:
        start, end = criteria.date_range
        if not start <= event.day <= end:
            return False
    if criteria.event_root_codes is not None:
        if event.event_root_code not in criteria.event_root_codes:
            return False
    if criteria.actor1_country is not None:
        if event.actor1 is None or event.actor1.country_code is None:
            return False
        if event.actor1.country_code not in criteria.actor1_country:
            return False
    if criteria.themes is not None:
        if not any(
            criteria.themes.matches_token(hit.theme)
            for doc in ctx.documents
            for hit in doc.themes
        ):
            return False
    return True


# --------------------------------------------------------------------------
# Serialization (query-string and JSON forms)
# --------------------------------------------------------------------------

_THEME_MODE_ALIASES = {
    "exact": THEME_MODE_EXACT,
    "exact-set": THEME_MODE_EXACT,
    "prefix": THEME_MODE_PREFIX,
}
_REFUGEE_MODE_ALIASES = {
    "exact": REFUGEE_MODE_EXACT,
    "contains-type": REFUGEE_MODE_TYPE,
    "type": REFUGEE_MODE_TYPE,
}


def _parse_date(text: str, what: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise CriteriaError(f"{what}: not an ISO date ({text!r})") from None


def _csv_set(text: str) -> frozenset[str]:
    parts = frozenset(p.strip().upper() for p in text.split(",") if p.strip())
    if not parts:
        raise CriteriaError(f"empty code list: {text!r}")
    return parts


def criteria_from_params(params: Mapping[str, str]) -> QueryCriteria:
    """Decode the flat query-string form.

    Recognized keys: ``criteria`` (preset "1"/"2"), ``ref`` (0/1),
    ``refmode``, ``thememode``, ``themes`` (comma-separated tokens),
    ``from``/``to`` (ISO dates), ``roots``, ``a1country``. Explicit keys
    override what a preset filled in.
    """
    criteria = QueryCriteria()
    preset = params.get("criteria")
    if preset is not None:
        if preset not in CRITERIA_PRESETS:
            raise CriteriaError(f"unknown criteria preset: {preset!r}")
        criteria = CRITERIA_PRESETS[preset]()

    updates: dict = {}
    if "ref" in params:
        if params["ref"] not in ("0", "1"):
            raise CriteriaError(f"ref must be 0 or 1, got {params['ref']!r}")
        updates["actor2_refugee"] = params["ref"] == "1"
    if "refmode" in params:
        try:
            updates["refugee_mode"] = _REFUGEE_MODE_ALIASES[params["refmode"]]
        except KeyError:
            raise CriteriaError(f"unknown refmode: {params['refmode']!r}") from None

    theme_mode = params.get("thememode")
    theme_tokens = params.get("themes")
    if theme_mode is not None or theme_tokens is not None:
        if theme_mode is not None and theme_mode not in _THEME_MODE_ALIASES:
            raise CriteriaError(f"unknown thememode: {theme_mode!r}")
        mode = _THEME_MODE_ALIASES[theme_mode] if theme_mode else THEME_MODE_EXACT
        if theme_tokens is not None:
            updates["themes"] = ThemeMatcher(mode, _csv_set(theme_tokens))
        elif mode == THEME_MODE_PREFIX:
            updates["themes"] = ThemeMatcher(mode, frozenset({REFUGEE_THEME_PREFIX}))
        else:
            updates["themes"] = ThemeMatcher(mode, frozenset(REFUGEE_THEMES))

    start_text, end_text = params.get("from"), params.get("to")
    if (start_text is None) != (end_text is None):
        raise CriteriaError("date range needs both 'from' and 'to'")
    if start_text is not None and end_text is not None:
        updates["date_range"] = (
            _parse_date(start_text, "from"),
            _parse_date(end_text, "to"),
        )
    if "roots" in params:
        updates["event_root_codes"] = _csv_set(params["roots"])
    if "a1country" in params:
        updates["actor1_country"] = _csv_set(params["a1country"])

    return replace(criteria, **updates)


def criteria_to_params(criteria: QueryCriteria) -> dict[str, str]:
    """Encode to the flat query-string form (inverse of criteria_from_params)."""
    params: dict[str, str] = {}
    if criteria.actor2_refugee:
        params["ref"] = "1"
        if criteria.refugee_mode != REFUGEE_MODE_EXACT:
            params["refmode"] = criteria.refugee_mode
    if criteria.themes is not None:
        params["thememode"] = (
            "exact" if criteria.themes.mode == THEME_MODE_EXACT else "prefix"
        )
        params["themes"] = ",".join(sorted(criteria.themes.tokens))
    if criteria.date_range is not None:
        params["from"] = criteria.date_range[0].isoformat()
        params["to"] = criteria.date_range[1].isoformat()
    if criteria.event_root_codes is not None:
        params["roots"] = ",".join(sorted(criteria.event_root_codes))
    if criteria.actor1_country is not None:
        params["a1country"] = ",".join(sorted(criteria.actor1_country))
    return params


def criteria_to_json(criteria: QueryCriteria) -> dict:
    doc: dict = {
        "actor2_refugee": criteria.actor2_refugee,
        "refugee_mode": criteria.refugee_mode,
    }
    if criteria.themes is not None:
        doc["themes"] = {
            "mode": criteria.themes.mode,
            "tokens": sorted(criteria.themes.tokens),
        }
    if criteria.date_range is not None:
        doc["date_range"] = [d.isoformat() for d in criteria.date_range]
    if criteria.event_root_codes is not None:
        doc["event_root_codes"] = sorted(criteria.event_root_codes)
    if criteria.actor1_country is not None:
        doc["actor1_country"] = sorted(criteria.actor1_country)
    return doc


def criteria_from_json(doc: Mapping) -> QueryCriteria:
    try:
        themes = None
        if "themes" in doc and doc["themes"] is not None:
            themes = ThemeMatcher(
                doc["themes"]["mode"], frozenset(doc["themes"]["tokens"])
            )
        date_range = None
        if "date_range" in doc and doc["date_range"] is not None:
            start, end = doc["date_range"]
            date_range = (_parse_date(start, "date_range[0]"),
                          _parse_date(end, "date_range[1]"))
        return QueryCriteria(
            actor2_refugee=bool(doc.get("actor2_refugee", False)),
            refugee_mode=doc.get("refugee_mode", REFUGEE_MODE_EXACT),
            themes=themes,
            date_range=date_range,
            event_root_codes=(
                frozenset(doc["event_root_codes"])
                if doc.get("event_root_codes") is not None else None
            ),
            actor1_country=(
                frozenset(doc["actor1_country"])
                if doc.get("actor1_country") is not None else None
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CriteriaError(f"bad criteria JSON: {exc}") from exc


def tokens_outside_refugee_set(candidates: Iterable[str]) -> list[str]:
    """Family-prefixed tokens that prefix mode accepts but exact mode rejects."""
    return [
        token for token in candidates
        if token.startswith(REFUGEE_THEME_PREFIX) and token not in REFUGEE_THEMES
    ]
