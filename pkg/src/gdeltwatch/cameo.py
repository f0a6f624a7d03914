"""CAMEO taxonomy lookups.

Lookup tables ship as tab-delimited data files under ``data/cameo/``
(sourced from GDELT's published lookup files) and are immutable after
load. Unknown codes always yield UNKNOWN, never a crash.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping

from .errors import GdeltWatchError
from .records import ActorRef

#: Returned for any code the shipped tables do not know.
UNKNOWN = "(unknown)"

#: CAMEO actor type code marking refugees.
REFUGEE_TYPE_CODE = "REF"


@dataclass(frozen=True)
class CountryInfo:
    """One CAMEO country row with its ISO 3166-1 mapping (for choropleths)."""

    cameo: str
    name: str
    iso2: str | None = None
    iso3: str | None = None


class CameoTables:
    """Immutable event-code, country, and actor-type lookups."""

    def __init__(
        self,
        event_descriptions: Mapping[str, str],
        countries: Mapping[str, CountryInfo],
        actor_types: Mapping[str, str],
    ):
        if not event_descriptions or not countries or not actor_types:
            raise GdeltWatchError("CAMEO tables must not be empty")
        for code in event_descriptions:
            if len(code) > 2 and code[:2] not in event_descriptions:
                raise GdeltWatchError(
                    f"event code {code!r} has no root entry {code[:2]!r}"
                )
        self._events = dict(event_descriptions)
        self._countries = dict(countries)
        self._actor_types = dict(actor_types)

    @classmethod
    def from_dir(cls, directory: Path) -> "CameoTables":
        directory = Path(directory)
        events = _read_pairs(directory / "eventcodes.txt")
        actor_types = _read_pairs(directory / "actortypes.txt")
        countries = {}
        for line in _read_lines(directory / "countries.txt"):
            cameo, iso2, iso3, name = line.split("\t")
            countries[cameo] = CountryInfo(
                cameo=cameo,
                name=name,
                iso2=None if iso2 == "-" else iso2,
                iso3=None if iso3 == "-" else iso3,
            )
        return cls(events, countries, actor_types)

    # -- event codes --------------------------------------------------

    def describe_event(self, code: str) -> str:
        return self._events.get(code.strip().upper(), UNKNOWN)

    def describe_event_root(self, code: str) -> str:
        """Description of a 2-char top-level CAMEO action category."""
        return self._events.get(code.strip().upper()[:2] or "??", UNKNOWN)

    def root_descriptions(self) -> dict[str, str]:
        """All 2-char root codes with their descriptions, code-sorted."""
        return {
            code: desc
            for code, desc in sorted(self._events.items())
            if len(code) == 2
        }

    # -- countries ----------------------------------------------------

    def country_name(self, code: str) -> str:
        info = self._countries.get(code.strip().upper())
        return info.name if info is not None else UNKNOWN

    def country_info(self, code: str) -> CountryInfo | None:
        return self._countries.get(code.strip().upper())

    def countries(self) -> list[CountryInfo]:
        return [info for _, info in sorted(self._countries.items())]

    # -- actor types ---------------------------------------------------

    def describe_actor_type(self, code: str) -> str:
        return self._actor_types.get(code.strip().upper(), UNKNOWN)


def _read_lines(path: Path) -> list[str]:
    lines = path.read_text(encoding="utf-8").splitlines()
    return [line for line in lines if line.strip()]


def _read_pairs(path: Path) -> dict[str, str]:
    pairs = {}
    for line in _read_lines(path):
        code, description = line.split("\t", 1)
        pairs[code] = description
    return pairs


@lru_cache(maxsize=1)
def default_tables() -> CameoTables:
    """The tables bundled with the package."""
    data_dir = resources.files("gdeltwatch") / "data" / "cameo"
    return CameoTables.from_dir(Path(str(data_dir)))


def describe_event_root(code: str) -> str:
    return default_tables().describe_event_root(code)


def country_name(code: str) -> str:
    return default_tables().country_name(code)


def is_refugee_actor(actor: ActorRef | None, mode: str = "exact") -> bool:
    """Does this actor slot denote refugees?

    ``exact`` requires the composite actor code to be exactly ``REF``
    (the form used for the reproduction queries). ``contains-type``
    additionally accepts any broken-out type code equal to ``REF``,
    which catches composites like ``SYRREF``.
    """
    if mode not in ("exact", "contains-type"):
        raise ValueError(f"unknown refugee-actor mode: {mode!r}")
    if actor is None:
        return False
    if actor.code == REFUGEE_TYPE_CODE:
        return True
    if mode == "contains-type":
        return REFUGEE_TYPE_CODE in actor.type_codes
    return False
