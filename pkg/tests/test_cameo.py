import pytest

from gdeltwatch.cameo import (
    CameoTables,
    CountryInfo,
    UNKNOWN,
    default_tables,
    is_refugee_actor,
)
from gdeltwatch.errors import GdeltWatchError
from gdeltwatch.records import ActorRef


@pytest.fixture(scope="module")
def tables():
    return default_tables()


class TestEventCodes:
    def test_root_01_is_make_public_statement(self, tables):
        assert tables.describe_event("01") == "Make Public Statement"

    def test_root_14_is_protest(self, tables):
        assert tables.describe_event("14") == "Protest"

    def test_four_char_code(self, tables):
        assert "truce" in tables.describe_event("0871").lower()

    def test_describe_event_root_truncates(self, tables):
        assert tables.describe_event_root("1411") == "Protest"
        assert tables.describe_event_root("0871") == tables.describe_event("08")

    def test_unknown_code(self, tables):
        assert tables.describe_event("99") == UNKNOWN

    def test_root_descriptions_cover_01_through_20(self, tables):
        roots = tables.root_descriptions()
        assert set(roots) == {f"{i:02d}" for i in range(1, 21)}
        assert all(len(code) == 2 for code in roots)
        assert roots["01"] == "Make Public Statement"

    def test_every_longer_code_has_a_root_entry(self, tables):
        # Guarded at construction; missing roots must raise.
        with pytest.raises(GdeltWatchError, match="no root entry"):
            CameoTables(
                {"141": "Demonstrate"},
                {"USA": CountryInfo("USA", "United States")},
                {"REF": "Refugees"},
            )

    def test_empty_tables_rejected(self):
        with pytest.raises(GdeltWatchError):
            CameoTables({}, {}, {})


class TestCountries:
    def test_esp_is_spain(self, tables):
        assert tables.country_name("ESP") == "Spain"

    def test_ita_usa(self, tables):
        assert tables.country_name("ITA") == "Italy"
        assert tables.country_name("USA") == "United States"

    def test_iso_mapping(self, tables):
        info = tables.country_info("ESP")
        assert info.iso2 == "ES" and info.iso3 == "ESP"

    def test_regional_codes_have_no_iso(self, tables):
        info = tables.country_info("EUR")
        assert info is not None
        assert info.iso2 is None and info.iso3 is None

    def test_unknown_country(self, tables):
        assert tables.country_name("ZZZ") == UNKNOWN
        assert tables.country_info("ZZZ") is None

    def test_lookup_normalizes_case_and_space(self, tables):
        assert tables.country_name(" esp ") == "Spain"

    def test_countries_listing_is_sorted_unique(self, tables):
        codes = [info.cameo for info in tables.countries()]
        assert codes == sorted(codes)
        assert len(codes) == len(set(codes))
        assert "ESP" in codes


class TestActorTypes:
    def test_ref_is_refugees(self, tables):
        assert tables.describe_actor_type("REF") == "Refugees"

    def test_unknown_type(self, tables):
        assert tables.describe_actor_type("XYZ") == UNKNOWN


class TestRefugeeActorTest:
    def test_exact_mode_matches_code_ref(self):
        actor = ActorRef(code="REF", name="REFUGEE", country_code=None,
                         type_codes=("REF",))
        assert is_refugee_actor(actor, "exact")

    def test_exact_mode_rejects_composite_code(self):
        actor = ActorRef(code="SYRREF", name="SYRIAN REFUGEES",
                         country_code="SYR", type_codes=("REF",))
        assert not is_refugee_actor(actor, "exact")
        assert is_refugee_actor(actor, "contains-type")

    def test_none_actor_never_matches(self):
        assert not is_refugee_actor(None, "exact")
        assert not is_refugee_actor(None, "contains-type")

    def test_gov_actor_never_matches(self):
        actor = ActorRef(code="ESPGOV", name="SPAIN", country_code="ESP",
                         type_codes=("GOV",))
        assert not is_refugee_actor(actor, "exact")
        assert not is_refugee_actor(actor, "contains-type")

    def test_invalid_mode_rejected(self):
        actor = ActorRef(code="REF", name=None, country_code=None, type_codes=())
        with pytest.raises(ValueError):
            is_refugee_actor(actor, "fuzzy")
