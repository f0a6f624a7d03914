import random
from datetime import date, datetime

import pytest
from hypothesis import given, settings, strategies as st

from gdeltwatch import query, synth
from gdeltwatch.errors import CriteriaError
from gdeltwatch.query import (
    QueryCriteria,
    ThemeMatcher,
    criteria_from_json,
    criteria_from_params,
    criteria_to_json,
    criteria_to_params,
    matches,
    refugee_actor_criteria,
    refugee_theme_criteria,
    tokens_outside_refugee_set,
)
from gdeltwatch.records import (
    ActorRef,
    EventRecord,
    EventWithContext,
    GkgRecord,
    ThemeHit,
    ToneTuple,
)

from helpers import brute_force_filter, brute_force_join

# The eight stock theme tokens, written out in full on purpose: the
# matcher must accept exactly these in exact-set mode.
EXPECTED_THEMES = {
    "DISCRIMINATION_IMMIGRATION_XENOPHOBIA",
    "DISCRIMINATION_IMMIGRATION_ANTIIMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_OPPOSED_TO_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_AGAINST_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_ATTACKS_ON_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_ATTACKS_AGAINST_IMMIGRANTS",
    "DISCRIMINATION_IMMIGRATION_XENOPHOBE",
    "DISCRIMINATION_IMMIGRATION_XENOPHOBES",
}


def _event(actor2_code="REF", day=date(2021, 3, 15), root="01", a1_country=None):
    actor2 = None
    if actor2_code is not None:
        types = ("REF",) if actor2_code == "REF" else ()
        actor2 = ActorRef(code=actor2_code, name=actor2_code,
                          country_code=None, type_codes=types)
    actor1 = None
    if a1_country is not None:
        actor1 = ActorRef(code=a1_country, name=a1_country,
                          country_code=a1_country, type_codes=())
    code = root + "0"
    return EventRecord(
        global_event_id=1,
        day=day,
        actor1=actor1,
        actor2=actor2,
        is_root_event=True,
        event_code=code,
        event_base_code=code,
        event_root_code=root,
        quad_class=1,
        goldstein_scale=0.0,
        num_mentions=1,
        num_sources=1,
        num_articles=1,
        avg_tone=-2.0,
        action_geo=None,
        date_added=datetime(2021, 3, 15, 12, 0),
        source_url="https://example.test/a",
    )


def _ctx(event, themes=()):
    documents = ()
    if themes:
        documents = (
            GkgRecord(
                gkg_record_id="20210315120000-1",
                date=datetime(2021, 3, 15, 12, 0),
                document_identifier="https://example.test/a",
                themes=tuple(ThemeHit(t, i * 100) for i, t in enumerate(themes)),
                v2_tone=ToneTuple(-5.0, 1.0, 6.0, 7.0),
            ),
        )
    return EventWithContext(event=event, mentions=(), documents=documents)


class TestStockThemeSet:
    def test_exact_set_is_the_eight_expected_tokens(self):
        assert query.REFUGEE_THEMES == frozenset(EXPECTED_THEMES)

    def test_all_eight_share_the_family_prefix(self):
        assert all(
            t.startswith(query.REFUGEE_THEME_PREFIX) for t in query.REFUGEE_THEMES
        )

    def test_tokens_outside_set_helper(self):
        candidates = sorted(EXPECTED_THEMES) + [
            "DISCRIMINATION_IMMIGRATION_SOMETHINGELSE",
            "REFUGEES",
        ]
        assert tokens_outside_refugee_set(candidates) == [
            "DISCRIMINATION_IMMIGRATION_SOMETHINGELSE"
        ]


class TestRefugeeActorCriteria:
    def test_ref_actor_passes(self):
        assert matches(refugee_actor_criteria(), _ctx(_event("REF")))

    def test_absent_actor_fails(self):
        assert not matches(refugee_actor_criteria(), _ctx(_event(None)))

    def test_gov_actor_fails(self):
        assert not matches(refugee_actor_criteria(), _ctx(_event("GOV")))

    def test_composite_code_needs_type_mode(self):
        event = _event("REF")
        composite = ActorRef(code="SYRREF", name="SYRIAN REFUGEES",
                             country_code="SYR", type_codes=("REF",))
        from dataclasses import replace

        event = replace(event, actor2=composite)
        assert not matches(refugee_actor_criteria(), _ctx(event))
        assert matches(
            refugee_actor_criteria(refugee_mode="contains-type"), _ctx(event)
        )


class TestThemeCriteria:
    def test_stock_theme_passes_both_modes(self):
        ctx = _ctx(_event(), ["DISCRIMINATION_IMMIGRATION_XENOPHOBIA"])
        assert matches(refugee_theme_criteria("exact-set"), ctx)
        assert matches(refugee_theme_criteria("prefix"), ctx)

    def test_family_token_outside_set_splits_the_modes(self):
        ctx = _ctx(_event(), ["DISCRIMINATION_IMMIGRATION_SOMETHINGELSE"])
        assert not matches(refugee_theme_criteria("exact-set"), ctx)
        assert matches(refugee_theme_criteria("prefix"), ctx)

    def test_no_documents_fails_theme_criteria_passes_actor_criteria(self):
        ctx = _ctx(_event("REF"))
        assert not matches(refugee_theme_criteria(), ctx)
        assert matches(refugee_actor_criteria(), ctx)

    def test_any_document_with_any_matching_theme_suffices(self):
        event = _event()
        noise = GkgRecord(
            gkg_record_id="20210315120000-0",
            date=datetime(2021, 3, 15, 12, 0),
            document_identifier="https://example.test/noise",
            themes=(ThemeHit("EDUCATION", 10),),
            v2_tone=ToneTuple(0.0, 0.0, 0.0, 0.0),
        )
        hit = GkgRecord(
            gkg_record_id="20210315120000-1",
            date=datetime(2021, 3, 15, 12, 0),
            document_identifier="https://example.test/hit",
            themes=(
                ThemeHit("PROTEST", 10),
                ThemeHit("DISCRIMINATION_IMMIGRATION_XENOPHOBES", 90),
            ),
            v2_tone=ToneTuple(0.0, 0.0, 0.0, 0.0),
        )
        ctx = EventWithContext(event=event, mentions=(), documents=(noise, hit))
        assert matches(refugee_theme_criteria("exact-set"), ctx)

    def test_matching_is_whole_token_never_substring(self):
        ctx = _ctx(_event(), ["XDISCRIMINATION_IMMIGRATION_XENOPHOBIA"])
        assert not matches(refugee_theme_criteria("exact-set"), ctx)
        assert not matches(refugee_theme_criteria("prefix"), ctx)


class TestClauseComposition:
    def test_date_range_is_inclusive_on_both_ends(self):
        criteria = refugee_actor_criteria((date(2021, 3, 1), date(2021, 3, 31)))
        assert matches(criteria, _ctx(_event(day=date(2021, 3, 1))))
        assert matches(criteria, _ctx(_event(day=date(2021, 3, 31))))
        assert not matches(criteria, _ctx(_event(day=date(2021, 4, 1))))

    def test_root_code_clause(self):
        criteria = QueryCriteria(event_root_codes=frozenset({"01"}))
        assert matches(criteria, _ctx(_event(root="01")))
        assert not matches(criteria, _ctx(_event(root="14")))

    def test_actor1_country_clause(self):
        criteria = QueryCriteria(actor1_country=frozenset({"ESP"}))
        assert matches(criteria, _ctx(_event(a1_country="ESP")))
        assert not matches(criteria, _ctx(_event(a1_country="ITA")))
        assert not matches(criteria, _ctx(_event(a1_country=None)))

    def test_inverted_range_rejected(self):
        with pytest.raises(CriteriaError, match="inverted"):
            QueryCriteria(date_range=(date(2021, 3, 31), date(2021, 3, 1)))

    def test_empty_theme_matcher_rejected(self):
        with pytest.raises(CriteriaError):
            ThemeMatcher("exact-set", frozenset())

    def test_unknown_modes_rejected(self):
        with pytest.raises(CriteriaError):
            ThemeMatcher("substring", frozenset({"X"}))
        with pytest.raises(CriteriaError):
            QueryCriteria(refugee_mode="loose")


class TestSubsetAndMonotonicity:
    def test_theme_criteria_results_subset_of_actor_criteria(self):
        rng = random.Random(99)
        for _ in range(20):
            events, mentions, gkgs = synth.random_corpus(rng, 60)
            contexts = brute_force_join(events, mentions, gkgs)
            ids1 = {c.event.global_event_id for c in contexts
                    if matches(refugee_actor_criteria(), c)}
            for mode in ("exact-set", "prefix"):
                ids2 = {c.event.global_event_id for c in contexts
                        if matches(refugee_theme_criteria(mode), c)}
                assert ids2 <= ids1

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_adding_clauses_never_grows_results(self, seed):
        rng = random.Random(seed)
        events, mentions, gkgs = synth.random_corpus(rng, 40)
        contexts = brute_force_join(events, mentions, gkgs)
        base = QueryCriteria()
        tighter = [
            QueryCriteria(actor2_refugee=True),
            QueryCriteria(date_range=(date(2021, 3, 5), date(2021, 3, 20))),
            QueryCriteria(event_root_codes=frozenset({"01", "14"})),
            QueryCriteria(actor1_country=frozenset({"ESP", "USA"})),
            QueryCriteria(themes=ThemeMatcher()),
        ]
        n_base = sum(matches(base, c) for c in contexts)
        for criteria in tighter:
            assert sum(matches(criteria, c) for c in contexts) <= n_base

    def test_matches_agrees_with_independent_predicate(self):
        rng = random.Random(7)
        events, mentions, gkgs = synth.random_corpus(rng, 120)
        contexts = brute_force_join(events, mentions, gkgs)
        cases = [
            refugee_actor_criteria(),
            refugee_theme_criteria("exact-set"),
            refugee_theme_criteria("prefix"),
            QueryCriteria(
                actor2_refugee=True,
                date_range=(date(2021, 3, 3), date(2021, 3, 25)),
                event_root_codes=frozenset({"01", "04", "14"}),
            ),
        ]
        for criteria in cases:
            mine = [c for c in contexts if matches(criteria, c)]
            oracle = brute_force_filter(criteria, contexts)
            assert mine == oracle


class TestSerializationForms:
    CASES = [
        QueryCriteria(),
        refugee_actor_criteria(),
        refugee_theme_criteria("exact-set"),
        refugee_theme_criteria("prefix"),
        refugee_actor_criteria((date(2015, 3, 1), date(2016, 3, 31))),
        QueryCriteria(
            actor2_refugee=True,
            refugee_mode="contains-type",
            themes=ThemeMatcher("prefix", frozenset({"DISCRIMINATION_IMMIGRATION"})),
            date_range=(date(2021, 3, 1), date(2021, 3, 31)),
            event_root_codes=frozenset({"01", "14"}),
            actor1_country=frozenset({"ESP", "ITA", "USA"}),
        ),
    ]

    @pytest.mark.parametrize("criteria", CASES)
    def test_params_round_trip(self, criteria):
        assert criteria_from_params(criteria_to_params(criteria)) == criteria

    @pytest.mark.parametrize("criteria", CASES)
    def test_json_round_trip(self, criteria):
        assert criteria_from_json(criteria_to_json(criteria)) == criteria

    def test_preset_1_decodes_to_actor_criteria(self):
        assert criteria_from_params({"criteria": "1"}) == refugee_actor_criteria()

    def test_preset_2_decodes_to_theme_criteria(self):
        assert criteria_from_params({"criteria": "2"}) == refugee_theme_criteria()

    def test_explicit_keys_override_preset(self):
        criteria = criteria_from_params({"criteria": "2", "thememode": "prefix"})
        assert criteria.themes.mode == "prefix"

    @pytest.mark.parametrize("params", [
        {"criteria": "3"},
        {"ref": "2"},
        {"refmode": "loose"},
        {"thememode": "substring"},
        {"from": "2021-03-01"},
        {"from": "bad", "to": "2021-03-31"},
        {"roots": " , "},
    ])
    def test_bad_params_rejected(self, params):
        with pytest.raises(CriteriaError):
            criteria_from_params(params)
