import csv
import io
import json
import random
from dataclasses import replace
from datetime import date

import pytest
from hypothesis import given, settings, strategies as st

from gdeltwatch import analytics, serialize, synth
from gdeltwatch.analytics import (
    SpikeFlag,
    SpikeReport,
    TimelinePoint,
    TimelineSeries,
)
from gdeltwatch.records import EventWithContext


@pytest.fixture(scope="module")
def corpus():
    return synth.random_corpus(random.Random(31), 40)


@pytest.fixture(scope="module")
def contexts(corpus):
    from helpers import brute_force_join

    return brute_force_join(*corpus)


class TestDumps:
    def test_compact_separators(self):
        assert serialize.dumps({"a": [1, 2], "b": "x"}) == '{"a":[1,2],"b":"x"}'

    def test_non_ascii_verbatim(self):
        text = serialize.dumps({"name": "Küste, Lesbos ↦ Χίος"})
        assert "Küste" in text and "Χίος" in text
        assert "\\u" not in text

    def test_deterministic_across_calls(self, contexts):
        payload = [serialize.context_dict(c) for c in contexts]
        assert serialize.dumps(payload) == serialize.dumps(payload)

    @settings(max_examples=50, deadline=None)
    @given(st.recursive(
        st.none() | st.booleans() | st.integers() | st.text(),
        lambda inner: st.lists(inner) | st.dictionaries(st.text(), inner),
        max_leaves=20,
    ))
    def test_round_trips_through_json_loads(self, payload):
        assert json.loads(serialize.dumps(payload)) == payload


class TestRecordDicts:
    def test_event_dates_are_iso_strings(self, contexts):
        d = serialize.event_dict(contexts[0].event)
        date.fromisoformat(d["day"])
        assert "T" in d["date_added"]

    def test_absent_actor_serializes_as_null(self, contexts):
        event = replace(contexts[0].event, actor1=None)
        d = serialize.event_dict(event)
        assert d["actor1"] is None
        assert json.loads(serialize.dumps(d))["actor1"] is None

    def test_context_shape(self, contexts):
        ctx = next(c for c in contexts if c.mentions and c.documents)
        d = serialize.context_dict(ctx)
        assert set(d) == {"event", "mentions", "documents"}
        assert len(d["mentions"]) == len(ctx.mentions)
        first = d["documents"][0]
        assert set(first["tone"]) == {"tone", "positive", "negative", "polarity"}
        for hit in first["themes"]:
            assert set(hit) == {"theme", "char_offset"}

    def test_mention_times_are_iso(self, contexts):
        ctx = next(c for c in contexts if c.mentions)
        d = serialize.mention_dict(ctx.mentions[0])
        assert d["event_time"].startswith(str(ctx.mentions[0].event_time.year))


class TestAggregateDicts:
    def test_timeline_without_percent_omits_overlay_keys(self):
        series = TimelineSeries(
            granularity="day",
            points=(TimelinePoint(date(2021, 3, 1), 4),),
            unit="events",
        )
        d = serialize.timeline_dict(series)
        assert set(d) == {"granularity", "unit", "points"}
        assert d["points"] == [{"bucket": "2021-03-01", "count": 4}]

    def test_timeline_with_percent_includes_overlay_keys(self):
        series = TimelineSeries(
            granularity="day",
            points=(TimelinePoint(date(2021, 3, 1), 0),),
            unit="events",
            percent=(0.0,),
            zero_denominator_buckets=(date(2021, 3, 1),),
        )
        d = serialize.timeline_dict(series)
        assert d["percent"] == [0.0]
        assert d["zero_denominator_buckets"] == ["2021-03-01"]

    def test_tone_point_keys(self, contexts):
        series = analytics.tone_stats(contexts, "day")
        d = serialize.tone_dict(series)
        assert set(d["points"][0]) == {"bucket", "min", "median", "max", "n"}

    def test_countries_entries_ordered_as_computed(self, contexts):
        freq = analytics.top_country_frequencies(contexts, 5)
        d = serialize.countries_dict(freq)
        assert [e["country"] for e in d["entries"]] == list(freq.codes())

    def test_choropleth_total_consistent(self, contexts):
        result = analytics.choropleth_counts(contexts)
        d = serialize.choropleth_dict(result)
        assert d["total"] == sum(d["counts"].values())
        assert d["roots"] is None

    def test_spikes_keys(self):
        report = SpikeReport(
            window=8, threshold=3.0,
            flagged=(SpikeFlag(date(2021, 3, 9), 50, 10.0, 2.0, 20.0),),
        )
        d = serialize.spikes_dict(report)
        assert d["window"] == 8 and d["k"] == 3.0
        assert d["flagged"][0]["z_score"] == 20.0


class TestEventsCsv:
    def test_header_is_frozen_column_order(self, contexts):
        text = serialize.events_csv(contexts)
        header = text.splitlines()[0]
        assert tuple(header.split(",")) == serialize.EVENT_CSV_COLUMNS

    def test_one_row_per_event(self, contexts):
        rows = list(csv.reader(io.StringIO(serialize.events_csv(contexts))))
        assert len(rows) == len(contexts) + 1

    def test_absent_optionals_are_blank_cells(self, contexts):
        event = replace(
            contexts[0].event, actor1=None, action_geo=None, source_url=None
        )
        rows = list(csv.reader(io.StringIO(serialize.events_csv([event]))))
        row = dict(zip(rows[0], rows[1]))
        assert row["actor1_code"] == ""
        assert row["geo_lat"] == ""
        assert row["source_url"] == ""
        assert "None" not in rows[1]

    def test_embedded_delimiters_quoted(self, contexts):
        tricky = 'https://example.net/a,b"c\nd'
        event = replace(contexts[0].event, source_url=tricky)
        text = serialize.events_csv([event])
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[1][-1] == tricky

    def test_accepts_bare_events_and_contexts(self, contexts):
        bare = [c.event for c in contexts]
        assert serialize.events_csv(bare) == serialize.events_csv(contexts)

    def test_round_trip_preserves_ids(self, contexts):
        rows = list(csv.reader(io.StringIO(serialize.events_csv(contexts))))
        ids = [int(r[0]) for r in rows[1:]]
        assert ids == [c.event.global_event_id for c in contexts]


class TestAggregateCsv:
    def test_timeline_plain_columns(self, contexts):
        series = analytics.article_count_timeline(contexts, "day", "events")
        lines = serialize.timeline_csv(series).splitlines()
        assert lines[0] == "bucket,count"
        assert len(lines) == len(series.points) + 1

    def test_timeline_percent_columns(self):
        series = TimelineSeries(
            granularity="day",
            points=(
                TimelinePoint(date(2021, 3, 1), 5),
                TimelinePoint(date(2021, 3, 2), 0),
            ),
            unit="events",
            percent=(2.5, 0.0),
            zero_denominator_buckets=(date(2021, 3, 2),),
        )
        lines = serialize.timeline_csv(series).splitlines()
        assert lines[0] == "bucket,count,percent,zero_denominator"
        assert lines[1] == "2021-03-01,5,2.5,0"
        assert lines[2] == "2021-03-02,0,0.0,1"

    def test_tone_columns(self, contexts):
        series = analytics.tone_stats(contexts, "month")
        lines = serialize.tone_csv(series).splitlines()
        assert lines[0] == "bucket,min,median,max,n"
        assert len(lines) == len(series.points) + 1

    def test_countries_rows_match_entries(self, contexts):
        freq = analytics.top_country_frequencies(contexts, 3)
        lines = serialize.countries_csv(freq).splitlines()
        assert lines[0] == "country,count"
        assert len(lines) == len(freq.entries) + 1

    def test_choropleth_includes_display_names(self, contexts):
        result = analytics.choropleth_counts(contexts)
        rows = list(csv.reader(io.StringIO(serialize.choropleth_csv(result))))
        assert rows[0] == ["country", "name", "count"]
        by_code = {r[0]: r[1] for r in rows[1:]}
        if "ESP" in by_code:
            assert by_code["ESP"] == "Spain"

    def test_spikes_csv_shape(self):
        report = SpikeReport(
            window=8, threshold=3.0,
            flagged=(SpikeFlag(date(2021, 3, 9), 50, 10.0, 2.0, 20.0),),
        )
        lines = serialize.spikes_csv(report).splitlines()
        assert lines[0] == "bucket,value,baseline_mean,baseline_std,z_score"
        assert lines[1].startswith("2021-03-09,50,")

    def test_all_csv_line_endings_are_bare_newlines(self, contexts):
        for text in (
            serialize.events_csv(contexts),
            serialize.timeline_csv(
                analytics.article_count_timeline(contexts, "day", "events")
            ),
            serialize.tone_csv(analytics.tone_stats(contexts, "day")),
        ):
            assert "\r" not in text
            assert text.endswith("\n")
