"""Operator commands: ingest, query, canned replays, volume fetch, serve.

Exit codes: 0 success, 1 runtime failure (bad file, network, store),
2 usage error (bad flags/arguments). Every flag can also be supplied
via an environment variable named GDELTWATCH_<FLAG>.
"""

from __future__ import annotations

import sys
from datetime import date, datetime
from pathlib import Path

import click

from . import serialize
from .analytics import (
    COUNT_UNIT_AUTO,
    GRANULARITY_DAY,
    GRANULARITY_MONTH,
    article_count_timeline,
    choropleth_counts,
    tone_stats,
    top_country_frequencies,
)
from .errors import GdeltWatchError
from .query import (
    REFUGEE_MODE_EXACT,
    THEME_MODE_EXACT,
    THEME_MODE_PREFIX,
    refugee_actor_criteria,
    refugee_theme_criteria,
)
from .store import Store

_CONTEXT = {"auto_envvar_prefix": "GDELTWATCH", "help_option_names": ["-h", "--help"]}


@click.group(context_settings=_CONTEXT)
@click.option(
    "--store", "store_path", default="gdeltwatch.db", show_default=True,
    envvar="GDELTWATCH_STORE", help="Path to the store database file.",
)
@click.pass_context
def main(ctx, store_path):
    """Monitor refugee-related event coverage from GDELT 2.0 feeds."""
    ctx.ensure_object(dict)
    ctx.obj["store_path"] = store_path


def _store(ctx) -> Store:
    try:
        return Store(ctx.obj["store_path"])
    except GdeltWatchError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command()
@click.argument("sources", nargs=-1)
@click.option("--poll", is_flag=True, help="Poll the 15-minute update feed.")
@click.option("--feed-url", default=None, help="Override the update feed URL.")
@click.option(
    "--data-dir", default="gdelt-data", show_default=True,
    help="Directory for downloaded export files.",
)
@click.option(
    "--interval", default=900, show_default=True,
    help="Poll interval in seconds (>= 60).",
)
@click.pass_context
def ingest(ctx, sources, poll, feed_url, data_dir, interval):
    """Ingest export files (paths or URLs), or poll the update feed."""
    from . import ingest as net

    if not sources and not poll:
        raise click.UsageError("provide file paths/URLs or --poll")
    if sources and poll:
        raise click.UsageError("--poll takes no positional sources")

    store = _store(ctx)
    if poll:
        feed_url = feed_url or net.DEFAULT_FEED_URL

        def handle(entry):
            kind, diag, counts = net.ingest_entry(store, entry, data_dir)
            click.echo(
                f"{entry.url.rsplit('/', 1)[-1]}: {kind} "
                f"rows_ok={diag.rows_ok} skipped={diag.rows_skipped} "
                f"inserted={counts.inserted} updated={counts.updated}"
            )

        poller = net.FeedPoller(
            handle, feed_url=feed_url, interval=interval,
            on_poll=lambda: store.set_last_poll_time(datetime.utcnow()),
        )
        click.echo(f"polling {feed_url} every {interval}s (Ctrl-C to stop)")
        try:
            poller.run()
        except KeyboardInterrupt:
            click.echo("stopped")
        return

    failures = 0
    for source in sources:
        try:
            if source.startswith(("http://", "https://")):
                import requests

                response = requests.get(source, timeout=120)
                response.raise_for_status()
                target = Path(data_dir) / source.rstrip("/").rsplit("/", 1)[-1]
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_bytes(response.content)
                source = str(target)
            kind, diag, counts = net.ingest_path(store, source)
        except GdeltWatchError as exc:
            click.echo(f"{source}: FAILED: {exc}", err=True)
            failures += 1
            continue
        except OSError as exc:
            click.echo(f"{source}: FAILED: {exc}", err=True)
            failures += 1
            continue
        click.echo(
            f"{Path(source).name}: {kind} "
            f"rows_ok={diag.rows_ok} skipped={diag.rows_skipped} "
            f"inserted={counts.inserted} updated={counts.updated}"
        )
    store.set_last_poll_time(datetime.utcnow())
    if failures:
        raise click.ClickException(f"{failures} of {len(sources)} sources failed")


def _parse_cli_date(text: str, what: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise click.UsageError(f"{what}: not an ISO date ({text!r})") from None


def _build_criteria(criteria_id, start, end, theme_mode, refugee_mode):
    date_range = None
    if (start is None) != (end is None):
        raise click.UsageError("date range needs both --from and --to")
    if start is not None:
        lo = _parse_cli_date(start, "--from")
        hi = _parse_cli_date(end, "--to")
        if lo > hi:
            raise click.UsageError(f"--from {lo} is after --to {hi}")
        date_range = (lo, hi)
    if criteria_id == "1":
        return refugee_actor_criteria(date_range, refugee_mode)
    return refugee_theme_criteria(theme_mode, date_range, refugee_mode)


@main.command()
@click.option(
    "--criteria", "criteria_id", type=click.Choice(["1", "2"]), default="1",
    show_default=True, help="1: refugee Actor2. 2: plus refugee GKG themes.",
)
@click.option("--from", "start", default=None, help="Start date (inclusive).")
@click.option("--to", "end", default=None, help="End date (inclusive).")
@click.option(
    "--theme-mode", type=click.Choice(["exact", "prefix"]), default="exact",
    show_default=True, help="Theme matching for criteria 2.",
)
@click.option(
    "--refugee-mode", type=click.Choice(["exact", "contains-type"]),
    default="exact", show_default=True,
    help="Actor2 test: code equals REF, or type codes contain REF.",
)
@click.option(
    "--out", type=click.Path(dir_okay=False), default=None,
    help="CSV output path (default: stdout).",
)
@click.pass_context
def query(ctx, criteria_id, start, end, theme_mode, refugee_mode, out):
    """Export events matching the selected criteria as CSV."""
    mode = THEME_MODE_EXACT if theme_mode == "exact" else THEME_MODE_PREFIX
    refmode = REFUGEE_MODE_EXACT if refugee_mode == "exact" else "contains-type"
    criteria = _build_criteria(criteria_id, start, end, mode, refmode)
    store = _store(ctx)
    try:
        contexts = store.scan(criteria)
    except GdeltWatchError as exc:
        raise click.ClickException(str(exc)) from exc
    text = serialize.events_csv(contexts)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"{len(contexts)} rows -> {out}", err=True)
    else:
        click.echo(text, nl=False)
        click.echo(f"{len(contexts)} rows", err=True)


# Canned case studies: (criteria builder args, date range, granularity).
REPLAY_CASES = {
    "kurdi": {
        "criteria_id": "1",
        "range": (date(2015, 3, 1), date(2016, 3, 31)),
        "granularity": GRANULARITY_MONTH,
        "outputs": ("timeline", "tone"),
    },
    "march2021": {
        "criteria_id": "2",
        "range": (date(2021, 3, 1), date(2021, 3, 31)),
        "granularity": GRANULARITY_DAY,
        "outputs": ("countries", "choropleth"),
    },
}


@main.command()
@click.argument("case", type=click.Choice(sorted(REPLAY_CASES)))
@click.option(
    "--out-dir", default=None,
    help="Output directory (default: replay-<case>).",
)
@click.pass_context
def replay(ctx, case, out_dir):
    """Run a canned case-study pipeline over the store's data.

    kurdi: monthly refugee-event volume and tone, March 2015 through
    March 2016. march2021: country frequencies and choropleth counts
    for refugee-theme events in March 2021.
    """
    spec = REPLAY_CASES[case]
    criteria = _build_criteria(
        spec["criteria_id"], spec["range"][0].isoformat(),
        spec["range"][1].isoformat(), THEME_MODE_EXACT, REFUGEE_MODE_EXACT,
    )
    store = _store(ctx)
    contexts = store.scan(criteria)
    directory = Path(out_dir or f"replay-{case}")
    directory.mkdir(parents=True, exist_ok=True)

    written = []

    def emit(name, payload_json, payload_csv):
        json_path = directory / f"{name}.json"
        json_path.write_text(serialize.dumps(payload_json), encoding="utf-8")
        csv_path = directory / f"{name}.csv"
        csv_path.write_text(payload_csv, encoding="utf-8")
        written.extend([json_path, csv_path])

    if "timeline" in spec["outputs"]:
        series = article_count_timeline(
            contexts, spec["granularity"], COUNT_UNIT_AUTO, spec["range"]
        )
        emit("timeline", serialize.timeline_dict(series),
             serialize.timeline_csv(series))
    if "tone" in spec["outputs"]:
        series = tone_stats(contexts, spec["granularity"])
        emit("tone", serialize.tone_dict(series), serialize.tone_csv(series))
    if "countries" in spec["outputs"]:
        freq = top_country_frequencies(contexts, 20, "actor1")
        emit("countries", serialize.countries_dict(freq),
             serialize.countries_csv(freq))
    if "choropleth" in spec["outputs"]:
        result = choropleth_counts(contexts)
        emit("choropleth", serialize.choropleth_dict(result),
             serialize.choropleth_csv(result))

    click.echo(f"{case}: {len(contexts)} matching events")
    for path in written:
        click.echo(str(path))


@main.command("fetch-volume")
@click.option("--query", "query_text", required=True,
              help="Volume API query, e.g. a theme: clause.")
@click.option("--from", "start", required=True, help="Start date (inclusive).")
@click.option("--to", "end", required=True, help="End date (inclusive).")
@click.option("--api-url", default=None, help="Override the volume API URL.")
@click.pass_context
def fetch_volume(ctx, query_text, start, end, api_url):
    """Fetch matched-vs-total article volume and store it.

    Stored points back the percent-of-total timeline overlay. The API
    covers 2017 onward only; earlier ranges are rejected.
    """
    from . import ingest as net

    lo = _parse_cli_date(start, "--from")
    hi = _parse_cli_date(end, "--to")
    if lo > hi:
        raise click.UsageError(f"--from {lo} is after --to {hi}")
    kwargs = {"base_url": api_url} if api_url else {}
    try:
        points = net.doc_api_timeline(query_text, lo, hi, **kwargs)
    except GdeltWatchError as exc:
        raise click.ClickException(str(exc)) from exc
    store = _store(ctx)
    counts = store.upsert_volume_points(points, query_filter=query_text)
    click.echo(
        f"{len(points)} volume points "
        f"(inserted={counts.inserted} updated={counts.updated})"
    )


@main.command()
@click.option("--bind", default="127.0.0.1:8000", show_default=True,
              help="HOST:PORT to listen on.")
@click.option("--cors-origin", multiple=True, default=("*",),
              help="Allowed CORS origin (repeatable).")
@click.option("--dashboard-dir", default=None,
              help="Directory of built dashboard assets to serve at /.")
@click.pass_context
def serve(ctx, bind, cors_origin, dashboard_dir):
    """Run the read-only HTTP API."""
    import uvicorn

    from .service import create_app

    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise click.UsageError(f"--bind must be HOST:PORT, got {bind!r}")
    app = create_app(
        _store(ctx), cors_origins=tuple(cors_origin), dashboard_dir=dashboard_dir
    )
    uvicorn.run(app, host=host, port=int(port_text))


if __name__ == "__main__":
    sys.exit(main())
