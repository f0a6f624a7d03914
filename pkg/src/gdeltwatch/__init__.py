"""GDELT 2.0 ingestion, refugee-event filtering, and monitoring analytics.

The package is organized as a pipeline:

    formats   parse GDELT bulk export files (Events, Mentions, GKG)
    cameo     CAMEO taxonomy lookups (event codes, countries, actor types)
    ingest    15-minute feed polling, file download, DOC API client
    store     embedded SQLite store materializing the events/mentions/GKG join
    query     declarative filter criteria over joined records
    analytics chart-ready aggregates (timelines, tone bands, country counts,
              choropleth counts, spike detection)
    service   read-only HTTP API for the dashboard and other clients
    cli       operator entry points (ingest, query, replay, serve)
"""

__version__ = "0.1.0"
