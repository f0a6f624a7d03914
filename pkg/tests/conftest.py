import random

import pytest

from gdeltwatch import synth
from gdeltwatch.store import Store


@pytest.fixture
def rng():
    return random.Random(20150902)


@pytest.fixture
def corpus(rng):
    """A joined 200-event corpus with refugee and theme variety."""
    return synth.random_corpus(rng, 200)


@pytest.fixture
def populated_store(corpus):
    events, mentions, gkgs = corpus
    store = Store()
    store.upsert_events(events)
    store.upsert_mentions(mentions)
    store.upsert_gkg(gkgs)
    yield store
    store.close()
