import numpy as np
import pytest

from witnesslab.rng import ENV_SEED, CounterRng, default_seed


def test_default_seed_env(monkeypatch):
    monkeypatch.delenv(ENV_SEED, raising=False)
    assert default_seed() == 0
    monkeypatch.setenv(ENV_SEED, "1234")
    assert default_seed() == 1234


def test_streams_are_reproducible():
    a = CounterRng(5).stream(3).integers(0, 10**9, 8)
    b = CounterRng(5).stream(3).integers(0, 10**9, 8)
    assert np.array_equal(a, b)


def test_streams_are_distinct():
    base = CounterRng(5)
    draws = [tuple(base.stream(i).integers(0, 10**9, 4)) for i in range(6)]
    assert len(set(draws)) == 6


def test_seeds_are_distinct():
    a = CounterRng(1).stream(0).integers(0, 10**9, 4)
    b = CounterRng(2).stream(0).integers(0, 10**9, 4)
    assert not np.array_equal(a, b)


def test_coerce():
    base = CounterRng(9)
    assert CounterRng.coerce(base) is base
    assert CounterRng.coerce(9).seed == 9
    assert CounterRng.coerce(None).seed == default_seed()


def test_stream_rejects_negative_index():
    with pytest.raises(ValueError):
        CounterRng(0).stream(-1)
