"""Unit tests for the concurrent case runner."""
import math

from burgerslab.features.experiments.sweep import run_sweep, run_sweep_async


def test_sequential_sweep_sorts_by_key():
    """Test that results come back in key order."""
    items = [((3,), 9.0), ((1,), 1.0), ((2,), 4.0)]

    pairs = run_sweep(math.sqrt, items)

    assert pairs == [((1,), 1.0), ((2,), 2.0), ((3,), 3.0)]


def test_parallel_sweep_matches_sequential():
    """Test that the process pool gives the same ordered results."""
    items = [((-value,), value) for value in (1.0, 4.0, 9.0, 16.0)]

    assert run_sweep(math.sqrt, items, workers=2) == run_sweep(math.sqrt, items, workers=1)


async def test_run_sweep_async():
    """Test the coroutine directly."""
    items = [(("b",), 16.0), (("a",), 25.0)]

    pairs = await run_sweep_async(math.sqrt, items, workers=2)

    assert pairs == [(("a",), 5.0), (("b",), 4.0)]
