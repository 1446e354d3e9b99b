"""Seeded splitmix64 stream: reference values, determinism, ranges."""

import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oilcast import SplitMix64
from oilcast.exceptions import InvalidRange

# first outputs for seed 0, from the published splitmix64 reference vector
SEED0_REFERENCE = (
    16294208416658607535,
    7960286522194355700,
    487617019471545679,
)

# oracle recorded once from an independent evaluation of the recurrence
SEED42_FIRST_UNIFORM = 0.7415648787718233


def test_seed0_matches_reference_vector():
    rng = SplitMix64(0)
    assert tuple(rng.next_uint64() for _ in range(3)) == SEED0_REFERENCE


def test_seed42_first_uniform_oracle():
    rng = SplitMix64(42)
    assert rng.next_uniform(0.0, 1.0) == SEED42_FIRST_UNIFORM


def test_same_seed_same_stream():
    a = SplitMix64(987654321)
    b = SplitMix64(987654321)
    assert [a.next_uint64() for _ in range(100)] == [
        b.next_uint64() for _ in range(100)
    ]


def test_stream_identical_across_processes():
    """The same seed reproduces byte-identical output in a fresh process."""
    code = (
        "from oilcast import SplitMix64\n"
        "r = SplitMix64(314159)\n"
        "print(','.join(str(r.next_uint64()) for _ in range(20)))\n"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    ).stdout.strip()
    local = SplitMix64(314159)
    assert out == ",".join(str(local.next_uint64()) for _ in range(20))


def test_different_seeds_differ():
    a = SplitMix64(1)
    b = SplitMix64(2)
    assert [a.next_uint64() for _ in range(4)] != [
        b.next_uint64() for _ in range(4)
    ]


def test_seed_wraps_modulo_2_64():
    assert SplitMix64(2**64).next_uint64() == SplitMix64(0).next_uint64()


def test_uint64_range():
    rng = SplitMix64(5)
    for _ in range(1000):
        v = rng.next_uint64()
        assert 0 <= v < 2**64


@given(
    seed=st.integers(min_value=0, max_value=2**64 - 1),
    lo=st.floats(-1e6, 1e6),
    width=st.floats(1e-3, 1e6),
)
def test_uniform_stays_in_range(seed, lo, width):
    rng = SplitMix64(seed)
    hi = lo + width
    for _ in range(5):
        v = rng.next_uniform(lo, hi)
        assert lo <= v < hi


def test_uniform_unit_interval_bounds():
    rng = SplitMix64(123)
    values = [rng.next_uniform(0.0, 1.0) for _ in range(10000)]
    assert min(values) >= 0.0
    assert max(values) < 1.0
    # crude uniformity sanity: mean of 10k draws near 1/2
    assert abs(sum(values) / len(values) - 0.5) < 0.02


def test_invalid_range_rejected():
    rng = SplitMix64(0)
    with pytest.raises(InvalidRange):
        rng.next_uniform(1.0, 1.0)
    with pytest.raises(InvalidRange):
        rng.next_uniform(2.0, -2.0)
