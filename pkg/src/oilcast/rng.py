"""Deterministic pseudo-random numbers via the splitmix64 recurrence.

All stochastic behaviour in this package (network weight initialization,
per-cell seeds in the benchmark grid) flows through this generator, so a
fixed seed reproduces results bit for bit on any platform. The recurrence
is the public-domain splitmix64: a 64-bit counter advanced by the golden
gamma, pushed through two xor-multiply mixing rounds.
"""

from .exceptions import InvalidRange

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / (1 << 53)


class SplitMix64:
    """Seeded 64-bit generator with a uniform-draw helper.

    Two instances built from the same seed produce identical streams.
    """

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK64

    def next_uint64(self) -> int:
        """Advance the state and return the next 64-bit output."""
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Draw from [lo, hi).

        The unit draw keeps the 53 high bits of the 64-bit output (the
        full precision of a double's mantissa) divided by 2**53, then is
        scaled affinely onto [lo, hi).
        """
        if not lo < hi:
            raise InvalidRange(f"need lo < hi, got [{lo}, {hi})")
        u = (self.next_uint64() >> 11) * _INV_2_53
        return lo + u * (hi - lo)
