"""Seedable 64-bit pseudorandom generator and unbiased sampling helpers.

The generator is splitmix64 (Steele, Lea, and Flood's mixing constants), a
well-known fixed-increment mixer.  It is tiny, has a documented algorithm
identifier, and makes every sampled artifact reproducible from a single
64-bit seed.  Bounded draws use rejection from whole 64-bit words, so they
are exactly uniform.  Subset draws go through combinatorial unranking of
lexicographically ordered c-subsets rather than draw-until-distinct loops.
"""

from __future__ import annotations

from math import comb

from .errors import ParameterError

PRNG_ID = "splitmix64"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
MAX_RANK = 1 << 64


class SplitMix64:
    """splitmix64 stream seeded with one 64-bit integer."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Exactly uniform integer in [0, bound)."""
        if not 1 <= bound <= MAX_RANK:
            raise ParameterError(f"bound must be in 1..2^64, got {bound}")
        limit = MAX_RANK - MAX_RANK % bound
        while True:
            u = self.next64()
            if u < limit:
                return u % bound

    def uniform(self, lo: float, hi: float) -> float:
        """Uniform float in [lo, hi) with 53 random mantissa bits."""
        return lo + (hi - lo) * ((self.next64() >> 11) * 2.0**-53)


def unrank_subset(n: int, c: int, rank: int) -> tuple[int, ...]:
    """The rank-th c-subset of {1..n} in lexicographic order, 0-based rank."""
    total = comb(n, c)
    if not 0 <= rank < total:
        raise ParameterError(f"rank {rank} out of range for C({n},{c})={total}")
    coords = []
    a = 1
    remaining = c
    while remaining:
        block = comb(n - a, remaining - 1)
        if rank < block:
            coords.append(a)
            remaining -= 1
        else:
            rank -= block
        a += 1
    return tuple(coords)


def random_subset(rng: SplitMix64, n: int, c: int) -> tuple[int, ...]:
    """Uniform c-subset of {1..n} as ascending 1-based coordinates.

    Rejects parameter combinations whose subset count does not fit in 64
    bits, so ranks always come from a single-word draw.
    """
    if not 0 <= c <= n:
        raise ParameterError(f"subset size {c} out of range 0..{n}")
    total = comb(n, c)
    if total > MAX_RANK:
        raise ParameterError(
            f"C({n},{c}) = {total} exceeds the 64-bit rank space"
        )
    if c == 0:
        return ()
    return unrank_subset(n, c, rng.below(total))
