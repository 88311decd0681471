"""Shared helpers: fixed-point logs, rational utilities, seed derivation."""

from __future__ import annotations

import hashlib
from fractions import Fraction
from functools import lru_cache

LOG2_FIXED_BITS = 16


@lru_cache(maxsize=None)
def log2_fixed(n: int) -> Fraction:
    """Rational log2(n), truncated to 2**-16.  Exact for powers of two.

    Uses integer arithmetic only (bit length of n**2**16) so the value is
    identical on every platform, which keeps every threshold that depends
    on it reproducible.
    """
    if n < 1:
        raise ValueError("log2_fixed needs n >= 1")
    if n == 1:
        return Fraction(0)
    shift = 1 << LOG2_FIXED_BITS
    return Fraction((n ** shift).bit_length() - 1, shift)


def floor_log2(value: Fraction) -> int:
    """Largest h with 2**h <= value, for any positive rational."""
    if value <= 0:
        raise ValueError("floor_log2 needs a positive value")
    value = Fraction(value)
    p, q = value.numerator, value.denominator
    h = p.bit_length() - q.bit_length()
    if h >= 0:
        return h if p >= (q << h) else h - 1
    return h if (p << (-h)) >= q else h - 1


def pow2(h: int) -> Fraction:
    return Fraction(1 << h) if h >= 0 else Fraction(1, 1 << (-h))


def ceil_div(a: int, b: int) -> int:
    if b <= 0:
        raise ValueError("ceil_div needs b > 0")
    return -((-a) // b)


def derive_seed(seed: int, tag) -> int:
    """Stable 64-bit sub-seed for attempt/trial `tag`, platform independent."""
    digest = hashlib.blake2b(f"{seed}/{tag}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def parse_rational(text) -> Fraction:
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text))


def format_rational(value) -> str:
    return str(Fraction(value))


def iter_partitions(n: int, blocks: int):
    """Yield every partition of 0..n-1 into exactly `blocks` nonempty parts.

    Partitions are emitted as restricted-growth assignment tuples: vertex 0
    always sits in part 0 and each new part index appears in vertex order,
    so every partition shows up exactly once.
    """
    if blocks < 1 or blocks > n:
        return
    assign = [0] * n

    def rec(v, used):
        if n - v < blocks - used:
            return
        if v == n:
            if used == blocks:
                yield tuple(assign)
            return
        for b in range(min(used + 1, blocks)):
            assign[v] = b
            yield from rec(v + 1, used + 1 if b == used else used)

    yield from rec(1, 1)
