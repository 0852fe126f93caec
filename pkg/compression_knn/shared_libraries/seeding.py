"""Stable 64-bit seed derivation.

Seeds for every (ratio, repetition, class) cell are derived from the base seed
instead of drawn from a shared generator, so cells can run in any order and
adding a cell never changes another cell's randomness.
"""

MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """SplitMix64 finalizer over a 64-bit integer."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(base: int, *parts: int) -> int:
    """Mix ``parts`` into a hash and XOR it into ``base``.

    Args:
        base: Base seed, any non-negative integer below 2**64
        *parts: Integer components naming the cell (ratio key, repetition, ...)

    Returns:
        A 64-bit seed
    """
    h = 0
    for part in parts:
        h = splitmix64(h ^ (part & MASK64))
    return (base & MASK64) ^ h
