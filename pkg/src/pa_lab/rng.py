"""Deterministic random-stream derivation shared by all simulation entry points.

Every simulation kernel consumes exactly one IEEE double in [0, 1) per
elementary step, drawn from a Philox bit generator.  Philox is counter-based,
so keying it with (seed, subkey, ...) yields independent streams whose
contents do not depend on scheduling order; Monte Carlo trials derive their
stream from (master seed, trial index) and can therefore be aggregated in any
order, serially or in parallel, with identical results.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def check_seed(seed: int) -> int:
    """Validate and return an unsigned 64-bit seed."""
    seed = int(seed)
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def philox_key(seed: int, *subkeys: int) -> int:
    """Pack a master seed and up to three subkeys into one 256-bit Philox key."""
    key = check_seed(seed)
    if len(subkeys) > 3:
        raise ValueError("at most three subkeys fit into a 256-bit Philox key")
    for i, sub in enumerate(subkeys, start=1):
        sub = int(sub)
        if not 0 <= sub <= _MASK64:
            raise ValueError(f"subkey must be an unsigned 64-bit integer, got {sub}")
        key |= sub << (64 * i)
    return key


def bit_generator(seed: int, *subkeys: int) -> np.random.Philox:
    """Fresh Philox bit generator for (seed, subkeys...).

    Distinct tuples give independent streams.  The caller owns the generator;
    kernels advance it in place.
    """
    return np.random.Philox(key=philox_key(seed, *subkeys))


def derive_seed(seed: int, *subkeys: int) -> int:
    """Collapse (seed, subkeys...) into a single 64-bit seed.

    Used where an API accepts only a scalar seed (e.g. one witness-search
    trial inside a Monte Carlo estimate).
    """
    ss = np.random.SeedSequence((check_seed(seed),) + tuple(int(s) for s in subkeys))
    return int(ss.generate_state(1, np.uint64)[0])


def doubles(bitgen, count: int) -> np.ndarray:
    """Next `count` doubles of the stream, as produced by Generator.random.

    Generator.random fills its output with successive next_double calls, so
    this matches the compiled kernels' raw draws one for one.
    """
    return np.random.Generator(bitgen).random(count)
