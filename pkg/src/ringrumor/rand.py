"""Deterministic RNG plumbing shared by the simulation modules.

Every stochastic entry point accepts either an integer seed, a ready
``numpy.random.Generator``, or ``None`` (fresh entropy). Derived streams are
keyed through ``numpy.random.SeedSequence`` so that independent units of work
(graph builds, run batches, sweep cells) get reproducible, collision-free
substreams regardless of execution order or worker count.
"""

from __future__ import annotations

import numpy as np

__all__ = ["as_generator", "fresh_seed", "substream"]


def fresh_seed() -> int:
    """Draw a seed from OS entropy, suitable for logging and replay."""
    return int(np.random.SeedSequence().entropy)


def as_generator(rng: int | np.random.Generator | None) -> np.random.Generator:
    """Coerce a seed / generator / None into a ``numpy.random.Generator``."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        return np.random.default_rng(fresh_seed())
    return np.random.default_rng(int(rng))


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """Generator for the substream identified by (master_seed, *key).

    The same key always yields the same stream, and distinct keys yield
    independent streams, which is what makes sweep output independent of
    scheduling.
    """
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, key)]))
