"""Reproducible random streams keyed by (seed, stream id)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """A named position in the random-number space.

    Every call to :meth:`generator` returns a *fresh* generator, so passing
    the same stream to a sampler twice reproduces the same draws.  Distinct
    stream ids (or child indices) give statistically independent streams.
    """

    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = field(default=())

    def __post_init__(self):
        for v in (self.seed, self.stream_id, *self.path):
            if not 0 <= v < 2**64:
                raise ValueError("seed, stream id and child indices must be 64-bit unsigned")

    def child(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.stream_id, self.path + (index,))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *self.path))
        return np.random.Generator(np.random.PCG64(ss))


RngLike = "RngStream | np.random.Generator | int"


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a numpy Generator or an integer seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator()
    raise TypeError(f"cannot make a generator from {type(rng).__name__}")


def as_stream(rng) -> RngStream:
    if isinstance(rng, RngStream):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng))
    raise TypeError("experiments need an RngStream or an integer seed")
