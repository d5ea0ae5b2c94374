"""Parameter initialization.

Random draws come from numpy's PCG64 bit generator, a seedable 64-bit
generator with a fixed, documented algorithm, so a seed reproduces the same
parameters on every platform.
"""
from briefy.a2w.config import INIT_SCALE

import numpy as np
import typing as t


Shape = t.Tuple[int, ...]


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Return a PCG64 generator for a seed and an optional stream path.

    Different stream paths under the same seed give independent sequences,
    which lets each layer be re-initialized on its own.
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(s) for s in stream]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def init_random(
        shapes: t.Sequence[Shape],
        seed: int,
        *stream: int,
        scale: float = INIT_SCALE
) -> t.List[np.ndarray]:
    """Draw parameters uniformly from ``[-scale, scale]``.

    :param shapes: Shapes of the arrays, drawn in order from one stream.
    :param seed: 64-bit seed.
    :param stream: Optional stream path under the seed.
    :param scale: Half-width of the uniform range.
    :return: One float64 array per shape.
    """
    rng = make_rng(seed, *stream)
    return [rng.uniform(-scale, scale, size=shape) for shape in shapes]
