"""Seeded corpus partitions."""
from briefy.a2w.errors import ValidationError
from briefy.a2w.network.initializers import make_rng

import math
import typing as t


T = t.TypeVar('T')

# Guards floor() against products like 10 * (1 - 0.9) = 0.9999999999999998
_EPSILON = 1e-9


def train_dev_split(
        corpus: t.Sequence[T],
        fraction: float,
        seed: int
) -> t.Tuple[t.List[T], t.List[T]]:
    """Split a corpus into training and development parts.

    The development part holds ``floor(n * (1 - fraction))`` items chosen by a
    seeded permutation; both parts keep corpus order.

    :param corpus: Items to split.
    :param fraction: Training share, strictly between 0 and 1.
    :param seed: Permutation seed.
    :return: (train, dev).
    """
    if not 0 < fraction < 1:
        raise ValidationError(f'fraction must lie in (0, 1), got {fraction}.')
    size = len(corpus)
    dev_size = int(math.floor(size * (1 - fraction) + _EPSILON))
    if dev_size == 0 or dev_size == size:
        raise ValidationError(
            f'Splitting {size} items at {fraction} leaves an empty part.'
        )
    order = make_rng(seed).permutation(size)
    dev_index = set(int(i) for i in order[:dev_size])
    train = [item for i, item in enumerate(corpus) if i not in dev_index]
    dev = [item for i, item in enumerate(corpus) if i in dev_index]
    return train, dev


def subset(corpus: t.Sequence[T], fraction: float, seed: int) -> t.List[T]:
    """Keep ``floor(n * fraction)`` items chosen by a seeded permutation, in corpus order.

    :param corpus: Items to sample from.
    :param fraction: Share to keep, in (0, 1].
    :param seed: Permutation seed.
    :return: The kept items.
    """
    if not 0 < fraction <= 1:
        raise ValidationError(f'fraction must lie in (0, 1], got {fraction}.')
    size = len(corpus)
    keep = int(math.floor(size * fraction + _EPSILON))
    if keep == 0:
        raise ValidationError(f'Keeping {fraction} of {size} items leaves nothing.')
    chosen = set(int(i) for i in make_rng(seed).permutation(size)[:keep])
    return [item for i, item in enumerate(corpus) if i in chosen]
