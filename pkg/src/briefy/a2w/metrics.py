"""Edit distance based error rates: WER, PER and FER."""
from briefy.a2w.errors import ShapeMismatchError
from briefy.a2w.errors import ValidationError
from dataclasses import dataclass

import numpy as np
import typing as t


@dataclass(frozen=True)
class EditStats:
    """Edit operation counts of one or more aligned sequence pairs."""

    substitutions: int = 0
    deletions: int = 0
    insertions: int = 0
    reference_length: int = 0

    def __post_init__(self):
        if min(self.substitutions, self.deletions, self.insertions, self.reference_length) < 0:
            raise ValidationError('Edit counts must be non-negative.')
        if self.substitutions + self.deletions > self.reference_length:
            raise ValidationError('Substitutions plus deletions exceed the reference length.')

    @property
    def errors(self) -> int:
        """Return S + D + I."""
        return self.substitutions + self.deletions + self.insertions

    def __add__(self, other: 'EditStats') -> 'EditStats':
        return EditStats(
            self.substitutions + other.substitutions,
            self.deletions + other.deletions,
            self.insertions + other.insertions,
            self.reference_length + other.reference_length,
        )


def edit_distance(ref: t.Sequence, hyp: t.Sequence) -> EditStats:
    """Levenshtein alignment of a hypothesis against a reference.

    Among alignments with the fewest edits the backtrace prefers, at each
    step, a substitution (or match), then an insertion, then a deletion.

    :param ref: Reference labels.
    :param hyp: Hypothesis labels.
    :return: Edit counts.
    """
    ref = list(ref)
    hyp = list(hyp)
    n, m = len(ref), len(hyp)
    cost = np.zeros((n + 1, m + 1), dtype=np.int64)
    cost[:, 0] = np.arange(n + 1)
    cost[0, :] = np.arange(m + 1)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            change = cost[i - 1, j - 1] + (ref[i - 1] != hyp[j - 1])
            cost[i, j] = min(change, cost[i, j - 1] + 1, cost[i - 1, j] + 1)

    subs = dels = ins = 0
    i, j = n, m
    while i or j:
        if i and j and cost[i, j] == cost[i - 1, j - 1] + (ref[i - 1] != hyp[j - 1]):
            subs += ref[i - 1] != hyp[j - 1]
            i, j = i - 1, j - 1
        elif j and cost[i, j] == cost[i, j - 1] + 1:
            ins += 1
            j -= 1
        else:
            dels += 1
            i -= 1
    return EditStats(int(subs), dels, ins, n)


def error_rate(stats: EditStats) -> float:
    """Return ``100 * (S + D + I) / N``; may exceed 100."""
    if stats.reference_length <= 0:
        raise ValidationError('Error rate of an empty reference is undefined.')
    return 100.0 * stats.errors / stats.reference_length


def corpus_error_rate(pairs: t.Iterable[t.Tuple[t.Sequence, t.Sequence]]) -> float:
    """Pool edit counts over (reference, hypothesis) pairs, then divide.

    :param pairs: Reference and hypothesis label sequences.
    :return: Pooled error rate in percent.
    """
    total = EditStats()
    for ref, hyp in pairs:
        total = total + edit_distance(ref, hyp)
    return error_rate(total)


def frame_error_rate(ref: t.Sequence, hyp: t.Sequence) -> float:
    """Return the percentage of frames whose labels differ."""
    ref = np.asarray(list(ref))
    hyp = np.asarray(list(hyp))
    if ref.shape != hyp.shape:
        raise ShapeMismatchError(f'{len(ref)} reference frames vs {len(hyp)} hypothesis frames.')
    if ref.size == 0:
        raise ValidationError('Frame error rate of an empty sequence is undefined.')
    return 100.0 * float(np.sum(ref != hyp)) / ref.size
