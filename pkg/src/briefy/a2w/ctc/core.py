"""Connectionist temporal classification: collapse, pre-image, likelihood, gradient, decoding.

A lattice is a ``T x (V + 1)`` array of per-frame log-probabilities whose last
column is the blank symbol. Label sequences are lists of ids in ``[0, V)``.
"""
from briefy.a2w.config import ORACLE_MAX_FRAMES
from briefy.a2w.ctc.vocabulary import Vocabulary
from briefy.a2w.errors import InfeasibleTargetError
from briefy.a2w.errors import OracleBoundError
from briefy.a2w.errors import ValidationError
from briefy.a2w.numerics import NEG_INF

import itertools
import numpy as np
import typing as t


LabelSequence = t.List[int]
AlignmentPath = t.Sequence[int]


def collapse(path: AlignmentPath, blank: int) -> LabelSequence:
    """Merge runs of identical symbols, then delete blanks.

    :param path: Frame-level symbols in ``[0, blank]``.
    :param blank: Blank id (V).
    :return: The collapsed label sequence.
    """
    result = []
    previous = None
    for symbol in path:
        symbol = int(symbol)
        if not 0 <= symbol <= blank:
            raise ValidationError(f'Path symbol {symbol} outside [0, {blank}].')
        if symbol != previous and symbol != blank:
            result.append(symbol)
        previous = symbol
    return result


def min_frames(y: t.Sequence[int]) -> int:
    """Return the fewest frames whose pre-image of ``y`` is non-empty.

    One frame per label plus a separating blank between adjacent repeats.
    """
    repeats = sum(1 for a, b in zip(y, y[1:]) if a == b)
    return len(y) + repeats


def _check_labels(y: t.Sequence[int], blank: int) -> np.ndarray:
    labels = np.asarray(list(y), dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= blank):
        if np.any(labels == blank):
            raise ValidationError('Label sequence contains the blank symbol.')
        raise ValidationError(f'Label ids must lie in [0, {blank}).')
    return labels


def enumerate_preimage(
        y: t.Sequence[int],
        frames: int,
        vocab: Vocabulary,
        max_frames: int = ORACLE_MAX_FRAMES
) -> t.Set[t.Tuple[int, ...]]:
    """Enumerate every path of length ``frames`` collapsing to ``y``.

    Exhaustive over ``(V + 1) ** frames`` paths; meant as a test oracle.

    :param y: Target label sequence.
    :param frames: Path length T.
    :param vocab: Vocabulary the ids refer to.
    :param max_frames: Refuse to enumerate above this length.
    :return: Set of paths, as tuples.
    """
    if frames > max_frames:
        raise OracleBoundError(f'Pre-image enumeration limited to {max_frames} frames.')
    blank = vocab.blank
    target = _check_labels(y, blank).tolist()
    if frames < min_frames(target):
        return set()
    return {
        path for path in itertools.product(range(vocab.size), repeat=frames)
        if collapse(path, blank) == target
    }


def _extend_with_blanks(labels: np.ndarray, blank: int) -> np.ndarray:
    """Return the blank-interleaved state sequence of length 2K + 1."""
    extended = np.full(2 * len(labels) + 1, blank, dtype=np.int64)
    extended[1::2] = labels
    return extended


def _skip_allowed(extended: np.ndarray, blank: int) -> np.ndarray:
    """Mark states reachable by skipping the blank two states before."""
    skip = np.zeros(len(extended), dtype=bool)
    if len(extended) > 2:
        skip[2:] = (extended[2:] != blank) & (extended[2:] != extended[:-2])
    return skip


def _alphas(log_emit: np.ndarray, skip: np.ndarray) -> np.ndarray:
    frames, states = log_emit.shape
    alpha = np.full((frames, states), NEG_INF)
    alpha[0, 0] = log_emit[0, 0]
    if states > 1:
        alpha[0, 1] = log_emit[0, 1]
    for t_ in range(1, frames):
        prev = alpha[t_ - 1]
        acc = prev.copy()
        acc[1:] = np.logaddexp(acc[1:], prev[:-1])
        acc[2:] = np.where(skip[2:], np.logaddexp(acc[2:], prev[:-2]), acc[2:])
        alpha[t_] = acc + log_emit[t_]
    return alpha


def _betas(log_emit: np.ndarray, skip: np.ndarray) -> np.ndarray:
    frames, states = log_emit.shape
    beta = np.full((frames, states), NEG_INF)
    beta[-1, -1] = log_emit[-1, -1]
    if states > 1:
        beta[-1, -2] = log_emit[-1, -2]
    for t_ in range(frames - 2, -1, -1):
        nxt = beta[t_ + 1]
        acc = nxt.copy()
        acc[:-1] = np.logaddexp(acc[:-1], nxt[1:])
        acc[:-2] = np.where(skip[2:], np.logaddexp(acc[:-2], nxt[2:]), acc[:-2])
        beta[t_] = acc + log_emit[t_]
    return beta


def _total(alpha: np.ndarray) -> float:
    last = alpha[-1]
    if len(last) == 1:
        return float(last[0])
    return float(np.logaddexp(last[-1], last[-2]))


def _prepare(lattice: np.ndarray, y: t.Sequence[int]) -> t.Tuple[np.ndarray, np.ndarray, int]:
    lattice = np.asarray(lattice, dtype=np.float64)
    if lattice.ndim != 2 or lattice.shape[1] < 1:
        raise ValidationError('Lattice must be a T x (V + 1) matrix.')
    blank = lattice.shape[1] - 1
    labels = _check_labels(y, blank)
    return lattice, labels, blank


def ctc_log_likelihood(lattice: np.ndarray, y: t.Sequence[int]) -> float:
    """Return ``log p(y | x)`` summed over every alignment collapsing to ``y``.

    :param lattice: ``T x (V + 1)`` log-probabilities, blank last.
    :param y: Blank-free label sequence.
    :return: The log-likelihood, ``-inf`` when no alignment of length T exists.
    """
    lattice, labels, blank = _prepare(lattice, y)
    frames = lattice.shape[0]
    if frames == 0:
        return 0.0 if labels.size == 0 else NEG_INF
    if frames < min_frames(labels.tolist()):
        return NEG_INF
    extended = _extend_with_blanks(labels, blank)
    alpha = _alphas(lattice[:, extended], _skip_allowed(extended, blank))
    return _total(alpha)


def ctc_loss_and_gradient(
        lattice: np.ndarray,
        y: t.Sequence[int]
) -> t.Tuple[float, np.ndarray]:
    """Return ``-log p(y | x)`` and its gradient with respect to the pre-softmax logits.

    The lattice is assumed to be the log-softmax of those logits, so the
    gradient is ``softmax - gamma`` with ``gamma`` the per-frame posterior
    occupancy of each symbol.

    :param lattice: ``T x (V + 1)`` log-probabilities, blank last.
    :param y: Blank-free label sequence.
    :return: Negative log-likelihood and a ``T x (V + 1)`` gradient.
    """
    lattice, labels, blank = _prepare(lattice, y)
    frames = lattice.shape[0]
    if frames == 0 or frames < min_frames(labels.tolist()):
        raise InfeasibleTargetError(
            f'Target of length {labels.size} has zero probability over {frames} frames.'
        )
    extended = _extend_with_blanks(labels, blank)
    skip = _skip_allowed(extended, blank)
    log_emit = lattice[:, extended]
    alpha = _alphas(log_emit, skip)
    log_likelihood = _total(alpha)
    if log_likelihood == NEG_INF:
        raise InfeasibleTargetError('Target has zero probability under the lattice.')
    beta = _betas(log_emit, skip)

    # alpha and beta both include the emission at t
    with np.errstate(invalid='ignore'):
        posterior = alpha + beta - log_emit - log_likelihood
    posterior[~np.isfinite(posterior)] = NEG_INF
    occupancy = np.full(lattice.shape, NEG_INF)
    for state, symbol in enumerate(extended):
        occupancy[:, symbol] = np.logaddexp(occupancy[:, symbol], posterior[:, state])

    gradient = np.exp(lattice) - np.exp(occupancy)
    return -log_likelihood, gradient


def ctc_gradient(lattice: np.ndarray, y: t.Sequence[int]) -> np.ndarray:
    """Return the gradient of ``-log p(y | x)`` with respect to the pre-softmax logits."""
    return ctc_loss_and_gradient(lattice, y)[1]


def best_path(lattice: np.ndarray) -> np.ndarray:
    """Per-frame argmax; ties go to the lowest index, so the blank loses them."""
    return np.argmax(np.asarray(lattice), axis=1)


def greedy_decode(lattice: np.ndarray) -> LabelSequence:
    """Best-path decoding: per-frame argmax followed by collapse.

    :param lattice: ``T x (V + 1)`` log-probabilities, blank last.
    :return: Decoded label sequence.
    """
    lattice = np.asarray(lattice)
    if lattice.ndim != 2 or lattice.shape[0] == 0:
        raise ValidationError('Cannot decode an empty lattice.')
    return collapse(best_path(lattice), lattice.shape[1] - 1)
