"""Numerically stable primitives shared by the CTC, network and training code.

Log-space quantities use ``-inf`` as the representation of ``log 0``. All
arrays are float64.
"""
from briefy.a2w.errors import ValidationError
from scipy.special import expit

import numpy as np
import typing as t


NEG_INF = -np.inf

# Relative slack when comparing a global norm against the clipping bound, so a
# second clipping pass takes the unchanged path.
_CLIP_TOLERANCE = 1e-12


def logsumexp(values: t.Iterable[float]) -> float:
    """Return ``log(sum(exp(values)))`` without overflow.

    :param values: Non-empty collection of log-values.
    :return: The log of the summed exponentials, exactly ``-inf`` when every input is ``-inf``.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise ValidationError('logsumexp of an empty collection is undefined.')
    v_max = v.max()
    if v_max == NEG_INF:
        return NEG_INF
    return float(v_max + np.log(np.sum(np.exp(v - v_max))))


def logsumexp_rows(matrix: np.ndarray) -> np.ndarray:
    """Log-sum-exp along the last axis, ``-inf`` for all ``-inf`` rows."""
    m = np.asarray(matrix, dtype=np.float64)
    m_max = m.max(axis=-1, keepdims=True)
    safe = np.where(np.isfinite(m_max), m_max, 0.0)
    with np.errstate(divide='ignore'):
        out = np.log(np.sum(np.exp(m - safe), axis=-1)) + safe[..., 0]
    return out


def log_softmax(logits: np.ndarray) -> np.ndarray:
    """Return log-probabilities along the last axis.

    :param logits: Finite logits, a vector or a matrix of row vectors.
    :return: Array of the same shape whose rows exponentiate to distributions.
    """
    v = np.asarray(logits, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise ValidationError('log_softmax requires finite logits.')
    return v - logsumexp_rows(v)[..., np.newaxis]


def softmax(logits: np.ndarray) -> np.ndarray:
    """Return probabilities along the last axis."""
    return np.exp(log_softmax(logits))


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Logistic function."""
    return expit(np.asarray(x, dtype=np.float64))


def global_norm(grads: t.Sequence[np.ndarray]) -> float:
    """Return the L2 norm over every entry of every tensor."""
    return float(np.sqrt(sum(float(np.sum(np.square(g))) for g in grads)))


def clip_global_norm(
        grads: t.Sequence[np.ndarray],
        max_norm: float
) -> t.Tuple[t.List[np.ndarray], float]:
    """Scale a collection of tensors so that their global L2 norm is at most ``max_norm``.

    :param grads: Gradient tensors.
    :param max_norm: Clipping bound, strictly positive.
    :return: The (possibly scaled) tensors and the applied factor (1.0 when unchanged).
    """
    if not max_norm > 0:
        raise ValidationError(f'max_norm must be positive, got {max_norm}.')
    grads = list(grads)
    norm = global_norm(grads)
    if norm <= max_norm * (1.0 + _CLIP_TOLERANCE):
        return grads, 1.0
    factor = max_norm / norm
    return [g * factor for g in grads], factor
