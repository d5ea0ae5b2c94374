"""SGD training with per-utterance updates and dev-based model selection."""
from briefy.a2w.config import WORKERS
from briefy.a2w.ctc.core import ctc_loss_and_gradient
from briefy.a2w.ctc.core import greedy_decode
from briefy.a2w.ctc.core import min_frames
from briefy.a2w.errors import InfeasibleTargetError
from briefy.a2w.errors import TrainingError
from briefy.a2w.errors import ValidationError
from briefy.a2w.log import training_logger as logger
from briefy.a2w.metrics import corpus_error_rate
from briefy.a2w.network.initializers import make_rng
from briefy.a2w.network.model import Network
from briefy.a2w.network.model import network_backward
from briefy.a2w.network.model import network_forward
from briefy.a2w.network.model import network_output_length
from briefy.a2w.numerics import clip_global_norm
from briefy.a2w.training.config import learning_rate
from briefy.a2w.training.config import TrainConfig
from briefy.a2w.training.examples import Example
from briefy.a2w.training.log import EpochRecord
from briefy.a2w.training.log import TrainLog
from concurrent.futures import ThreadPoolExecutor as Executor
from dataclasses import dataclass

import numpy as np
import typing as t


def is_feasible(net: Network, example: Example) -> bool:
    """Return True if the example can contribute a finite loss."""
    frames = example.features.shape[0]
    if frames == 0:
        return False
    try:
        length = network_output_length(net, frames)
    except ValidationError:
        return False
    if net.mode.is_ctc:
        return length >= min_frames(example.target.tolist())
    return True


def loss_and_gradients(
        net: Network,
        example: Example
) -> t.Tuple[float, t.List[np.ndarray]]:
    """Return the loss of one example and the parameter gradients.

    CTC modes use ``-log p(y | x)``; frame classifiers the summed per-frame
    cross entropy.
    """
    log_probs, tape = network_forward(net, example.features)
    if net.mode.is_ctc:
        try:
            loss, output_grad = ctc_loss_and_gradient(log_probs, example.target)
        except InfeasibleTargetError as exc:
            raise InfeasibleTargetError(str(exc), utterance_id=example.id) from None
    else:
        frames = np.arange(len(example.target))
        loss = -float(np.sum(log_probs[frames, example.target]))
        output_grad = np.exp(log_probs)
        output_grad[frames, example.target] -= 1.0
    grads, _ = network_backward(net, tape, output_grad)
    return float(loss), grads


def example_loss(net: Network, example: Example) -> float:
    """Return the loss of one example without backpropagating."""
    log_probs, _ = network_forward(net, example.features)
    if net.mode.is_ctc:
        return float(ctc_loss_and_gradient(log_probs, example.target)[0])
    return -float(np.sum(log_probs[np.arange(len(example.target)), example.target]))


def training_perplexity(net: Network, examples: t.Sequence[Example]) -> float:
    """Summed loss divided by the summed label count.

    Label counts are transcript lengths for CTC modes and frame counts for
    frame classifiers. Infeasible examples are left out.

    :param net: Model.
    :param examples: Nonempty data set.
    :return: The normalized cross entropy, not exponentiated.
    """
    if not examples:
        raise ValidationError('Perplexity of an empty data set.')
    total = 0.0
    labels = 0
    for example in examples:
        if not is_feasible(net, example):
            continue
        total += example_loss(net, example)
        labels += example.label_count
    if labels == 0:
        raise ValidationError('Perplexity needs at least one label.')
    return total / labels


def decode(net: Network, example: Example) -> t.List[int]:
    """Return the hypothesis of one example.

    Label ids for CTC modes (empty when the input is shorter than the
    reduction), per-frame class ids for frame classifiers.
    """
    frames = example.features.shape[0]
    if net.mode.is_ctc:
        try:
            network_output_length(net, frames)
        except ValidationError:
            return []
        log_probs, _ = network_forward(net, example.features)
        return greedy_decode(log_probs)
    log_probs, _ = network_forward(net, example.features)
    return np.argmax(log_probs, axis=1).tolist()


def decode_all(
        net: Network,
        examples: t.Sequence[Example],
        workers: int = WORKERS
) -> t.List[t.List[int]]:
    """Decode examples in a thread pool, keeping input order."""
    with Executor(max_workers=workers) as executor:
        return list(executor.map(lambda ex: decode(net, ex), examples))


def evaluate(net: Network, examples: t.Sequence[Example], workers: int = WORKERS) -> float:
    """Return the pooled dev metric: WER or PER for CTC modes, FER for frame classifiers."""
    if not examples:
        raise ValidationError('Cannot evaluate on an empty data set.')
    hyps = decode_all(net, examples, workers)
    if net.mode.is_ctc:
        return corpus_error_rate((ex.target.tolist(), hyp) for ex, hyp in zip(examples, hyps))
    mismatches = sum(int(np.sum(ex.target != np.asarray(hyp))) for ex, hyp in zip(examples, hyps))
    frames = sum(len(ex.target) for ex in examples)
    return 100.0 * mismatches / frames


@dataclass
class EpochStats:
    """Running totals of one epoch."""

    loss: float = 0.0
    labels: int = 0
    used: int = 0
    skipped: int = 0
    clipped: int = 0


def run_epoch(
        net: Network,
        examples: t.Sequence[Example],
        order: t.Sequence[int],
        lr: float,
        clip_norm: float,
        skip: t.AbstractSet[int] = frozenset()
) -> EpochStats:
    """One pass of per-utterance SGD, updating ``net`` in place.

    :param net: Model to update.
    :param examples: Training examples.
    :param order: Visiting order, indexes into examples.
    :param lr: Step size.
    :param clip_norm: Global gradient norm bound.
    :param skip: Indexes known to be infeasible.
    :return: Epoch statistics.
    """
    stats = EpochStats()
    for index in order:
        example = examples[index]
        if index in skip:
            stats.skipped += 1
            continue
        try:
            loss, grads = loss_and_gradients(net, example)
        except InfeasibleTargetError:
            logger.warning(f'Skipping {example.id}: target has zero probability.')
            stats.skipped += 1
            continue
        grads, factor = clip_global_norm(grads, clip_norm)
        if factor < 1.0:
            stats.clipped += 1
        net.apply_update(grads, lr)
        stats.loss += loss
        stats.labels += example.label_count
        stats.used += 1
    return stats


def train(
        net: Network,
        train_examples: t.Sequence[Example],
        dev_examples: t.Sequence[Example],
        cfg: TrainConfig
) -> t.Tuple[Network, TrainLog]:
    """Two-phase SGD with dev-based model selection.

    Phase 1 runs ``cfg.phase1_epochs`` epochs at ``cfg.phase1_lr``. Phase 2
    restarts from the best phase-1 model and runs ``cfg.phase2_epochs`` epochs
    with the decayed step size. The model with the lowest dev metric over both
    phases is returned; ties go to the earliest epoch.

    :param net: Initial model, left unchanged.
    :param train_examples: Training examples, one update each.
    :param dev_examples: Development examples for model selection.
    :param cfg: Training recipe.
    :return: Best model and the training log.
    """
    if not train_examples or not dev_examples:
        raise ValidationError('Training and development sets must be nonempty.')
    if net.mode is not cfg.mode:
        raise ValidationError(f'Model mode {net.mode.value} does not match {cfg.mode.value}.')

    skip = set()
    for index, example in enumerate(train_examples):
        if not is_feasible(net, example):
            logger.warning(f'Skipping {example.id}: too few frames for its target.')
            skip.add(index)
    if len(skip) == len(train_examples):
        raise TrainingError('Every training utterance is infeasible.')

    log = TrainLog()
    model = net.copy()
    best_model, best_metric = None, float('inf')
    phase_start = model
    epoch = 0
    for phase, epochs in ((1, cfg.phase1_epochs), (2, cfg.phase2_epochs)):
        if phase == 2:
            # phase 2 restarts from the best phase 1 checkpoint
            model = phase_start.copy()
        for phase_epoch in range(1, epochs + 1):
            epoch += 1
            lr = learning_rate(phase, phase_epoch, cfg)
            order = make_rng(cfg.seed, phase, phase_epoch).permutation(len(train_examples))
            stats = run_epoch(model, train_examples, order, lr, cfg.clip_norm, skip)
            if stats.used == 0:
                raise TrainingError('Every training utterance is infeasible.')
            dev_metric = evaluate(model, dev_examples)
            record = EpochRecord(
                epoch=epoch,
                phase=phase,
                lr=lr,
                train_loss=stats.loss / stats.used,
                train_perplexity=stats.loss / max(stats.labels, 1),
                dev_metric=dev_metric,
                skipped=stats.skipped,
                clipped=stats.clipped,
            )
            log.append(record)
            logger.info(
                f'phase {phase} epoch {phase_epoch} lr {lr:.6g} loss {record.train_loss:.4f} '
                f'perplexity {record.train_perplexity:.4f} dev {cfg.mode.metric.value} '
                f'{dev_metric:.2f} skipped {stats.skipped} clipped {stats.clipped}'
            )
            if dev_metric < best_metric:
                best_metric = dev_metric
                best_model = model.copy()
        if phase == 1:
            phase_start = best_model
    return best_model, log
