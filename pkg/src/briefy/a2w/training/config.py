"""Training recipe."""
from briefy.a2w.errors import ValidationError
from briefy.a2w.vocabularies import ModelMode
from dataclasses import dataclass


PHASES = (1, 2)


@dataclass
class TrainConfig:
    """Two-phase SGD recipe.

    Phase 1 runs at a constant step size; phase 2 restarts from the best
    phase-1 model with a step size decayed after every epoch.
    """

    phase1_epochs: int = 20
    phase1_lr: float = 0.05
    phase2_epochs: int = 20
    phase2_lr: float = 0.0375
    decay: float = 0.75
    clip_norm: float = 5.0
    seed: int = 0
    mode: ModelMode = ModelMode.word_ctc

    def __post_init__(self):
        self.mode = ModelMode(self.mode)
        self.validate()

    def validate(self):
        """Check the recipe."""
        if self.phase1_epochs < 1 or self.phase2_epochs < 0:
            raise ValidationError('Phase 1 needs at least one epoch; phase 2 cannot be negative.')
        if self.phase1_lr <= 0 or self.phase2_lr <= 0:
            raise ValidationError('Step sizes must be positive.')
        if not 0 < self.decay <= 1:
            raise ValidationError(f'decay must lie in (0, 1], got {self.decay}.')
        if self.clip_norm <= 0:
            raise ValidationError('clip_norm must be positive.')

    @property
    def total_epochs(self) -> int:
        """Return the epochs of both phases."""
        return self.phase1_epochs + self.phase2_epochs


def learning_rate(phase: int, epoch: int, cfg: TrainConfig) -> float:
    """Return the step size of an epoch.

    :param phase: 1 or 2.
    :param epoch: 1-based epoch within the phase.
    :param cfg: Training recipe.
    :return: ``phase1_lr`` in phase 1, ``phase2_lr * decay ** (epoch - 1)`` in phase 2.
    """
    if phase not in PHASES or epoch < 1:
        raise ValidationError(f'Invalid phase {phase} or epoch {epoch}.')
    if phase == 1:
        return cfg.phase1_lr
    return cfg.phase2_lr * cfg.decay ** (epoch - 1)
