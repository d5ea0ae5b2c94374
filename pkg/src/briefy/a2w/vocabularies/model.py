"""Model Vocabularies."""
from enum import Enum


__all__ = (
    'DownsamplePlacement',
    'ModelMode',
    'ScoreKind',
)


class LabeledEnum(Enum):
    """Enum whose members carry a (value, label) pair."""

    def __new__(cls, value: str, label: str):
        """Create a member storing its human readable label."""
        obj = object.__new__(cls)
        obj._value_ = value
        obj.label = label
        return obj


class ModelMode(LabeledEnum):
    """Kind of model, which fixes targets, output layer and dev metric."""

    word_ctc = ('word-ctc', 'Word CTC')
    phoneme_ctc = ('phoneme-ctc', 'Phoneme CTC')
    frame_classifier = ('frame-classifier', 'Word frame classifier')

    @property
    def is_ctc(self) -> bool:
        """Return True for the CTC modes."""
        return self is not ModelMode.frame_classifier

    @property
    def metric(self) -> 'ScoreKind':
        """Return the dev metric used for model selection."""
        return {
            ModelMode.word_ctc: ScoreKind.wer,
            ModelMode.phoneme_ctc: ScoreKind.per,
            ModelMode.frame_classifier: ScoreKind.fer,
        }[self]


class ScoreKind(LabeledEnum):
    """Error rates reported by the scoring tools."""

    wer = ('wer', 'Word error rate')
    per = ('per', 'Phoneme error rate')
    fer = ('fer', 'Frame error rate')


class DownsamplePlacement(LabeledEnum):
    """Where the halvings of a down-sampling factor are placed."""

    after_each_layer = ('after-each-layer', 'After each LSTM layer')
    input = ('input', 'Stacked before the first layer')
