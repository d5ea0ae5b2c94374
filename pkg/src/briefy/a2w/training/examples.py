"""Encode utterances as training targets for each model mode."""
from briefy.a2w.ctc.vocabulary import Vocabulary
from briefy.a2w.data.types import Lexicon
from briefy.a2w.data.types import SILENCE_LABEL
from briefy.a2w.data.types import Utterance
from briefy.a2w.errors import ValidationError
from briefy.a2w.vocabularies import ModelMode
from dataclasses import dataclass

import numpy as np
import typing as t


@dataclass(eq=False)
class Example:
    """Features plus integer targets.

    CTC modes carry the label ids of the transcript; frame classifiers one
    class id per frame.
    """

    id: str
    features: np.ndarray
    target: np.ndarray

    @property
    def label_count(self) -> int:
        """Return the normalizer of the training perplexity."""
        return int(self.target.size)


def vocabulary_for(mode: ModelMode, lexicon: Lexicon) -> Vocabulary:
    """Return the output labels of a mode.

    Words for word CTC, the phoneme inventory for phoneme CTC and words plus
    ``SIL`` for frame classifiers.
    """
    mode = ModelMode(mode)
    if mode is ModelMode.phoneme_ctc:
        return Vocabulary(lexicon.inventory)
    if mode is ModelMode.frame_classifier:
        return Vocabulary(list(lexicon.words) + [SILENCE_LABEL])
    return Vocabulary(lexicon.words)


def make_example(utt: Utterance, mode: ModelMode, vocabulary: Vocabulary) -> Example:
    """Encode one utterance.

    :param utt: Utterance; its transcript must already be in the mode's units.
    :param mode: Model mode.
    :param vocabulary: Output labels of the model.
    :return: The example.
    """
    if ModelMode(mode).is_ctc:
        target = vocabulary.encode(utt.transcript)
    else:
        if utt.alignment is None:
            raise ValidationError(f'Utterance {utt.id} has no frame alignment.')
        target = vocabulary.encode(utt.alignment)
    return Example(utt.id, np.asarray(utt.features, dtype=np.float64),
                   np.asarray(target, dtype=np.int64))


def make_examples(
        utterances: t.Iterable[Utterance],
        mode: ModelMode,
        vocabulary: Vocabulary
) -> t.List[Example]:
    """Encode utterances in order."""
    return [make_example(utt, mode, vocabulary) for utt in utterances]
