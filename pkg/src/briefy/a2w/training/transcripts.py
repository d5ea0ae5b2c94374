"""Word to phoneme transcript conversion."""
from briefy.a2w.data.types import Lexicon
from briefy.a2w.data.types import Utterance

import typing as t


def words_to_phonemes(words: t.Iterable[str], lexicon: Lexicon) -> t.List[str]:
    """Concatenate the canonical pronunciations of a word sequence."""
    phonemes = []
    for word in words:
        phonemes.extend(lexicon.pronunciation(word))
    return phonemes


def convert_transcripts_to_phonemes(
        utterances: t.Iterable[Utterance],
        lexicon: Lexicon
) -> t.List[Utterance]:
    """Replace every word transcript by its phoneme sequence.

    Word alignments do not carry over to phoneme targets and are dropped.

    :param utterances: Word-transcribed utterances.
    :param lexicon: Lexicon covering every transcript word.
    :return: New utterances sharing the feature arrays.
    :raises UnknownLabelError: A word is missing from the lexicon.
    """
    return [
        Utterance(utt.id, utt.features, tuple(words_to_phonemes(utt.transcript, lexicon)))
        for utt in utterances
    ]
