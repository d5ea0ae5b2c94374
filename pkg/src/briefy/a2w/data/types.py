"""Corpus data types."""
from briefy.a2w.errors import UnknownLabelError
from briefy.a2w.errors import ValidationError
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np
import typing as t


SILENCE_LABEL = 'SIL'


@dataclass(eq=False)
class Utterance:
    """One utterance: features, word transcript and optional frame alignment."""

    id: str
    """Utterance id, unique within a corpus."""

    features: np.ndarray
    """T x d acoustic frames."""

    transcript: t.Tuple[str, ...]
    """Word (or phoneme) labels."""

    alignment: t.Optional[t.Tuple[str, ...]] = None
    """One word label per frame, silence as SIL."""

    def __post_init__(self):
        self.transcript = tuple(self.transcript)
        if self.alignment is not None:
            self.alignment = tuple(self.alignment)
            if len(self.alignment) != self.frames:
                raise ValidationError(
                    f'Utterance {self.id}: {len(self.alignment)} frame labels '
                    f'for {self.frames} frames.'
                )
            if collapse_alignment(self.alignment) != list(self.transcript):
                raise ValidationError(
                    f'Utterance {self.id}: alignment does not collapse to the transcript.'
                )

    @property
    def frames(self) -> int:
        """Return T."""
        return int(self.features.shape[0])


def collapse_alignment(alignment: t.Sequence[str]) -> t.List[str]:
    """Merge runs of identical frame labels and drop silence."""
    words = []
    previous = None
    for label in alignment:
        if label != previous and label != SILENCE_LABEL:
            words.append(label)
        previous = label
    return words


class Lexicon:
    """Map from word to its pronunciations; the first one is canonical."""

    def __init__(self, inventory: t.Optional[t.Iterable[str]] = None):
        """Initialize an empty lexicon.

        :param inventory: Phoneme inventory; when given, pronunciations must draw from it.
        """
        self._entries: t.Dict[str, t.List[t.Tuple[str, ...]]] = OrderedDict()
        self._inventory = tuple(inventory) if inventory is not None else None

    def add(self, word: str, pronunciation: t.Sequence[str]):
        """Add a pronunciation for a word."""
        pronunciation = tuple(pronunciation)
        if not pronunciation:
            raise ValidationError(f'Empty pronunciation for {word!r}.')
        if self._inventory is not None:
            for phoneme in pronunciation:
                if phoneme not in self._inventory:
                    raise UnknownLabelError(phoneme)
        self._entries.setdefault(word, []).append(pronunciation)

    def pronunciation(self, word: str) -> t.Tuple[str, ...]:
        """Return the canonical pronunciation of a word."""
        try:
            return self._entries[word][0]
        except KeyError:
            raise UnknownLabelError(word) from None

    def pronunciations(self, word: str) -> t.List[t.Tuple[str, ...]]:
        """Return every pronunciation of a word."""
        try:
            return list(self._entries[word])
        except KeyError:
            raise UnknownLabelError(word) from None

    @property
    def words(self) -> t.List[str]:
        """Return the words in insertion order."""
        return list(self._entries)

    @property
    def inventory(self) -> t.Tuple[str, ...]:
        """Return the phoneme inventory."""
        if self._inventory is not None:
            return self._inventory
        seen = OrderedDict()
        for prons in self._entries.values():
            for pron in prons:
                for phoneme in pron:
                    seen[phoneme] = True
        return tuple(sorted(seen))

    def items(self) -> t.Iterator[t.Tuple[str, t.Tuple[str, ...]]]:
        """Yield (word, pronunciation) pairs, every pronunciation included."""
        for word, prons in self._entries.items():
            for pron in prons:
                yield word, pron

    def __contains__(self, word: str) -> bool:
        return word in self._entries

    def __len__(self) -> int:
        return len(self._entries)
