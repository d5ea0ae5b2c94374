"""Output vocabularies with a reserved blank symbol."""
from briefy.a2w.errors import UnknownLabelError
from briefy.a2w.errors import ValidationError

import typing as t


BLANK_LABEL = '<blk>'


class Vocabulary:
    """Ordered, unique label strings plus the blank symbol at the last index.

    Label ids are ``0 .. V-1``; the blank id is ``V`` so the output layer has
    ``V + 1`` rows.
    """

    def __init__(self, labels: t.Iterable[str]):
        """Initialize the vocabulary.

        :param labels: Label strings, unique, not containing the blank label.
        """
        labels = tuple(labels)
        if BLANK_LABEL in labels:
            raise ValidationError(f'{BLANK_LABEL} is reserved for the blank symbol.')
        index = {}
        for i, label in enumerate(labels):
            if not label or any(c.isspace() for c in label):
                raise ValidationError(f'Invalid label {label!r}.')
            if label in index:
                raise ValidationError(f'Duplicate label {label!r}.')
            index[label] = i
        self._labels = labels
        self._index = index

    @property
    def labels(self) -> t.Tuple[str, ...]:
        """Return the labels, without the blank."""
        return self._labels

    @property
    def blank(self) -> int:
        """Return the blank id."""
        return len(self._labels)

    @property
    def size(self) -> int:
        """Return the output dimension, V + 1."""
        return len(self._labels) + 1

    def __len__(self) -> int:
        """Number of labels, without the blank."""
        return len(self._labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and other.labels == self.labels

    def __hash__(self) -> int:
        return hash(self._labels)

    def __repr__(self) -> str:
        return f'<Vocabulary V={len(self)}>'

    def index(self, label: str) -> int:
        """Return the id of a label, the blank label included."""
        if label == BLANK_LABEL:
            return self.blank
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabelError(label) from None

    def label(self, label_id: int) -> str:
        """Return the label string of an id, the blank id included."""
        if label_id == self.blank:
            return BLANK_LABEL
        if not 0 <= label_id < self.blank:
            raise ValidationError(f'Label id {label_id} out of range.')
        return self._labels[label_id]

    def encode(self, labels: t.Iterable[str]) -> t.List[int]:
        """Map a label sequence to ids; the blank label is rejected."""
        ids = []
        for label in labels:
            if label == BLANK_LABEL:
                raise ValidationError('Label sequences cannot contain the blank symbol.')
            ids.append(self.index(label))
        return ids

    def decode(self, ids: t.Iterable[int]) -> t.List[str]:
        """Map ids back to label strings."""
        return [self.label(int(i)) for i in ids]
