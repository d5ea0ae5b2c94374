"""Per-epoch training records."""
from briefy.a2w.errors import DataFormatError
from briefy.a2w.errors import ValidationError
from collections import OrderedDict
from dataclasses import astuple
from dataclasses import dataclass
from dataclasses import fields

import json
import typing as t


@dataclass(frozen=True)
class EpochRecord:
    """Statistics of one completed epoch."""

    epoch: int
    phase: int
    lr: float
    train_loss: float
    train_perplexity: float
    dev_metric: float
    skipped: int
    clipped: int = 0

    def to_dict(self) -> OrderedDict:
        """Return the record with fields in their fixed order."""
        return OrderedDict((f.name, getattr(self, f.name)) for f in fields(self))


class TrainLog:
    """Ordered epoch records."""

    fieldnames = tuple(f.name for f in fields(EpochRecord))

    def __init__(self, records: t.Iterable[EpochRecord] = ()):
        self.records: t.List[EpochRecord] = []
        for record in records:
            self.append(record)

    def append(self, record: EpochRecord):
        """Add the record of the next epoch."""
        expected = len(self.records) + 1
        if record.epoch != expected:
            raise ValidationError(f'Expected epoch {expected}, got {record.epoch}.')
        self.records.append(record)

    def best(self) -> EpochRecord:
        """Return the epoch with the lowest dev metric; ties go to the earliest."""
        if not self.records:
            raise ValidationError('Empty training log.')
        return min(self.records, key=lambda r: (r.dev_metric, r.epoch))

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> t.Iterator[EpochRecord]:
        return iter(self.records)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TrainLog) and [astuple(r) for r in self] == [
            astuple(r) for r in other
        ]

    def dumps(self) -> str:
        """Serialize as newline delimited JSON."""
        return ''.join(json.dumps(r.to_dict()) + '\n' for r in self.records)

    @classmethod
    def loads(cls, text: str, path: str = '') -> 'TrainLog':
        """Parse newline delimited JSON written by dumps."""
        records = []
        for number, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                records.append(EpochRecord(**json.loads(line)))
            except (TypeError, ValueError) as exc:
                raise DataFormatError(str(exc), path=path, line=number) from None
        return cls(records)

    def write(self, path: str):
        """Write the log to a file."""
        with open(path, 'w', encoding='utf-8') as fout:
            fout.write(self.dumps())

    @classmethod
    def read(cls, path: str) -> 'TrainLog':
        """Read a log file."""
        with open(path, encoding='utf-8') as fin:
            return cls.loads(fin.read(), path=path)
