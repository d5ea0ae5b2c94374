"""Scoring reports."""
from briefy.a2w.errors import ShapeMismatchError
from briefy.a2w.metrics import edit_distance
from briefy.a2w.metrics import EditStats
from briefy.a2w.metrics import error_rate
from briefy.a2w.reports import export_float
from briefy.a2w.reports.base import BaseReport
from briefy.a2w.vocabularies import ScoreKind

import numpy as np
import typing as t


TOTAL_ID = 'TOTAL'


class ScoreReport(BaseReport):
    """Per-utterance and pooled error rates."""

    filename = 'score.tsv'
    fieldnames = (
        'id',
        'kind',
        'reference_length',
        'substitutions',
        'deletions',
        'insertions',
        'errors',
        'rate',
    )

    def __init__(
            self,
            kind: ScoreKind,
            pairs: t.Sequence[t.Tuple[str, t.Sequence, t.Sequence]]
    ):
        """Initialize the report.

        :param kind: Error rate to report.
        :param pairs: (utterance id, reference, hypothesis) triples.
        """
        self.kind = ScoreKind(kind)
        self.pairs = pairs
        self._records = None

    def _score(self, ref: t.Sequence, hyp: t.Sequence) -> EditStats:
        if self.kind is ScoreKind.fer:
            if len(ref) != len(hyp):
                raise ShapeMismatchError(
                    f'{len(ref)} reference frames vs {len(hyp)} hypothesis frames.'
                )
            mismatches = int(np.sum(np.asarray(list(ref)) != np.asarray(list(hyp))))
            return EditStats(substitutions=mismatches, reference_length=len(ref))
        return edit_distance(ref, hyp)

    @property
    def records(self) -> t.List[t.Tuple[str, EditStats]]:
        """Return (id, stats) per utterance followed by the pooled total."""
        if self._records is None:
            records = []
            total = EditStats()
            for utt_id, ref, hyp in self.pairs:
                stats = self._score(ref, hyp)
                total = total + stats
                records.append((utt_id, stats))
            records.append((TOTAL_ID, total))
            self._records = records
        return self._records

    @property
    def total(self) -> EditStats:
        """Return the pooled stats."""
        return self.records[-1][1]

    def transform(self, record: t.Tuple[str, EditStats]) -> dict:
        """Turn (id, stats) into a row."""
        utt_id, stats = record
        rate = export_float(error_rate(stats), 2) if stats.reference_length else ''
        return {
            'id': utt_id,
            'kind': self.kind.value,
            'reference_length': stats.reference_length,
            'substitutions': stats.substitutions,
            'deletions': stats.deletions,
            'insertions': stats.insertions,
            'errors': stats.errors,
            'rate': rate,
        }
