"""Embedding analysis reports."""
from briefy.a2w.analysis import BlankReport
from briefy.a2w.analysis import FrequencyMarginTable
from briefy.a2w.analysis import OverlapHistograms
from briefy.a2w.analysis import PermutationResult
from briefy.a2w.reports import export_float
from briefy.a2w.reports.base import BaseReport

import typing as t


class HistogramReport(BaseReport):
    """Bin edges and counts of one or more histograms sharing their edges."""

    def __init__(self, edges, columns: t.Dict[str, t.Sequence[int]]):
        """Initialize the report.

        :param edges: ``n + 1`` bin edges.
        :param columns: Count column name to ``n`` counts.
        """
        self.edges = edges
        self.columns = columns
        self.fieldnames = ('bin_low', 'bin_high') + tuple(columns)

    @property
    def records(self) -> t.List[dict]:
        rows = []
        for i, (low, high) in enumerate(zip(self.edges[:-1], self.edges[1:])):
            row = {'bin_low': export_float(low), 'bin_high': export_float(high)}
            for name, counts in self.columns.items():
                row[name] = int(counts[i])
            rows.append(row)
        return rows


class OverlapHistogramReport(HistogramReport):
    """Close and far neighbor overlap histograms."""

    filename = 'overlap_histogram.tsv'

    def __init__(self, histograms: OverlapHistograms):
        super().__init__(
            histograms.edges,
            {'close': histograms.close_counts, 'far': histograms.far_counts},
        )


class SummaryReport(BaseReport):
    """Name and value pairs."""

    fieldnames = ('name', 'value')

    def __init__(self, values: t.Sequence[t.Tuple[str, t.Any]]):
        self.values = values

    @property
    def records(self) -> t.List[dict]:
        return [
            {'name': name, 'value': export_float(value) if isinstance(value, float) else value}
            for name, value in self.values
        ]


class OverlapSummaryReport(SummaryReport):
    """Mean overlaps and the permutation test."""

    filename = 'overlap_summary.tsv'

    def __init__(self, histograms: OverlapHistograms, test: PermutationResult):
        super().__init__([
            ('close_mean', histograms.close_mean),
            ('far_mean', histograms.far_mean),
            ('close_count', len(histograms.close_values)),
            ('far_count', len(histograms.far_values)),
            ('difference', test.difference),
            ('p_value', test.p_value),
        ])


class BlankHistogramReport(HistogramReport):
    """Histogram of pooled word-to-neighbor distances."""

    filename = 'blank_histogram.tsv'

    def __init__(self, report: BlankReport):
        super().__init__(report.edges, {'count': report.counts})


class BlankSummaryReport(SummaryReport):
    """Blank mean distance against the word distance distribution."""

    filename = 'blank_summary.tsv'

    def __init__(self, report: BlankReport):
        super().__init__([
            ('blank_mean', report.blank_mean),
            ('word_median', report.median),
            ('word_p99', report.p99),
            ('word_mean', float(report.distances.mean())),
            ('distances', len(report.distances)),
        ])


class BlankWordMeansReport(BaseReport):
    """Mean distance of each word to its nearest words."""

    filename = 'blank_word_means.tsv'
    fieldnames = ('word', 'mean_distance')

    def __init__(self, report: BlankReport):
        self.report = report

    @property
    def records(self) -> t.List[dict]:
        return [
            {'word': word, 'mean_distance': export_float(mean)}
            for word, mean in self.report.word_means.items()
        ]


class FrequencyMarginReport(BaseReport):
    """Training count and margin per word."""

    filename = 'frequency_margin.tsv'
    fieldnames = ('word', 'count', 'margin')

    def __init__(self, table: FrequencyMarginTable):
        self.table = table

    @property
    def records(self) -> t.List[dict]:
        return self.table.records()

    @staticmethod
    def transform(record: dict) -> dict:
        return dict(record, margin=export_float(record['margin']))


class FrequencySummaryReport(SummaryReport):
    """Rank correlation of count and margin."""

    filename = 'frequency_summary.tsv'

    def __init__(self, table: FrequencyMarginTable):
        super().__init__([
            ('spearman', table.correlation),
            ('defined', int(table.defined)),
            ('words', len(table.words)),
        ])
