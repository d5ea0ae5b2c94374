"""Test embedding analysis reports."""
from briefy.a2w.analysis import BlankReport
from briefy.a2w.analysis import FrequencyMarginTable
from briefy.a2w.analysis import OverlapHistograms
from briefy.a2w.analysis import PermutationResult
from briefy.a2w.reports import analysis

import numpy as np
import pytest


def _rows(report):
    buffer = report()
    buffer.seek(0)
    return [line.rstrip('\n').split('\t') for line in buffer.readlines()]


@pytest.fixture
def histograms():
    """Overlap histograms over two bins."""
    return OverlapHistograms(
        edges=np.array([0.0, 0.5, 1.0]),
        close_counts=np.array([1, 3]),
        far_counts=np.array([4, 0]),
        close_values=np.array([0.25, 1.0, 1.0, 0.75]),
        far_values=np.array([0.0, 0.0, 0.25, 0.25]),
    )


@pytest.fixture
def blank_report():
    """Blank report over four distances."""
    distances = np.array([1.0, 2.0, 3.0, 4.0])
    counts, edges = np.histogram(distances, bins=2)
    return BlankReport(distances, {'w0': 1.5, 'w1': 3.5}, 9.0, counts, edges)


def test_overlap_histogram_report(histograms):
    """Test bins and both count columns."""
    report = analysis.OverlapHistogramReport(histograms)
    assert report.filename == 'overlap_histogram.tsv'
    assert _rows(report) == [
        ['bin_low', 'bin_high', 'close', 'far'],
        ['0.000000', '0.500000', '1', '4'],
        ['0.500000', '1.000000', '3', '0'],
    ]


def test_overlap_summary_report(histograms):
    """Test means, counts and the permutation test."""
    report = analysis.OverlapSummaryReport(histograms, PermutationResult(0.625, 0.001))
    rows = dict(_rows(report)[1:])
    assert rows['close_mean'] == '0.750000'
    assert rows['far_mean'] == '0.125000'
    assert rows['close_count'] == '4'
    assert rows['difference'] == '0.625000'
    assert rows['p_value'] == '0.001000'


def test_blank_reports(blank_report, tmpdir):
    """Test the blank histogram, summary and word means."""
    histogram = analysis.BlankHistogramReport(blank_report)
    assert _rows(histogram)[1] == ['1.000000', '2.500000', '2']

    summary = dict(_rows(analysis.BlankSummaryReport(blank_report))[1:])
    assert summary['blank_mean'] == '9.000000'
    assert summary['word_median'] == '2.500000'
    assert summary['distances'] == '4'

    means = analysis.BlankWordMeansReport(blank_report)
    path = means.save(str(tmpdir))
    assert path.endswith('blank_word_means.tsv')
    assert tmpdir.join('blank_word_means.tsv').read() == (
        'word\tmean_distance\nw0\t1.500000\nw1\t3.500000\n'
    )


def test_frequency_reports():
    """Test the per-word table and the correlation summary."""
    table = FrequencyMarginTable(
        words=('w0', 'w1'),
        counts=np.array([3, 1]),
        margins=np.array([0.5, 0.25]),
        correlation=1.0,
        defined=True,
    )
    assert _rows(analysis.FrequencyMarginReport(table)) == [
        ['word', 'count', 'margin'],
        ['w0', '3', '0.500000'],
        ['w1', '1', '0.250000'],
    ]
    summary = dict(_rows(analysis.FrequencySummaryReport(table))[1:])
    assert summary == {'spearman': '1.000000', 'defined': '1', 'words': '2'}
