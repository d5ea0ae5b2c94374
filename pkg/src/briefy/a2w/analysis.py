"""Analysis of the softmax weight rows of a trained CTC model.

Every word (and the blank) owns one row of the output layer's weight matrix.
Distances between rows are Euclidean; the softmax bias is not part of the
embedding.
"""
from briefy.a2w.config import WORKERS
from briefy.a2w.ctc.vocabulary import BLANK_LABEL
from briefy.a2w.ctc.vocabulary import Vocabulary
from briefy.a2w.data.types import Lexicon
from briefy.a2w.errors import ShapeMismatchError
from briefy.a2w.errors import ValidationError
from briefy.a2w.log import analysis_logger as logger
from briefy.a2w.network.model import Network
from collections import Counter
from concurrent.futures import ThreadPoolExecutor as Executor
from dataclasses import dataclass
from scipy import stats
from scipy.spatial.distance import cdist

import numpy as np
import typing as t


DEFAULT_BINS = np.linspace(0.0, 1.0, 21)
CLOSE_RANKS = (1, 3)
FAR_RANKS = (48, 50)
BLANK_NEIGHBORS = 25


class EmbeddingMatrix:
    """Softmax weight rows, one per word plus the blank in the last row."""

    def __init__(self, weights: np.ndarray, vocabulary: Vocabulary):
        """Initialize the matrix.

        :param weights: ``(V + 1) x H`` rows.
        :param vocabulary: Labels of the first V rows.
        """
        weights = np.asarray(weights, dtype=np.float64)
        if weights.ndim != 2 or weights.shape[0] != vocabulary.size:
            raise ShapeMismatchError(
                f'Expected {vocabulary.size} rows for {len(vocabulary)} words, '
                f'got {weights.shape}.'
            )
        self.weights = weights
        self.vocabulary = vocabulary

    @classmethod
    def from_network(cls, net: Network) -> 'EmbeddingMatrix':
        """Take the output layer weights of a CTC model."""
        if not net.mode.is_ctc:
            raise ValidationError('Embedding analysis needs a CTC model with a blank row.')
        return cls(net.output_weights.copy(), net.vocabulary)

    @property
    def words(self) -> t.Tuple[str, ...]:
        """Return the word labels."""
        return self.vocabulary.labels

    @property
    def blank(self) -> int:
        """Return the row of the blank."""
        return self.vocabulary.blank

    def index(self, word: str) -> int:
        """Return the row of a word; the blank label is accepted."""
        return self.vocabulary.index(word)

    def label(self, row: int) -> str:
        """Return the label of a row."""
        return self.vocabulary.label(row)


@dataclass(frozen=True)
class NeighborList:
    """Nearest rows of a query row, nearest first."""

    word: str
    ids: t.Tuple[int, ...]
    labels: t.Tuple[str, ...]
    distances: t.Tuple[float, ...]


def _rank(
        emb: EmbeddingMatrix,
        row: int,
        include_blank: bool
) -> t.Tuple[np.ndarray, np.ndarray]:
    """Return every other row sorted by distance, ties by id."""
    count = emb.vocabulary.size if include_blank else len(emb.vocabulary)
    candidates = np.array([i for i in range(count) if i != row], dtype=np.int64)
    distances = cdist(emb.weights[row:row + 1], emb.weights[candidates])[0]
    order = np.lexsort((candidates, distances))
    return candidates[order], distances[order]


def neighbors(
        emb: EmbeddingMatrix,
        word: str,
        k: int,
        include_blank: bool = True
) -> NeighborList:
    """Return the ``k`` nearest rows of a word, itself excluded.

    :param emb: Embedding matrix.
    :param word: Query word, or the blank label.
    :param k: Number of neighbors.
    :param include_blank: Whether the blank row may be a neighbor.
    :return: Neighbors by ascending distance; ties go to the lower id.
    """
    row = emb.index(word)
    available = (emb.vocabulary.size if include_blank else len(emb.vocabulary)) - 1
    if row == emb.blank and not include_blank:
        available += 1
    if not 1 <= k <= available:
        raise ValidationError(f'k must lie in [1, {available}], got {k}.')
    ids, distances = _rank(emb, row, include_blank)
    ids, distances = ids[:k], distances[:k]
    return NeighborList(
        word=word,
        ids=tuple(int(i) for i in ids),
        labels=tuple(emb.label(int(i)) for i in ids),
        distances=tuple(float(d) for d in distances),
    )


def margin(emb: EmbeddingMatrix, word: str) -> float:
    """Return the distance from a word to its nearest other word, the blank excluded."""
    return neighbors(emb, word, 1, include_blank=False).distances[0]


def pronunciation_overlap(w1: str, w2: str, lexicon: Lexicon) -> float:
    """Return the shared phoneme tokens over the length of the shorter pronunciation.

    Tokens are counted as multisets over the canonical pronunciations.
    """
    p1 = lexicon.pronunciation(w1)
    p2 = lexicon.pronunciation(w2)
    shared = sum((Counter(p1) & Counter(p2)).values())
    return shared / min(len(p1), len(p2))


def _map(fn: t.Callable, items: t.Sequence, workers: int) -> list:
    with Executor(max_workers=workers) as executor:
        return list(executor.map(fn, items))


@dataclass
class OverlapHistograms:
    """Pronunciation overlap with close and with far neighbors."""

    edges: np.ndarray
    close_counts: np.ndarray
    far_counts: np.ndarray
    close_values: np.ndarray
    far_values: np.ndarray

    @property
    def close_mean(self) -> float:
        return float(np.mean(self.close_values))

    @property
    def far_mean(self) -> float:
        return float(np.mean(self.far_values))


def overlap_histograms(
        emb: EmbeddingMatrix,
        lexicon: Lexicon,
        close_ranks: t.Tuple[int, int] = CLOSE_RANKS,
        far_ranks: t.Tuple[int, int] = FAR_RANKS,
        bins: t.Optional[np.ndarray] = None,
        workers: int = WORKERS
) -> OverlapHistograms:
    """Histogram the overlap of every word with its close and far neighbors.

    Neighbors are ranked among word rows only. Ranks are 1-based and
    inclusive.

    :param emb: Embedding matrix.
    :param lexicon: Lexicon with a pronunciation for every word.
    :param close_ranks: First and last close neighbor rank.
    :param far_ranks: First and last far neighbor rank.
    :param bins: Bin edges, 20 uniform bins on [0, 1] by default.
    :param workers: Thread pool size.
    :return: Both histograms and the raw overlap values.
    """
    edges = DEFAULT_BINS if bins is None else np.asarray(bins, dtype=np.float64)
    deepest = max(close_ranks[1], far_ranks[1])
    if min(close_ranks[0], far_ranks[0]) < 1 or close_ranks[0] > close_ranks[1] \
            or far_ranks[0] > far_ranks[1]:
        raise ValidationError('Neighbor ranks must be 1-based, first <= last.')
    if len(emb.words) < deepest + 1:
        raise ValidationError(
            f'Rank {deepest} neighbors need at least {deepest + 1} words, '
            f'got {len(emb.words)}.'
        )

    def per_word(word: str) -> t.Tuple[t.List[float], t.List[float]]:
        labels = neighbors(emb, word, deepest, include_blank=False).labels
        close = [pronunciation_overlap(word, other, lexicon)
                 for other in labels[close_ranks[0] - 1:close_ranks[1]]]
        far = [pronunciation_overlap(word, other, lexicon)
               for other in labels[far_ranks[0] - 1:far_ranks[1]]]
        return close, far

    results = _map(per_word, emb.words, workers)
    close_values = np.array([v for close, _ in results for v in close])
    far_values = np.array([v for _, far in results for v in far])
    close_counts, _ = np.histogram(close_values, bins=edges)
    far_counts, _ = np.histogram(far_values, bins=edges)
    return OverlapHistograms(edges, close_counts, far_counts, close_values, far_values)


@dataclass(frozen=True)
class PermutationResult:
    """One-sided test of close overlap exceeding far overlap."""

    difference: float
    p_value: float


def overlap_permutation_test(
        close_values: np.ndarray,
        far_values: np.ndarray,
        permutations: int = 9999,
        seed: int = 0
) -> PermutationResult:
    """Test whether close neighbors share more phonemes than far neighbors.

    :param close_values: Overlaps with close neighbors.
    :param far_values: Overlaps with far neighbors.
    :param permutations: Number of random relabelings.
    :param seed: Seed of the relabelings.
    :return: Difference of means and its one-sided p-value.
    """
    if not len(close_values) or not len(far_values):
        raise ValidationError('Both overlap samples must be nonempty.')

    def statistic(x, y, axis):
        return np.mean(x, axis=axis) - np.mean(y, axis=axis)

    rng = np.random.Generator(np.random.PCG64(seed))
    result = stats.permutation_test(
        (np.asarray(close_values, dtype=np.float64), np.asarray(far_values, dtype=np.float64)),
        statistic,
        permutation_type='independent',
        vectorized=True,
        n_resamples=permutations,
        alternative='greater',
        random_state=rng,
    )
    return PermutationResult(float(result.statistic), float(result.pvalue))


@dataclass
class BlankReport:
    """Word-to-neighbor distances compared with the blank's."""

    distances: np.ndarray
    """Pooled distances from every word to its nearest words."""

    word_means: t.Dict[str, float]
    blank_mean: float
    counts: np.ndarray
    edges: np.ndarray

    @property
    def median(self) -> float:
        return float(np.median(self.distances))

    @property
    def p99(self) -> float:
        return float(np.percentile(self.distances, 99))


def blank_distance_report(
        emb: EmbeddingMatrix,
        k: int = BLANK_NEIGHBORS,
        bins: int = 20,
        workers: int = WORKERS
) -> BlankReport:
    """Compare the blank's distance to its nearest words with word-to-word distances.

    :param emb: Embedding matrix.
    :param k: Neighbors per query.
    :param bins: Histogram bin count.
    :param workers: Thread pool size.
    :return: Pooled word distances, per-word means, the blank mean and a histogram.
    """
    if len(emb.words) < k + 1:
        raise ValidationError(f'{k} neighbors need at least {k + 1} words, got {len(emb.words)}.')
    results = _map(
        lambda word: neighbors(emb, word, k, include_blank=False).distances,
        emb.words,
        workers,
    )
    distances = np.array([d for dists in results for d in dists])
    word_means = {word: float(np.mean(dists)) for word, dists in zip(emb.words, results)}
    blank_mean = float(np.mean(neighbors(emb, BLANK_LABEL, k, include_blank=False).distances))
    counts, edges = np.histogram(distances, bins=bins)
    return BlankReport(distances, word_means, blank_mean, counts, edges)


@dataclass
class FrequencyMarginTable:
    """Training count and margin of every word."""

    words: t.Tuple[str, ...]
    counts: np.ndarray
    margins: np.ndarray
    correlation: float
    defined: bool
    """False when either column is constant; correlation is then 0."""

    def records(self) -> t.List[dict]:
        """Return one dict per word."""
        return [
            {'word': w, 'count': int(c), 'margin': float(m)}
            for w, c, m in zip(self.words, self.counts, self.margins)
        ]


def frequency_margin_table(
        emb: EmbeddingMatrix,
        transcripts: t.Iterable[t.Sequence[str]],
        workers: int = WORKERS
) -> FrequencyMarginTable:
    """Pair the training count of every word with its margin.

    :param emb: Embedding matrix.
    :param transcripts: Training word transcripts.
    :param workers: Thread pool size.
    :return: The table plus the Spearman rank correlation of count and margin.
    """
    counter = Counter(word for words in transcripts for word in words)
    unknown = [w for w in counter if w not in emb.vocabulary]
    if unknown:
        logger.warning(f'{len(unknown)} transcript words are not in the model vocabulary.')
    counts = np.array([counter.get(word, 0) for word in emb.words], dtype=np.int64)
    margins = np.array(_map(lambda word: margin(emb, word), emb.words, workers))
    defined = len(emb.words) > 1 and np.ptp(counts) > 0 and np.ptp(margins) > 0
    correlation = 0.0
    if defined:
        correlation = float(stats.spearmanr(counts, margins)[0])
    else:
        logger.warning('Rank correlation is undefined for constant counts or margins.')
    return FrequencyMarginTable(emb.words, counts, margins, correlation, bool(defined))
