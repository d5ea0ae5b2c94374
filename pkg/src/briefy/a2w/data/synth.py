"""Seedable synthetic corpus generator.

Each phoneme owns a fixed random prototype vector. A word is realized by
repeating the prototypes of its phonemes, each for a duration drawn from a
normal distribution truncated below at one frame, and adding Gaussian noise.
Silence segments use their own prototype and are labelled ``SIL`` in the
frame alignment.

All randomness comes from PCG64 streams of the configured seed: stream 0
draws the lexicon and prototypes, stream ``(1, n)`` the utterances of split
``n`` (train, dev, test).
"""
from briefy.a2w.config import FRAME_SHIFT_MS
from briefy.a2w.data.types import Lexicon
from briefy.a2w.data.types import SILENCE_LABEL
from briefy.a2w.data.types import Utterance
from briefy.a2w.errors import ValidationError
from briefy.a2w.log import data_logger as logger
from briefy.a2w.network.initializers import make_rng
from dataclasses import dataclass
from dataclasses import field

import numpy as np
import typing as t


# Mean and standard deviation of phoneme durations in milliseconds
PHONEME_DURATION_MS = 81.6
PHONEME_DURATION_STD_MS = 46.7

SPLITS = ('train', 'dev', 'test')


@dataclass
class SynthConfig:
    """Parameters of the synthetic corpus."""

    seed: int = 0
    vocab_size: int = 50
    num_phonemes: int = 12
    feature_dim: int = 20
    duration_mean: float = PHONEME_DURATION_MS / FRAME_SHIFT_MS
    duration_std: float = PHONEME_DURATION_STD_MS / FRAME_SHIFT_MS
    pronunciation_length: t.Tuple[int, int] = (2, 5)
    noise_scale: float = 0.3
    words_per_utterance: t.Tuple[int, int] = (3, 8)
    train_size: int = 900
    dev_size: int = 100
    test_size: int = 100
    silence_prob: float = 0.2
    zipf_exponent: float = 1.0

    def __post_init__(self):
        self.pronunciation_length = tuple(int(v) for v in self.pronunciation_length)
        self.words_per_utterance = tuple(int(v) for v in self.words_per_utterance)
        self.validate()

    def validate(self):
        """Reject impossible configurations."""
        for name in ('vocab_size', 'num_phonemes', 'feature_dim',
                     'train_size', 'dev_size', 'test_size'):
            if getattr(self, name) < 1:
                raise ValidationError(f'{name} must be >= 1.')
        if self.duration_mean < 1 or self.duration_std < 0:
            raise ValidationError('Durations need a mean >= 1 frame and a non-negative std.')
        low, high = self.pronunciation_length
        if low < 1 or high < low:
            raise ValidationError(f'Invalid pronunciation length range {low}..{high}.')
        available = sum(self.num_phonemes ** n for n in range(low, high + 1))
        if available < self.vocab_size:
            raise ValidationError(
                f'{self.num_phonemes} phonemes cannot spell {self.vocab_size} distinct '
                f'pronunciations of length {low}..{high}.'
            )
        low, high = self.words_per_utterance
        if low < 1 or high < low:
            raise ValidationError(f'Invalid words per utterance range {low}..{high}.')
        if high > 1 and self.vocab_size < 2:
            raise ValidationError('Multi-word utterances need two words; adjacent words differ.')
        if self.noise_scale < 0:
            raise ValidationError('noise_scale must be non-negative.')
        if not 0 <= self.silence_prob <= 1:
            raise ValidationError('silence_prob must lie in [0, 1].')
        if self.zipf_exponent < 0:
            raise ValidationError('zipf_exponent must be non-negative.')

    def split_size(self, split: str) -> int:
        """Return the number of utterances of a split."""
        return getattr(self, f'{split}_size')


@dataclass
class SyntheticCorpus:
    """Generator output."""

    lexicon: Lexicon
    prototypes: np.ndarray
    """(phonemes + 1) x d prototypes; the last row is silence."""

    splits: t.Dict[str, t.List[Utterance]] = field(default_factory=dict)

    @property
    def train(self) -> t.List[Utterance]:
        return self.splits['train']

    @property
    def dev(self) -> t.List[Utterance]:
        return self.splits['dev']

    @property
    def test(self) -> t.List[Utterance]:
        return self.splits['test']


def phoneme_names(count: int) -> t.List[str]:
    """Return the phoneme inventory ``P00, P01, ...``."""
    return [f'P{n:02d}' for n in range(count)]


def word_names(count: int) -> t.List[str]:
    """Return the word list ``W000, W001, ...``."""
    return [f'W{n:03d}' for n in range(count)]


def sample_durations(
        rng: np.random.Generator,
        mean: float,
        std: float,
        size: int
) -> np.ndarray:
    """Draw integer durations of at least one frame.

    Values come from ``N(mean, std)``; draws below one frame are redrawn and
    the accepted values are floored.

    :param rng: Random generator.
    :param mean: Mean duration in frames, at least 1.
    :param std: Standard deviation in frames.
    :param size: Number of durations.
    :return: Integer array of durations.
    """
    if mean < 1:
        raise ValidationError('Mean duration must be at least one frame.')
    values = rng.normal(mean, std, size=size)
    rejected = values < 1
    while np.any(rejected):
        values[rejected] = rng.normal(mean, std, size=int(rejected.sum()))
        rejected = values < 1
    return np.floor(values).astype(np.int64)


def zipf_probabilities(count: int, exponent: float) -> np.ndarray:
    """Return word probabilities proportional to ``1 / rank ** exponent``."""
    weights = 1.0 / np.arange(1, count + 1, dtype=np.float64) ** exponent
    return weights / weights.sum()


def make_lexicon(cfg: SynthConfig, rng: np.random.Generator) -> Lexicon:
    """Draw one distinct pronunciation per word."""
    phonemes = phoneme_names(cfg.num_phonemes)
    lexicon = Lexicon(inventory=phonemes)
    low, high = cfg.pronunciation_length
    used = set()
    for word in word_names(cfg.vocab_size):
        while True:
            length = int(rng.integers(low, high + 1))
            pron = tuple(phonemes[i] for i in rng.integers(0, cfg.num_phonemes, size=length))
            if pron not in used:
                break
        used.add(pron)
        lexicon.add(word, pron)
    return lexicon


def _sample_words(
        cfg: SynthConfig,
        rng: np.random.Generator,
        probabilities: np.ndarray
) -> t.List[int]:
    low, high = cfg.words_per_utterance
    count = int(rng.integers(low, high + 1))
    words = []
    while len(words) < count:
        word = int(rng.choice(cfg.vocab_size, p=probabilities))
        if words and word == words[-1]:
            continue
        words.append(word)
    return words


def _utterance(
        utt_id: str,
        cfg: SynthConfig,
        rng: np.random.Generator,
        lexicon: Lexicon,
        prototypes: np.ndarray,
        probabilities: np.ndarray
) -> Utterance:
    words = word_names(cfg.vocab_size)
    phoneme_index = {p: i for i, p in enumerate(lexicon.inventory)}
    silence_row = len(prototypes) - 1

    rows = []
    labels = []

    def silence():
        if cfg.silence_prob and rng.random() < cfg.silence_prob:
            duration = int(sample_durations(rng, cfg.duration_mean, cfg.duration_std, 1)[0])
            rows.extend([silence_row] * duration)
            labels.extend([SILENCE_LABEL] * duration)

    transcript = [words[w] for w in _sample_words(cfg, rng, probabilities)]
    silence()
    for word in transcript:
        pron = lexicon.pronunciation(word)
        durations = sample_durations(rng, cfg.duration_mean, cfg.duration_std, len(pron))
        for phoneme, duration in zip(pron, durations):
            rows.extend([phoneme_index[phoneme]] * int(duration))
        labels.extend([word] * int(durations.sum()))
        silence()

    features = prototypes[rows]
    if cfg.noise_scale:
        features = features + cfg.noise_scale * rng.standard_normal(features.shape)
    return Utterance(utt_id, features.astype(np.float32), tuple(transcript), tuple(labels))


def generate_synthetic(cfg: SynthConfig) -> SyntheticCorpus:
    """Generate lexicon, prototypes and the train, dev and test utterances.

    :param cfg: Generator configuration.
    :return: The corpus; identical for identical configurations.
    """
    cfg.validate()
    rng = make_rng(cfg.seed, 0)
    lexicon = make_lexicon(cfg, rng)
    prototypes = rng.standard_normal((cfg.num_phonemes + 1, cfg.feature_dim))
    probabilities = zipf_probabilities(cfg.vocab_size, cfg.zipf_exponent)

    corpus = SyntheticCorpus(lexicon=lexicon, prototypes=prototypes)
    for n, split in enumerate(SPLITS):
        split_rng = make_rng(cfg.seed, 1, n)
        corpus.splits[split] = [
            _utterance(f'{split}-{i:05d}', cfg, split_rng, lexicon, prototypes, probabilities)
            for i in range(cfg.split_size(split))
        ]
    frames = sum(u.frames for utts in corpus.splits.values() for u in utts)
    logger.info(
        f'Generated {sum(len(u) for u in corpus.splits.values())} utterances, '
        f'{frames} frames ({frames * FRAME_SHIFT_MS / 60000:.1f} minutes).'
    )
    return corpus
