"""Conftest for A2W."""
from briefy.a2w.ctc.vocabulary import Vocabulary
from briefy.a2w.data.synth import generate_synthetic
from briefy.a2w.data.synth import SynthConfig
from briefy.a2w.network.model import build_network
from briefy.a2w.numerics import log_softmax
from briefy.a2w.vocabularies import ModelMode

import numpy as np
import pytest


def _tiny_synth_config(**overrides) -> SynthConfig:
    params = dict(
        seed=3,
        vocab_size=6,
        num_phonemes=4,
        feature_dim=5,
        duration_mean=4.0,
        duration_std=1.5,
        pronunciation_length=(1, 3),
        noise_scale=0.1,
        words_per_utterance=(1, 3),
        train_size=12,
        dev_size=4,
        test_size=4,
        silence_prob=0.2,
    )
    params.update(overrides)
    return SynthConfig(**params)


@pytest.fixture
def rng():
    """Seeded generator for test inputs.

    :return: numpy Generator.
    """
    return np.random.default_rng(1234)


@pytest.fixture
def make_lattice():
    """Factory of random CTC lattices.

    :return: function(frames, symbols, seed) returning a frames x symbols log-probability matrix.
    """
    def factory(frames: int, symbols: int, seed: int = 0) -> np.ndarray:
        logits = np.random.default_rng(seed).normal(scale=2.0, size=(frames, symbols))
        return log_softmax(logits)
    return factory


@pytest.fixture
def finite_difference():
    """Central finite differences of a scalar function.

    :return: function(f, x, eps) returning an array shaped like x.
    """
    def numeric_gradient(f, x: np.ndarray, eps: float = 1e-6) -> np.ndarray:
        grad = np.zeros_like(x)
        flat = x.reshape(-1)
        out = grad.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            plus = f()
            flat[i] = orig - eps
            minus = f()
            flat[i] = orig
            out[i] = (plus - minus) / (2 * eps)
        return grad
    return numeric_gradient


@pytest.fixture
def abc_vocabulary():
    """Three word vocabulary.

    :return: Vocabulary of a, b, c.
    """
    return Vocabulary(['a', 'b', 'c'])


@pytest.fixture
def small_network(abc_vocabulary):
    """Two layer word CTC network with 4 hidden units over 3 dimensional features.

    :return: Network.
    """
    return build_network(ModelMode.word_ctc, abc_vocabulary, input_dim=3, hidden_dim=4,
                         num_layers=2, seed=7)


@pytest.fixture
def tiny_synth_config():
    """Factory of small generator configurations.

    :return: function(**overrides) returning a SynthConfig.
    """
    return _tiny_synth_config


@pytest.fixture(scope='session')
def tiny_corpus():
    """Small synthetic corpus shared by the whole session.

    :return: SyntheticCorpus.
    """
    return generate_synthetic(_tiny_synth_config())
