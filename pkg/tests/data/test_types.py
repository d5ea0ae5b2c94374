"""Test corpus data types."""
from briefy.a2w.data import types
from briefy.a2w.errors import UnknownLabelError
from briefy.a2w.errors import ValidationError

import numpy as np
import pytest


def test_utterance():
    """Test an utterance with a matching alignment."""
    utt = types.Utterance('u1', np.zeros((3, 2)), ['a'], ['SIL', 'a', 'a'])
    assert utt.frames == 3
    assert utt.transcript == ('a',)
    assert utt.alignment == ('SIL', 'a', 'a')


def test_utterance_alignment_length():
    """Test the alignment must label every frame."""
    with pytest.raises(ValidationError):
        types.Utterance('u1', np.zeros((3, 2)), ['a'], ['a', 'a'])


testdata = [
    (['CAT'], ['DOG', 'DOG', 'SIL']),
    (['CAT', 'CAT'], ['CAT', 'CAT', 'CAT']),
    (['CAT'], ['SIL', 'SIL', 'SIL']),
    ([], ['SIL', 'CAT', 'SIL']),
]


@pytest.mark.parametrize('transcript,alignment', testdata)
def test_utterance_alignment_must_collapse_to_transcript(transcript, alignment):
    """Test the alignment collapses to the transcript."""
    with pytest.raises(ValidationError):
        types.Utterance('u1', np.zeros((3, 2)), transcript, alignment)


testdata = [
    (['SIL', 'a', 'a', 'b', 'SIL', 'b'], ['a', 'b', 'b']),
    (['SIL', 'SIL'], []),
    (['a', 'a', 'a'], ['a']),
    ([], []),
]


@pytest.mark.parametrize('alignment,expected', testdata)
def test_collapse_alignment(alignment, expected):
    """Test frame labels collapse to the word sequence."""
    func = types.collapse_alignment
    assert func(alignment) == expected


def test_lexicon():
    """Test lexicon lookups and the canonical pronunciation."""
    lexicon = types.Lexicon()
    lexicon.add('CAT', ['K', 'AE', 'T'])
    lexicon.add('BAT', ['B', 'AE', 'T'])
    lexicon.add('CAT', ['K', 'AH', 'T'])
    assert len(lexicon) == 2
    assert 'CAT' in lexicon
    assert lexicon.words == ['CAT', 'BAT']
    assert lexicon.pronunciation('CAT') == ('K', 'AE', 'T')
    assert len(lexicon.pronunciations('CAT')) == 2
    assert lexicon.inventory == ('AE', 'AH', 'B', 'K', 'T')
    assert list(lexicon.items())[1] == ('CAT', ('K', 'AH', 'T'))


def test_lexicon_unknown_word():
    """Test missing words raise UnknownLabelError naming the word."""
    lexicon = types.Lexicon()
    with pytest.raises(UnknownLabelError) as exc:
        lexicon.pronunciation('DOG')
    assert exc.value.label == 'DOG'


def test_lexicon_inventory_check():
    """Test pronunciations must draw from the inventory."""
    lexicon = types.Lexicon(inventory=['K', 'AE', 'T'])
    lexicon.add('CAT', ['K', 'AE', 'T'])
    assert lexicon.inventory == ('K', 'AE', 'T')
    with pytest.raises(UnknownLabelError):
        lexicon.add('BAT', ['B', 'AE', 'T'])
    with pytest.raises(ValidationError):
        lexicon.add('A', [])
