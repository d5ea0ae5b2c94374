"""Test feature, manifest, lexicon and alignment files."""
from briefy.a2w.ctc.vocabulary import Vocabulary
from briefy.a2w.data import io
from briefy.a2w.data.types import Lexicon
from briefy.a2w.errors import DataFormatError
from briefy.a2w.errors import MalformedHeaderError
from briefy.a2w.errors import MalformedRecordError
from briefy.a2w.errors import TruncatedPayloadError
from briefy.a2w.errors import UnknownLabelError

import numpy as np
import pytest
import struct


def _write(path, data):
    with open(path, 'wb') as fout:
        fout.write(data)


def test_features_round_trip(tmpdir):
    """Test features survive a round trip as float32."""
    path = str(tmpdir.join('x.feat'))
    features = np.random.default_rng(0).normal(size=(7, 3)).astype(np.float32)
    io.write_features(path, features)
    result = io.read_features(path)
    assert result.dtype == np.float32
    assert result.shape == (7, 3)
    assert result.tobytes() == features.tobytes()


def test_features_header_layout(tmpdir):
    """Test the header is magic, version, T and d."""
    path = str(tmpdir.join('x.feat'))
    io.write_features(path, np.zeros((2, 5), dtype=np.float32))
    with open(path, 'rb') as fin:
        data = fin.read()
    assert struct.unpack('<4sIII', data[:16]) == (b'A2WF', 1, 2, 5)
    assert len(data) == 16 + 2 * 5 * 4


def test_features_truncated(tmpdir):
    """Test a short payload raises a truncation error at the end of the file."""
    path = str(tmpdir.join('x.feat'))
    data = struct.pack('<4sIII', b'A2WF', 1, 4, 2) + b'\x00' * 20
    _write(path, data)
    with pytest.raises(TruncatedPayloadError) as exc:
        io.read_features(path)
    assert exc.value.offset == 36
    assert exc.value.path == path


testdata = [
    (b'A2WF\x01\x00', 6),
    (struct.pack('<4sIII', b'XXXX', 1, 1, 1) + b'\x00' * 4, 0),
    (struct.pack('<4sIII', b'A2WF', 2, 1, 1) + b'\x00' * 4, 4),
    (struct.pack('<4sIII', b'A2WF', 1, 1, 1) + b'\x00' * 8, 20),
]


@pytest.mark.parametrize('data,offset', testdata)
def test_features_malformed_header(data, offset, tmpdir):
    """Test short headers, wrong magic, wrong version and extra bytes."""
    path = str(tmpdir.join('x.feat'))
    _write(path, data)
    with pytest.raises(MalformedHeaderError) as exc:
        io.read_features(path)
    assert exc.value.offset == offset
    assert isinstance(exc.value, DataFormatError)


def test_lexicon_round_trip(tmpdir):
    """Test every pronunciation survives in order."""
    path = str(tmpdir.join('lexicon.tsv'))
    lexicon = Lexicon()
    lexicon.add('CAT', ['K', 'AE', 'T'])
    lexicon.add('CAT', ['K', 'AH', 'T'])
    lexicon.add('BAT', ['B', 'AE', 'T'])
    io.save_lexicon(lexicon, path)
    loaded = io.load_lexicon(path)
    assert list(loaded.items()) == list(lexicon.items())
    assert loaded.pronunciation('CAT') == ('K', 'AE', 'T')


def test_lexicon_unknown_phoneme(tmpdir):
    """Test phonemes outside the inventory are reported with their line."""
    path = tmpdir.join('lexicon.tsv')
    path.write('CAT\tK AE T\nBAT\tB AE T\n')
    with pytest.raises(UnknownLabelError) as exc:
        io.load_lexicon(str(path), inventory=['K', 'AE', 'T'])
    assert exc.value.label == 'B'
    assert exc.value.line == 2


testdata = [
    'CAT K AE T\n',
    'CAT\tK AE T\textra\n',
    'CAT\t \n',
]


@pytest.mark.parametrize('content', testdata)
def test_lexicon_malformed(content, tmpdir):
    """Test records with the wrong fields are rejected."""
    path = tmpdir.join('lexicon.tsv')
    path.write(content)
    with pytest.raises(MalformedRecordError) as exc:
        io.load_lexicon(str(path))
    assert exc.value.line == 1


def test_label_table(tmpdir):
    """Test label tables keep ids and labels."""
    path = str(tmpdir.join('hyp.tsv'))
    io.save_label_table([('u1', ['a', 'b']), ('u2', [])], path)
    assert io.load_label_table(path) == {'u1': ('a', 'b'), 'u2': ()}
    with open(path, encoding='utf-8') as fin:
        assert fin.read() == 'u1\ta b\nu2\t\n'


def test_label_table_duplicate(tmpdir):
    """Test duplicate ids are rejected."""
    path = tmpdir.join('hyp.tsv')
    path.write('u1\ta\nu1\tb\n')
    with pytest.raises(MalformedRecordError) as exc:
        io.load_label_table(str(path))
    assert exc.value.line == 2


def test_corpus_round_trip(tmpdir, tiny_corpus):
    """Test a generated corpus with alignments survives a round trip bit for bit."""
    manifest = str(tmpdir.join('train.tsv'))
    alignments = str(tmpdir.join('train.align.tsv'))
    utterances = tiny_corpus.train
    io.save_corpus(utterances, manifest)
    io.save_alignments(utterances, alignments)
    vocab = Vocabulary(tiny_corpus.lexicon.words)
    loaded = io.load_corpus(manifest, vocabulary=vocab, alignment_path=alignments)
    assert [u.id for u in loaded] == [u.id for u in utterances]
    for original, copy in zip(utterances, loaded):
        assert copy.transcript == original.transcript
        assert copy.alignment == original.alignment
        assert copy.features.tobytes() == original.features.tobytes()
    assert io.load_transcripts(manifest) == {u.id: u.transcript for u in utterances}


def test_corpus_manifest_paths_are_relative(tmpdir, tiny_corpus):
    """Test manifests reference feature files relative to their directory."""
    manifest = tmpdir.join('dev.tsv')
    io.save_corpus(tiny_corpus.dev[:1], str(manifest))
    utt_id, feat_path, _ = manifest.read().rstrip('\n').split('\t')
    assert feat_path == f'feats/{utt_id}.feat'
    assert tmpdir.join('feats', f'{utt_id}.feat').check()


def test_corpus_unknown_word(tmpdir, tiny_corpus):
    """Test transcripts with words outside the vocabulary are rejected by name."""
    manifest = str(tmpdir.join('train.tsv'))
    utterances = tiny_corpus.train[:3]
    io.save_corpus(utterances, manifest)
    missing = utterances[1].transcript[0]
    words = [w for w in tiny_corpus.lexicon.words if w != missing]
    with pytest.raises(UnknownLabelError) as exc:
        io.load_corpus(manifest, vocabulary=Vocabulary(words))
    assert exc.value.label == missing
    assert missing in str(exc.value)


def test_corpus_missing_alignment(tmpdir, tiny_corpus):
    """Test every utterance needs an alignment once an alignment file is given."""
    manifest = str(tmpdir.join('train.tsv'))
    alignments = str(tmpdir.join('train.align.tsv'))
    io.save_corpus(tiny_corpus.train[:2], manifest)
    io.save_alignments(tiny_corpus.train[:1], alignments)
    with pytest.raises(MalformedRecordError):
        io.load_corpus(manifest, alignment_path=alignments)


def test_corpus_wrong_alignment_length(tmpdir, tiny_corpus):
    """Test alignments must label every frame."""
    manifest = str(tmpdir.join('train.tsv'))
    alignments = tmpdir.join('train.align.tsv')
    utt = tiny_corpus.train[0]
    io.save_corpus([utt], manifest)
    alignments.write(f'{utt.id}\tSIL\n')
    with pytest.raises(MalformedRecordError):
        io.load_corpus(manifest, alignment_path=str(alignments))


def test_corpus_alignment_contradicts_transcript(tmpdir, tiny_corpus):
    """Test alignments that do not collapse to the transcript are rejected."""
    manifest = str(tmpdir.join('train.tsv'))
    alignments = tmpdir.join('train.align.tsv')
    utt = tiny_corpus.train[0]
    io.save_corpus([utt], manifest)
    other = next(w for w in tiny_corpus.lexicon.words if w not in utt.transcript)
    alignments.write(f'{utt.id}\t{" ".join([other] * utt.frames)}\n')
    with pytest.raises(MalformedRecordError) as exc:
        io.load_corpus(manifest, alignment_path=str(alignments))
    assert exc.value.path == str(alignments)


def test_corpus_duplicate_id(tmpdir, tiny_corpus):
    """Test manifests cannot repeat an id."""
    manifest = tmpdir.join('train.tsv')
    io.save_corpus(tiny_corpus.train[:1], str(manifest))
    line = manifest.read()
    manifest.write(line + line)
    with pytest.raises(MalformedRecordError) as exc:
        io.load_corpus(str(manifest))
    assert exc.value.line == 2
