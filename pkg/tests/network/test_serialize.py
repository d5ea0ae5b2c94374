"""Test the model file format."""
from briefy.a2w.ctc.vocabulary import Vocabulary
from briefy.a2w.errors import ModelFormatError
from briefy.a2w.network import serialize
from briefy.a2w.network.model import build_network
from briefy.a2w.vocabularies import ModelMode

import numpy as np
import pytest
import struct


def _check_equal(first, second):
    assert first.mode is second.mode
    assert first.vocabulary == second.vocabulary
    assert first.downsampling == second.downsampling
    assert first.lookahead == second.lookahead
    for a, b in zip(first.parameters(), second.parameters()):
        assert a.shape == b.shape
        assert a.tobytes() == b.tobytes()


def test_model_round_trip(small_network):
    """Test a CTC network survives a round trip bit for bit."""
    net = small_network
    net.output_weights[0, 0] = np.nextafter(1.0, 2.0)
    data = serialize.dumps(net)
    assert data.startswith(serialize.MAGIC)
    loaded = serialize.loads(data)
    _check_equal(net, loaded)
    assert serialize.dumps(loaded) == data


def test_model_round_trip_frame_classifier(tmpdir):
    """Test a frame classifier with down-sampling metadata survives a file round trip."""
    vocab = Vocabulary(['w1', 'w2', 'SIL'])
    net = build_network(ModelMode.frame_classifier, vocab, input_dim=2, hidden_dim=3,
                        num_layers=2, seed=4, lookahead=2)
    path = str(tmpdir.join('model.a2w'))
    serialize.save_model(net, path)
    loaded = serialize.load_model(path)
    _check_equal(net, loaded)
    assert loaded.output_dim == 3


def test_model_round_trip_downsampling():
    """Test down-sampling counts are stored."""
    vocab = Vocabulary(['x'])
    net = build_network(ModelMode.word_ctc, vocab, input_dim=2, hidden_dim=3,
                        num_layers=3, seed=0, downsampling=(2, 1, 1))
    _check_equal(net, serialize.loads(serialize.dumps(net)))


def _corrupt(data, offset, payload):
    return data[:offset] + payload + data[offset + len(payload):]


def test_model_bad_magic(small_network):
    """Test files without the magic are rejected."""
    data = serialize.dumps(small_network)
    with pytest.raises(ModelFormatError):
        serialize.loads(_corrupt(data, 0, b'NOTMODEL'))


def test_model_bad_version(small_network):
    """Test unknown format versions are rejected."""
    data = serialize.dumps(small_network)
    with pytest.raises(ModelFormatError):
        serialize.loads(_corrupt(data, 8, struct.pack('<I', 99)))


def test_model_bad_mode(small_network):
    """Test unknown mode tags are rejected."""
    data = serialize.dumps(small_network)
    with pytest.raises(ModelFormatError):
        serialize.loads(_corrupt(data, 16, b'xord-ctc'))


@pytest.mark.parametrize('cut', [4, 20, 60, 1])
def test_model_truncated(cut, small_network):
    """Test truncated files are rejected."""
    data = serialize.dumps(small_network)
    with pytest.raises(ModelFormatError):
        serialize.loads(data[:-cut] if cut < len(data) else b'')


def test_model_trailing_bytes(small_network):
    """Test bytes after the parameters are rejected."""
    data = serialize.dumps(small_network)
    with pytest.raises(ModelFormatError):
        serialize.loads(data + b'\x00')


def test_model_duplicate_vocabulary_label(small_network):
    """Test a vocabulary with a repeated label is a format error."""
    data = serialize.dumps(small_network)
    label_b = struct.pack('<I', 1) + b'b'
    offset = data.index(label_b)
    with pytest.raises(ModelFormatError):
        serialize.loads(_corrupt(data, offset, struct.pack('<I', 1) + b'a'))


def _lookahead_offset(net):
    return len(serialize.MAGIC) + 4 + 4 + len(net.mode.value) + 4 * (2 + 2 * len(net.layers))


def test_model_inconsistent_header(small_network):
    """Test header fields the network rejects surface as a format error."""
    data = serialize.dumps(small_network)
    offset = _lookahead_offset(small_network)
    assert data[offset:offset + 4] == struct.pack('<I', 0)
    with pytest.raises(ModelFormatError):
        serialize.loads(_corrupt(data, offset, struct.pack('<I', 3)))


def test_model_invalid_vocabulary_exit_code(tmpdir, small_network):
    """Test loading a model with a broken vocabulary exits with the model format code."""
    data = serialize.dumps(small_network)
    offset = data.index(struct.pack('<I', 1) + b'c')
    path = tmpdir.join('model.a2w')
    path.write_binary(_corrupt(data, offset, struct.pack('<I', 1) + b'a'))
    with pytest.raises(ModelFormatError) as exc:
        serialize.load_model(str(path))
    assert exc.value.exit_code == 7
